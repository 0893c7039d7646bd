#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "crinv/poly.hpp"

namespace crinv {

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t p)
      : std::runtime_error(msg + " (at offset " + std::to_string(p) + ")"), pos(p) {}
};

// Grammar (whitespace-insensitive):
//   poly   := ['-'] term (('+'|'-') term)*
//   term   := coeff ('*' varpow)* | varpow ('*' varpow)*
//   varpow := var ('^' uint)?          var in {z, w, zb, wb, A, B, eps}
//   coeff  := rat | '(' rat (('+'|'-') rat 'i')? ')'
//   rat    := int ('/' uint)?
Poly parse_poly(const std::string& text);

// Canonical printer; parse_poly(print_poly(p)) == p.
std::string print_poly(const Poly& p);

// JSON form: array of {"c": [re_num, re_den, im_num, im_den], "e": {var: exp}}.
// Numerators or denominators outside int64 range are emitted as decimal strings.
nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);

}  // namespace crinv
