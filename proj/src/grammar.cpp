#include "crinv/grammar.hpp"

#include <cctype>
#include <nlohmann/json.hpp>

namespace crinv {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Poly parse() {
    skip_ws();
    if (eof()) throw ParseError("empty polynomial", pos_);
    bool neg = accept('-');
    Poly p = neg ? -parse_term() : parse_term();
    skip_ws();
    while (!eof()) {
      if (accept('+')) {
        p += parse_term();
      } else if (accept('-')) {
        p -= parse_term();
      } else {
        throw ParseError("expected '+' or '-'", pos_);
      }
      skip_ws();
    }
    return p;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  mpz_class parse_uint() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected digits", pos_);
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += s_[pos_++];
    return mpz_class(digits);
  }

  mpq_class parse_rat(bool allow_sign) {
    skip_ws();
    bool neg = false;
    if (allow_sign && (peek() == '-' || peek() == '+')) neg = s_[pos_++] == '-';
    mpz_class num = parse_uint();
    mpz_class den = 1;
    if (accept('/')) den = parse_uint();
    if (den == 0) throw ParseError("zero denominator", pos_);
    mpq_class q(neg ? mpz_class(-num) : num, den);
    q.canonicalize();
    return q;
  }

  GaussianRational parse_coeff() {
    skip_ws();
    if (accept('(')) {
      mpq_class re = parse_rat(true);
      mpq_class im = 0;
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        bool neg = s_[pos_++] == '-';
        mpq_class mag = parse_rat(false);
        skip_ws();
        if (peek() != 'i') throw ParseError("expected 'i'", pos_);
        ++pos_;
        im = neg ? mpq_class(-mag) : mag;
      }
      expect(')');
      return {re, im};
    }
    return GaussianRational(parse_rat(true));
  }

  void parse_varpow(Monomial& m) {
    skip_ws();
    std::string name;
    while (std::isalpha(static_cast<unsigned char>(peek()))) name += s_[pos_++];
    auto v = var_from_name(name);
    if (!v) throw ParseError("unknown variable '" + name + "'", pos_);
    long k = 1;
    if (accept('^')) {
      mpz_class e = parse_uint();
      if (e > 511) throw ParseError("exponent exceeds 511", pos_);
      k = e.get_si();
    }
    uint32_t total = uint32_t(m.at(*v)) + uint32_t(k);
    if (total > 511) throw ParseError("exponent exceeds 511", pos_);
    m.at(*v) = static_cast<uint16_t>(total);
  }

  Poly parse_term() {
    skip_ws();
    GaussianRational c(1);
    Monomial m;
    char ch = peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '(') {
      c = parse_coeff();
    } else if (std::isalpha(static_cast<unsigned char>(ch))) {
      parse_varpow(m);
    } else {
      throw ParseError("expected coefficient or variable", pos_);
    }
    while (accept('*')) parse_varpow(m);
    return Poly::term(c, m);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

std::string monomial_str(const Monomial& m) {
  std::string out;
  for (Var v : kAllVars) {
    int k = m[v];
    if (k == 0) continue;
    if (!out.empty()) out += "*";
    out += var_name(v);
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

// Emits a JSON integer when the value fits, a decimal string otherwise.
nlohmann::json big_int_json(const mpz_class& v) {
  if (v.fits_slong_p()) return static_cast<int64_t>(v.get_si());
  return v.get_str();
}

mpz_class big_int_from_json(const nlohmann::json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<int64_t>()));
  throw std::invalid_argument("poly_from_json: coefficient entry must be int or string");
}

}  // namespace

Poly parse_poly(const std::string& text) { return Parser(text).parse(); }

std::string print_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : p.terms()) {
    bool neg = false;
    GaussianRational c = t.c;
    if (c.is_real() && sgn(c.re) < 0) {
      neg = true;
      c = -c;
    }
    std::string mono = monomial_str(t.m);
    std::string body;
    if (mono.empty()) {
      body = c.str();
    } else if (c.is_one()) {
      body = mono;
    } else {
      body = c.str() + "*" + mono;
    }
    if (first) {
      out += neg ? "-" + body : body;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

nlohmann::json poly_to_json(const Poly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Term& t : p.terms()) {
    nlohmann::json c = nlohmann::json::array(
        {big_int_json(t.c.re.get_num()), big_int_json(t.c.re.get_den()),
         big_int_json(t.c.im.get_num()), big_int_json(t.c.im.get_den())});
    nlohmann::json e = nlohmann::json::object();
    for (Var v : kAllVars)
      if (t.m[v] > 0) e[var_name(v)] = t.m[v];
    arr.push_back({{"c", std::move(c)}, {"e", std::move(e)}});
  }
  return arr;
}

Poly poly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("poly_from_json: expected array");
  std::vector<Term> terms;
  for (const auto& entry : j) {
    const auto& c = entry.at("c");
    if (!c.is_array() || c.size() != 4)
      throw std::invalid_argument("poly_from_json: \"c\" must have 4 entries");
    mpq_class re(big_int_from_json(c[0]), big_int_from_json(c[1]));
    mpq_class im(big_int_from_json(c[2]), big_int_from_json(c[3]));
    if (re.get_den() == 0 || im.get_den() == 0)
      throw std::invalid_argument("poly_from_json: zero denominator");
    re.canonicalize();
    im.canonicalize();
    Monomial m;
    if (entry.contains("e")) {
      for (auto it = entry["e"].begin(); it != entry["e"].end(); ++it) {
        auto v = var_from_name(it.key());
        if (!v) throw std::invalid_argument("poly_from_json: unknown variable " + it.key());
        int64_t k = it.value().get<int64_t>();
        if (k < 0 || k > 511)
          throw std::invalid_argument("poly_from_json: exponent out of range");
        m.at(*v) = static_cast<uint16_t>(k);
      }
    }
    terms.push_back({m, GaussianRational(re, im)});
  }
  return Poly::from_terms(std::move(terms));
}

}  // namespace crinv
