#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crinv/rational.hpp"

namespace crinv {

// The fixed variable set of the toolkit. z, w and their formal conjugates are
// the geometric variables; A, B are real shape parameters; eps is the real
// deformation parameter that truncation acts on.
enum class Var : uint8_t { z = 0, w, zb, wb, A, B, eps };
inline constexpr int kNumVars = 7;
inline constexpr Var kAllVars[kNumVars] = {Var::z,  Var::w, Var::zb, Var::wb,
                                           Var::A,  Var::B, Var::eps};

const char* var_name(Var v);
// Returns nothing for an unknown spelling; names are case-sensitive.
std::optional<Var> var_from_name(const std::string& name);
inline bool is_geometric(Var v) { return static_cast<int>(v) <= static_cast<int>(Var::wb); }
inline bool is_conjugated_pair(Var a, Var b);
Var conjugate_var(Var v);  // z<->zb, w<->wb, parameters fixed

// Exponent vector. Individual exponents are capped at 511 so a monomial packs
// into one 64-bit key for hashing; arithmetic checks the bound.
struct Monomial {
  std::array<uint16_t, kNumVars> e{};

  int total_degree() const;
  int operator[](Var v) const { return e[static_cast<int>(v)]; }
  uint16_t& at(Var v) { return e[static_cast<int>(v)]; }

  uint64_t pack() const;
  static Monomial unpack(uint64_t key);

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;       // *this | o
  Monomial divide_by(const Monomial& o) const;  // requires o | *this

  bool operator==(const Monomial& o) const { return e == o.e; }
  // Canonical order: graded lexicographic with z > w > zb > wb > A > B > eps.
  // Returns <0, 0, >0 like strcmp; positive means *this is the larger monomial.
  static int compare(const Monomial& a, const Monomial& b);
};

struct Term {
  Monomial m;
  GaussianRational c;
};

// Sparse multivariate polynomial over the Gaussian rationals, kept in
// canonical form: terms sorted by descending monomial order, no zero
// coefficients, no two equal monomials. An optional eps_cap K means the value
// is only tracked modulo eps^K; arithmetic propagates the *stricter* cap of
// the operands and drops truncated terms eagerly.
class Poly {
 public:
  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly constant(GaussianRational c);
  static Poly variable(Var v);
  static Poly term(GaussianRational c, Monomial m);
  // Canonicalizes arbitrary term soup (used by the parser and JSON reader).
  static Poly from_terms(std::vector<Term> terms,
                         std::optional<uint32_t> eps_cap = std::nullopt);

  const std::vector<Term>& terms() const { return terms_; }
  std::optional<uint32_t> eps_cap() const { return eps_cap_; }
  Poly with_eps_cap(std::optional<uint32_t> cap) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(Var v) const;
  bool uses(Var v) const { return degree_in(v) > 0; }
  bool geometric_only() const;
  bool is_real() const;  // invariant under conjugation

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return same_terms(o); }
  bool operator!=(const Poly& o) const { return !same_terms(o); }

  Poly pow(long k) const;  // k < 0 is an error
  Poly diff(Var v) const;
  Poly conj() const;

  GaussianRational coefficient(const Monomial& m) const;
  GaussianRational constant_term() const;
  // Leading term under the canonical order; polynomial must be nonzero.
  const Term& leading() const;

  Poly substitute(const std::map<Var, Poly>& bindings) const;
  // Every variable that occurs must be bound, otherwise this throws.
  GaussianRational eval(const std::map<Var, GaussianRational>& point) const;
  std::complex<double> eval(const std::map<Var, std::complex<double>>& point) const;

  // Coefficient of eps^k, as a polynomial in the remaining variables.
  Poly eps_coefficient(uint32_t k) const;
  // Splits by geometric bidegree (holomorphic degree in z,w; antiholomorphic
  // degree in zb,wb). Parameter variables ride along inside the components.
  std::map<std::pair<int, int>, Poly> bidegree_split() const;
  // Sum of the bidegree components with p - q == k.
  Poly fourier_coefficient(int k) const;

 private:
  bool same_terms(const Poly& o) const;
  void normalize();

  std::vector<Term> terms_;
  std::optional<uint32_t> eps_cap_;
};

Poly operator*(const GaussianRational& c, const Poly& p);

inline std::optional<uint32_t> min_cap(std::optional<uint32_t> a,
                                       std::optional<uint32_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace crinv
