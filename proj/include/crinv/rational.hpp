#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace crinv {

// Exact complex number a + b*i with rational real and imaginary parts.
// mpq_class keeps every value in lowest terms with positive denominator,
// which is the canonical form everything downstream relies on.
struct GaussianRational {
  mpq_class re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}          // NOLINT: implicit on purpose
  GaussianRational(const mpq_class& r) : re(r), im(0) {}
  GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational ratio(long num, long den) {
    if (den == 0) throw std::invalid_argument("GaussianRational: zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return GaussianRational(q);
  }
  static GaussianRational i_unit() { return GaussianRational(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussianRational conj() const { return {re, mpq_class(-im)}; }
  // |a + bi|^2, exact.
  mpq_class norm2() const { return re * re + im * im; }

  GaussianRational operator-() const { return {mpq_class(-re), mpq_class(-im)}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational operator+(const GaussianRational& o) const {
    return {re + o.re, im + o.im};
  }
  GaussianRational operator-(const GaussianRational& o) const {
    return {re - o.re, im - o.im};
  }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    *this = *this * o;
    return *this;
  }
  GaussianRational operator/(const GaussianRational& o) const {
    mpq_class n2 = o.norm2();
    if (sgn(n2) == 0) throw std::domain_error("GaussianRational: division by zero");
    GaussianRational num = *this * o.conj();
    return {num.re / n2, num.im / n2};
  }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  // Coefficient syntax used by the polynomial grammar: bare rational when the
  // value is real, "(re+imi)" otherwise.
  std::string str() const {
    if (is_real()) return re.get_str();
    std::string s = "(" + re.get_str();
    s += sgn(im) < 0 ? "-" : "+";
    mpq_class a = abs(im);
    s += a.get_str();
    s += "i)";
    return s;
  }
};

inline GaussianRational operator*(long a, const GaussianRational& b) {
  return GaussianRational(a) * b;
}

// Determinant of a small dense matrix over the Gaussian rationals, by plain
// elimination with first-nonzero pivoting. Exact since we are in a field.
inline GaussianRational matrix_det(std::vector<std::vector<GaussianRational>> m) {
  size_t n = m.size();
  for (auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix_det: not square");
  GaussianRational det(1);
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && m[piv][k].is_zero()) ++piv;
    if (piv == n) return GaussianRational(0);
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      GaussianRational f = m[i][k] / m[k][k];
      for (size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

}  // namespace crinv
