#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "crinv/rational.hpp"

namespace crinv {

// Closed loop t -> f(t), sampled at increasing parameters with
// t.back() == t.front() + period and v.back() == v.front(). When a sampler is
// attached the winding extractor may insert midpoints (adaptive bisection) up
// to refinement_budget extra evaluations.
struct SampledLoop {
  std::vector<double> t;
  std::vector<std::complex<double>> v;
  std::function<std::complex<double>(double)> sampler;
  int refinement_budget = 1 << 16;
  std::string label;
};

SampledLoop sample_loop(const std::function<std::complex<double>(double)>& f,
                        int samples, const std::string& label = "",
                        double t0 = 0.0, double period = 6.283185307179586476925287);

struct WindingError : std::runtime_error {
  enum class Kind { zero_on_curve, unresolved };
  Kind kind;
  WindingError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Total change of the principal-branch argument divided by 2 pi. Any step
// with |delta arg| > pi/2 is bisected while budget lasts; a sample smaller
// than min_modulus times the loop's largest magnitude raises zero_on_curve,
// and a total farther than 1e-6 from an integer raises unresolved.
int winding_number(SampledLoop loop, double min_modulus = 1e-12);

// Univariate polynomial with exact coefficients, ascending powers.
struct UnivariatePoly {
  std::vector<GaussianRational> c;

  void trim();
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  GaussianRational eval(const GaussianRational& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  // zeta^deg * conj-coefficients-of-p(1/zeta)
  UnivariatePoly conj_reciprocal() const;
};

struct SchurCohnDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CircleRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Monic gcd over the Gaussian rationals (Euclid). gcd(p, 0) = monic p.
UnivariatePoly gcd_unipoly(UnivariatePoly a, UnivariatePoly b);

// All complex roots, via the companion matrix (degree must be >= 1 after trim).
std::vector<std::complex<double>> poly_roots(const UnivariatePoly& p);

// Exact detection up to the stated tolerance: common roots of p and its
// conjugate reciprocal are computed exactly (gcd), then the low-degree gcd's
// roots are checked numerically for |root| within tol of 1.
bool has_root_on_unit_circle(const UnivariatePoly& p, double tol = 1e-9);
// Same test against the circle |zeta|^2 = r2 (r2 an exact positive rational);
// used for Hopf-fiber circles, where r2 = 1/(1+|ztilde|^2) stays rational.
bool has_root_on_circle_r2(const UnivariatePoly& p, const mpq_class& r2,
                           double tol = 1e-9);

// Number of roots in the open unit disk, with multiplicity. Exact
// Schur-Cohn/Lehmer recursion; throws CircleRootError if a root lies on (or
// numerically within tol of) the circle and SchurCohnDegenerate when the
// recursion hits a singular step. The result is cross-checked against the
// numeric argument principle on the unit circle.
int count_roots_in_unit_disk(const UnivariatePoly& p, double tol = 1e-9,
                             int samples = 1024);
// The numeric route by itself (winding of p(e^{it})).
int winding_via_argument_principle(const UnivariatePoly& p, int samples = 1024);

// Index of an isolated zero enclosed by the loop: -winding/2, in half-units.
struct IndexReport {
  std::string label;
  int winding = 0;
  double index() const { return -winding / 2.0; }
  std::string index_str() const;  // exact half-integer, e.g. "-3/2"
};
IndexReport umbilical_index(const SampledLoop& loop);

// Winding additivity across a decomposition: the outer boundary's winding
// against the sum over the inner loops.
struct StokesReport {
  int outer_winding = 0;
  std::vector<int> inner_windings;
  int inner_sum = 0;
  bool additive = false;
  std::vector<IndexReport> indices;  // outer first, then inner loops
};
StokesReport stokes_decomposition_check(const SampledLoop& outer,
                                        const std::vector<SampledLoop>& inner);

}  // namespace crinv
