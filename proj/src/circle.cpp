#include "crinv/circle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crinv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kIntegerSlack = 1e-6;
}  // namespace

SampledLoop sample_loop(const std::function<std::complex<double>(double)>& f,
                        int samples, const std::string& label, double t0,
                        double period) {
  if (samples < 4) throw std::invalid_argument("sample_loop: too few samples");
  SampledLoop loop;
  loop.label = label;
  loop.sampler = f;
  loop.t.reserve(samples + 1);
  loop.v.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    double t = t0 + period * i / samples;
    loop.t.push_back(t);
    loop.v.push_back(f(t));
  }
  // close the loop exactly; f(t0 + period) may differ in the last ulp
  loop.v.back() = loop.v.front();
  return loop;
}

int winding_number(SampledLoop loop, double min_modulus) {
  if (loop.t.size() < 2 || loop.t.size() != loop.v.size())
    throw std::invalid_argument("winding_number: malformed loop");
  double max_mag = 0.0;
  for (const auto& v : loop.v) max_mag = std::max(max_mag, std::abs(v));
  if (max_mag == 0.0)
    throw WindingError(WindingError::Kind::zero_on_curve,
                       "winding_number: loop is identically zero");
  const double floor_mag = min_modulus * max_mag;
  auto check_mag = [&](const std::complex<double>& v) {
    if (std::abs(v) < floor_mag)
      throw WindingError(WindingError::Kind::zero_on_curve,
                         "winding_number: sample too close to zero on " +
                             (loop.label.empty() ? "loop" : loop.label));
  };
  for (const auto& v : loop.v) check_mag(v);

  int budget = loop.refinement_budget;
  size_t i = 0;
  while (i + 1 < loop.v.size()) {
    double darg = std::arg(loop.v[i + 1] / loop.v[i]);
    if (std::abs(darg) > std::numbers::pi / 2 && loop.sampler && budget > 0) {
      double tm = 0.5 * (loop.t[i] + loop.t[i + 1]);
      std::complex<double> vm = loop.sampler(tm);
      check_mag(vm);
      loop.t.insert(loop.t.begin() + i + 1, tm);
      loop.v.insert(loop.v.begin() + i + 1, vm);
      --budget;
      continue;  // re-examine the left half
    }
    ++i;
  }
  double total = 0.0;
  for (size_t k = 0; k + 1 < loop.v.size(); ++k)
    total += std::arg(loop.v[k + 1] / loop.v[k]);
  double turns = total / kTwoPi;
  double rounded = std::round(turns);
  if (std::abs(turns - rounded) > kIntegerSlack)
    throw WindingError(WindingError::Kind::unresolved,
                       "winding_number: accumulated argument " +
                           std::to_string(turns) + " is not close to an integer");
  return static_cast<int>(rounded);
}

void UnivariatePoly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

GaussianRational UnivariatePoly::eval(const GaussianRational& x) const {
  GaussianRational acc(0);
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

std::complex<double> UnivariatePoly::eval(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i].to_complex();
  return acc;
}

UnivariatePoly UnivariatePoly::conj_reciprocal() const {
  UnivariatePoly out;
  out.c.reserve(c.size());
  for (size_t i = c.size(); i-- > 0;) out.c.push_back(c[i].conj());
  out.trim();
  return out;
}

UnivariatePoly gcd_unipoly(UnivariatePoly a, UnivariatePoly b) {
  a.trim();
  b.trim();
  auto make_monic = [](UnivariatePoly& p) {
    if (p.is_zero()) return;
    GaussianRational lead = p.c.back();
    for (auto& coef : p.c) coef = coef / lead;
  };
  while (!b.is_zero()) {
    // remainder of a by b, standard long division over the field
    make_monic(b);
    UnivariatePoly r = a;
    r.trim();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      GaussianRational f = r.c.back();
      size_t shift = r.degree() - b.degree();
      for (size_t i = 0; i < b.c.size(); ++i)
        r.c[i + shift] -= f * b.c[i];
      r.trim();
    }
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(a);
  return a;
}

std::vector<std::complex<double>> poly_roots(const UnivariatePoly& p) {
  UnivariatePoly q = p;
  q.trim();
  int n = q.degree();
  if (n < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  std::complex<double> lead = q.c.back().to_complex();
  for (int i = 0; i < n; ++i) {
    companion(i, n - 1) = -q.c[i].to_complex() / lead;
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<std::complex<double>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

namespace {

bool gcd_root_near_modulus(const UnivariatePoly& p, const UnivariatePoly& q,
                           double target, double tol) {
  UnivariatePoly g = gcd_unipoly(p, q);
  if (g.degree() < 1) return false;
  for (const auto& root : poly_roots(g))
    if (std::abs(std::abs(root) - target) <= tol) return true;
  return false;
}

int schur_cohn_count(const UnivariatePoly& p) {
  UnivariatePoly q = p;
  q.trim();
  if (q.is_zero())
    throw SchurCohnDegenerate("schur_cohn: zero polynomial");
  int n = q.degree();
  if (n == 0) return 0;
  const GaussianRational a0 = q.c.front(), an = q.c.back();
  mpq_class gamma = a0.norm2() - an.norm2();
  if (sgn(gamma) == 0)
    throw SchurCohnDegenerate("schur_cohn: |a_0| = |a_n| (root on or symmetric about the circle)");
  // T p = conj(a0) p - a_n p*, degree drops, constant term is gamma != 0
  UnivariatePoly t;
  t.c.resize(n);  // leading coefficient cancels
  for (int k = 0; k < n; ++k)
    t.c[k] = a0.conj() * q.c[k] - an * q.c[n - k].conj();
  t.trim();
  int inner = schur_cohn_count(t);
  return sgn(gamma) > 0 ? inner : n - inner;
}

}  // namespace

bool has_root_on_unit_circle(const UnivariatePoly& p, double tol) {
  UnivariatePoly q = p;
  q.trim();
  if (q.is_zero())
    throw std::invalid_argument("has_root_on_unit_circle: zero polynomial");
  if (q.degree() == 0) return false;
  return gcd_root_near_modulus(q, q.conj_reciprocal(), 1.0, tol);
}

bool has_root_on_circle_r2(const UnivariatePoly& p, const mpq_class& r2,
                           double tol) {
  if (sgn(r2) <= 0)
    throw std::invalid_argument("has_root_on_circle_r2: r2 must be positive");
  UnivariatePoly q = p;
  q.trim();
  if (q.is_zero())
    throw std::invalid_argument("has_root_on_circle_r2: zero polynomial");
  if (q.degree() == 0) return false;
  // zeta^deg * conj(p)(r2 / zeta): a root zeta0 of p with |zeta0|^2 = r2 is a
  // shared root, since conj(zeta0) = r2/zeta0 there.
  UnivariatePoly recip;
  int n = q.degree();
  recip.c.resize(n + 1);
  GaussianRational scale(1);
  GaussianRational r2g(r2);
  for (int j = n; j >= 0; --j) {
    recip.c[j] = q.c[n - j].conj() * scale;
    scale = scale * r2g;
  }
  recip.trim();
  double r = std::sqrt(r2.get_d());
  return gcd_root_near_modulus(q, recip, r, tol * std::max(1.0, r));
}

int winding_via_argument_principle(const UnivariatePoly& p, int samples) {
  SampledLoop loop = sample_loop(
      [&p](double t) { return p.eval(std::polar(1.0, t)); }, samples,
      "argument-principle circle");
  return winding_number(std::move(loop));
}

int count_roots_in_unit_disk(const UnivariatePoly& p, double tol, int samples) {
  UnivariatePoly q = p;
  q.trim();
  if (q.is_zero())
    throw std::invalid_argument("count_roots_in_unit_disk: zero polynomial");
  if (has_root_on_unit_circle(q, tol))
    throw CircleRootError(
        "count_roots_in_unit_disk: root on the unit circle; perturb or pick a different circle");
  int exact = schur_cohn_count(q);
  int numeric = winding_via_argument_principle(q, samples);
  if (exact != numeric)
    throw std::logic_error("count_roots_in_unit_disk: exact count " +
                           std::to_string(exact) + " disagrees with argument principle " +
                           std::to_string(numeric));
  return exact;
}

std::string IndexReport::index_str() const {
  int num = -winding;
  if (num % 2 == 0) return std::to_string(num / 2);
  return std::to_string(num) + "/2";
}

IndexReport umbilical_index(const SampledLoop& loop) {
  IndexReport r;
  r.label = loop.label;
  r.winding = winding_number(loop);
  return r;
}

StokesReport stokes_decomposition_check(const SampledLoop& outer,
                                        const std::vector<SampledLoop>& inner) {
  StokesReport report;
  IndexReport out = umbilical_index(outer);
  report.outer_winding = out.winding;
  report.indices.push_back(out);
  for (const SampledLoop& loop : inner) {
    IndexReport idx = umbilical_index(loop);
    report.inner_windings.push_back(idx.winding);
    report.inner_sum += idx.winding;
    report.indices.push_back(idx);
  }
  report.additive = report.outer_winding == report.inner_sum;
  return report;
}

}  // namespace crinv
