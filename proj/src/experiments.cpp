#include "crinv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "crinv/grammar.hpp"

namespace crinv {

namespace {

constexpr double kPi = 3.141592653589793238462643;

Poly gvar(Var v) { return Poly::variable(v); }

GaussianRational q_pow(const mpq_class& base, int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return GaussianRational(r);
}

std::map<Var, std::complex<double>> point_bindings(std::complex<double> z,
                                                   std::complex<double> w) {
  return {{Var::z, z},
          {Var::w, w},
          {Var::zb, std::conj(z)},
          {Var::wb, std::conj(w)}};
}

std::complex<double> numeric_det(const PolyMatrix& M,
                                 const std::map<Var, std::complex<double>>& at) {
  Eigen::MatrixXcd md(M.n, M.n);
  for (size_t i = 0; i < M.n; ++i)
    for (size_t j = 0; j < M.n; ++j) md(i, j) = M.at(i, j).eval(at);
  return md.determinant();
}

}  // namespace

Poly sphere_rho() {
  return Poly::constant(GaussianRational(-1)) + gvar(Var::z) * gvar(Var::zb) +
         gvar(Var::w) * gvar(Var::wb);
}

DefiningFunction EllipsoidFamily::rho() const {
  for (const auto* axis : {&A, &B}) {
    if (!*axis) continue;
    if (!(*axis)->is_real() || sgn((*axis)->re) < 0)
      throw std::invalid_argument("EllipsoidFamily: axis values must be real and >= 0");
  }
  if (A && B && A->is_zero() && B->is_zero())
    throw std::invalid_argument("EllipsoidFamily: at least one axis must be nonzero");
  Poly z = gvar(Var::z), w = gvar(Var::w), zb = gvar(Var::zb), wb = gvar(Var::wb);
  GaussianRational two(2), four(4);
  Poly pert = gvar(Var::A) * (z * z + zb * zb + two * (z * zb)) +
              gvar(Var::B) * (w * w + wb * wb + two * (w * wb));
  Poly full = Poly::constant(GaussianRational(-4)) + four * (z * zb + w * wb) +
              gvar(Var::eps) * pert;
  std::map<Var, Poly> bind;
  if (A) bind[Var::A] = Poly::constant(*A);
  if (B) bind[Var::B] = Poly::constant(*B);
  if (!bind.empty()) full = full.substitute(bind);
  return DefiningFunction(full.with_eps_cap(eps_cap));
}

EllipsoidExpansion ellipsoid_slice_expansion(const EllipsoidFamily& fam) {
  if (fam.eps_cap < 3)
    throw std::invalid_argument("ellipsoid_slice_expansion: eps_cap must be >= 3");
  PolyMatrix M = build_A(fam.rho(), 3);
  // points of the family with w = 0 also have wb = 0; slice the entries, not
  // the defining function, so the field derivatives keep their w-content
  std::map<Var, Poly> axis{{Var::w, Poly::zero()}, {Var::wb, Poly::zero()}};
  for (auto& e : M.a) e = e.substitute(axis);
  Poly det = poly_det(M);
  return {det.eps_coefficient(0), det.eps_coefficient(1), det.eps_coefficient(2)};
}

PerturbationSpec::PerturbationSpec(Poly p, uint32_t cap)
    : rho_prime(std::move(p)), eps_cap(cap) {
  if (rho_prime.is_zero())
    throw std::invalid_argument("PerturbationSpec: perturbation vanishes identically");
  if (!rho_prime.geometric_only())
    throw std::invalid_argument("PerturbationSpec: perturbation must use only z, w, zb, wb");
  if (!rho_prime.is_real())
    throw std::invalid_argument("PerturbationSpec: perturbation must be real");
  if (cap < 2)
    throw std::invalid_argument("PerturbationSpec: eps_cap must be at least 2");
  degree = rho_prime.total_degree();
}

Poly q0_operator(const Poly& R) {
  if (!R.geometric_only())
    throw std::invalid_argument("q0_operator: argument must use only z, w, zb, wb");
  Poly zb = gvar(Var::zb), wb = gvar(Var::wb);
  Poly contracted = wb * wb * R.diff(Var::z).diff(Var::z) -
                    GaussianRational(2) * (zb * wb * R.diff(Var::z).diff(Var::w)) +
                    zb * zb * R.diff(Var::w).diff(Var::w);
  LinearFieldOp lbar0 = field_Lbar(DefiningFunction(sphere_rho()));
  return apply_power(lbar0, 4, contracted);
}

std::pair<Poly, Poly> linear_eps_coefficient(const PerturbationSpec& spec) {
  Poly rho_eps = (sphere_rho() + gvar(Var::eps) * spec.rho_prime).with_eps_cap(spec.eps_cap);
  Poly direct = poly_det(build_A(DefiningFunction(rho_eps), 3)).eps_coefficient(1);
  Poly factored =
      poly_det(build_D(DefiningFunction(sphere_rho()), 3)) * q0_operator(spec.rho_prime);
  return {direct, factored};
}

std::complex<double> CircleRestriction::eval_on_circle(double t) const {
  std::complex<double> s = 0;
  for (const auto& [bd, c] : components)
    s += c.to_complex() *
         std::exp(std::complex<double>(0.0, (bd.first - bd.second) * t));
  return s;
}

CircleRestriction great_circle_restriction(const Poly& Q, const SpherePoint& Z0) {
  if (!Q.geometric_only())
    throw std::invalid_argument("great_circle_restriction: invariant must use only z, w, zb, wb");
  if (Z0.z.norm2() + Z0.w.norm2() != 1)
    throw std::invalid_argument("great_circle_restriction: point is not on the sphere");
  // z doubles as the circle parameter and zb as its conjugate
  std::map<Var, Poly> onto{{Var::z, Poly::constant(Z0.z) * gvar(Var::z)},
                           {Var::w, Poly::constant(Z0.w) * gvar(Var::z)},
                           {Var::zb, Poly::constant(Z0.z.conj()) * gvar(Var::zb)},
                           {Var::wb, Poly::constant(Z0.w.conj()) * gvar(Var::zb)}};
  Poly r = Q.substitute(onto);
  CircleRestriction out;
  for (const auto& [bd, comp] : r.bidegree_split()) {
    // a whole bidegree collapses onto the single monomial zeta^a zetabar^b
    Monomial mono;
    mono.at(Var::z) = static_cast<uint16_t>(bd.first);
    mono.at(Var::zb) = static_cast<uint16_t>(bd.second);
    out.components[bd] = comp.coefficient(mono);
  }
  if (out.components.empty())
    throw std::domain_error("great_circle_restriction: invariant vanishes on this circle");
  for (const auto& [bd, c] : out.components)
    out.m = std::max(out.m, bd.first + bd.second);
  // on the circle zetabar = 1/zeta; zeta^m clears the pole
  out.p.c.assign(2 * out.m + 1, GaussianRational());
  for (const auto& [bd, c] : out.components)
    out.p.c[bd.first - bd.second + out.m] += c;
  out.p.trim();
  if (out.p.is_zero())
    throw std::domain_error("great_circle_restriction: invariant vanishes on this circle");
  return out;
}

CircleSearchResult find_good_circle(const Poly& Q, const SearchOptions& opts) {
  CircleSearchResult res;
  if (Q.is_zero()) {
    res.note = "invariant vanishes identically; every circle is degenerate";
    return res;
  }
  std::vector<SpherePoint> pts = stock_sphere_points(opts.stock_budget);
  std::mt19937_64 rng(opts.seed);
  for (size_t k = 0; k < opts.random_budget; ++k) pts.push_back(random_sphere_point(rng));
  for (const SpherePoint& pt : pts) {
    ++res.tried;
    try {
      CircleRestriction r = great_circle_restriction(Q, pt);
      if (has_root_on_unit_circle(r.p, opts.tol)) continue;
      int n = count_roots_in_unit_disk(r.p, opts.tol, opts.winding_samples);
      res.found = true;
      res.Z0 = pt;
      res.restriction = std::move(r);
      res.disk_roots = n;
      return res;
    } catch (const std::domain_error&) {
      continue;  // restriction vanished on this circle
    } catch (const SchurCohnDegenerate&) {
      continue;
    } catch (const CircleRootError&) {
      continue;
    } catch (const WindingError&) {
      continue;
    }
  }
  res.note = "no circle passed the root-free screen within the search budget";
  return res;
}

ConditionIIReport check_condition_ii(const PerturbationSpec& spec) {
  ConditionIIReport rep;
  Poly Q = q0_operator(spec.rho_prime);
  for (const auto& [bd, comp] : Q.bidegree_split()) {
    int l = bd.first, k = bd.first + bd.second;
    if (l >= 4 && 2 * l <= k) {
      rep.pass = false;
      rep.offenders.push_back(bd);
    }
  }
  return rep;
}

bool is_almost_circular(const PerturbationSpec& spec) {
  for (int k = 4; k <= spec.degree; ++k)
    if (!spec.rho_prime.fourier_coefficient(k).is_zero() ||
        !spec.rho_prime.fourier_coefficient(-k).is_zero())
      return false;
  return true;
}

namespace {

// Restriction of Q to one projection fiber. Finite chart: (z, w) = zeta
// (ztilde, 1) with |zeta|^2 = r2 = 1/(1 + |ztilde|^2); infinity chart: the
// w = 0 fiber with r2 = 1. zetabar is eliminated through r2/zeta, and the
// pole is cleared. Returns false when the fiber restriction vanishes.
bool fiber_restriction(const Poly& Q, const GaussianRational& zt, bool at_infinity,
                       UnivariatePoly& out, mpq_class& r2) {
  std::map<Var, Poly> onto;
  if (at_infinity) {
    r2 = 1;
    onto = {{Var::z, gvar(Var::z)},
            {Var::w, Poly::zero()},
            {Var::zb, gvar(Var::zb)},
            {Var::wb, Poly::zero()}};
  } else {
    r2 = mpq_class(1) / (mpq_class(1) + zt.norm2());
    onto = {{Var::z, Poly::constant(zt) * gvar(Var::z)},
            {Var::w, gvar(Var::z)},
            {Var::zb, Poly::constant(zt.conj()) * gvar(Var::zb)},
            {Var::wb, gvar(Var::zb)}};
  }
  Poly r = Q.substitute(onto);
  if (r.is_zero()) return false;
  int m = 0;
  for (const Term& t : r.terms()) m = std::max(m, t.m.total_degree());
  out.c.assign(2 * m + 1, GaussianRational());
  for (const Term& t : r.terms()) {
    int a = t.m[Var::z], b = t.m[Var::zb];
    out.c[a - b + m] += q_pow(r2, b) * t.c;
  }
  out.trim();
  return !out.is_zero();
}

}  // namespace

PiProjectionReport pi_projection_scan(const Poly& Q, int resolution, double tol) {
  if (resolution < 2)
    throw std::invalid_argument("pi_projection_scan: resolution must be >= 2");
  if (!Q.geometric_only())
    throw std::invalid_argument("pi_projection_scan: invariant must use only z, w, zb, wb");
  PiProjectionReport rep;
  auto probe = [&](const GaussianRational& zt, bool inf, const std::string& label) {
    ++rep.fibers;
    UnivariatePoly F;
    mpq_class r2;
    if (!fiber_restriction(Q, zt, inf, F, r2)) {
      ++rep.zero_fibers;
      ++rep.flagged;
      return;
    }
    if (has_root_on_circle_r2(F, r2, tol)) {
      ++rep.flagged;
      return;
    }
    if (!rep.witness_found) {
      rep.witness_found = true;
      rep.witness_chart = label;
    }
  };
  const long g = resolution;
  for (long i = 0; i < g; ++i)
    for (long j = 0; j < g; ++j) {
      mpq_class x(4 * i - 2 * (g - 1), g - 1);
      mpq_class y(4 * j - 2 * (g - 1), g - 1);
      x.canonicalize();
      y.canonicalize();
      GaussianRational zt(x, y);
      probe(zt, false, "ztilde = " + zt.str());
    }
  probe(GaussianRational(), true, "w = 0 chart point");
  return rep;
}

nlohmann::json CertReport::to_json() const {
  nlohmann::json j;
  j["pipeline"] = pipeline;
  nlohmann::json hi;
  hi["pass"] = hyp_i_prime.pass;
  hi["note"] = hyp_i_prime.note;
  if (witness)
    hi["witness"] = {{"z", witness->z.str()}, {"w", witness->w.str()}};
  else
    hi["witness"] = nullptr;
  j["hypothesis_i_prime"] = hi;
  nlohmann::json hii;
  hii["pass"] = hyp_ii.pass;
  hii["note"] = hyp_ii.note;
  hii["offenders"] = nlohmann::json::array();
  for (const auto& [l, r] : offenders) hii["offenders"].push_back({l, r});
  j["hypothesis_ii"] = hii;
  j["winding"] = winding ? nlohmann::json(*winding) : nlohmann::json();
  j["disk_roots"] = disk_roots ? nlohmann::json(*disk_roots) : nlohmann::json();
  j["laurent_order"] = laurent_order ? nlohmann::json(*laurent_order) : nlohmann::json();
  j["verdict"] = verdict;
  nlohmann::json cs = nlohmann::json::object();
  for (const auto& [k, v] : constants) cs[k] = v;
  j["constants"] = cs;
  j["notes"] = notes;
  return j;
}

int CertReport::exit_code() const {
  if (verdict == "certified") return 0;
  if (verdict == "degenerate") return 2;
  return 1;
}

CertReport ellipsoid_winding_certificate(const EllipsoidFamily& fam,
                                         const SearchOptions& opts) {
  if (!fam.A || !fam.B)
    throw std::invalid_argument(
        "ellipsoid_winding_certificate: both axis parameters must be bound");
  CertReport rep;
  rep.pipeline = "ellipsoid";
  EllipsoidExpansion ex = ellipsoid_slice_expansion(fam);
  bool low = ex.eps0.is_zero() && ex.eps1.is_zero();
  rep.hyp_ii.pass = low;
  rep.hyp_ii.note = low ? "eps^0 and eps^1 slice coefficients vanish"
                        : "low-order slice coefficients unexpectedly nonzero";
  const Poly& d2 = ex.eps2;
  if (d2.is_zero()) {
    rep.hyp_i_prime = {false, "eps^2 slice coefficient vanishes identically"};
    rep.verdict = "degenerate";
    rep.notes.push_back(
        "a vanishing axis keeps the family circle-invariant; the slice certificate is void");
    return rep;
  }
  rep.constants.push_back({"slice_eps2", print_poly(d2)});
  Monomial shape;
  shape.at(Var::z) = 9;
  shape.at(Var::zb) = 5;
  if (d2.terms().size() != 1 || !(d2.terms()[0].m == shape)) {
    rep.hyp_i_prime = {false, "eps^2 slice coefficient is not the expected single monomial"};
    rep.verdict = "rejected";
    return rep;
  }
  GaussianRational universal = d2.terms()[0].c / (*fam.A * *fam.B);
  rep.constants.push_back({"universal_factor", universal.str()});
  auto f = [&](double t) {
    std::map<Var, std::complex<double>> at{{Var::z, std::polar(1.0, t)},
                                           {Var::zb, std::polar(1.0, -t)}};
    return d2.eval(at);
  };
  try {
    SampledLoop loop = sample_loop(f, opts.winding_samples, "slice eps^2 coefficient");
    int w = winding_number(loop);
    rep.winding = w;
    rep.hyp_i_prime.pass = (w != 0);
    rep.hyp_i_prime.note = rep.hyp_i_prime.pass
                               ? "slice coefficient winds nontrivially around the axis circle"
                               : "slice coefficient winds trivially";
  } catch (const WindingError& e) {
    rep.hyp_i_prime = {false, std::string("winding extraction failed: ") + e.what()};
    rep.verdict = "degenerate";
    return rep;
  }
  rep.verdict = (rep.hyp_i_prime.pass && rep.hyp_ii.pass) ? "certified" : "rejected";
  if (rep.verdict == "certified")
    rep.notes.push_back("umbilical curve certified for small eps");
  return rep;
}

CertReport certify_stable_umbilic(const PerturbationSpec& spec,
                                  const SearchOptions& opts) {
  CertReport rep;
  rep.pipeline = "perturbation";
  rep.notes.push_back(is_almost_circular(spec) ? "perturbation is almost circular"
                                               : "perturbation is not almost circular");
  Poly Q = q0_operator(spec.rho_prime);
  if (Q.is_zero()) {
    rep.hyp_i_prime = {false, "flat-sphere invariant vanishes identically"};
    rep.hyp_ii = {true, "vacuously true"};
    rep.verdict = "rejected";
    rep.notes.push_back("no linear-order information; the certificate does not apply");
    return rep;
  }
  ConditionIIReport ii = check_condition_ii(spec);
  rep.hyp_ii.pass = ii.pass;
  rep.offenders = ii.offenders;
  rep.hyp_ii.note = ii.pass ? "all image components in the obstructed range vanish"
                            : "nonzero image components in the obstructed range";
  CircleSearchResult search = find_good_circle(Q, opts);
  rep.constants.push_back({"circles_tried", std::to_string(search.tried)});
  if (!search.found) {
    rep.hyp_i_prime = {false, "unverified: " + search.note};
    rep.verdict = "rejected";
    return rep;
  }
  rep.witness = search.Z0;
  int n = search.disk_roots;
  int m = search.restriction.m;
  int w = n - m;
  try {
    SampledLoop loop =
        sample_loop([r = search.restriction](double t) { return r.eval_on_circle(t); },
                    opts.winding_samples, "restricted invariant");
    if (winding_number(loop) != w)
      throw std::logic_error(
          "certify_stable_umbilic: numeric winding disagrees with the exact root count");
  } catch (const WindingError& e) {
    rep.hyp_i_prime = {false, std::string("numeric winding unresolved: ") + e.what()};
    rep.verdict = "degenerate";
    return rep;
  }
  rep.winding = w;
  rep.disk_roots = n;
  rep.laurent_order = m;
  rep.hyp_i_prime.pass = (w != 0);
  rep.hyp_i_prime.note = rep.hyp_i_prime.pass
                             ? "good circle found with nonzero winding"
                             : "good circle found but the winding vanishes";
  rep.verdict = (rep.hyp_i_prime.pass && rep.hyp_ii.pass) ? "certified" : "rejected";
  return rep;
}

GridScan umbilic_grid_scan(const PerturbationSpec& spec, double eps, int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("umbilic_grid_scan: resolution must be >= 2");
  Poly rho = sphere_rho() + Poly::constant(GaussianRational(mpq_class(eps))) * spec.rho_prime;
  DefiningFunction f(rho);
  PolyMatrix M = build_A(f, 3);
  GridScan scan;
  scan.resolution = resolution;
  const int res = resolution;
  scan.rows.reserve(static_cast<size_t>(res) * res * res);
  for (int i = 0; i < res; ++i) {
    double theta = (i + 0.5) * (kPi / 2) / res;
    for (int j = 0; j < res; ++j) {
      double phi1 = 2 * kPi * j / res;
      for (int k = 0; k < res; ++k) {
        double phi2 = 2 * kPi * k / res;
        GridRow row;
        row.theta = theta;
        row.phi1 = phi1;
        row.phi2 = phi2;
        std::complex<double> z = std::polar(std::cos(theta), phi1);
        std::complex<double> w = std::polar(std::sin(theta), phi2);
        auto g = [&](double l) { return rho.eval(point_bindings(l * z, l * w)).real(); };
        double lam = 1.0;
        bool ok = false;
        for (int it = 0; it < 40; ++it) {
          double gv = g(lam);
          if (std::abs(gv) < 1e-13) {
            ok = true;
            break;
          }
          double dv = (g(lam + 1e-7) - g(lam - 1e-7)) / 2e-7;
          if (std::abs(dv) < 1e-12) break;
          lam -= gv / dv;
        }
        row.converged = ok;
        row.z = lam * z;
        row.w = lam * w;
        row.q = ok ? numeric_det(M, point_bindings(row.z, row.w)) : std::complex<double>();
        scan.rows.push_back(row);
      }
    }
  }
  auto at = [&](int i, int j, int k) -> const GridRow& {
    return scan.rows[(static_cast<size_t>(i) * res + j) * res + k];
  };
  for (int i = 0; i + 1 < res; ++i)
    for (int j = 0; j < res; ++j)
      for (int k = 0; k < res; ++k) {
        double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
        bool first = true, usable = true;
        for (int di = 0; di <= 1 && usable; ++di)
          for (int dj = 0; dj <= 1 && usable; ++dj)
            for (int dk = 0; dk <= 1 && usable; ++dk) {
              const GridRow& r = at(i + di, (j + dj) % res, (k + dk) % res);
              if (!r.converged) {
                usable = false;
                break;
              }
              double re = r.q.real(), im = r.q.imag();
              if (first) {
                re_lo = re_hi = re;
                im_lo = im_hi = im;
                first = false;
              } else {
                re_lo = std::min(re_lo, re);
                re_hi = std::max(re_hi, re);
                im_lo = std::min(im_lo, im);
                im_hi = std::max(im_hi, im);
              }
            }
        if (usable && re_lo < 0 && re_hi > 0 && im_lo < 0 && im_hi > 0)
          scan.candidate_cells.push_back({i, j, k});
      }
  return scan;
}

SigmaSliceReport sigma_slice_stokes(const PerturbationSpec& spec,
                                    const SigmaSliceOptions& opts) {
  std::map<Var, Poly> axis{{Var::w, Poly::zero()}, {Var::wb, Poly::zero()}};
  if (!spec.rho_prime.substitute(axis).is_zero())
    throw std::invalid_argument(
        "sigma_slice_stokes: the perturbation must vanish on the w = 0 great circle");
  if (opts.radial < 4 || opts.angular < 8)
    throw std::invalid_argument("sigma_slice_stokes: grid too coarse");
  Poly rho =
      sphere_rho() + Poly::constant(GaussianRational(mpq_class(opts.eps))) * spec.rho_prime;
  DefiningFunction f(rho);
  PolyMatrix M = build_A(f, 3);

  auto rho_at = [&](std::complex<double> z, double u) {
    return rho.eval(point_bindings(z, {u, 0.0})).real();
  };
  // chart height over the slice {Im w = 0, Re w >= 0}
  auto chart_u = [&](std::complex<double> z) {
    double u = std::sqrt(std::max(0.0, 1.0 - std::norm(z)));
    for (int it = 0; it < 60; ++it) {
      double gv = rho_at(z, u);
      if (std::abs(gv) < 1e-13) return u;
      double dv = (rho_at(z, u + 1e-7) - rho_at(z, u - 1e-7)) / 2e-7;
      if (std::abs(dv) < 1e-12) {
        u += 1e-4;  // nudge off a critical point
        continue;
      }
      u -= gv / dv;
    }
    throw std::runtime_error("sigma_slice_stokes: projection onto the slice did not converge");
  };
  auto qval = [&](std::complex<double> z) {
    return numeric_det(M, point_bindings(z, {chart_u(z), 0.0}));
  };

  const int R = opts.radial, T = opts.angular;
  const double rmax = 0.99;
  std::vector<std::vector<std::complex<double>>> val(
      R, std::vector<std::complex<double>>(T));
  for (int i = 0; i < R; ++i) {
    double r = (i + 0.5) * rmax / R;
    for (int j = 0; j < T; ++j) val[i][j] = qval(std::polar(r, 2 * kPi * j / T));
  }
  std::vector<std::vector<char>> flag(R - 1, std::vector<char>(T, 0));
  for (int i = 0; i + 1 < R; ++i)
    for (int j = 0; j < T; ++j) {
      double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
      bool first = true;
      for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj) {
          std::complex<double> v = val[i + di][(j + dj) % T];
          if (first) {
            re_lo = re_hi = v.real();
            im_lo = im_hi = v.imag();
            first = false;
          } else {
            re_lo = std::min(re_lo, v.real());
            re_hi = std::max(re_hi, v.real());
            im_lo = std::min(im_lo, v.imag());
            im_hi = std::max(im_hi, v.imag());
          }
        }
      flag[i][j] = (re_lo < 0 && re_hi > 0 && im_lo < 0 && im_hi > 0) ? 1 : 0;
    }

  SigmaSliceReport rep;
  std::vector<std::vector<char>> seen(R - 1, std::vector<char>(T, 0));
  for (int i = 0; i + 1 < R; ++i)
    for (int j = 0; j < T; ++j) {
      if (!flag[i][j] || seen[i][j]) continue;
      std::complex<double> sum = 0;
      int cnt = 0;
      std::queue<std::pair<int, int>> bfs;
      bfs.push({i, j});
      seen[i][j] = 1;
      while (!bfs.empty()) {
        auto [ci, cj] = bfs.front();
        bfs.pop();
        // cell center: midpoint ring between sample rings ci and ci+1
        sum += std::polar((ci + 1.0) * rmax / R, 2 * kPi * (cj + 0.5) / T);
        ++cnt;
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            int ni = ci + di, nj = ((cj + dj) % T + T) % T;
            if (ni < 0 || ni + 1 >= R || seen[ni][nj] || !flag[ni][nj]) continue;
            seen[ni][nj] = 1;
            bfs.push({ni, nj});
          }
      }
      rep.zeros.push_back(sum / static_cast<double>(cnt));
    }

  SampledLoop outer = sample_loop([&](double t) { return qval(std::polar(1.0, t)); },
                                  opts.loop_samples, "slice boundary");
  std::vector<SampledLoop> inner;
  for (size_t c = 0; c < rep.zeros.size(); ++c) {
    std::complex<double> ctr = rep.zeros[c];
    double rad = std::min(0.08, 0.9 * (rmax - std::abs(ctr)));
    rad = std::max(rad, 2.0 * rmax / R);
    inner.push_back(sample_loop([&, ctr, rad](double t) { return qval(ctr + std::polar(rad, t)); },
                                opts.loop_samples, "detection " + std::to_string(c + 1)));
  }
  rep.stokes = stokes_decomposition_check(outer, inner);
  return rep;
}

}  // namespace crinv
