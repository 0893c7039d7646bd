#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "crinv/circle.hpp"
#include "crinv/operators.hpp"
#include "crinv/poly.hpp"

namespace crinv {

// -1 + z zb + w wb, the unit-sphere defining function.
Poly sphere_rho();

// ---------------------------------------------------------------------------
// deformed-sphere (ellipsoid) pipeline
// ---------------------------------------------------------------------------

// rho = -4 + 4(z zb + w wb)
//       + eps (A (z^2 + zb^2 + 2 z zb) + B (w^2 + wb^2 + 2 w wb)),
// with A, B either left symbolic or bound to exact rationals. Arithmetic on
// the family is truncated at eps_cap throughout.
struct EllipsoidFamily {
  std::optional<GaussianRational> A, B;
  uint32_t eps_cap = 3;

  DefiningFunction rho() const;
};

// eps-coefficients of det A_3 with w = wb = 0 substituted into the matrix
// entries before the determinant.
struct EllipsoidExpansion {
  Poly eps0, eps1, eps2;
};
EllipsoidExpansion ellipsoid_slice_expansion(const EllipsoidFamily& fam);

// ---------------------------------------------------------------------------
// perturbed-sphere pipeline
// ---------------------------------------------------------------------------

// rho_eps = rho0 + eps * rho_prime; rho_prime must be real, use only the
// geometric variables, and not vanish identically.
struct PerturbationSpec {
  Poly rho_prime;
  int degree = 0;        // total degree of rho_prime
  uint32_t eps_cap = 2;  // enough to isolate the linear coefficient

  explicit PerturbationSpec(Poly p, uint32_t cap = 2);
};

// Flat-sphere model operator: Lbar0^4 applied to the Hessian of R contracted
// twice with L0 (wb^2 R_zz - 2 zb wb R_zw + zb^2 R_ww). Shifts bidegree
// (p, q) -> (p+2, q-2) and kills components with p < 2 or q < 2.
Poly q0_operator(const Poly& R);

// The linear-in-eps coefficient of det A_3(rho0 + eps rho'), computed two
// ways: directly from the truncated determinant, and factored as
// det D_3(rho0) * q0_operator(rho'). Returned as {direct, factored}.
std::pair<Poly, Poly> linear_eps_coefficient(const PerturbationSpec& spec);

// Restriction of an invariant Q to the great circle through Z0 (an exact
// sphere point): P(zeta, zetabar) = Q(zeta Z0, conj(zeta Z0)), recorded by
// bidegree; on |zeta| = 1 the pole of order m is cleared, leaving the
// polynomial p with p(zeta) = zeta^m P(zeta, 1/zeta). m is the largest total
// degree among the nonzero bidegree components of the restriction. Throws
// std::domain_error if Q restricts to zero on the circle.
struct CircleRestriction {
  std::map<std::pair<int, int>, GaussianRational> components;
  UnivariatePoly p;
  int m = 0;

  std::complex<double> eval_on_circle(double t) const;  // P at zeta = e^{it}
};
CircleRestriction great_circle_restriction(const Poly& Q, const SpherePoint& Z0);

struct SearchOptions {
  size_t stock_budget = 32;
  size_t random_budget = 256;
  uint64_t seed = 0;
  double tol = 1e-9;
  int winding_samples = 1024;
};

// Tries stock sphere points, then seeded random ones, until the restricted
// polynomial has no root on (or degenerately near) the unit circle.
struct CircleSearchResult {
  bool found = false;
  SpherePoint Z0;
  CircleRestriction restriction;
  int disk_roots = 0;
  size_t tried = 0;
  std::string note;
};
CircleSearchResult find_good_circle(const Poly& Q, const SearchOptions& opts = {});

// Vanishing condition on the low-holomorphic-degree part of the image of the
// flat-sphere operator: for every bidegree component (l, k-l) of Q0(rho')
// with 4 <= l <= k/2 the component must vanish. Offenders are reported as
// (l, k-l) pairs.
struct ConditionIIReport {
  bool pass = true;
  std::vector<std::pair<int, int>> offenders;
};
ConditionIIReport check_condition_ii(const PerturbationSpec& spec);

// True when every bidegree component (p, q) of rho' with |p - q| >= 4
// vanishes (equivalently, all circular Fourier modes |k| >= 4 are absent).
bool is_almost_circular(const PerturbationSpec& spec);

// Scans the Hopf-fiber circles over a rational chart grid plus the w = 0
// chart point. For each fiber the invariant restricts to an exact univariate
// polynomial (zetabar eliminated through |zeta|^2 (1 + |ztilde|^2) = 1) that
// is tested for roots on the fiber circle.
struct PiProjectionReport {
  size_t fibers = 0;
  size_t flagged = 0;      // fiber polynomial has a root on the fiber circle
  size_t zero_fibers = 0;  // invariant vanishes identically on the fiber
  bool witness_found = false;
  std::string witness_chart;  // ztilde of the first clean fiber
};
PiProjectionReport pi_projection_scan(const Poly& Q, int resolution = 64,
                                      double tol = 1e-9);

// ---------------------------------------------------------------------------
// certification reports
// ---------------------------------------------------------------------------

struct CertReport {
  std::string pipeline;  // "ellipsoid" or "perturbation"
  struct Hypothesis {
    bool pass = false;
    std::string note;
  };
  Hypothesis hyp_i_prime;  // circle with root-free restriction and winding
  Hypothesis hyp_ii;       // vanishing of the obstructing components
  std::vector<std::pair<int, int>> offenders;
  std::optional<SpherePoint> witness;
  std::optional<int> winding;
  std::optional<int> disk_roots;
  std::optional<int> laurent_order;
  std::string verdict;  // "certified" | "rejected" | "degenerate"
  std::vector<std::pair<std::string, std::string>> constants;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  int exit_code() const;  // 0 certified, 1 rejected, 2 degenerate
};

// Winding certificate for an ellipsoid with exact axis parameters. Digenerate
// (identically vanishing slice coefficient) yields verdict "degenerate".
CertReport ellipsoid_winding_certificate(const EllipsoidFamily& fam,
                                         const SearchOptions& opts = {});

// Full certification of a stable umbilical point for the perturbation family.
CertReport certify_stable_umbilic(const PerturbationSpec& spec,
                                  const SearchOptions& opts = {});

// ---------------------------------------------------------------------------
// numeric instruments
// ---------------------------------------------------------------------------

// Numeric scan of the perturbed hypersurface at a concrete eps: samples a
// (theta, phi1, phi2) grid on the sphere, Newton-projects each sample onto
// rho_eps = 0 along the radial direction, and evaluates the invariant
// determinant numerically from the symbolic matrix entries.
struct GridRow {
  double theta = 0, phi1 = 0, phi2 = 0;
  std::complex<double> z, w;
  std::complex<double> q;
  bool converged = true;  // radial projection landed on the surface
};
struct GridScan {
  std::vector<GridRow> rows;
  int resolution = 0;
  // grid cells where both Re Q and Im Q change sign (umbilical candidates)
  std::vector<std::array<int, 3>> candidate_cells;
};
GridScan umbilic_grid_scan(const PerturbationSpec& spec, double eps,
                           int resolution = 16);

// Disk slice instrument: on the surface slice {Im w = 0, Re w >= 0} (a disk
// bounded by the w = 0 great circle, which must lie on the perturbed surface)
// the invariant's boundary winding is compared against the sum of windings
// around the zeros detected inside. Options pick the polar grid density.
struct SigmaSliceOptions {
  double eps = 0.01;
  int radial = 48;
  int angular = 192;
  int loop_samples = 512;
};
struct SigmaSliceReport {
  StokesReport stokes;
  std::vector<std::complex<double>> zeros;  // chart coordinates of detections
};
SigmaSliceReport sigma_slice_stokes(const PerturbationSpec& spec,
                                    const SigmaSliceOptions& opts = {});

}  // namespace crinv
