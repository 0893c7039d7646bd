#pragma once

#include <random>
#include <vector>

#include "crinv/poly.hpp"

namespace crinv {

// Real defining function of a hypersurface patch. The constructor enforces
// the two properties every caller silently assumes: rho is not identically
// zero and is invariant under conjugation.
struct DefiningFunction {
  Poly rho;
  explicit DefiningFunction(Poly r);

  Poly d(Var v) const { return rho.diff(v); }
};

// First-order operator  sum_v  coeff[v] * d/dv  over the geometric variables.
struct LinearFieldOp {
  std::array<Poly, 4> coeff;  // indexed by Var z, w, zb, wb

  Poly apply(const Poly& p) const;
};

// L = -rho_w d/dz + rho_z d/dw, the tangential (1,0) field.
LinearFieldOp field_L(const DefiningFunction& f);
// Lbar = -rho_wb d/dzb + rho_zb d/dwb, its conjugate.
LinearFieldOp field_Lbar(const DefiningFunction& f);

Poly apply_power(const LinearFieldOp& op, unsigned j, const Poly& p);

// Hessian of rho contracted twice with L:
//   rho_zz rho_w^2 - 2 rho_zw rho_z rho_w + rho_ww rho_z^2.
Poly hessian_LL(const DefiningFunction& f);

struct PolyMatrix {
  size_t n = 0;
  std::vector<Poly> a;  // row-major

  PolyMatrix() = default;
  explicit PolyMatrix(size_t dim) : n(dim), a(dim * dim) {}
  Poly& at(size_t i, size_t j) { return a[i * n + j]; }
  const Poly& at(size_t i, size_t j) const { return a[i * n + j]; }
};

// (2n-1) x (2n-1) invariant matrix, n >= 3. Row i of the first block
// (i = 0..n) holds Lbar^j applied to rho_z^i rho_w^(n-i); the remaining n-2
// rows apply Lbar^j to rho_z^s rho_w^(n-3-s) times the Hessian contraction,
// s = 0..n-3. Columns are j = 0..2n-2. Any eps_cap on rho propagates into
// every entry as it is built.
PolyMatrix build_A(const DefiningFunction& f, int n);

// (n+1) x (n+1) upper-left minor: Lbar^j of rho_z^k rho_w^(n-k), n >= 1.
PolyMatrix build_D(const DefiningFunction& f, int n);

// Exact determinant over the polynomial ring. Untruncated matrices use
// fraction-free (Bareiss) elimination with first-nonzero-row pivoting, with
// naive cofactor expansion for dimension <= 4. Matrices carrying a finite
// eps_cap are expanded division-free (memoized Laplace): Bareiss' exact
// divisions lose eps-precision whenever a pivot has positive eps-order.
Poly poly_det(const PolyMatrix& m);

// Quotient f/g when the division is exact in the ring; throws otherwise.
Poly divide_exact(const Poly& f, const Poly& g);

// Levi-type complex Monge-Ampere determinant: det of the bordered matrix
//   [ rho    rho_zb   rho_wb ]
//   [ rho_z  rho_zzb  rho_zwb]
//   [ rho_w  rho_wzb  rho_wwb]
// (the (-1)^(n+1) prefactor is +1 in two complex variables).
Poly fefferman_J(const DefiningFunction& f);

// Normal form of p modulo the single rewrite rule  selector -> selector - rho/c,
// c the coefficient of selector in rho. Preconditions (checked): selector has a
// nonzero coefficient in rho, no other monomial of rho is divisible by it, and
// every other monomial of rho has strictly smaller total degree in the
// selector's support variables; this guarantees the rewrite terminates and the
// normal form is canonical. For the unit sphere the rule is w*wb -> 1 - z*zb.
Poly reduce_mod(const Poly& p, const Poly& rho, const Monomial& selector);
Monomial sphere_selector();  // w*wb

// Exact point on the unit sphere |z|^2 + |w|^2 = 1 with Gaussian-rational
// coordinates, from integer quadruples a^2 + b^2 + c^2 + e^2 = d^2.
struct SpherePoint {
  GaussianRational z, w;

  std::map<Var, GaussianRational> bindings() const;  // z, w and conjugates
};

// Deterministic list of small exact sphere points; the first entry is (1, 0).
std::vector<SpherePoint> stock_sphere_points(size_t count);
// Quaternion-square parametrization seeded from the given engine.
SpherePoint random_sphere_point(std::mt19937_64& rng);

GaussianRational eval_at_sphere_point(const Poly& p, const SpherePoint& pt);

}  // namespace crinv
