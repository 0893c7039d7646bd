#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "crinv/operators.hpp"
#include "crinv/poly.hpp"

namespace crinv {

// Hypersurface in prenormalized graph form: rho = -Im w + phi(z, zb, u) with
// u = Re w and phi = sum phi_{kl}(u) z^k zb^l. Weight of z^k zb^l u^j is
// k + l + 2j; coefficients above max_weight are not stored.
struct NormalFormSurface {
  int max_weight = 0;
  // (k, l) -> coefficients of phi_{kl} as a polynomial in u, ascending.
  std::map<std::pair<int, int>, std::vector<GaussianRational>> coeffs;

  GaussianRational phi_at_zero(int k, int l) const;  // phi_{kl}(0)
  void set(int k, int l, std::vector<GaussianRational> u_poly);
  // Sets phi_{kl} and phi_{lk} to conjugate u-polynomials in one go.
  void set_pair(int k, int l, const std::vector<GaussianRational>& u_poly);
};

// Empty result means the surface satisfies the normalization: phi_{11} = 1,
// phi_{0k} = phi_{1s} = phi_{22} = phi_{23} = phi_{33} = 0 (k >= 0, s >= 2),
// reality phi_{lk} = conj(phi_{kl}), and all stored weights <= max_weight.
std::vector<std::string> validate_normal_form(const NormalFormSurface& s);

// Exact polynomial expansion of -Im w + phi(z, zb, (w + wb)/2).
DefiningFunction rho_from_graph(const NormalFormSurface& s);

// Determinant of the invariant matrix evaluated at the origin. Evaluation of
// the entries commutes with the determinant, so this never forms the symbolic
// determinant.
GaussianRational detA_at_origin(const DefiningFunction& f, int n);

// The closed-form origin value: det of the (n-2) x (n-2) matrix with entry
// (r, c) = binom(n+1+c, r) * (d_z^2 d_zb^{n+1+c-r} phi)(0), the binomial
// matrix over derivative values 2 (n+1+c-r)! phi_{2,n+1+c-r}(0). Supported
// for n = 3, 4, 5; for n = 3 this is the single value 48 phi_{24}(0).
GaussianRational detA_origin_formula(const NormalFormSurface& s, int n);

struct UniversalConstantReport {
  int n = 0;
  GaussianRational value;
  std::vector<std::string> transcript;
};

// Ratio detA_at_origin / detA_origin_formula across independent witness
// surfaces (n = 3 or 4); throws if the witnesses disagree.
UniversalConstantReport derive_universal_constant(int n);

// Levi nondegeneracy at an exact point of the hypersurface, decided by the
// (n+1) x (n+1) minor determinant with n = 3. The point must satisfy
// rho = 0 exactly.
bool levi_nondegenerate_at(const DefiningFunction& f,
                           const std::map<Var, GaussianRational>& point);

nlohmann::json normal_form_to_json(const NormalFormSurface& s);
NormalFormSurface normal_form_from_json(const nlohmann::json& j);

}  // namespace crinv
