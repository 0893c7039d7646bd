#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crinv {

// One named verification suite: exact identities with a line-per-check
// transcript. pass stays true only while every check passes.
struct VerifyResult {
  std::string suite;
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what);
  void note(const std::string& what);
};

// Scaling and coordinate-change laws for the invariant determinants.
VerifyResult verify_transform(uint64_t seed = 0);

// Graph-coordinate origin formulas, the universal constants and the
// deformed-sphere slice constant.
VerifyResult verify_normalform();

// Linear coefficient of the perturbed determinant against its factored form.
VerifyResult verify_linear_coefficient(uint64_t seed = 0);

// Winding = disk roots - pole order on restricted circles, plus the exact
// root count against the numeric argument principle.
VerifyResult verify_argument_principle(uint64_t seed = 0);

std::vector<VerifyResult> verify_all(uint64_t seed = 0);

}  // namespace crinv
