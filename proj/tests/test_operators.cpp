#include <doctest.h>

#include <random>
#include <stdexcept>

#include "crinv/grammar.hpp"
#include "crinv/operators.hpp"
#include "crinv/poly.hpp"

using namespace crinv;

namespace {

Poly sphere() { return parse_poly("-1 + z*zb + w*wb"); }

GaussianRational random_coeff(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  GaussianRational c = GaussianRational::ratio(num(rng), den(rng));
  if (rng() & 1)
    c = c + GaussianRational::ratio(num(rng), den(rng)) * GaussianRational::i_unit();
  if (c.is_zero()) c = GaussianRational::ratio(1, 2);
  return c;
}

// sphere plus a couple of conjugate-closed monomial pairs, so the result is
// real, degree <= 4, and never identically zero
Poly random_real_quartic(std::mt19937_64& rng) {
  static const int pool[][4] = {{2, 0, 0, 2}, {1, 1, 1, 1}, {2, 1, 1, 0},
                                {0, 2, 2, 0}, {1, 0, 1, 2}, {2, 0, 1, 1},
                                {1, 2, 0, 1}, {3, 0, 0, 1}};
  std::uniform_int_distribution<size_t> pick(0, std::size(pool) - 1);
  Poly p = sphere();
  for (int k = 0; k < 2; ++k) {
    const int* e = pool[pick(rng)];
    Monomial m;
    m.at(Var::z) = e[0];
    m.at(Var::w) = e[1];
    m.at(Var::zb) = e[2];
    m.at(Var::wb) = e[3];
    Poly t = Poly::term(random_coeff(rng), m);
    p += t + t.conj();
  }
  return p;
}

// textbook cofactor expansion along the first row, no pivoting tricks
Poly naive_det(const PolyMatrix& m, std::vector<size_t> rows,
               std::vector<size_t> cols) {
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  Poly acc;
  for (size_t j = 0; j < cols.size(); ++j) {
    std::vector<size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<size_t> sub_cols;
    for (size_t k = 0; k < cols.size(); ++k)
      if (k != j) sub_cols.push_back(cols[k]);
    Poly cof = m.at(rows[0], cols[j]) * naive_det(m, sub_rows, sub_cols);
    acc = (j % 2 == 0) ? acc + cof : acc - cof;
  }
  return acc;
}

Poly naive_det(const PolyMatrix& m) {
  std::vector<size_t> idx(m.n);
  for (size_t i = 0; i < m.n; ++i) idx[i] = i;
  return naive_det(m, idx, idx);
}

}  // namespace

TEST_CASE("defining function rejects degenerate input") {
  CHECK_THROWS_AS(DefiningFunction(Poly::zero()), std::invalid_argument);
  CHECK_THROWS_AS(DefiningFunction(parse_poly("z")), std::invalid_argument);
  CHECK_NOTHROW(DefiningFunction(sphere()));
}

TEST_CASE("L is tangential for random real defining functions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    DefiningFunction f(random_real_quartic(rng));
    CHECK(field_L(f).apply(f.rho).is_zero());
    CHECK(field_Lbar(f).apply(f.rho).is_zero());
  }
}

TEST_CASE("iterated field application") {
  DefiningFunction f(sphere());
  LinearFieldOp lbar = field_Lbar(f);
  Poly p = parse_poly("z^2*w");
  CHECK(apply_power(lbar, 0, p) == p);
  CHECK(apply_power(lbar, 2, p) == lbar.apply(lbar.apply(p)));
}

TEST_CASE("sphere hessian contraction vanishes") {
  CHECK(hessian_LL(DefiningFunction(sphere())).is_zero());
  // and generically it does not
  CHECK(!hessian_LL(DefiningFunction(parse_poly("-1 + z*zb + w*wb + z^2*zb^2")))
             .is_zero());
}

TEST_CASE("matrix shapes") {
  DefiningFunction f(sphere());
  CHECK(build_A(f, 3).n == 5);
  CHECK(build_A(f, 4).n == 7);
  CHECK(build_D(f, 1).n == 2);
  CHECK(build_D(f, 3).n == 4);
  CHECK_THROWS_AS(build_A(f, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_D(f, 0), std::invalid_argument);
}

TEST_CASE("frozen sphere determinants") {
  DefiningFunction f(sphere());
  CHECK(poly_det(build_D(f, 1)) == parse_poly("-z*zb - w*wb"));
  Poly d3 = poly_det(build_D(f, 3));
  CHECK(d3 == 12 * GaussianRational(1) * parse_poly("z*zb + w*wb").pow(6));
  // hessian rows of A are identically zero on the sphere
  CHECK(poly_det(build_A(f, 3)).is_zero());
}

TEST_CASE("determinant routines agree with cofactor expansion") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    PolyMatrix m(4);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        Monomial mm;
        mm.at(Var::z) = rng() % 2;
        mm.at(Var::w) = rng() % 2;
        m.at(i, j) = Poly::term(random_coeff(rng), mm);
      }
    CHECK(poly_det(m) == naive_det(m));
  }
  DefiningFunction f(random_real_quartic(rng));
  PolyMatrix d2 = build_D(f, 2);
  CHECK(poly_det(d2) == naive_det(d2));
}

TEST_CASE("eps-capped determinants avoid pivot precision loss") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    PolyMatrix m(3), mc(3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        Monomial mm;
        mm.at(Var::eps) = rng() % 2;
        mm.at(Var::z) = rng() % 2;
        m.at(i, j) = Poly::term(random_coeff(rng), mm);
        mc.at(i, j) = m.at(i, j).with_eps_cap(3);
      }
    CHECK(poly_det(mc) == poly_det(m).with_eps_cap(3));
  }
}

TEST_CASE("exact division") {
  Poly f = parse_poly("z^2*w - w^3 + 1/2*z");
  Poly g = parse_poly("z*wb + 2");
  CHECK(divide_exact(f * g, g) == f);
  CHECK_THROWS_AS(divide_exact(parse_poly("z^2 + 1"), parse_poly("z + 1")),
                  std::domain_error);
  CHECK_THROWS_AS(divide_exact(parse_poly("z"), Poly::zero()), std::exception);
}

TEST_CASE("bordered complex hessian of the sphere") {
  Poly j = fefferman_J(DefiningFunction(sphere()));
  CHECK(j == Poly::constant(GaussianRational(-1)));
}

TEST_CASE("reduction modulo the sphere relation") {
  Poly rho = sphere();
  CHECK(reduce_mod(rho, rho, sphere_selector()).is_zero());
  // w*wb rewrites to 1 - z*zb
  CHECK(reduce_mod(parse_poly("w^2*wb^2"), rho, sphere_selector()) ==
        parse_poly("1 - 2*z*zb + z^2*zb^2"));
  CHECK(reduce_mod(parse_poly("z*w*wb + w"), rho, sphere_selector()) ==
        parse_poly("z - z^2*zb + w"));
  // selector absent from rho is rejected
  Monomial zw;
  zw.at(Var::z) = 1;
  zw.at(Var::w) = 1;
  CHECK_THROWS_AS(reduce_mod(parse_poly("z"), rho, zw), std::invalid_argument);
}

TEST_CASE("exact sphere points") {
  auto pts = stock_sphere_points(20);
  REQUIRE(pts.size() == 20);
  CHECK(pts[0].z == GaussianRational(1));
  CHECK(pts[0].w.is_zero());
  Poly rho = sphere();
  for (const auto& pt : pts) {
    CHECK(rho.eval(pt.bindings()).is_zero());
    CHECK(eval_at_sphere_point(rho, pt).is_zero());
  }
  // distinct points
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      CHECK((!(pts[i].z == pts[j].z) || !(pts[i].w == pts[j].w)));

  std::mt19937_64 rng(3), rng2(3);
  SpherePoint r1 = random_sphere_point(rng);
  SpherePoint r2 = random_sphere_point(rng2);
  CHECK(rho.eval(r1.bindings()).is_zero());
  CHECK((r1.z == r2.z && r1.w == r2.w));  // seeded, hence reproducible
}

TEST_CASE("origin evaluation of A agrees with the full determinant") {
  // truncated-at-origin evaluation elsewhere depends on this identity
  Poly rho = parse_poly("(0+1/2i)*w - (0+1/2i)*wb + z^2*zb^2 + "
                        "1/3*z^2*zb^4 + 1/3*z^4*zb^2");
  DefiningFunction f(rho);
  PolyMatrix a = build_A(f, 3);
  PolyMatrix consts(a.n);
  for (size_t i = 0; i < a.n; ++i)
    for (size_t j = 0; j < a.n; ++j)
      consts.at(i, j) = Poly::constant(a.at(i, j).constant_term());
  Poly full = poly_det(a);
  CHECK(full.constant_term() == poly_det(consts).constant_term());
}
