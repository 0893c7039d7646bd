#include <doctest.h>

#include <cmath>
#include <complex>

#include "crinv/circle.hpp"

using namespace crinv;

namespace {

constexpr double kTau = 6.283185307179586476925287;

std::complex<double> cis(double t) { return {std::cos(t), std::sin(t)}; }

UnivariatePoly upoly(std::initializer_list<GaussianRational> ascending) {
  UnivariatePoly p{std::vector<GaussianRational>(ascending)};
  p.trim();
  return p;
}

GaussianRational gr(long num, long den = 1) {
  return GaussianRational::ratio(num, den);
}

}  // namespace

TEST_CASE("winding of circle powers") {
  for (int k : {-3, -1, 1, 2, 5}) {
    SampledLoop loop = sample_loop([k](double t) { return cis(k * t); }, 64);
    CHECK(winding_number(loop) == k);
  }
  // conjugation flips the sign, products add
  SampledLoop prod = sample_loop(
      [](double t) { return cis(2 * t) * (cis(3 * t) + 0.5); }, 128);
  CHECK(winding_number(prod) == 5);
  SampledLoop away = sample_loop(
      [](double t) { return cis(3 * t) + std::complex<double>(4.0, 0.0); }, 64);
  CHECK(winding_number(away) == 0);
}

TEST_CASE("adaptive refinement rescues coarse sampling") {
  // 8 samples of e^{5it} alias badly; the attached sampler lets the
  // extractor bisect its way to the true value
  SampledLoop loop = sample_loop([](double t) { return cis(5 * t); }, 8);
  CHECK(winding_number(loop) == 5);
  // without a sampler the same 8 points alias to the wrong winding; the
  // per-step wrap of 5pi/4 lands on -3pi/4, and 8 of those sum to -3 turns
  loop.sampler = nullptr;
  CHECK(winding_number(loop) == -3);
}

TEST_CASE("zero on the curve is reported as such") {
  SampledLoop through_zero =
      sample_loop([](double t) { return cis(t) - std::complex<double>(1.0, 0.0); }, 64);
  try {
    winding_number(through_zero);
    CHECK(false);
  } catch (const WindingError& e) {
    CHECK(e.kind == WindingError::Kind::zero_on_curve);
  }
}

TEST_CASE("univariate basics") {
  UnivariatePoly p = upoly({gr(-1), gr(0), gr(1)});  // x^2 - 1
  CHECK(p.degree() == 2);
  CHECK(p.eval(gr(3)) == gr(8));
  CHECK(std::abs(p.eval(std::complex<double>(0.0, 1.0)) -
                 std::complex<double>(-2.0, 0.0)) < 1e-15);
  UnivariatePoly z{{gr(0), gr(0), gr(1)}};
  z.trim();
  CHECK(z.degree() == 2);
  UnivariatePoly zero{{gr(0), gr(0)}};
  zero.trim();
  CHECK(zero.is_zero());

  // conj reciprocal of 2 + i x^3 is -i + 2 x^3
  UnivariatePoly q = upoly({gr(2), gr(0), gr(0), GaussianRational::i_unit()});
  UnivariatePoly qr = q.conj_reciprocal();
  REQUIRE(qr.degree() == 3);
  CHECK(qr.c[0] == -GaussianRational::i_unit());
  CHECK(qr.c[3] == gr(2));
}

TEST_CASE("gcd and roots") {
  // (x - 1)(x - 2) and (x - 1)(x - 3) share the factor x - 1
  UnivariatePoly a = upoly({gr(2), gr(-3), gr(1)});
  UnivariatePoly b = upoly({gr(3), gr(-4), gr(1)});
  UnivariatePoly g = gcd_unipoly(a, b);
  REQUIRE(g.degree() == 1);
  CHECK(g.c[0] == gr(-1));
  CHECK(g.c[1] == gr(1));  // monic
  CHECK(gcd_unipoly(a, UnivariatePoly{}).degree() == 2);

  auto roots = poly_roots(upoly({gr(-1, 2), gr(1)}));  // x - 1/2... root 1/2
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - std::complex<double>(0.5, 0.0)) < 1e-9);
  auto roots2 = poly_roots(upoly({gr(2), gr(0), gr(1)}));  // x^2 + 2
  REQUIRE(roots2.size() == 2);
  for (auto r : roots2) CHECK(std::abs(r.real()) < 1e-9);
}

TEST_CASE("circle root detection") {
  // (x - 1)(x - 1/2) has a root on the unit circle
  CHECK(has_root_on_unit_circle(upoly({gr(1, 2), gr(-3, 2), gr(1)})));
  // (x - 1/2)(x - 2) does not, despite |1/2 * 2| = 1
  CHECK(!has_root_on_unit_circle(upoly({gr(1), gr(-5, 2), gr(1)})));
  // x^2 - 1/2 meets |x|^2 = 1/2
  CHECK(has_root_on_circle_r2(upoly({gr(-1, 2), gr(0), gr(1)}), mpq_class(1, 2)));
  CHECK(!has_root_on_circle_r2(upoly({gr(-2), gr(1)}), mpq_class(1, 2)));
}

TEST_CASE("disk root counting") {
  // roots 1/2, 1/4, 3: two inside
  UnivariatePoly p = upoly({gr(-3, 8), gr(19, 8), gr(-15, 4), gr(1)});
  CHECK(count_roots_in_unit_disk(p) == 2);
  CHECK(winding_via_argument_principle(p) == 2);
  // all roots inside, with multiplicity: (x - 1/2)^2 (x + 1/3)
  UnivariatePoly q = upoly({gr(1, 12), gr(-1, 12), gr(-2, 3), gr(1)});
  CHECK(count_roots_in_unit_disk(q) == 3);
  // constants have no roots
  CHECK(count_roots_in_unit_disk(upoly({gr(5)})) == 0);
  // a root on the circle is an error, not a count
  CHECK_THROWS_AS(count_roots_in_unit_disk(upoly({gr(-1), gr(1)})), CircleRootError);
  CHECK_THROWS_AS(count_roots_in_unit_disk(upoly({gr(1, 2), gr(-3, 2), gr(1)})),
                  CircleRootError);
  // roots 2 and 1/2 are circle-free but |a_0| = |a_n| stalls the recursion
  CHECK_THROWS_AS(count_roots_in_unit_disk(upoly({gr(1), gr(-5, 2), gr(1)})),
                  SchurCohnDegenerate);
}

TEST_CASE("index convention") {
  SampledLoop loop = sample_loop([](double t) { return cis(4 * t); }, 64, "outer");
  IndexReport rep = umbilical_index(loop);
  CHECK(rep.label == "outer");
  CHECK(rep.winding == 4);
  CHECK(rep.index() == -2.0);
  CHECK(rep.index_str() == "-2");
  SampledLoop odd = sample_loop([](double t) { return cis(3 * t); }, 64);
  CHECK(umbilical_index(odd).index_str() == "-3/2");
  SampledLoop neg = sample_loop([](double t) { return cis(-t); }, 64);
  CHECK(umbilical_index(neg).index_str() == "1/2");
}

TEST_CASE("stokes decomposition bookkeeping") {
  // f(zeta) = zeta^2 - 1/4 on the big circle vs small circles around +-1/2
  auto f = [](std::complex<double> zeta) { return zeta * zeta - 0.25; };
  SampledLoop outer =
      sample_loop([&](double t) { return f(cis(t)); }, 256, "outer");
  std::vector<SampledLoop> inner;
  for (double center : {0.5, -0.5}) {
    inner.push_back(sample_loop(
        [&, center](double t) {
          return f(std::complex<double>(center, 0.0) + 0.1 * cis(t));
        },
        256, center > 0 ? "zero at +1/2" : "zero at -1/2"));
  }
  StokesReport rep = stokes_decomposition_check(outer, inner);
  CHECK(rep.outer_winding == 2);
  CHECK(rep.inner_sum == 2);
  CHECK(rep.inner_windings == std::vector<int>{1, 1});
  CHECK(rep.additive);
  REQUIRE(rep.indices.size() == 3);
  CHECK(rep.indices[0].index() == -1.0);
  CHECK(rep.indices[1].index_str() == "-1/2");
}
