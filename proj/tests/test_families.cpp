#include <doctest.h>

#include <cmath>
#include <limits>

#include "maxstable/families.hpp"
#include "maxstable/random.hpp"

using namespace maxstable;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("norm_cdf against reference values") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_cdf(0.65) == doctest::Approx(0.742153889194135275).epsilon(1e-15));
  CHECK(norm_cdf(1.96) == doctest::Approx(0.975002104851779566).epsilon(1e-15));
  CHECK(norm_cdf(-0.3) == doctest::Approx(0.382088577811047363).epsilon(1e-15));
  // symmetry
  for (double z : {0.1, 0.7, 2.3, 5.0})
    CHECK(norm_cdf(-z) + norm_cdf(z) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("logistic ell") {
  CHECK(logistic_ell(1.0, vec3(1, 2, 3)) == 6.0);
  CHECK(logistic_ell(kInf, vec3(1, 2, 3)) == 3.0);
  CHECK(logistic_ell(2.0, vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(logistic_ell(3.5, Vec::Zero(2)) == 0.0);
  CHECK_THROWS_AS(logistic_ell(0.9, vec2(1, 1)), DomainError);

  // no overflow for huge theta or huge coordinates
  CHECK(logistic_ell(1e6, vec2(1, 1)) == doctest::Approx(1.0).epsilon(2e-6));
  CHECK(logistic_ell(60.0, vec2(1e8, 2e8)) ==
        doctest::Approx(2e8).epsilon(1e-6));

  // pointwise nonincreasing in theta
  RandomStream rs(7, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec x = vec3(rs.uniform() * 4, rs.uniform() * 4, rs.uniform() * 4);
    const double t1 = 1.0 + 5.0 * rs.uniform();
    const double t2 = t1 + 4.0 * rs.uniform();
    CHECK(logistic_ell(t2, x) <= logistic_ell(t1, x) + 1e-12);
    CHECK(logistic_ell(t2, x) >= x.maxCoeff() - 1e-12);
    CHECK(logistic_ell(t1, x) <= x.sum() + 1e-12);
  }
}

TEST_CASE("marshall-olkin ell") {
  CHECK(marshall_olkin_ell(1.0, 1.0, 1, 1) == 1.0);
  CHECK(marshall_olkin_ell(0.5, 1.0, 1, 1) == 1.5);
  // independence limit
  CHECK(marshall_olkin_ell(1e-12, 1e-12, 2, 3) ==
        doctest::Approx(5.0).epsilon(1e-11));
  CHECK_THROWS_AS(marshall_olkin_ell(0.0, 0.5, 1, 1), DomainError);
  CHECK_THROWS_AS(marshall_olkin_ell(0.5, 1.2, 1, 1), DomainError);
}

TEST_CASE("schlather ell") {
  CHECK(schlather_ell(0.0, 1, 1) ==
        doctest::Approx(1.70710678118654752).epsilon(1e-15));
  CHECK(schlather_ell(0.35, 1.3, 0.4) ==
        doctest::Approx(1.45950799830683108).epsilon(1e-14));
  // independence limit of the formula
  CHECK(schlather_ell(-1.0 + 1e-12, 1, 1) ==
        doctest::Approx(2.0).epsilon(1e-7));
  // margin constraint at the axis, any rho
  for (double rho : {-0.9, -0.2, 0.0, 0.6, 0.99})
    CHECK(schlather_ell(rho, 1.7, 0.0) == 1.7);
  CHECK(schlather_ell(0.4, 0, 0) == 0.0);
  CHECK_THROWS_AS(schlather_ell(1.0, 1, 1), DomainError);
  CHECK_THROWS_AS(schlather_ell(-1.0, 1, 1), DomainError);
}

TEST_CASE("husler-reiss ell") {
  CHECK(husler_reiss_ell(1.3, 1, 1) ==
        doctest::Approx(1.48430777838827055).epsilon(1e-14));
  CHECK(husler_reiss_ell(1.5, 1, 2) ==
        doctest::Approx(2.38781425279589854).epsilon(1e-14));
  // comonotone and independence limits
  CHECK(husler_reiss_ell(1e-8, 1, 2) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(husler_reiss_ell(1e8, 1, 2) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(husler_reiss_ell(0.7, 0, 0) == 0.0);
  CHECK(husler_reiss_ell(0.7, 1.2, 0) == 1.2);
  CHECK(husler_reiss_ell(0.7, 0, 0.8) == 0.8);
  CHECK_THROWS_AS(husler_reiss_ell(0.0, 1, 1), DomainError);
  CHECK_THROWS_AS(husler_reiss_ell(-1.0, 1, 1), DomainError);
}

TEST_CASE("tawn mixture and rational Pickands functions") {
  CHECK(tawn_mixture_D(1.0, 0.5) == 0.75);
  for (double t : {0.0, 0.3, 1.0}) CHECK(tawn_mixture_D(0.0, t) == 1.0);
  CHECK(rational_D(1.0, 1.0, 0.5) == 0.75);
  CHECK(rational_D(0.3, 0.9, 0.0) == 1.0);
  CHECK(rational_D(0.3, 0.9, 1.0) == 1.0);
  CHECK(dirichlet11_ell(1, 1) == 1.5);
  CHECK(dirichlet11_ell(0, 0) == 0.0);
  CHECK_THROWS_AS(tawn_mixture_D(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(rational_D(0.0, 0.5, 0.5), DomainError);

  // D bounds on a grid
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    for (double v : {tawn_mixture_D(0.6, t), rational_D(0.4, 0.8, t)}) {
      CHECK(v >= std::max(t, 1.0 - t) - 1e-15);
      CHECK(v <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("multivariate marshall-olkin") {
  MultivariateMOSpec singles;
  singles.dimension = 2;
  singles.subset_probs = {{{0}, 0.5}, {{1}, 0.5}};
  singles.validate();
  CHECK(mv_marshall_olkin_ell(singles, vec2(0.7, 1.9)) ==
        doctest::Approx(2.6).epsilon(1e-15));

  MultivariateMOSpec full;
  full.dimension = 2;
  full.subset_probs = {{{0, 1}, 1.0}};
  full.validate();
  CHECK(mv_marshall_olkin_ell(full, vec2(0.7, 1.9)) == 1.9);

  MultivariateMOSpec mixed;
  mixed.dimension = 3;
  mixed.subset_probs = {{{0, 1}, 0.5}, {{2}, 0.5}};
  mixed.validate();
  // 0.5 * max(2 x1, 2 x2) + 0.5 * 2 x3 = max(x1, x2) + x3
  CHECK(mv_marshall_olkin_ell(mixed, vec3(1, 2, 3)) ==
        doctest::Approx(5.0).epsilon(1e-15));

  MultivariateMOSpec bad;
  bad.dimension = 2;
  bad.subset_probs = {{{0}, 1.0}};  // coordinate 1 never switches on
  CHECK_THROWS_AS(bad.validate(), SpecError);

  MultivariateMOSpec off;
  off.dimension = 2;
  off.subset_probs = {{{0}, 0.5}, {{1}, 0.6}};
  CHECK_THROWS_AS(off.validate(), SpecError);
}

TEST_CASE("indicator transform of max reproduces marshall-olkin") {
  // ell(a x, b y) + (1-a) x + (1-b) y with ell = max
  RandomStream rs(11, 0);
  const double alpha = 0.3, beta = 0.9;
  for (int i = 0; i < 200; ++i) {
    const double x = 5.0 * rs.uniform();
    const double y = 5.0 * rs.uniform();
    const double thinned =
        std::max(alpha * x, beta * y) + (1 - alpha) * x + (1 - beta) * y;
    CHECK(thinned == doctest::Approx(marshall_olkin_ell(alpha, beta, x, y))
                         .epsilon(1e-14));
  }
}

TEST_CASE("family spec dispatch and validation") {
  CHECK(family_name(FamilySpec{SchlatherSpec{0.2}}) == "schlather");
  CHECK(family_dimension(FamilySpec{LogisticSpec{2.0, 5}}) == 5);
  CHECK(family_ell(FamilySpec{IndependenceSpec{3}}, vec3(1, 2, 3)) == 6.0);
  CHECK(family_ell(FamilySpec{PerfectDependenceSpec{3}}, vec3(1, 2, 3)) == 3.0);
  CHECK_THROWS_AS(validate_family(FamilySpec{SchlatherSpec{1.5}}), SpecError);
  CHECK_THROWS_AS(family_ell(FamilySpec{Dirichlet11Spec{}}, vec3(1, 2, 3)),
                  DomainError);
}
