#include <doctest.h>

#include <cmath>
#include <memory>

#include "maxstable/model.hpp"
#include "maxstable/random.hpp"
#include "maxstable/verify.hpp"

using namespace maxstable;

namespace {

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

// Valid random spectral measures come from standardizing random positive
// discrete generators.
SpectralAtoms random_spectral(int d, int atoms, std::uint64_t seed) {
  RandomStream rs(seed, 0);
  Mat rows(atoms, d);
  Vec probs(atoms);
  for (int k = 0; k < atoms; ++k) {
    for (int j = 0; j < d; ++j) rows(k, j) = 0.05 + 2.0 * rs.uniform();
    probs[k] = 0.1 + rs.uniform();
  }
  probs /= probs.sum();
  return DiscreteAtomsGenerator(rows, probs).profile_atoms();
}

}  // namespace

TEST_CASE("point and simplex weight invariants") {
  CHECK_THROWS_AS(Point(Vec(0)), DomainError);
  CHECK_THROWS_AS(Point(vec2(-0.1, 1.0)), DomainError);
  CHECK_NOTHROW(Point(vec2(0.0, 0.0)));
  CHECK_THROWS_AS(SimplexWeight(vec2(0.6, 0.6)), DomainError);
  CHECK_THROWS_AS(SimplexWeight(vec2(1.2, -0.2)), DomainError);
  CHECK_NOTHROW(SimplexWeight(vec2(0.25, 0.75)));
}

TEST_CASE("ell on the three backends") {
  const auto logistic1 = DependenceModel::closed_form(LogisticSpec{1.0, 2});
  CHECK(logistic1.ell(Point(vec2(3, 4))).value == 7.0);

  const auto dir = DependenceModel::closed_form(Dirichlet11Spec{});
  CHECK(dir.ell(Point(vec2(1, 1))).value == 1.5);

  const auto indep = DependenceModel::discrete(SpectralAtoms(
      2, {{vec2(1, 0), 1.0}, {vec2(0, 1), 1.0}}));
  CHECK(indep.ell(Point(vec2(2, 3))).value == 5.0);

  const auto tilted = DependenceModel::discrete(SpectralAtoms(
      2, {{vec2(0.75, 0.25), 1.0}, {vec2(0.25, 0.75), 1.0}}));
  CHECK(tilted.ell(Point(vec2(1, 1))).value == 1.5);

  McConfig cfg;
  cfg.sample_count = 1'000'000;
  cfg.seed = 99;
  const auto mc = DependenceModel::generator_backed(
      std::make_shared<GaussianPairGenerator>(0.0), cfg);
  const Estimate e = mc.ell(Point(vec2(1, 1)));
  CHECK(e.se > 0.0);
  CHECK(std::abs(e.value - schlather_ell(0.0, 1, 1)) <= 3.0 * e.se);

  CHECK_THROWS_AS(logistic1.ell(Point(vec3(1, 1, 1))), DomainError);
  CHECK_THROWS_AS(SpectralAtoms(2, {}), SpecError);
}

TEST_CASE("construction rejects broken margins") {
  // masses scaled off the unit first moment
  CHECK_THROWS_AS(
      SpectralAtoms(2, {{vec2(0.5, 0.5), 1.0}, {vec2(0.5, 0.5), 0.5}}),
      SpecError);
}

TEST_CASE("tail copula") {
  const auto perfect = DependenceModel::closed_form(PerfectDependenceSpec{2});
  CHECK(perfect.tail_copula(Point(vec2(0.8, 1.7))).value ==
        doctest::Approx(0.8).epsilon(1e-15));

  const auto indep = DependenceModel::closed_form(LogisticSpec{1.0, 2});
  CHECK(indep.tail_copula(Point(vec2(1, 2))).value ==
        doctest::Approx(0.0).epsilon(1e-15));

  const auto dir = DependenceModel::closed_form(Dirichlet11Spec{});
  CHECK(dir.tail_copula(Point(vec2(1, 1))).value ==
        doctest::Approx(0.5).epsilon(1e-14));

  // zero coordinate kills R
  CHECK(dir.tail_copula(Point(vec2(1, 0))).value == 0.0);

  // alternating subset sum against the exact min-kernel of a discrete model
  for (int d : {2, 3, 4}) {
    const SpectralAtoms atoms = random_spectral(d, 5, 1000 + d);
    const auto model = DependenceModel::discrete(atoms);
    RandomStream rs(31, 0);
    for (int i = 0; i < 30; ++i) {
      Vec x(d);
      for (int j = 0; j < d; ++j) x[j] = 0.1 + 3.0 * rs.uniform();
      const double via_subsets = model.tail_copula(Point(x)).value;
      const double via_min = atoms.tail(x);
      CHECK(via_subsets == doctest::Approx(via_min).epsilon(1e-12));
      CHECK(via_subsets >= -1e-12);
      CHECK(via_subsets <= x.minCoeff() + 1e-12);
    }
  }

  const auto big = DependenceModel::closed_form(IndependenceSpec{26});
  CHECK_THROWS_AS(big.tail_copula(Point(Vec::Ones(26))), DomainError);
}

TEST_CASE("pickands function") {
  const auto schl = DependenceModel::closed_form(SchlatherSpec{0.0});
  CHECK(schl.pickands(SimplexWeight(vec2(1, 0))).value == 1.0);
  CHECK(schl.pickands(SimplexWeight(vec2(0.5, 0.5))).value ==
        doctest::Approx(0.85355339059327376).epsilon(1e-15));

  const auto tawn = symmetric_mixture(
      DependenceModel::closed_form(Dirichlet11Spec{}), 1.0);
  CHECK(tawn.pickands(SimplexWeight(vec2(0.5, 0.5))).value ==
        doctest::Approx(0.75).epsilon(1e-15));

  // near-independence limit of the Schlather family
  const auto nearly = DependenceModel::closed_form(SchlatherSpec{-1 + 1e-10});
  CHECK(nearly.pickands(SimplexWeight(vec2(0.5, 0.5))).value ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("copula evaluation and margin forms") {
  const auto indep = DependenceModel::closed_form(LogisticSpec{1.0, 2});
  CHECK(indep.copula(vec2(0.5, 0.5), MarginForm::Uniform01).value ==
        doctest::Approx(0.25).epsilon(1e-15));

  const auto perfect = DependenceModel::closed_form(PerfectDependenceSpec{2});
  CHECK(perfect.copula(vec2(0.3, 0.8), MarginForm::Uniform01).value ==
        doctest::Approx(0.3).epsilon(1e-15));

  const auto logistic2 = DependenceModel::closed_form(LogisticSpec{2.0, 2});
  const double e1 = std::exp(-1.0);
  CHECK(logistic2.copula(vec2(e1, e1), MarginForm::Uniform01).value ==
        doctest::Approx(0.24311673443421421).epsilon(1e-14));

  // the four standardizations agree on the same ell argument
  const auto model = DependenceModel::closed_form(SchlatherSpec{0.4});
  const Vec x = vec2(0.7, 1.3);
  const double reference = std::exp(-model.ell(Point(x)).value);
  CHECK(model.copula((-x).exp(), MarginForm::Uniform01).value ==
        doctest::Approx(reference).epsilon(1e-15));
  CHECK(model.copula(x.inverse(), MarginForm::UnitFrechet).value ==
        doctest::Approx(reference).epsilon(1e-15));
  CHECK(model.copula((-x.log()).eval(), MarginForm::Gumbel).value ==
        doctest::Approx(reference).epsilon(1e-15));
  CHECK(model.copula((-x).eval(), MarginForm::ReverseExponential).value ==
        doctest::Approx(reference).epsilon(1e-15));

  CHECK_THROWS_AS(model.copula(vec2(0.0, 0.5), MarginForm::Uniform01),
                  DomainError);
  CHECK_THROWS_AS(model.copula(vec2(1.1, 0.5), MarginForm::Uniform01),
                  DomainError);
  CHECK_THROWS_AS(model.copula(vec2(-1.0, 2.0), MarginForm::UnitFrechet),
                  DomainError);
  CHECK_THROWS_AS(model.copula(vec2(0.5, -1.0), MarginForm::ReverseExponential),
                  DomainError);
}

TEST_CASE("max stability defect") {
  const auto logistic = DependenceModel::closed_form(LogisticSpec{1.7, 2});
  CHECK(logistic.max_stability_defect(vec2(0.3, 0.6), 1) == 0.0);
  CHECK(logistic.max_stability_defect(vec2(0.4, 0.9), 7) <= 1e-10);

  const auto mo = indicator_thin_closed(
      DependenceModel::closed_form(PerfectDependenceSpec{2}), 0.9, 0.3,
      0.27);  // alpha = 0.3, beta = 0.9
  CHECK(mo.max_stability_defect(vec2(0.2, 0.5), 3) <= 1e-10);
}

TEST_CASE("margin restriction") {
  const auto tri = DependenceModel::closed_form(LogisticSpec{2.5, 3});
  const auto pair = tri.margin_restrict({0, 1});
  const auto bi = DependenceModel::closed_form(LogisticSpec{2.5, 2});
  RandomStream rs(5, 0);
  for (int i = 0; i < 30; ++i) {
    const Vec x = vec2(3 * rs.uniform(), 3 * rs.uniform());
    CHECK(pair.ell(Point(x)).value ==
          doctest::Approx(bi.ell(Point(x)).value).epsilon(1e-15));
  }

  // singleton margins are the identity
  for (int j = 0; j < 3; ++j) {
    const auto one = tri.margin_restrict({j});
    CHECK(one.ell(Point(Vec::Constant(1, 1.7))).value ==
          doctest::Approx(1.7).epsilon(1e-15));
  }

  // discrete restriction: compare against zero-embedded evaluation
  const SpectralAtoms atoms = random_spectral(3, 6, 77);
  const auto full = DependenceModel::discrete(atoms);
  const auto restricted = full.margin_restrict({0, 2});
  for (int i = 0; i < 30; ++i) {
    const Vec x = vec2(3 * rs.uniform(), 3 * rs.uniform());
    const Vec embedded = vec3(x[0], 0.0, x[1]);
    CHECK(restricted.ell(Point(x)).value ==
          doctest::Approx(full.ell(Point(embedded)).value).epsilon(1e-12));
  }

  // generator restriction: margins stay standardized
  McConfig cfg;
  cfg.sample_count = 200'000;
  cfg.seed = 4;
  const auto mc = DependenceModel::generator_backed(
      std::make_shared<DirichletGammaGenerator>(vec3(2.0, 1.0, 0.5)), cfg);
  const auto mc1 = mc.margin_restrict({1});
  const Estimate e = mc1.ell(Point(Vec::Constant(1, 1.0)));
  CHECK(std::abs(e.value - 1.0) <= 3.0 * e.se);

  CHECK_THROWS_AS(tri.margin_restrict({}), DomainError);
  CHECK_THROWS_AS(tri.margin_restrict({3}), DomainError);
}

TEST_CASE("generator backend determinism and caching") {
  McConfig cfg;
  cfg.sample_count = 50'000;
  cfg.seed = 21;
  cfg.stream_count = 4;
  const auto gen = std::make_shared<GaussianPairGenerator>(0.3);
  const auto a = DependenceModel::generator_backed(gen, cfg);
  const auto b = DependenceModel::generator_backed(gen, cfg);
  const Point x(vec2(0.9, 1.4));
  CHECK(a.ell(x).value == b.ell(x).value);
  CHECK(a.ell(x).se == b.ell(x).se);

  // materialized cache replays the identical estimate
  const auto c =
      DependenceModel::generator_backed(gen, cfg, CachePolicy::Materialize);
  CHECK(c.ell(x).value == a.ell(x).value);
  CHECK(c.ell(x).se == a.ell(x).se);

  // thread count does not change a digit
  McConfig threaded = cfg;
  threaded.threads = 4;
  const auto dmodel = DependenceModel::generator_backed(gen, threaded);
  CHECK(dmodel.ell(x).value == a.ell(x).value);

  // dyadic homogeneity is bit-exact under common random numbers
  const auto batch = a.ell_batch({x, Point(vec2(1.8, 2.8))});
  CHECK(batch[1].value == 2.0 * batch[0].value);
}

TEST_CASE("invariant battery passes on exact models") {
  VerifyOptions opts;
  opts.points = 40;
  const std::vector<DependenceModel> models = {
      DependenceModel::closed_form(LogisticSpec{1.7, 3}),
      DependenceModel::closed_form(MarshallOlkinSpec{0.3, 0.9}),
      DependenceModel::closed_form(TawnMixtureSpec{0.6}),
      DependenceModel::closed_form(RationalSpec{0.4, 0.8}),
      DependenceModel::closed_form(SchlatherSpec{0.35}),
      DependenceModel::closed_form(HuslerReissSpec{1.2}),
      DependenceModel::closed_form(Dirichlet11Spec{}),
      DependenceModel::closed_form(IndependenceSpec{4}),
      DependenceModel::closed_form(PerfectDependenceSpec{4}),
      DependenceModel::discrete(random_spectral(3, 5, 123)),
  };
  for (const auto& model : models) {
    const auto checks = verify_model(model, opts);
    for (const auto& c : checks) {
      INFO(model.describe(), " ", c.name, " slack=", c.slack, " ", c.note);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("profile dichotomy: vertices for independence, center for "
          "perfect dependence") {
  Mat indep_atoms(2, 2);
  indep_atoms << 2.0, 0.0, 0.0, 2.0;
  Vec half(2);
  half << 0.5, 0.5;
  const SpectralAtoms indep =
      DiscreteAtomsGenerator(indep_atoms, half).profile_atoms();
  for (const auto& a : indep.atoms())
    CHECK(a.weight.maxCoeff() == 1.0);  // every atom sits on a vertex

  const SpectralAtoms perfect =
      DiscreteAtomsGenerator(Mat::Ones(1, 3), Vec::Ones(1)).profile_atoms();
  REQUIRE(perfect.atoms().size() == 1);
  for (int j = 0; j < 3; ++j)
    CHECK(perfect.atoms()[0].weight[j] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(perfect.atoms()[0].mass == doctest::Approx(3.0).epsilon(1e-15));
}
