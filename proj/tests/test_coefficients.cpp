#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "maxstable/coefficients.hpp"
#include "maxstable/random.hpp"

using namespace maxstable;

namespace {

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

// Exact ell backed by spectral atoms but exposed as a plain closed form, to
// drive the alternating-subset-sum path independently of the discrete one.
class AtomsAsClosedForm final : public EllFunction {
 public:
  explicit AtomsAsClosedForm(SpectralAtoms atoms) : atoms_(std::move(atoms)) {}
  int dimension() const override { return atoms_.dimension(); }
  std::string name() const override { return "atoms_as_closed_form"; }
  double value(const Vec& x) const override { return atoms_.ell(x); }

 private:
  SpectralAtoms atoms_;
};

}  // namespace

TEST_CASE("reports for the two degenerate models") {
  const auto indep =
      coefficient_report(DependenceModel::closed_form(IndependenceSpec{3}));
  CHECK(indep.extremal_coefficient == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(indep.all_fail == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(indep.multi_failure[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(indep.excess_mean[0] == doctest::Approx(0.0).epsilon(1e-12));

  const auto perfect = coefficient_report(
      DependenceModel::closed_form(PerfectDependenceSpec{3}));
  for (int k = 0; k < 3; ++k)
    CHECK(perfect.multi_failure[k] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.excess_mean[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(perfect.excess_mean[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bivariate dirichlet report") {
  const auto rep =
      coefficient_report(DependenceModel::closed_form(Dirichlet11Spec{}));
  CHECK(rep.extremal_coefficient == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rep.all_fail == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rep.multi_failure.sum() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("discrete order statistics against the subset-sum route") {
  for (int d : {2, 3, 4}) {
    const SpectralAtoms atoms = random_spectral(d, 6, 500 + d);
    const auto discrete_rep =
        coefficient_report(DependenceModel::discrete(atoms));
    const auto subset_rep = coefficient_report(DependenceModel::closed_form(
        std::make_shared<AtomsAsClosedForm>(atoms)));
    for (int k = 0; k < d; ++k)
      CHECK(discrete_rep.multi_failure[k] ==
            doctest::Approx(subset_rep.multi_failure[k]).epsilon(1e-9));
    CHECK(discrete_rep.multi_failure.sum() ==
          doctest::Approx(double(d)).epsilon(1e-9));
    // nonincreasing in k
    for (int k = 1; k < d; ++k)
      CHECK(discrete_rep.multi_failure[k] <=
            discrete_rep.multi_failure[k - 1] + 1e-12);
  }
}

TEST_CASE("excess mean matches the ratio of spectral integrals") {
  const int d = 4;
  const SpectralAtoms atoms = random_spectral(d, 7, 900);
  const auto rep = coefficient_report(DependenceModel::discrete(atoms));
  // brute force: numerator integrates the d-k smallest coordinates, the
  // denominator the (d-k+1)-th largest.
  for (int k = 1; k <= d - 1; ++k) {
    double numerator = 0.0, denominator = 0.0;
    for (const auto& atom : atoms.atoms()) {
      std::vector<double> w(atom.weight.data(),
                            atom.weight.data() + atom.weight.size());
      std::sort(w.begin(), w.end());  // ascending
      double small = 0.0;
      for (int i = 0; i < d - k; ++i) small += w[static_cast<std::size_t>(i)];
      numerator += atom.mass * small;
      denominator += atom.mass * w[static_cast<std::size_t>(d - k)];
    }
    CHECK(rep.excess_mean[k - 1] ==
          doctest::Approx(numerator / denominator).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo report agrees with the discrete one") {
  Mat rows(3, 3);
  rows << 1.5, 0.5, 1.0, 0.2, 2.0, 0.8, 1.3, 0.5, 1.2;
  Vec probs(3);
  probs << 0.3, 0.45, 0.25;
  const auto gen = std::make_shared<DiscreteAtomsGenerator>(rows, probs);
  const auto exact = coefficient_report(
      DependenceModel::discrete(gen->profile_atoms()));

  McConfig cfg;
  cfg.sample_count = 300'000;
  cfg.seed = 77;
  const auto mc = coefficient_report(*gen, cfg);
  CHECK(mc.monte_carlo);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(mc.multi_failure[k] - exact.multi_failure[k]) <=
          3.0 * mc.multi_failure_se[k]);
  }
  CHECK(std::abs(mc.multi_failure.sum() - 3.0) <=
        3.0 * mc.multi_failure_se.sum());

  // generator-backed models dispatch to the same path
  const auto via_model = coefficient_report(
      DependenceModel::generator_backed(gen, cfg));
  CHECK(via_model.multi_failure[0] == mc.multi_failure[0]);
}

TEST_CASE("closed-form dimension cap") {
  CHECK_THROWS_AS(
      coefficient_report(DependenceModel::closed_form(IndependenceSpec{16})),
      DomainError);
}
