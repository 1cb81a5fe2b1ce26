#pragma once

#include <memory>
#include <string>
#include <vector>

#include "maxstable/families.hpp"
#include "maxstable/mc.hpp"
#include "maxstable/spectral.hpp"
#include "maxstable/types.hpp"

namespace maxstable {

// An exact stable tail dependence function. Arguments arrive validated
// (matching dimension, nonnegative coordinates).
class EllFunction {
 public:
  virtual ~EllFunction() = default;
  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
  virtual double value(const Vec& x) const = 0;
};

enum class CachePolicy { Regenerate, Materialize };

// A max-stable dependence structure in dimension d, backed by a closed-form
// ell, a discrete spectral measure, or a generator plus Monte Carlo config.
// Immutable after construction and safe to share across threads.
class DependenceModel {
 public:
  enum class Backend { ClosedForm, Discrete, GeneratorBacked };

  static DependenceModel closed_form(const FamilySpec& spec);
  static DependenceModel closed_form(std::shared_ptr<const EllFunction> fn);
  static DependenceModel discrete(SpectralAtoms atoms);
  static DependenceModel generator_backed(
      std::shared_ptr<const Generator> gen, McConfig cfg,
      CachePolicy cache = CachePolicy::Regenerate);

  int dimension() const { return dimension_; }
  Backend backend() const { return backend_; }
  bool is_monte_carlo() const {
    return backend_ == Backend::GeneratorBacked;
  }
  std::string describe() const;

  // Stable tail dependence function; exact backends carry se = 0, the
  // generator backend attaches the Monte Carlo standard error. Batch
  // evaluation shares one sample set across all points (common random
  // numbers), as does every call for a fixed config.
  Estimate ell(const Point& x) const;
  std::vector<Estimate> ell_batch(const std::vector<Point>& xs) const;

  // Tail copula by the alternating sum of ell over non-empty coordinate
  // subsets; dimensions above 25 are refused. The generator backend uses the
  // per-sample equivalent min-kernel, which coincides with the alternating
  // sum under common random numbers.
  Estimate tail_copula(const Point& x) const;

  // Pickands function D(w) = ell(w) on the simplex.
  Estimate pickands(const SimplexWeight& w) const;

  // Max-stable distribution function under the chosen marginal
  // standardization.
  Estimate copula(const Vec& u, MarginForm margin) const;

  // |C(u) - C(u^{1/k})^k| with uniform margins.
  double max_stability_defect(const Vec& u, int k) const;

  // Lower-dimensional margin: sets the dropped coordinates of ell to zero.
  DependenceModel margin_restrict(const std::vector<int>& subset) const;

  // Backend access; null when the backend differs.
  const SpectralAtoms* spectral_atoms() const { return atoms_.get(); }
  std::shared_ptr<const Generator> generator() const { return generator_; }
  const McConfig* mc_config() const {
    return is_monte_carlo() ? &mc_ : nullptr;
  }
  const EllFunction* ell_function() const { return ell_fn_.get(); }
  std::shared_ptr<const EllFunction> ell_function_ptr() const {
    return ell_fn_;
  }
  CachePolicy cache_policy() const { return cache_policy_; }

 private:
  DependenceModel() = default;

  std::vector<Estimate> ell_raw(const std::vector<Vec>& xs) const;
  Estimate mc_tail(const Vec& x) const;
  Vec margin_to_ell_argument(const Vec& u, MarginForm margin) const;

  Backend backend_ = Backend::ClosedForm;
  int dimension_ = 0;
  std::shared_ptr<const EllFunction> ell_fn_;
  std::shared_ptr<const SpectralAtoms> atoms_;
  std::shared_ptr<const Generator> generator_;
  McConfig mc_;
  CachePolicy cache_policy_ = CachePolicy::Regenerate;
  std::shared_ptr<const SampleCache> cache_;
};

// Random-indicator thinning of a bivariate model with an exact ell:
// ell'(x,y) = ell(a x, b y) + (1-a) x + (1-b) y with a = r/p, b = r/q.
DependenceModel indicator_thin_closed(const DependenceModel& base, double p,
                                      double q, double r);

// One-parameter mixture ell' = theta * ell + (1-theta) * sum, theta in [0,1].
DependenceModel symmetric_mixture(const DependenceModel& base, double theta);

}  // namespace maxstable
