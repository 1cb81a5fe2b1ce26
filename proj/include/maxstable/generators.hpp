#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "maxstable/random.hpp"
#include "maxstable/spectral.hpp"
#include "maxstable/types.hpp"

namespace maxstable {

enum class Standardization { ClosedForm, McEstimated };

// Seedable sampler of random vectors A with E[max(A_j,0)] = 1 in every
// coordinate. Construction rescales the raw variates by their coordinate
// means c_j = E[raw_j^+]; the constants and their provenance are kept.
class Generator {
 public:
  virtual ~Generator() = default;

  virtual int dimension() const = 0;
  virtual std::string name() const = 0;

  // One standardized draw into out[0..d). Consumes the stream; draws are
  // i.i.d. across calls.
  virtual void sample_row(RandomStream& rs, double* out) const = 0;

  // Rescaling constants divided out of the raw variates.
  virtual Vec standardization_constants() const = 0;
  virtual Standardization standardization() const {
    return Standardization::ClosedForm;
  }
};

// Finite-atom law P[A = a_k] = p_k. Carries the exact stable tail dependence
// function and the exact spectral measure.
class DiscreteAtomsGenerator : public Generator {
 public:
  // atoms: m x d rows, probs: length m with entries in (0,1) summing to 1.
  // Rows are standardized at construction.
  DiscreteAtomsGenerator(Mat atoms, Vec probs);

  int dimension() const override { return static_cast<int>(atoms_.cols()); }
  std::string name() const override { return "discrete_atoms"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override { return constants_; }

  const Mat& standardized_atoms() const { return atoms_; }
  const Vec& probs() const { return probs_; }

  // sum_k p_k max_j(a_kj^+ x_j), no sampling involved.
  double exact_ell(const Vec& x) const;

  // Spectral measure (w_k, p_k r_k) with r_k = sum_j a_kj^+; zero-magnitude
  // atoms carry no spectral mass and are dropped, equal profiles merge.
  SpectralAtoms profile_atoms() const;

 private:
  Mat atoms_;        // standardized rows
  Vec probs_;
  Vec cumulative_;   // inclusive prefix sums of probs
  Vec constants_;
};

// Joint law of the on/off indicator vector: a probability distribution over
// subsets of {0,...,d-1}, the empty subset included. Every coordinate's
// switch-on probability p_j must be positive.
struct SubsetLaw {
  int dimension = 0;
  std::vector<std::pair<std::vector<int>, double>> probs;

  void validate() const;
  Vec coordinate_prob() const;

  // law of (I, J) with P[I=1] = p, P[J=1] = q, P[I=J=1] = r.
  static SubsetLaw from_bivariate(double p, double q, double r);
};

// A'_j = p_j^{-1} I_j A_j for a base generator A and independent indicators.
class IndicatorsGenerator : public Generator {
 public:
  IndicatorsGenerator(std::shared_ptr<const Generator> base, SubsetLaw law);

  int dimension() const override { return law_.dimension; }
  std::string name() const override {
    return "indicators(" + base_->name() + ")";
  }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override;
  Standardization standardization() const override {
    return base_->standardization();
  }

  const Generator& base() const { return *base_; }
  const SubsetLaw& law() const { return law_; }

 private:
  std::shared_ptr<const Generator> base_;
  SubsetLaw law_;
  Vec coordinate_prob_;
  std::vector<double> cumulative_;
};

// A_j = Z_j / alpha_j with independent Z_j ~ Gamma(alpha_j, 1).
class DirichletGammaGenerator : public Generator {
 public:
  explicit DirichletGammaGenerator(Vec alpha);

  int dimension() const override { return static_cast<int>(alpha_.size()); }
  std::string name() const override { return "dirichlet_gamma"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override { return alpha_; }

 private:
  Vec alpha_;
};

// A = sqrt(2*pi) * (S, T) for a standard bivariate normal pair with
// correlation rho. Takes negative values; the positive-part convention in the
// evaluators handles them.
class GaussianPairGenerator : public Generator {
 public:
  explicit GaussianPairGenerator(double rho);

  int dimension() const override { return 2; }
  std::string name() const override { return "gaussian_pair"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override;

  double rho() const { return rho_; }

 private:
  double rho_;
};

// A = (exp(sigma*S - sigma^2/2), exp(sigma*T - sigma^2/2)), (S,T) standard
// bivariate normal with correlation rho. Unit means by the lognormal drift.
class LognormalPairGenerator : public Generator {
 public:
  LognormalPairGenerator(double rho, double sigma);

  int dimension() const override { return 2; }
  std::string name() const override { return "lognormal_pair"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override;

  double rho() const { return rho_; }
  double sigma() const { return sigma_; }

 private:
  double rho_;
  double sigma_;
};

// (A, B) = (E_1+...+E_J, F_1+...+F_K) with unit exponential summands and
// independent counts J, K supported on {0,1,2,3} with unit mean.
class RandomSumExponentialGenerator : public Generator {
 public:
  // j_probs, k_probs: length-4 vectors of P[count = 0..3].
  RandomSumExponentialGenerator(Vec j_probs, Vec k_probs);

  int dimension() const override { return 2; }
  std::string name() const override { return "random_sum_exponential"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override { return Vec::Ones(2); }

 private:
  static void validate_count_law(const Vec& p, const char* which);
  Vec j_cum_, k_cum_;
};

// Degenerate A = a with strictly positive entries; standardizes to the
// all-ones vector (perfect dependence).
class ConstantGenerator : public Generator {
 public:
  explicit ConstantGenerator(Vec a);

  int dimension() const override { return static_cast<int>(constants_.size()); }
  std::string name() const override { return "constant"; }
  void sample_row(RandomStream&, double* out) const override;
  Vec standardization_constants() const override { return constants_; }

 private:
  Vec constants_;
};

// A_j i.i.d. Frechet(theta) divided by their mean Gamma(1 - 1/theta);
// theta > 1. Monte Carlo counterpart of the logistic family.
class FrechetStableGenerator : public Generator {
 public:
  FrechetStableGenerator(double theta, int dimension);

  int dimension() const override { return dimension_; }
  std::string name() const override { return "frechet_stable"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override;

  double theta() const { return theta_; }

 private:
  double theta_;
  int dimension_;
  double mean_;  // Gamma(1 - 1/theta)
};

// Projection of a base generator onto a coordinate subset. Standardization
// carries over coordinatewise.
class CoordinateSubsetGenerator : public Generator {
 public:
  CoordinateSubsetGenerator(std::shared_ptr<const Generator> base,
                            std::vector<int> subset);

  int dimension() const override { return static_cast<int>(subset_.size()); }
  std::string name() const override {
    return "restrict(" + base_->name() + ")";
  }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override;
  Standardization standardization() const override {
    return base_->standardization();
  }

 private:
  std::shared_ptr<const Generator> base_;
  std::vector<int> subset_;
};

// Coordinatewise rescaling A_j -> scale_j * A_j. Breaks standardization on
// purpose; pair with McStandardizedGenerator to restore it empirically.
class ScaledGenerator : public Generator {
 public:
  ScaledGenerator(std::shared_ptr<const Generator> base, Vec scale);

  int dimension() const override { return base_->dimension(); }
  std::string name() const override { return "scaled(" + base_->name() + ")"; }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override { return scale_; }

 private:
  std::shared_ptr<const Generator> base_;
  Vec scale_;
};

// Standardization by a Monte Carlo pre-pass: estimates c_j = E[A_j^+] of the
// inner sampler on presample_count draws, then divides it out. Flagged
// McEstimated.
class McStandardizedGenerator : public Generator {
 public:
  McStandardizedGenerator(std::shared_ptr<const Generator> inner,
                          std::int64_t presample_count, std::uint64_t seed);

  int dimension() const override { return inner_->dimension(); }
  std::string name() const override {
    return "mc_standardized(" + inner_->name() + ")";
  }
  void sample_row(RandomStream& rs, double* out) const override;
  Vec standardization_constants() const override { return estimated_; }
  Standardization standardization() const override {
    return Standardization::McEstimated;
  }

  std::int64_t presample_count() const { return presample_count_; }

 private:
  std::shared_ptr<const Generator> inner_;
  std::int64_t presample_count_;
  Vec estimated_;
};

// n x d batch of i.i.d. standardized draws from one stream.
Mat sample_A(const Generator& gen, std::int64_t n, std::uint64_t seed);

// Magnitude/profile decomposition of sampled A: rows W_i on the simplex and
// R_i = sum_j A_ij^+; W is the barycenter where R = 0.
struct ProfileSample {
  Mat weights;
  Vec magnitudes;
};

ProfileSample sample_profiles(const Generator& gen, std::int64_t n,
                              std::uint64_t seed);

// Magnitude-weighted estimate of the profile-distribution mean,
// sum_i R_i W_i / (n d); estimates 1/d per coordinate for any standardized
// generator.
Vec profile_weighted_mean(const ProfileSample& ps);

// Spectral mass on the face of the simplex with support exactly I:
// E[R ; min_{j in I} A_j > 0 >= max_{j not in I} A_j].
Estimate face_mass(const Generator& gen, const std::vector<int>& subset,
                   std::int64_t n, std::uint64_t seed);

// Face masses of all non-empty sign patterns observed in one pass, keyed by
// bitmask. Masses sum to d in expectation.
std::vector<std::pair<unsigned, Estimate>> face_mass_table(
    const Generator& gen, std::int64_t n, std::uint64_t seed);

std::shared_ptr<const Generator> indicator_thin(
    std::shared_ptr<const Generator> base, SubsetLaw law);

}  // namespace maxstable
