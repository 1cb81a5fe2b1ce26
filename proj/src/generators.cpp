#include "maxstable/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace maxstable {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;

// Stack-backed scratch row for composite generators; nested composites each
// hold their own instance, so no aliasing.
struct RowScratch {
  explicit RowScratch(int d) {
    if (d <= 32) {
      ptr = stack;
    } else {
      heap.resize(static_cast<std::size_t>(d));
      ptr = heap.data();
    }
  }
  double stack[32];
  std::vector<double> heap;
  double* ptr;
};

// Inclusive prefix sums with the final entry forced to 1 so inversion can
// never fall off the end.
std::vector<double> prefix_sums(const std::vector<double>& p) {
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cum[i] = acc;
  }
  if (!cum.empty()) cum.back() = 1.0;
  return cum;
}

std::size_t invert_cdf(const std::vector<double>& cum, double u) {
  return static_cast<std::size_t>(
      std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
}

}  // namespace

DiscreteAtomsGenerator::DiscreteAtomsGenerator(Mat atoms, Vec probs)
    : atoms_(std::move(atoms)), probs_(std::move(probs)) {
  const Eigen::Index m = atoms_.rows();
  const Eigen::Index d = atoms_.cols();
  if (m < 1 || d < 1)
    throw SpecError("discrete_atoms: need at least one atom and one coordinate");
  if (probs_.size() != m)
    throw SpecError("discrete_atoms: atom/probability count mismatch");
  double total = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(probs_[k] > 0.0 && probs_[k] <= 1.0))
      throw SpecError("discrete_atoms: probabilities must lie in (0,1]");
    total += probs_[k];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw SpecError("discrete_atoms: probabilities sum to " +
                    std::to_string(total));
  constants_ = Vec::Zero(d);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < d; ++j)
      constants_[j] += probs_[k] * std::max(atoms_(k, j), 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(constants_[j] > 0.0))
      throw SpecError("discrete_atoms: coordinate " + std::to_string(j) +
                      " has E[A^+] = 0, cannot standardize");
    atoms_.col(j) /= constants_[j];
  }
  cumulative_ = Vec(m);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    acc += probs_[k];
    cumulative_[k] = acc;
  }
  cumulative_[m - 1] = 1.0;
}

void DiscreteAtomsGenerator::sample_row(RandomStream& rs, double* out) const {
  const double u = rs.uniform();
  Eigen::Index k = 0;
  while (k + 1 < cumulative_.size() && u > cumulative_[k]) ++k;
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) out[j] = atoms_(k, j);
}

double DiscreteAtomsGenerator::exact_ell(const Vec& x) const {
  double total = 0.0;
  for (Eigen::Index k = 0; k < atoms_.rows(); ++k) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < atoms_.cols(); ++j)
      m = std::max(m, atoms_(k, j) * x[j]);
    total += probs_[k] * m;
  }
  return total;
}

SpectralAtoms DiscreteAtomsGenerator::profile_atoms() const {
  std::vector<SpectralAtoms::Atom> out;
  for (Eigen::Index k = 0; k < atoms_.rows(); ++k) {
    Vec pos = atoms_.row(k).transpose().max(0.0);
    const double r = pos.sum();
    if (r <= 0.0) continue;
    out.push_back({pos / r, probs_[k] * r});
  }
  return SpectralAtoms(dimension(), merge_equal_profiles(std::move(out)));
}

void SubsetLaw::validate() const {
  if (dimension < 1) throw SpecError("indicators: dimension must be >= 1");
  if (probs.empty()) throw SpecError("indicators: empty subset law");
  double total = 0.0;
  std::set<std::vector<int>> seen;
  for (const auto& [subset, p] : probs) {
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SpecError("indicators: duplicate index within a subset");
    if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= dimension))
      throw SpecError("indicators: subset index out of range");
    if (!seen.insert(sorted).second)
      throw SpecError("indicators: subset listed twice");
    if (!(p >= 0.0)) throw SpecError("indicators: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw SpecError("indicators: subset probabilities sum to " +
                    std::to_string(total));
  const Vec pj = coordinate_prob();
  for (int j = 0; j < dimension; ++j)
    if (!(pj[j] > 0.0))
      throw SpecError("indicators: coordinate " + std::to_string(j) +
                      " is never switched on (p_j = 0)");
}

Vec SubsetLaw::coordinate_prob() const {
  Vec pj = Vec::Zero(dimension);
  for (const auto& [subset, p] : probs)
    for (int j : subset) pj[j] += p;
  return pj;
}

SubsetLaw SubsetLaw::from_bivariate(double p, double q, double r) {
  if (!(p > 0.0 && p <= 1.0) || !(q > 0.0 && q <= 1.0))
    throw SpecError("indicators: p and q must lie in (0,1]");
  if (!(r >= 0.0) || r > std::min(p, q) + 1e-15)
    throw SpecError("indicators: joint probability r must lie in [0, min(p,q)]");
  double none = 1.0 - p - q + r;
  if (none < -1e-12)
    throw SpecError("indicators: inconsistent joint law, P[I=J=0] < 0");
  SubsetLaw law;
  law.dimension = 2;
  auto push = [&law](std::vector<int> s, double prob) {
    if (prob > 0.0) law.probs.emplace_back(std::move(s), prob);
  };
  push({0, 1}, r);
  push({0}, p - r);
  push({1}, q - r);
  push({}, std::max(none, 0.0));
  // renormalize away the clamping residue
  double total = 0.0;
  for (auto& [s, pr] : law.probs) total += pr;
  for (auto& [s, pr] : law.probs) pr /= total;
  law.validate();
  return law;
}

IndicatorsGenerator::IndicatorsGenerator(std::shared_ptr<const Generator> base,
                                         SubsetLaw law)
    : base_(std::move(base)), law_(std::move(law)) {
  if (!base_) throw SpecError("indicators: missing base generator");
  law_.validate();
  if (law_.dimension != base_->dimension())
    throw SpecError("indicators: law dimension does not match base generator");
  coordinate_prob_ = law_.coordinate_prob();
  std::vector<double> p;
  p.reserve(law_.probs.size());
  for (const auto& [subset, prob] : law_.probs) p.push_back(prob);
  cumulative_ = prefix_sums(p);
}

void IndicatorsGenerator::sample_row(RandomStream& rs, double* out) const {
  const std::size_t pick = invert_cdf(cumulative_, rs.uniform());
  const int d = dimension();
  RowScratch base_row(d);
  base_->sample_row(rs, base_row.ptr);
  for (int j = 0; j < d; ++j) out[j] = 0.0;
  for (int j : law_.probs[pick].first)
    out[j] = base_row.ptr[j] / coordinate_prob_[j];
}

Vec IndicatorsGenerator::standardization_constants() const {
  return coordinate_prob_;
}

DirichletGammaGenerator::DirichletGammaGenerator(Vec alpha)
    : alpha_(std::move(alpha)) {
  if (alpha_.size() < 1)
    throw SpecError("dirichlet_gamma: dimension must be >= 1");
  for (Eigen::Index j = 0; j < alpha_.size(); ++j)
    if (!(alpha_[j] > 0.0))
      throw SpecError("dirichlet_gamma: alpha must be > 0 in every coordinate");
}

void DirichletGammaGenerator::sample_row(RandomStream& rs, double* out) const {
  for (Eigen::Index j = 0; j < alpha_.size(); ++j)
    out[j] = rs.gamma(alpha_[j]) / alpha_[j];
}

GaussianPairGenerator::GaussianPairGenerator(double rho) : rho_(rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw SpecError("gaussian_pair: rho must lie in (-1,1)");
}

void GaussianPairGenerator::sample_row(RandomStream& rs, double* out) const {
  double z1, z2;
  rs.normal_pair(z1, z2);
  const double t = rho_ * z1 + std::sqrt(1.0 - rho_ * rho_) * z2;
  out[0] = kSqrt2Pi * z1;
  out[1] = kSqrt2Pi * t;
}

Vec GaussianPairGenerator::standardization_constants() const {
  return Vec::Constant(2, 1.0 / kSqrt2Pi);
}

LognormalPairGenerator::LognormalPairGenerator(double rho, double sigma)
    : rho_(rho), sigma_(sigma) {
  if (!(rho > -1.0 && rho < 1.0))
    throw SpecError("lognormal_pair: rho must lie in (-1,1)");
  if (!(sigma > 0.0)) throw SpecError("lognormal_pair: sigma must be > 0");
}

void LognormalPairGenerator::sample_row(RandomStream& rs, double* out) const {
  double z1, z2;
  rs.normal_pair(z1, z2);
  const double t = rho_ * z1 + std::sqrt(1.0 - rho_ * rho_) * z2;
  const double drift = 0.5 * sigma_ * sigma_;
  out[0] = std::exp(sigma_ * z1 - drift);
  out[1] = std::exp(sigma_ * t - drift);
}

Vec LognormalPairGenerator::standardization_constants() const {
  return Vec::Constant(2, std::exp(0.5 * sigma_ * sigma_));
}

void RandomSumExponentialGenerator::validate_count_law(const Vec& p,
                                                       const char* which) {
  if (p.size() != 4)
    throw SpecError(std::string("random_sum_exponential: ") + which +
                    " law must give P[count = 0..3]");
  double total = 0.0, mean = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (!(p[i] >= 0.0))
      throw SpecError(std::string("random_sum_exponential: ") + which +
                      " law has a negative probability");
    total += p[i];
    mean += static_cast<double>(i) * p[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw SpecError(std::string("random_sum_exponential: ") + which +
                    " law does not sum to 1");
  if (std::abs(mean - 1.0) > 1e-12)
    throw SpecError(std::string("random_sum_exponential: ") + which +
                    " law must have unit mean");
}

RandomSumExponentialGenerator::RandomSumExponentialGenerator(Vec j_probs,
                                                             Vec k_probs) {
  validate_count_law(j_probs, "J");
  validate_count_law(k_probs, "K");
  const std::vector<double> jc =
      prefix_sums({j_probs.data(), j_probs.data() + 4});
  const std::vector<double> kc =
      prefix_sums({k_probs.data(), k_probs.data() + 4});
  j_cum_ = Eigen::Map<const Vec>(jc.data(), 4);
  k_cum_ = Eigen::Map<const Vec>(kc.data(), 4);
}

void RandomSumExponentialGenerator::sample_row(RandomStream& rs,
                                               double* out) const {
  for (int coord = 0; coord < 2; ++coord) {
    const Vec& cum = coord == 0 ? j_cum_ : k_cum_;
    const double u = rs.uniform();
    int count = 0;
    while (count < 3 && u > cum[count]) ++count;
    double sum = 0.0;
    for (int i = 0; i < count; ++i) sum += rs.exponential();
    out[coord] = sum;
  }
}

ConstantGenerator::ConstantGenerator(Vec a) : constants_(std::move(a)) {
  if (constants_.size() < 1)
    throw SpecError("constant: dimension must be >= 1");
  for (Eigen::Index j = 0; j < constants_.size(); ++j)
    if (!(constants_[j] > 0.0))
      throw SpecError("constant: entries must be > 0 (E[A^+] would vanish)");
}

void ConstantGenerator::sample_row(RandomStream&, double* out) const {
  for (Eigen::Index j = 0; j < constants_.size(); ++j) out[j] = 1.0;
}

FrechetStableGenerator::FrechetStableGenerator(double theta, int dimension)
    : theta_(theta), dimension_(dimension) {
  if (!(theta > 1.0))
    throw SpecError("frechet_stable: theta must be > 1 (finite mean)");
  if (dimension_ < 1)
    throw SpecError("frechet_stable: dimension must be >= 1");
  mean_ = std::tgamma(1.0 - 1.0 / theta_);
}

void FrechetStableGenerator::sample_row(RandomStream& rs, double* out) const {
  for (int j = 0; j < dimension_; ++j) out[j] = rs.frechet(theta_) / mean_;
}

Vec FrechetStableGenerator::standardization_constants() const {
  return Vec::Constant(dimension_, mean_);
}

CoordinateSubsetGenerator::CoordinateSubsetGenerator(
    std::shared_ptr<const Generator> base, std::vector<int> subset)
    : base_(std::move(base)), subset_(std::move(subset)) {
  if (!base_) throw SpecError("restrict: missing base generator");
  if (subset_.empty()) throw DomainError("restrict: empty subset");
  std::set<int> seen;
  for (int j : subset_) {
    if (j < 0 || j >= base_->dimension())
      throw DomainError("restrict: index out of range");
    if (!seen.insert(j).second)
      throw DomainError("restrict: duplicate index in subset");
  }
}

void CoordinateSubsetGenerator::sample_row(RandomStream& rs,
                                           double* out) const {
  RowScratch base_row(base_->dimension());
  base_->sample_row(rs, base_row.ptr);
  for (std::size_t i = 0; i < subset_.size(); ++i)
    out[i] = base_row.ptr[subset_[i]];
}

Vec CoordinateSubsetGenerator::standardization_constants() const {
  const Vec base_c = base_->standardization_constants();
  Vec c(subset_.size());
  for (std::size_t i = 0; i < subset_.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = base_c[subset_[i]];
  return c;
}

ScaledGenerator::ScaledGenerator(std::shared_ptr<const Generator> base,
                                 Vec scale)
    : base_(std::move(base)), scale_(std::move(scale)) {
  if (!base_) throw SpecError("scaled: missing base generator");
  if (scale_.size() != base_->dimension())
    throw SpecError("scaled: scale dimension mismatch");
  for (Eigen::Index j = 0; j < scale_.size(); ++j)
    if (!(scale_[j] > 0.0)) throw SpecError("scaled: scale must be > 0");
}

void ScaledGenerator::sample_row(RandomStream& rs, double* out) const {
  base_->sample_row(rs, out);
  for (Eigen::Index j = 0; j < scale_.size(); ++j) out[j] *= scale_[j];
}

McStandardizedGenerator::McStandardizedGenerator(
    std::shared_ptr<const Generator> inner, std::int64_t presample_count,
    std::uint64_t seed)
    : inner_(std::move(inner)), presample_count_(presample_count) {
  if (!inner_) throw SpecError("mc_standardized: missing inner generator");
  if (presample_count_ < 2)
    throw SpecError("mc_standardized: presample count must be >= 2");
  const int d = inner_->dimension();
  RandomStream rs(seed, 0);
  std::vector<double> row(static_cast<std::size_t>(d));
  Vec sums = Vec::Zero(d);
  for (std::int64_t i = 0; i < presample_count_; ++i) {
    inner_->sample_row(rs, row.data());
    for (int j = 0; j < d; ++j) sums[j] += std::max(row[j], 0.0);
  }
  estimated_ = sums / static_cast<double>(presample_count_);
  for (int j = 0; j < d; ++j)
    if (!(estimated_[j] > 0.0))
      throw SpecError("mc_standardized: estimated E[A^+] vanished in "
                      "coordinate " + std::to_string(j));
}

void McStandardizedGenerator::sample_row(RandomStream& rs, double* out) const {
  inner_->sample_row(rs, out);
  for (int j = 0; j < dimension(); ++j) out[j] /= estimated_[j];
}

Mat sample_A(const Generator& gen, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_A: n must be >= 1");
  const int d = gen.dimension();
  Mat out(n, d);
  RandomStream rs(seed, 0);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < n; ++i) {
    gen.sample_row(rs, row.data());
    for (int j = 0; j < d; ++j) out(i, j) = row[j];
  }
  return out;
}

ProfileSample sample_profiles(const Generator& gen, std::int64_t n,
                              std::uint64_t seed) {
  const Mat a = sample_A(gen, n, seed);
  const int d = gen.dimension();
  ProfileSample ps;
  ps.weights = Mat(n, d);
  ps.magnitudes = Vec(n);
  for (std::int64_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (int j = 0; j < d; ++j) r += std::max(a(i, j), 0.0);
    ps.magnitudes[i] = r;
    for (int j = 0; j < d; ++j)
      ps.weights(i, j) = r > 0.0 ? std::max(a(i, j), 0.0) / r : 1.0 / d;
  }
  return ps;
}

Vec profile_weighted_mean(const ProfileSample& ps) {
  const double n = static_cast<double>(ps.magnitudes.size());
  const double d = static_cast<double>(ps.weights.cols());
  return (ps.weights.colwise() * ps.magnitudes).colwise().sum().transpose() /
         (n * d);
}

Estimate face_mass(const Generator& gen, const std::vector<int>& subset,
                   std::int64_t n, std::uint64_t seed) {
  if (subset.empty()) throw DomainError("face_mass: empty subset");
  const int d = gen.dimension();
  std::vector<char> in_subset(static_cast<std::size_t>(d), 0);
  for (int j : subset) {
    if (j < 0 || j >= d) throw DomainError("face_mass: index out of range");
    in_subset[static_cast<std::size_t>(j)] = 1;
  }
  RandomStream rs(seed, 0);
  std::vector<double> row(static_cast<std::size_t>(d));
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    gen.sample_row(rs, row.data());
    bool match = true;
    double r = 0.0;
    for (int j = 0; j < d; ++j) {
      const bool positive = row[j] > 0.0;
      if (positive != static_cast<bool>(in_subset[j])) match = false;
      r += std::max(row[j], 0.0);
    }
    const double v = match ? r : 0.0;
    sum += v;
    sumsq += v * v;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sumsq - sum * sum / nn) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

std::vector<std::pair<unsigned, Estimate>> face_mass_table(
    const Generator& gen, std::int64_t n, std::uint64_t seed) {
  const int d = gen.dimension();
  if (d > 25) throw DomainError("face_mass_table: dimension above 25");
  RandomStream rs(seed, 0);
  std::vector<double> row(static_cast<std::size_t>(d));
  std::map<unsigned, std::pair<double, double>> acc;  // mask -> (sum, sumsq)
  for (std::int64_t i = 0; i < n; ++i) {
    gen.sample_row(rs, row.data());
    unsigned mask = 0;
    double r = 0.0;
    for (int j = 0; j < d; ++j) {
      if (row[j] > 0.0) mask |= 1u << j;
      r += std::max(row[j], 0.0);
    }
    if (mask == 0) continue;
    auto& slot = acc[mask];
    slot.first += r;
    slot.second += r * r;
  }
  const double nn = static_cast<double>(n);
  std::vector<std::pair<unsigned, Estimate>> out;
  for (const auto& [mask, sums] : acc) {
    const double mean = sums.first / nn;
    const double var =
        std::max(0.0, (sums.second - sums.first * sums.first / nn) / (nn - 1.0));
    out.emplace_back(mask, Estimate{mean, std::sqrt(var / nn)});
  }
  return out;
}

std::shared_ptr<const Generator> indicator_thin(
    std::shared_ptr<const Generator> base, SubsetLaw law) {
  return std::make_shared<IndicatorsGenerator>(std::move(base), std::move(law));
}

}  // namespace maxstable
