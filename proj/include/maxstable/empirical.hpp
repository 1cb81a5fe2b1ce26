#pragma once

#include <cstdint>

#include "maxstable/generators.hpp"
#include "maxstable/types.hpp"

namespace maxstable {

enum class CloudMargin { Raw, Uniform, Pareto };

// n x d batch of observations with a declared margin state. Uniform entries
// lie strictly inside (0,1), Pareto entries are >= 1.
struct SampleCloud {
  Mat data;
  CloudMargin margin = CloudMargin::Raw;

  std::int64_t size() const { return data.rows(); }
  int dimension() const { return static_cast<int>(data.cols()); }
};

// Rows X_i = A_i * Z_i with one unit Frechet Z_i per row, independent of A_i.
SampleCloud simulate_x(const Generator& gen, std::int64_t n,
                       std::uint64_t seed);

// Columnwise rank transform: uniform u = rank/(n+1) or Pareto return time
// y = (n+1)/(n+1-rank). Ranks are taken on the stored data; ties break by
// input order, earlier rows ranking lower.
SampleCloud rank_transform(const SampleCloud& cloud, CloudMargin target);

struct EllHatEstimate {
  double value = 0.0;  // clamped to [max(x), sum(x)]
  double raw = 0.0;    // pre-clamp estimate
  bool clamped = false;
};

// Rank-based tail dependence estimate at threshold count k:
// (n/k) * (1 - Chat(1 - k x_1/n, ..., 1 - k x_d/n)) with Chat the empirical
// CDF of the uniform view. Invariant under strictly increasing per-column
// transformations of the input.
EllHatEstimate ell_hat(const SampleCloud& cloud, const Point& x,
                       std::int64_t k);

// Profiles of the k observations with the largest magnitude r(y) = sum_j y_j
// in the Pareto view, with their mean and naive standard errors.
struct ProfileSummary {
  Mat profiles;  // k x d rows on the simplex
  Vec mean;
  Vec se;
  std::int64_t k = 0;
};

ProfileSummary profile_hat(const SampleCloud& cloud, std::int64_t k);

}  // namespace maxstable
