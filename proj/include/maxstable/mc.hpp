#pragma once

#include <cstdint>
#include <vector>

#include "maxstable/generators.hpp"
#include "maxstable/types.hpp"

namespace maxstable {

// Monte Carlo evaluation settings. Results are a pure function of
// (sample_count, seed, stream_count, antithetic); `threads` only schedules
// the per-stream work and never changes a digit.
struct McConfig {
  std::int64_t sample_count = 1'000'000;
  std::uint64_t seed = 0;
  int stream_count = 8;
  bool antithetic = false;
  int threads = 1;

  void validate() const;
};

// Materialized sample batch in stream order. Evaluating against a cache is
// bit-identical to regenerating from the same config; it only trades memory
// for sampling time.
class SampleCache {
 public:
  SampleCache(const Generator& gen, const McConfig& cfg);

  const Mat& rows() const { return rows_; }
  std::int64_t sample_count() const { return rows_.rows(); }

 private:
  Mat rows_;
};

// Common-random-numbers estimates of E[max_j(x_j A_j, 0)] for a batch of
// points: every point sees the same samples, so per-sample identities
// (homogeneity, convexity, subadditivity) survive into the estimates.
// Estimates and standard errors are deterministic in the config.
std::vector<Estimate> mc_ell(const Generator& gen, const std::vector<Vec>& xs,
                             const McConfig& cfg,
                             const SampleCache* cache = nullptr);

Estimate mc_ell_point(const Generator& gen, const Vec& x, const McConfig& cfg,
                      const SampleCache* cache = nullptr);

// Limit distribution function of componentwise maxima of X = A * Z at x:
// exp(-ell(1/x)). Zero coordinates give the degenerate value 0.
Estimate attractor_cdf(const Generator& gen, const Vec& x,
                       const McConfig& cfg);

}  // namespace maxstable
