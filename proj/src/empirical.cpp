#include "maxstable/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace maxstable {

SampleCloud simulate_x(const Generator& gen, std::int64_t n,
                       std::uint64_t seed) {
  if (n < 1) throw DomainError("simulate_x: n must be >= 1");
  const int d = gen.dimension();
  SampleCloud cloud;
  cloud.data = Mat(n, d);
  cloud.margin = CloudMargin::Raw;
  RandomStream rs(seed, 0);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < n; ++i) {
    gen.sample_row(rs, row.data());
    const double z = -1.0 / std::log(rs.uniform());  // unit Frechet
    for (int j = 0; j < d; ++j) cloud.data(i, j) = row[j] * z;
  }
  return cloud;
}

namespace {

// Column ranks 1..n; ties broken by input order (stable sort on value).
std::vector<std::int64_t> column_ranks(const Mat& data, int col) {
  const std::int64_t n = data.rows();
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::int64_t a, std::int64_t b) {
                     return data(a, col) < data(b, col);
                   });
  std::vector<std::int64_t> rank(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r)
    rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] = r + 1;
  return rank;
}

}  // namespace

SampleCloud rank_transform(const SampleCloud& cloud, CloudMargin target) {
  if (target == CloudMargin::Raw)
    throw DomainError("rank_transform: target must be uniform or pareto");
  const std::int64_t n = cloud.size();
  if (n == 0) throw DomainError("rank_transform: empty cloud");
  const int d = cloud.dimension();
  SampleCloud out;
  out.data = Mat(n, d);
  out.margin = target;
  const double denom = static_cast<double>(n) + 1.0;
  for (int j = 0; j < d; ++j) {
    const auto ranks = column_ranks(cloud.data, j);
    for (std::int64_t i = 0; i < n; ++i) {
      const double r = static_cast<double>(ranks[static_cast<std::size_t>(i)]);
      out.data(i, j) = target == CloudMargin::Uniform
                           ? r / denom
                           : denom / (denom - r);
    }
  }
  return out;
}

EllHatEstimate ell_hat(const SampleCloud& cloud, const Point& x,
                       std::int64_t k) {
  const std::int64_t n = cloud.size();
  const int d = cloud.dimension();
  if (x.dimension() != d) throw DomainError("ell_hat: point dimension mismatch");
  if (k < 1 || k >= n)
    throw DomainError("ell_hat: k must satisfy 1 <= k < n");
  const SampleCloud uniform = cloud.margin == CloudMargin::Uniform
                                  ? cloud
                                  : rank_transform(cloud, CloudMargin::Uniform);
  Vec threshold(d);
  for (int j = 0; j < d; ++j) {
    const double t = static_cast<double>(k) * x[j] / static_cast<double>(n);
    if (t > 1.0)
      throw DomainError("ell_hat: k * x_j / n exceeds 1 in coordinate " +
                        std::to_string(j));
    threshold[j] = 1.0 - t;
  }
  std::int64_t below = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    bool all = true;
    for (int j = 0; j < d; ++j)
      if (!(uniform.data(i, j) <= threshold[j])) {
        all = false;
        break;
      }
    if (all) ++below;
  }
  const double chat = static_cast<double>(below) / static_cast<double>(n);
  EllHatEstimate est;
  est.raw = static_cast<double>(n) / static_cast<double>(k) * (1.0 - chat);
  const double lo = x.coords().maxCoeff();
  const double hi = x.coords().sum();
  est.value = std::clamp(est.raw, lo, hi);
  est.clamped = est.value != est.raw;
  return est;
}

ProfileSummary profile_hat(const SampleCloud& cloud, std::int64_t k) {
  if (cloud.margin != CloudMargin::Pareto)
    throw DomainError("profile_hat: cloud must be in the Pareto view");
  const std::int64_t n = cloud.size();
  const int d = cloud.dimension();
  if (k < 1 || k >= n)
    throw DomainError("profile_hat: k must satisfy 1 <= k < n");
  Vec magnitude(n);
  for (std::int64_t i = 0; i < n; ++i) magnitude[i] = cloud.data.row(i).sum();
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::int64_t a, std::int64_t b) {
    return magnitude[a] > magnitude[b];
  });
  ProfileSummary summary;
  summary.k = k;
  summary.profiles = Mat(k, d);
  for (std::int64_t r = 0; r < k; ++r) {
    const std::int64_t i = idx[static_cast<std::size_t>(r)];
    for (int j = 0; j < d; ++j)
      summary.profiles(r, j) = cloud.data(i, j) / magnitude[i];
  }
  summary.mean = summary.profiles.colwise().mean().transpose();
  summary.se = Vec(d);
  const double kd = static_cast<double>(k);
  for (int j = 0; j < d; ++j) {
    const double var =
        (summary.profiles.col(j) - summary.mean[j]).square().sum() /
        std::max(kd - 1.0, 1.0);
    summary.se[j] = std::sqrt(var / kd);
  }
  return summary;
}

}  // namespace maxstable
