#include "maxstable/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace maxstable {

namespace {

void finish_report(CoefficientReport& rep) {
  const int d = rep.dimension;
  rep.extremal_coefficient = rep.multi_failure[0];
  rep.all_fail = rep.multi_failure[d - 1];
  rep.excess_mean = Vec::Zero(std::max(d - 1, 0));
  for (int k = 1; k <= d - 1; ++k) {
    double tail_sum = 0.0;
    for (int m = k + 1; m <= d; ++m) tail_sum += rep.multi_failure[m - 1];
    const double denom = rep.multi_failure[k - 1];
    rep.excess_mean[k - 1] = denom > 0.0 ? tail_sum / denom : 0.0;
  }
}

CoefficientReport discrete_report(const SpectralAtoms& atoms) {
  const int d = atoms.dimension();
  CoefficientReport rep;
  rep.dimension = d;
  rep.multi_failure = Vec::Zero(d);
  rep.multi_failure_se = Vec::Zero(d);
  std::vector<double> sorted(static_cast<std::size_t>(d));
  for (const auto& atom : atoms.atoms()) {
    for (int j = 0; j < d; ++j) sorted[static_cast<std::size_t>(j)] = atom.weight[j];
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    for (int k = 1; k <= d; ++k)
      rep.multi_failure[k - 1] += atom.mass * sorted[static_cast<std::size_t>(k - 1)];
  }
  finish_report(rep);
  return rep;
}

// Alternating subset sum: the limit of t*P[N(t) >= k] equals
// sum_{m=k..d} (-1)^{m-k} C(m-1, k-1) sum_{|I|=m} R_I(1,...,1).
CoefficientReport closed_form_report(const DependenceModel& model) {
  const int d = model.dimension();
  if (d > 15)
    throw DomainError(
        "coefficient_report: closed-form path capped at dimension 15");
  // R_I(1) for every non-empty subset I.
  const unsigned full = (1u << d) - 1u;
  std::vector<double> tail_by_mask(full + 1, 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < d; ++j)
      if (mask & (1u << j)) subset.push_back(j);
    const DependenceModel restricted = model.margin_restrict(subset);
    tail_by_mask[mask] =
        restricted
            .tail_copula(Point(Vec::Ones(static_cast<Eigen::Index>(subset.size()))))
            .value;
  }
  std::vector<double> size_sums(static_cast<std::size_t>(d + 1), 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    const int bits = __builtin_popcount(mask);
    size_sums[static_cast<std::size_t>(bits)] += tail_by_mask[mask];
  }
  auto binom = [](int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
  };
  CoefficientReport rep;
  rep.dimension = d;
  rep.multi_failure = Vec::Zero(d);
  rep.multi_failure_se = Vec::Zero(d);
  for (int k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (int m = k; m <= d; ++m) {
      const double term = binom(m - 1, k - 1) * size_sums[static_cast<std::size_t>(m)];
      acc += ((m - k) % 2 == 0) ? term : -term;
    }
    rep.multi_failure[k - 1] = acc;
  }
  finish_report(rep);
  return rep;
}

}  // namespace

CoefficientReport coefficient_report(const Generator& gen,
                                     const McConfig& cfg) {
  cfg.validate();
  const int d = gen.dimension();
  struct Acc {
    std::vector<double> sum, sumsq;
  };
  std::vector<Acc> per_stream(static_cast<std::size_t>(cfg.stream_count));
  const bool anti = cfg.antithetic;
  const std::int64_t units_total =
      anti ? cfg.sample_count / 2 : cfg.sample_count;
  for (int s = 0; s < cfg.stream_count; ++s) {
    auto& acc = per_stream[static_cast<std::size_t>(s)];
    acc.sum.assign(static_cast<std::size_t>(d), 0.0);
    acc.sumsq.assign(static_cast<std::size_t>(d), 0.0);
    RandomStream rs(cfg.seed, static_cast<std::uint64_t>(s));
    const std::int64_t begin = units_total * s / cfg.stream_count;
    const std::int64_t end = units_total * (s + 1) / cfg.stream_count;
    std::vector<double> row(static_cast<std::size_t>(d));
    std::vector<double> mirror(static_cast<std::size_t>(d));
    std::vector<double> combined(static_cast<std::size_t>(d));
    auto order_stats = [&](const double* a, std::vector<double>& dst) {
      for (int j = 0; j < d; ++j)
        dst[static_cast<std::size_t>(j)] = std::max(a[j], 0.0);
      std::sort(dst.begin(), dst.end(), std::greater<double>());
    };
    std::vector<double> o1(static_cast<std::size_t>(d)),
        o2(static_cast<std::size_t>(d));
    for (std::int64_t unit = begin; unit < end; ++unit) {
      if (anti) {
        rs.begin_record();
        gen.sample_row(rs, row.data());
        rs.begin_replay();
        gen.sample_row(rs, mirror.data());
        rs.end_replay();
        order_stats(row.data(), o1);
        order_stats(mirror.data(), o2);
        for (int j = 0; j < d; ++j)
          combined[static_cast<std::size_t>(j)] =
              0.5 * (o1[static_cast<std::size_t>(j)] +
                     o2[static_cast<std::size_t>(j)]);
      } else {
        gen.sample_row(rs, row.data());
        order_stats(row.data(), combined);
      }
      for (int j = 0; j < d; ++j) {
        const double v = combined[static_cast<std::size_t>(j)];
        acc.sum[static_cast<std::size_t>(j)] += v;
        acc.sumsq[static_cast<std::size_t>(j)] += v * v;
      }
    }
  }
  const double units = static_cast<double>(units_total);
  CoefficientReport rep;
  rep.dimension = d;
  rep.monte_carlo = true;
  rep.multi_failure = Vec::Zero(d);
  rep.multi_failure_se = Vec::Zero(d);
  for (int j = 0; j < d; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& acc : per_stream) {
      sum += acc.sum[static_cast<std::size_t>(j)];
      sumsq += acc.sumsq[static_cast<std::size_t>(j)];
    }
    const double mean = sum / units;
    const double var =
        std::max(0.0, (sumsq - sum * sum / units) / (units - 1.0));
    rep.multi_failure[j] = mean;
    rep.multi_failure_se[j] = std::sqrt(var / units);
  }
  finish_report(rep);
  return rep;
}

CoefficientReport coefficient_report(const DependenceModel& model) {
  switch (model.backend()) {
    case DependenceModel::Backend::Discrete:
      return discrete_report(*model.spectral_atoms());
    case DependenceModel::Backend::GeneratorBacked:
      return coefficient_report(*model.generator(), *model.mc_config());
    case DependenceModel::Backend::ClosedForm:
      return closed_form_report(model);
  }
  throw SpecError("coefficient_report: unknown backend");
}

}  // namespace maxstable
