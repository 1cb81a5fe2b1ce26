#include "maxstable/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace maxstable {

namespace {

struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
};

std::pair<std::int64_t, std::int64_t> chunk_bounds(std::int64_t total,
                                                   int parts, int index) {
  return {total * index / parts, total * (index + 1) / parts};
}

// Per-stream pass shared by cached and regenerating evaluation; identical
// iteration order keeps the two bit-compatible.
void run_stream(const Generator& gen, const McConfig& cfg, int stream,
                const Mat* cached, const std::vector<Vec>& xs,
                std::vector<Accumulator>& accs) {
  const int d = gen.dimension();
  const std::size_t q = xs.size();
  std::vector<double> row(static_cast<std::size_t>(d));
  std::vector<double> mirror(static_cast<std::size_t>(d));

  // Antithetic pairing works on consecutive sample indices; chunks are laid
  // out in pairs so every stream holds whole pairs.
  const bool anti = cfg.antithetic;
  const std::int64_t units_total =
      anti ? cfg.sample_count / 2 : cfg.sample_count;
  const auto [begin, end] = chunk_bounds(units_total, cfg.stream_count, stream);

  RandomStream rs(cfg.seed, static_cast<std::uint64_t>(stream));
  auto eval_row = [&](const double* a, std::size_t point) {
    const Vec& x = xs[point];
    double m = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = x[j] * a[j];
      if (v > m) m = v;
    }
    return m;
  };

  for (std::int64_t unit = begin; unit < end; ++unit) {
    if (anti) {
      const std::int64_t i = 2 * unit;
      if (cached) {
        for (int j = 0; j < d; ++j) {
          row[j] = (*cached)(i, j);
          mirror[j] = (*cached)(i + 1, j);
        }
      } else {
        rs.begin_record();
        gen.sample_row(rs, row.data());
        rs.begin_replay();
        gen.sample_row(rs, mirror.data());
        rs.end_replay();
      }
      for (std::size_t p = 0; p < q; ++p) {
        const double v =
            0.5 * (eval_row(row.data(), p) + eval_row(mirror.data(), p));
        accs[p].sum += v;
        accs[p].sumsq += v * v;
      }
    } else {
      if (cached) {
        for (int j = 0; j < d; ++j) row[j] = (*cached)(unit, j);
      } else {
        gen.sample_row(rs, row.data());
      }
      for (std::size_t p = 0; p < q; ++p) {
        const double v = eval_row(row.data(), p);
        accs[p].sum += v;
        accs[p].sumsq += v * v;
      }
    }
  }
}

// Generation-only pass with the same chunking; fills the cache rows.
void fill_stream(const Generator& gen, const McConfig& cfg, int stream,
                 Mat& rows) {
  const int d = gen.dimension();
  std::vector<double> row(static_cast<std::size_t>(d));
  std::vector<double> mirror(static_cast<std::size_t>(d));
  const bool anti = cfg.antithetic;
  const std::int64_t units_total =
      anti ? cfg.sample_count / 2 : cfg.sample_count;
  const auto [begin, end] = chunk_bounds(units_total, cfg.stream_count, stream);
  RandomStream rs(cfg.seed, static_cast<std::uint64_t>(stream));
  for (std::int64_t unit = begin; unit < end; ++unit) {
    if (anti) {
      rs.begin_record();
      gen.sample_row(rs, row.data());
      rs.begin_replay();
      gen.sample_row(rs, mirror.data());
      rs.end_replay();
      for (int j = 0; j < d; ++j) {
        rows(2 * unit, j) = row[j];
        rows(2 * unit + 1, j) = mirror[j];
      }
    } else {
      gen.sample_row(rs, row.data());
      for (int j = 0; j < d; ++j) rows(unit, j) = row[j];
    }
  }
}

void parallel_over_streams(const McConfig& cfg,
                           const std::function<void(int)>& work) {
  const int threads = std::max(1, std::min(cfg.threads, cfg.stream_count));
  if (threads == 1) {
    for (int s = 0; s < cfg.stream_count; ++s) work(s);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int s = next.fetch_add(1);
        if (s >= cfg.stream_count) return;
        work(s);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void McConfig::validate() const {
  if (sample_count < 2)
    throw DomainError("mc: sample_count must be >= 2 to attach a standard error");
  if (stream_count < 1) throw DomainError("mc: stream_count must be >= 1");
  if (antithetic && sample_count % 2 != 0)
    throw DomainError("mc: antithetic evaluation needs an even sample_count");
  if (antithetic && sample_count / 2 < 2)
    throw DomainError("mc: antithetic evaluation needs at least two pairs");
}

SampleCache::SampleCache(const Generator& gen, const McConfig& cfg) {
  cfg.validate();
  rows_ = Mat(cfg.sample_count, gen.dimension());
  parallel_over_streams(cfg, [&](int s) { fill_stream(gen, cfg, s, rows_); });
}

std::vector<Estimate> mc_ell(const Generator& gen, const std::vector<Vec>& xs,
                             const McConfig& cfg, const SampleCache* cache) {
  cfg.validate();
  const int d = gen.dimension();
  for (const Vec& x : xs) {
    if (x.size() != d) throw DomainError("mc_ell: point dimension mismatch");
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (!(x[j] >= 0.0)) throw DomainError("mc_ell: negative coordinate");
  }
  if (cache && cache->sample_count() != cfg.sample_count)
    throw DomainError("mc_ell: cache does not match sample_count");

  std::vector<std::vector<Accumulator>> per_stream(
      static_cast<std::size_t>(cfg.stream_count),
      std::vector<Accumulator>(xs.size()));
  parallel_over_streams(cfg, [&](int s) {
    run_stream(gen, cfg, s, cache ? &cache->rows() : nullptr, xs,
               per_stream[static_cast<std::size_t>(s)]);
  });

  const double units =
      static_cast<double>(cfg.antithetic ? cfg.sample_count / 2
                                         : cfg.sample_count);
  std::vector<Estimate> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) {
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < cfg.stream_count; ++s) {
      sum += per_stream[static_cast<std::size_t>(s)][p].sum;
      sumsq += per_stream[static_cast<std::size_t>(s)][p].sumsq;
    }
    const double mean = sum / units;
    const double var =
        std::max(0.0, (sumsq - sum * sum / units) / (units - 1.0));
    out[p] = {mean, std::sqrt(var / units)};
  }
  return out;
}

Estimate mc_ell_point(const Generator& gen, const Vec& x, const McConfig& cfg,
                      const SampleCache* cache) {
  return mc_ell(gen, {x}, cfg, cache).front();
}

Estimate attractor_cdf(const Generator& gen, const Vec& x,
                       const McConfig& cfg) {
  if (x.size() != gen.dimension())
    throw DomainError("attractor_cdf: point dimension mismatch");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0))
      throw DomainError("attractor_cdf: coordinates must be nonnegative");
    if (x[j] == 0.0) return {0.0, 0.0};  // degenerate limit
  }
  const Estimate e = mc_ell_point(gen, x.inverse(), cfg);
  const double value = std::exp(-e.value);
  return {value, value * e.se};
}

}  // namespace maxstable
