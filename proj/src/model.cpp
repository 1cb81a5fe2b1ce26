#include "maxstable/model.hpp"

#include <cmath>
#include <limits>

namespace maxstable {

namespace {

class FamilyEll final : public EllFunction {
 public:
  explicit FamilyEll(FamilySpec spec) : spec_(std::move(spec)) {
    validate_family(spec_);
  }
  int dimension() const override { return family_dimension(spec_); }
  std::string name() const override { return family_name(spec_); }
  double value(const Vec& x) const override { return family_ell(spec_, x); }

 private:
  FamilySpec spec_;
};

class ThinnedEll final : public EllFunction {
 public:
  ThinnedEll(std::shared_ptr<const EllFunction> base, double alpha,
             double beta)
      : base_(std::move(base)), alpha_(alpha), beta_(beta) {}
  int dimension() const override { return 2; }
  std::string name() const override {
    return "thinned(" + base_->name() + ")";
  }
  double value(const Vec& x) const override {
    Vec scaled(2);
    scaled << alpha_ * x[0], beta_ * x[1];
    return base_->value(scaled) + (1.0 - alpha_) * x[0] +
           (1.0 - beta_) * x[1];
  }

 private:
  std::shared_ptr<const EllFunction> base_;
  double alpha_, beta_;
};

class RestrictedEll final : public EllFunction {
 public:
  RestrictedEll(std::shared_ptr<const EllFunction> base,
                std::vector<int> subset)
      : base_(std::move(base)), subset_(std::move(subset)) {}
  int dimension() const override { return static_cast<int>(subset_.size()); }
  std::string name() const override {
    return "restrict(" + base_->name() + ")";
  }
  double value(const Vec& x) const override {
    Vec full = Vec::Zero(base_->dimension());
    for (std::size_t i = 0; i < subset_.size(); ++i)
      full[subset_[i]] = x[static_cast<Eigen::Index>(i)];
    return base_->value(full);
  }

 private:
  std::shared_ptr<const EllFunction> base_;
  std::vector<int> subset_;
};

void check_unit_margins(const DependenceModel& model) {
  const int d = model.dimension();
  for (int j = 0; j < d; ++j) {
    Vec e = Vec::Zero(d);
    e[j] = 1.0;
    const double v = model.ell(Point(e)).value;
    if (std::abs(v - 1.0) > 1e-12)
      throw SpecError(model.describe() + ": ell(e_" + std::to_string(j) +
                      ") = " + std::to_string(v) + ", expected 1");
  }
}

}  // namespace

DependenceModel DependenceModel::closed_form(const FamilySpec& spec) {
  return closed_form(std::make_shared<FamilyEll>(spec));
}

DependenceModel DependenceModel::closed_form(
    std::shared_ptr<const EllFunction> fn) {
  if (!fn) throw SpecError("closed_form: missing ell function");
  DependenceModel m;
  m.backend_ = Backend::ClosedForm;
  m.dimension_ = fn->dimension();
  m.ell_fn_ = std::move(fn);
  check_unit_margins(m);
  return m;
}

DependenceModel DependenceModel::discrete(SpectralAtoms atoms) {
  DependenceModel m;
  m.backend_ = Backend::Discrete;
  m.dimension_ = atoms.dimension();
  m.atoms_ = std::make_shared<SpectralAtoms>(std::move(atoms));
  check_unit_margins(m);
  return m;
}

DependenceModel DependenceModel::generator_backed(
    std::shared_ptr<const Generator> gen, McConfig cfg, CachePolicy cache) {
  if (!gen) throw SpecError("generator_backed: missing generator");
  cfg.validate();
  DependenceModel m;
  m.backend_ = Backend::GeneratorBacked;
  m.dimension_ = gen->dimension();
  m.generator_ = std::move(gen);
  m.mc_ = cfg;
  m.cache_policy_ = cache;
  if (cache == CachePolicy::Materialize)
    m.cache_ = std::make_shared<SampleCache>(*m.generator_, cfg);
  return m;
}

std::string DependenceModel::describe() const {
  switch (backend_) {
    case Backend::ClosedForm:
      return "closed_form:" + ell_fn_->name();
    case Backend::Discrete:
      return "discrete[" + std::to_string(atoms_->atoms().size()) + " atoms]";
    case Backend::GeneratorBacked:
      return "generator:" + generator_->name();
  }
  return "?";
}

std::vector<Estimate> DependenceModel::ell_raw(
    const std::vector<Vec>& xs) const {
  switch (backend_) {
    case Backend::ClosedForm: {
      std::vector<Estimate> out;
      out.reserve(xs.size());
      for (const Vec& x : xs) out.push_back({ell_fn_->value(x), 0.0});
      return out;
    }
    case Backend::Discrete: {
      std::vector<Estimate> out;
      out.reserve(xs.size());
      for (const Vec& x : xs) out.push_back({atoms_->ell(x), 0.0});
      return out;
    }
    case Backend::GeneratorBacked:
      return mc_ell(*generator_, xs, mc_, cache_.get());
  }
  return {};
}

Estimate DependenceModel::ell(const Point& x) const {
  if (x.dimension() != dimension_)
    throw DomainError("ell: point dimension " + std::to_string(x.dimension()) +
                      ", model dimension " + std::to_string(dimension_));
  return ell_raw({x.coords()}).front();
}

std::vector<Estimate> DependenceModel::ell_batch(
    const std::vector<Point>& xs) const {
  std::vector<Vec> raw;
  raw.reserve(xs.size());
  for (const Point& x : xs) {
    if (x.dimension() != dimension_)
      throw DomainError("ell_batch: point dimension mismatch");
    raw.push_back(x.coords());
  }
  return ell_raw(raw);
}

Estimate DependenceModel::tail_copula(const Point& x) const {
  if (x.dimension() != dimension_)
    throw DomainError("tail_copula: point dimension mismatch");
  const int d = dimension_;
  if (d > 25)
    throw DomainError(
        "tail_copula: dimension " + std::to_string(d) +
        " exceeds 25; the subset sum over 2^d - 1 terms is refused");
  for (int j = 0; j < d; ++j)
    if (x[j] == 0.0) return {0.0, 0.0};

  if (backend_ == Backend::GeneratorBacked) {
    // Per-sample min-kernel; under common random numbers this equals the
    // alternating subset sum of the ell estimates sample by sample.
    return mc_tail(x.coords());
  }

  const unsigned full = (1u << d) - 1u;
  std::vector<Vec> masked;
  masked.reserve(full);
  std::vector<double> sign;
  sign.reserve(full);
  for (unsigned mask = 1; mask <= full; ++mask) {
    Vec v = Vec::Zero(d);
    int bits = 0;
    for (int j = 0; j < d; ++j)
      if (mask & (1u << j)) {
        v[j] = x[j];
        ++bits;
      }
    masked.push_back(std::move(v));
    sign.push_back(bits % 2 == 1 ? 1.0 : -1.0);
  }
  const std::vector<Estimate> parts = ell_raw(masked);
  double total = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    total += sign[i] * parts[i].value;
  return {total, 0.0};
}

Estimate DependenceModel::pickands(const SimplexWeight& w) const {
  if (w.dimension() != dimension_)
    throw DomainError("pickands: weight dimension mismatch");
  return ell_raw({w.coords()}).front();
}

Vec DependenceModel::margin_to_ell_argument(const Vec& u,
                                            MarginForm margin) const {
  if (u.size() != dimension_)
    throw DomainError("copula: argument dimension mismatch");
  Vec arg(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double v = u[j];
    switch (margin) {
      case MarginForm::Uniform01:
        if (!(v > 0.0 && v <= 1.0))
          throw DomainError("copula: uniform argument outside (0,1]");
        arg[j] = -std::log(v);
        break;
      case MarginForm::UnitFrechet:
        // +inf allowed: the margin saturates at 1 and the coordinate drops
        // out of ell.
        if (!(v > 0.0))
          throw DomainError("copula: Frechet argument outside (0,inf]");
        arg[j] = 1.0 / v;
        break;
      case MarginForm::Gumbel:
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
          throw DomainError("copula: Gumbel argument outside (-inf,inf]");
        arg[j] = std::exp(-v);
        break;
      case MarginForm::ReverseExponential:
        if (!(v <= 0.0) || !std::isfinite(v))
          throw DomainError(
              "copula: reverse-exponential argument outside (-inf,0]");
        arg[j] = -v;
        break;
    }
  }
  return arg;
}

Estimate DependenceModel::copula(const Vec& u, MarginForm margin) const {
  const Vec arg = margin_to_ell_argument(u, margin);
  const Estimate e = ell_raw({arg}).front();
  const double value = std::exp(-e.value);
  return {value, value * e.se};
}

double DependenceModel::max_stability_defect(const Vec& u, int k) const {
  if (k < 1) throw DomainError("max_stability_defect: k must be >= 1");
  const Vec z = margin_to_ell_argument(u, MarginForm::Uniform01);
  const double kd = static_cast<double>(k);
  const std::vector<Estimate> both = ell_raw({z, z / kd});
  return std::abs(std::exp(-both[0].value) -
                  std::exp(-kd * both[1].value));
}

DependenceModel DependenceModel::margin_restrict(
    const std::vector<int>& subset) const {
  if (subset.empty()) throw DomainError("margin_restrict: empty subset");
  for (int j : subset)
    if (j < 0 || j >= dimension_)
      throw DomainError("margin_restrict: index out of range");
  switch (backend_) {
    case Backend::ClosedForm:
      if (static_cast<int>(subset.size()) == dimension_) {
        bool identity = true;
        for (std::size_t i = 0; i < subset.size(); ++i)
          if (subset[i] != static_cast<int>(i)) identity = false;
        if (identity) return *this;
      }
      return closed_form(std::make_shared<RestrictedEll>(ell_fn_, subset));
    case Backend::Discrete:
      return discrete(atoms_->restrict_to(subset));
    case Backend::GeneratorBacked:
      return generator_backed(
          std::make_shared<CoordinateSubsetGenerator>(generator_, subset),
          mc_, cache_policy_);
  }
  throw SpecError("margin_restrict: unknown backend");
}

Estimate DependenceModel::mc_tail(const Vec& x) const {
  // Mean of min_j(x_j A_j)^+ over the same streams mc_ell uses.
  const McConfig& cfg = mc_;
  cfg.validate();
  struct MinKernelResult {
    double sum = 0.0, sumsq = 0.0;
  };
  const int d = dimension_;
  const Generator& gen = *generator_;
  const bool anti = cfg.antithetic;
  const std::int64_t units_total =
      anti ? cfg.sample_count / 2 : cfg.sample_count;
  std::vector<MinKernelResult> per_stream(
      static_cast<std::size_t>(cfg.stream_count));
  const Mat* cached = cache_ ? &cache_->rows() : nullptr;
  for (int s = 0; s < cfg.stream_count; ++s) {
    RandomStream rs(cfg.seed, static_cast<std::uint64_t>(s));
    std::vector<double> row(static_cast<std::size_t>(d));
    std::vector<double> mirror(static_cast<std::size_t>(d));
    const std::int64_t begin = units_total * s / cfg.stream_count;
    const std::int64_t end = units_total * (s + 1) / cfg.stream_count;
    auto min_kernel = [&](const double* a) {
      double m = x[0] * a[0];
      for (int j = 1; j < d; ++j) m = std::min(m, x[j] * a[j]);
      return std::max(m, 0.0);
    };
    auto& acc = per_stream[static_cast<std::size_t>(s)];
    for (std::int64_t unit = begin; unit < end; ++unit) {
      double v;
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
        v = 0.5 * (min_kernel(row.data()) + min_kernel(mirror.data()));
      } else {
        if (cached) {
          for (int j = 0; j < d; ++j) row[j] = (*cached)(unit, j);
        } else {
          gen.sample_row(rs, row.data());
        }
        v = min_kernel(row.data());
      }
      acc.sum += v;
      acc.sumsq += v * v;
    }
  }
  const double units = static_cast<double>(units_total);
  double sum = 0.0, sumsq = 0.0;
  for (const auto& acc : per_stream) {
    sum += acc.sum;
    sumsq += acc.sumsq;
  }
  const double mean = sum / units;
  const double var = std::max(0.0, (sumsq - sum * sum / units) / (units - 1.0));
  return {mean, std::sqrt(var / units)};
}

DependenceModel indicator_thin_closed(const DependenceModel& base, double p,
                                      double q, double r) {
  if (base.dimension() != 2)
    throw DomainError("indicator_thin: closed path needs a bivariate model");
  if (!base.ell_function())
    throw DomainError(
        "indicator_thin: closed path needs an exact (closed-form) base");
  if (!(p > 0.0 && p <= 1.0) || !(q > 0.0 && q <= 1.0))
    throw DomainError("indicator_thin: p and q must lie in (0,1]");
  if (!(r >= 0.0) || r > std::min(p, q) + 1e-15)
    throw DomainError("indicator_thin: r must lie in [0, min(p,q)]");
  if (1.0 - p - q + r < -1e-12)
    throw DomainError("indicator_thin: inconsistent joint law, P[I=J=0] < 0");
  const double alpha = r / p;
  const double beta = r / q;
  return DependenceModel::closed_form(
      std::make_shared<ThinnedEll>(base.ell_function_ptr(), alpha, beta));
}

DependenceModel symmetric_mixture(const DependenceModel& base, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("symmetric_mixture: theta must lie in [0,1]");
  // p = q = 1/(2-theta), r = theta p is a consistent indicator law with
  // alpha = beta = theta for the whole parameter range.
  const double p = 1.0 / (2.0 - theta);
  return indicator_thin_closed(base, p, p, theta * p);
}

}  // namespace maxstable
