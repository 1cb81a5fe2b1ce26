#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxstable/coefficients.hpp"
#include "maxstable/csv.hpp"
#include "maxstable/empirical.hpp"
#include "maxstable/spec_io.hpp"
#include "maxstable/verify.hpp"

namespace {

using nlohmann::json;
using namespace maxstable;

constexpr const char* kToolVersion = "maxstable 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitSpecError = 2;
constexpr int kExitDomainError = 3;

// Everything a rerun needs. The deterministic part goes into output headers;
// wall-clock time only ever lands in the sidecar file and on stderr, so data
// files are byte-identical across reruns of the same manifest.
struct Manifest {
  std::string command;
  std::string spec_path;
  std::string in_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> k;
  std::optional<int> threads;
  double wall_seconds = 0.0;

  // threads and wall time are execution details: they never influence a
  // value, so they stay out of the rerun-determining manifest header.
  json deterministic_json() const {
    json j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    if (!spec_path.empty()) j["spec"] = spec_path;
    if (!in_path.empty()) j["in"] = in_path;
    if (!out_path.empty()) j["out"] = out_path;
    j["format"] = format;
    if (seed) j["seed"] = *seed;
    if (samples) j["samples"] = *samples;
    if (n) j["n"] = *n;
    if (k) j["k"] = *k;
    return j;
  }

  std::vector<std::string> comment_lines() const {
    return {std::string("manifest ") + deterministic_json().dump()};
  }

  void write_sidecar(const json& spec_echo) const {
    if (out_path.empty()) {
      std::cerr << "# wall_seconds " << wall_seconds << "\n";
      return;
    }
    json j = deterministic_json();
    j["wall_seconds"] = wall_seconds;
    if (threads) j["threads"] = *threads;
    if (!spec_echo.is_null()) j["spec_document"] = spec_echo;
    std::ofstream side(out_path + ".manifest.json");
    side << j.dump(2) << "\n";
  }
};

// Writes a table as CSV or JSON to --out or stdout.
void emit_table(const Manifest& manifest,
                const std::vector<std::string>& columns, const Mat& data) {
  std::ostringstream body;
  if (manifest.format == "csv") {
    write_csv(body, manifest.comment_lines(), columns, data);
  } else {
    json j;
    j["manifest"] = manifest.deterministic_json();
    j["columns"] = columns;
    json rows = json::array();
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < data.cols(); ++c) row.push_back(data(i, c));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    body << j.dump(2) << "\n";
  }
  if (manifest.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(manifest.out_path);
    if (!out) throw SpecError("cannot open output file: " + manifest.out_path);
    out << body.str();
  }
}

std::vector<std::string> coordinate_columns(const std::string& prefix, int d) {
  std::vector<std::string> cols;
  for (int j = 1; j <= d; ++j) cols.push_back(prefix + std::to_string(j));
  return cols;
}

// Parses "1,1;0.5,2" into points of dimension d.
Mat parse_inline_points(const std::string& text, int d) {
  std::vector<Vec> pts;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::stringstream fields(group);
    std::string field;
    std::vector<double> coords;
    while (std::getline(fields, field, ',')) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0')
        throw SpecError("points: non-numeric coordinate \"" + field + "\"");
      coords.push_back(v);
    }
    if (static_cast<int>(coords.size()) != d)
      throw SpecError("points: expected " + std::to_string(d) +
                      " coordinates per point");
    pts.push_back(Eigen::Map<const Vec>(coords.data(),
                                        static_cast<Eigen::Index>(coords.size())));
  }
  if (pts.empty()) throw SpecError("points: empty point list");
  Mat out(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return out;
}

MarginForm parse_margin(const std::string& name) {
  if (name == "uniform") return MarginForm::Uniform01;
  if (name == "frechet") return MarginForm::UnitFrechet;
  if (name == "gumbel") return MarginForm::Gumbel;
  if (name == "revexp") return MarginForm::ReverseExponential;
  throw SpecError("unknown margin form \"" + name +
                  "\" (uniform|frechet|gumbel|revexp)");
}

// Point whose distribution-function image under the margin corresponds to
// the ell argument x, so the C column equals exp(-ell(x)) on every margin.
Vec margin_image(const Vec& x, MarginForm margin) {
  switch (margin) {
    case MarginForm::Uniform01:
      return (-x).exp();
    case MarginForm::UnitFrechet:
      return x.inverse();
    case MarginForm::Gumbel:
      return -x.log();
    case MarginForm::ReverseExponential:
      return -x;
  }
  throw SpecError("margin_image: unreachable");
}

struct CommonFlags {
  std::string spec_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<int> streams;
  std::optional<int> threads;

  McOverrides overrides() const {
    McOverrides ov;
    ov.seed = seed;
    ov.samples = samples;
    ov.streams = streams;
    ov.threads = threads;
    return ov;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_spec = true) {
  auto* spec = cmd->add_option("--spec", flags.spec_path,
                               "model document (JSON)");
  if (needs_spec) spec->required();
  cmd->add_option("--out", flags.out_path, "output path (default stdout)")
      ->envname("MAXSTABLE_OUT");
  cmd->add_option("--format", flags.format, "csv or json")
      ->envname("MAXSTABLE_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", flags.seed, "seed override")
      ->envname("MAXSTABLE_SEED");
  cmd->add_option("--samples", flags.samples, "Monte Carlo sample count override")
      ->envname("MAXSTABLE_SAMPLES");
  cmd->add_option("--streams", flags.streams, "Monte Carlo stream count override")
      ->envname("MAXSTABLE_STREAMS");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (never changes results)")
      ->envname("MAXSTABLE_THREADS");
}

int run_eval(const CommonFlags& flags, const std::string& grid_file,
             const std::string& inline_points, int simplex_grid,
             const std::string& margin_name) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDocument doc = load_model_file(flags.spec_path, flags.overrides());
  const int d = doc.model.dimension();
  const MarginForm margin = parse_margin(margin_name);

  Mat grid;
  if (!grid_file.empty()) {
    const CsvTable table = read_csv_file(grid_file);
    if (table.data.cols() != d)
      throw SpecError("grid file has " + std::to_string(table.data.cols()) +
                      " columns, model dimension is " + std::to_string(d));
    grid = table.data;
  } else if (!inline_points.empty()) {
    grid = parse_inline_points(inline_points, d);
  } else if (simplex_grid > 0) {
    if (d != 2)
      throw SpecError("--simplex-grid is only available for dimension 2");
    grid = Mat(simplex_grid + 1, 2);
    for (int i = 0; i <= simplex_grid; ++i) {
      const double t = static_cast<double>(i) / simplex_grid;
      grid(i, 0) = 1.0 - t;
      grid(i, 1) = t;
    }
  } else {
    throw SpecError("eval: provide --grid-file, --points or --simplex-grid");
  }

  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(grid.rows()));
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    points.emplace_back(Vec(grid.row(i).transpose()));
  const auto ells = doc.model.ell_batch(points);

  Mat table(grid.rows(), d + 4);
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    const Vec& x = points[static_cast<std::size_t>(i)].coords();
    table.row(i).segment(0, d) = x.transpose();
    const Estimate& e = ells[static_cast<std::size_t>(i)];
    table(i, d) = e.value;
    table(i, d + 1) = e.se;
    const double sum = x.sum();
    table(i, d + 2) = sum > 0.0 ? e.value / sum : 1.0;
    table(i, d + 3) = doc.model.copula(margin_image(x, margin), margin).value;
  }

  Manifest manifest;
  manifest.command = "eval";
  manifest.spec_path = flags.spec_path;
  manifest.out_path = flags.out_path;
  manifest.format = flags.format;
  manifest.seed = doc.mc.seed;
  manifest.samples = doc.mc.sample_count;
  manifest.threads = doc.mc.threads;

  std::vector<std::string> columns = coordinate_columns("x", d);
  columns.insert(columns.end(),
                 {"ell", "se", "pickands", "cdf_" + margin_name});
  emit_table(manifest, columns, table);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.write_sidecar(doc.raw);
  return kExitOk;
}

int run_simulate(const CommonFlags& flags, std::int64_t n) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDocument doc = load_model_file(flags.spec_path, flags.overrides());
  const auto gen = document_generator(doc);
  if (!gen)
    throw SpecError(
        "simulate: the model document has no sampling backend (use a "
        "generator or discrete model)");
  const std::uint64_t seed = doc.mc.seed;
  const SampleCloud cloud = simulate_x(*gen, n, seed);

  Manifest manifest;
  manifest.command = "simulate";
  manifest.spec_path = flags.spec_path;
  manifest.out_path = flags.out_path;
  manifest.format = flags.format;
  manifest.seed = seed;
  manifest.n = n;

  emit_table(manifest, coordinate_columns("x", cloud.dimension()), cloud.data);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.write_sidecar(doc.raw);
  return kExitOk;
}

int run_estimate(const CommonFlags& flags, const std::string& in_path,
                 std::int64_t k_opt, const std::string& targets,
                 const std::string& targets_file,
                 const std::string& profiles_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const CsvTable table = read_csv_file(in_path);
  SampleCloud cloud{table.data, CloudMargin::Raw};
  const int d = cloud.dimension();
  const std::int64_t n = cloud.size();
  const std::int64_t k =
      k_opt > 0 ? k_opt
                : static_cast<std::int64_t>(std::floor(std::sqrt(
                      static_cast<double>(n))));

  Mat target_points;
  if (!targets_file.empty()) {
    const CsvTable t = read_csv_file(targets_file);
    if (t.data.cols() != d)
      throw SpecError("targets file column count does not match the cloud");
    target_points = t.data;
  } else if (!targets.empty()) {
    target_points = parse_inline_points(targets, d);
  } else {
    target_points = Mat::Ones(1, d);
  }

  Mat out(target_points.rows(), d + 3);
  for (Eigen::Index i = 0; i < target_points.rows(); ++i) {
    const Point x(Vec(target_points.row(i).transpose()));
    const EllHatEstimate est = ell_hat(cloud, x, k);
    out.row(i).segment(0, d) = target_points.row(i);
    out(i, d) = est.value;
    out(i, d + 1) = est.raw;
    out(i, d + 2) = est.clamped ? 1.0 : 0.0;
  }

  Manifest manifest;
  manifest.command = "estimate";
  manifest.in_path = in_path;
  manifest.out_path = flags.out_path;
  manifest.format = flags.format;
  manifest.k = k;
  manifest.n = n;

  std::vector<std::string> columns = coordinate_columns("x", d);
  columns.insert(columns.end(), {"ell_hat", "ell_hat_raw", "clamped"});
  emit_table(manifest, columns, out);

  if (!profiles_out.empty()) {
    const SampleCloud pareto = rank_transform(cloud, CloudMargin::Pareto);
    const ProfileSummary summary = profile_hat(pareto, k);
    Manifest pm = manifest;
    pm.command = "estimate.profiles";
    pm.out_path = profiles_out;
    Mat pdata(summary.profiles.rows() + 2, d);
    pdata.row(0) = summary.mean.transpose();
    pdata.row(1) = summary.se.transpose();
    pdata.bottomRows(summary.profiles.rows()) = summary.profiles;
    std::vector<std::string> pcols = coordinate_columns("w", d);
    emit_table(pm, pcols, pdata);
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.write_sidecar(json());
  return kExitOk;
}

int run_coeffs(const CommonFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDocument doc = load_model_file(flags.spec_path, flags.overrides());
  const CoefficientReport rep = coefficient_report(doc.model);
  const int d = rep.dimension;

  Mat table(d, 4);
  for (int k = 1; k <= d; ++k) {
    table(k - 1, 0) = k;
    table(k - 1, 1) = rep.multi_failure[k - 1];
    table(k - 1, 2) = rep.multi_failure_se[k - 1];
    table(k - 1, 3) =
        k <= d - 1 ? rep.excess_mean[k - 1]
                   : std::numeric_limits<double>::quiet_NaN();
  }

  Manifest manifest;
  manifest.command = "coeffs";
  manifest.spec_path = flags.spec_path;
  manifest.out_path = flags.out_path;
  manifest.format = flags.format;
  manifest.seed = doc.mc.seed;
  manifest.samples = doc.mc.sample_count;

  emit_table(manifest,
             {"k", "multi_failure", "multi_failure_se", "excess_mean"}, table);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.write_sidecar(doc.raw);
  return kExitOk;
}

int run_verify(const CommonFlags& flags, int points) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDocument doc = load_model_file(flags.spec_path, flags.overrides());
  VerifyOptions options;
  options.points = points;
  if (flags.seed) options.seed = *flags.seed;

  const auto checks = verify_model(doc.model, options);

  std::ostringstream body;
  body << "# " << kToolVersion << " verify " << doc.model.describe() << "\n";
  print_checks(body, checks);
  const bool ok = all_pass(checks);
  body << "RESULT " << (ok ? "PASS" : "FAIL") << "\n";

  if (flags.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(flags.out_path);
    if (!out) throw SpecError("cannot open output file: " + flags.out_path);
    out << body.str();
  }

  Manifest manifest;
  manifest.command = "verify";
  manifest.spec_path = flags.spec_path;
  manifest.out_path = flags.out_path;
  manifest.seed = options.seed;
  manifest.samples = doc.mc.sample_count;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.write_sidecar(doc.raw);
  return ok ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolVersion) +
               " -- max-stable dependence models: evaluate, simulate, "
               "estimate, report, verify"};
  app.require_subcommand(1);

  CommonFlags eval_flags;
  std::string grid_file, inline_points, margin_name = "uniform";
  int simplex_grid = 0;
  auto* eval = app.add_subcommand(
      "eval", "evaluate ell/D/C for a model on a grid of points");
  add_common(eval, eval_flags);
  eval->add_option("--grid-file", grid_file, "CSV of evaluation points");
  eval->add_option("--points", inline_points,
                   "inline points, e.g. \"1,1;0.5,2\"");
  eval->add_option("--simplex-grid", simplex_grid,
                   "N+1 points (1-t,t) on the bivariate simplex");
  eval->add_option("--margin", margin_name,
                   "margin form for the CDF column "
                   "(uniform|frechet|gumbel|revexp)");

  CommonFlags sim_flags;
  std::int64_t sim_n = 10000;
  auto* simulate =
      app.add_subcommand("simulate", "simulate a cloud X = A Z from a model");
  add_common(simulate, sim_flags);
  simulate->add_option("-n,--n", sim_n, "number of observations")->required();

  CommonFlags est_flags;
  std::string est_in, est_targets, est_targets_file, est_profiles_out;
  std::int64_t est_k = 0;
  auto* estimate = app.add_subcommand(
      "estimate", "rank-based tail estimation from a CSV cloud");
  add_common(estimate, est_flags, /*needs_spec=*/false);
  estimate->add_option("--in", est_in, "input cloud CSV")->required();
  estimate->add_option("--k", est_k, "threshold count (default floor(sqrt(n)))")
      ->envname("MAXSTABLE_K");
  estimate->add_option("--targets", est_targets,
                       "inline target points, e.g. \"1,1;2,1\"");
  estimate->add_option("--targets-file", est_targets_file,
                       "CSV of target points");
  estimate->add_option("--profiles-out", est_profiles_out,
                       "write exceedance profiles (mean, se, then rows)");

  CommonFlags coeffs_flags;
  auto* coeffs =
      app.add_subcommand("coeffs", "dependence coefficient report");
  add_common(coeffs, coeffs_flags);

  CommonFlags verify_flags;
  int verify_points = 100;
  auto* verify = app.add_subcommand(
      "verify", "run the invariant battery for a model document");
  add_common(verify, verify_flags);
  verify->add_option("--points", verify_points, "battery points per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitSpecError;
  }

  try {
    if (app.got_subcommand(eval))
      return run_eval(eval_flags, grid_file, inline_points, simplex_grid,
                      margin_name);
    if (app.got_subcommand(simulate)) return run_simulate(sim_flags, sim_n);
    if (app.got_subcommand(estimate))
      return run_estimate(est_flags, est_in, est_k, est_targets,
                          est_targets_file, est_profiles_out);
    if (app.got_subcommand(coeffs)) return run_coeffs(coeffs_flags);
    if (app.got_subcommand(verify))
      return run_verify(verify_flags, verify_points);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitSpecError;
}
