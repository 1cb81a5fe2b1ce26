#include "maxstable/spec_io.hpp"

#include <fstream>

namespace maxstable {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw SpecError(msg); }

const json& require(const json& obj, const char* key,
                    const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing field \"" + key + "\"");
  return *it;
}

double require_number(const json& obj, const char* key,
                      const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) fail(where + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

Vec require_vector(const json& obj, const char* key,
                   const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array() || v.empty())
    fail(where + ": field \"" + key + "\" must be a non-empty array");
  Vec out(v.size());
  Eigen::Index i = 0;
  for (const auto& e : v) {
    if (!e.is_number())
      fail(where + ": field \"" + key + "\" must hold numbers");
    out[i++] = e.get<double>();
  }
  return out;
}

std::vector<std::pair<std::vector<int>, double>> parse_subset_probs(
    const json& arr, const std::string& where, bool allow_empty_subset) {
  if (!arr.is_array() || arr.empty())
    fail(where + ": \"subsets\" must be a non-empty array");
  std::vector<std::pair<std::vector<int>, double>> out;
  for (const auto& entry : arr) {
    if (!entry.is_object()) fail(where + ": subset entries must be objects");
    const json& set = require(entry, "set", where);
    if (!set.is_array()) fail(where + ": \"set\" must be an array of indices");
    std::vector<int> subset;
    for (const auto& e : set) {
      if (!e.is_number_integer()) fail(where + ": subset indices must be integers");
      subset.push_back(e.get<int>());
    }
    if (subset.empty() && !allow_empty_subset)
      fail(where + ": empty subset not allowed");
    out.emplace_back(std::move(subset), require_number(entry, "p", where));
  }
  return out;
}

FamilySpec parse_family(const std::string& family, const json& params,
                        int dimension) {
  const std::string where = "family \"" + family + "\"";
  if (family == "logistic") {
    LogisticSpec s;
    s.dimension = dimension;
    const json& theta = require(params, "theta", where);
    if (theta.is_string()) {
      if (theta.get<std::string>() != "inf")
        fail(where + ": theta must be a number or \"inf\"");
      s.theta = std::numeric_limits<double>::infinity();
    } else if (theta.is_number()) {
      s.theta = theta.get<double>();
    } else {
      fail(where + ": theta must be a number or \"inf\"");
    }
    return s;
  }
  if (family == "marshall_olkin")
    return MarshallOlkinSpec{require_number(params, "alpha", where),
                             require_number(params, "beta", where)};
  if (family == "mv_marshall_olkin") {
    MultivariateMOSpec s;
    s.dimension = dimension;
    s.subset_probs = parse_subset_probs(require(params, "subsets", where),
                                        where, /*allow_empty_subset=*/false);
    return s;
  }
  if (family == "tawn")
    return TawnMixtureSpec{require_number(params, "theta", where)};
  if (family == "rational")
    return RationalSpec{require_number(params, "alpha", where),
                        require_number(params, "beta", where)};
  if (family == "schlather")
    return SchlatherSpec{require_number(params, "rho", where)};
  if (family == "husler_reiss")
    return HuslerReissSpec{require_number(params, "a", where)};
  if (family == "dirichlet11") return Dirichlet11Spec{};
  if (family == "independence") return IndependenceSpec{dimension};
  if (family == "perfect_dependence") return PerfectDependenceSpec{dimension};
  fail("unknown family \"" + family + "\"");
}

SpectralAtoms parse_atoms(const json& arr, int dimension) {
  if (!arr.is_array() || arr.empty())
    fail("discrete backend: \"atoms\" must be a non-empty array");
  std::vector<SpectralAtoms::Atom> atoms;
  for (const auto& entry : arr) {
    if (!entry.is_object()) fail("discrete backend: atoms must be objects");
    atoms.push_back({require_vector(entry, "w", "atom"),
                     require_number(entry, "m", "atom")});
  }
  return SpectralAtoms(dimension, std::move(atoms));
}

McConfig parse_mc(const json& doc, const McOverrides& ov) {
  McConfig cfg;
  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    if (!mc.is_object()) fail("\"mc\" must be an object");
    if (mc.contains("samples")) cfg.sample_count = mc["samples"].get<std::int64_t>();
    if (mc.contains("seed")) cfg.seed = mc["seed"].get<std::uint64_t>();
    if (mc.contains("streams")) cfg.stream_count = mc["streams"].get<int>();
    if (mc.contains("antithetic")) cfg.antithetic = mc["antithetic"].get<bool>();
  }
  if (ov.samples) cfg.sample_count = *ov.samples;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.streams) cfg.stream_count = *ov.streams;
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.antithetic) cfg.antithetic = *ov.antithetic;
  return cfg;
}

CachePolicy parse_cache_policy(const json& doc) {
  if (!doc.contains("mc") || !doc["mc"].contains("cache"))
    return CachePolicy::Regenerate;
  const std::string c = doc["mc"]["cache"].get<std::string>();
  if (c == "regenerate") return CachePolicy::Regenerate;
  if (c == "materialize") return CachePolicy::Materialize;
  fail("mc.cache must be \"regenerate\" or \"materialize\"");
}

}  // namespace

std::shared_ptr<const Generator> parse_generator(const json& g) {
  if (!g.is_object()) fail("generator: must be an object");
  const std::string kind =
      require(g, "kind", "generator").get<std::string>();
  const std::string where = "generator \"" + kind + "\"";
  if (kind == "discrete_atoms") {
    const json& atoms = require(g, "atoms", where);
    if (!atoms.is_array() || atoms.empty())
      fail(where + ": \"atoms\" must be a non-empty array of rows");
    const Vec probs = require_vector(g, "probs", where);
    const std::size_t m = atoms.size();
    Eigen::Index d = -1;
    Mat rows;
    std::size_t k = 0;
    for (const auto& row : atoms) {
      if (!row.is_array()) fail(where + ": atom rows must be arrays");
      if (d < 0) {
        d = static_cast<Eigen::Index>(row.size());
        rows = Mat(static_cast<Eigen::Index>(m), d);
      }
      if (static_cast<Eigen::Index>(row.size()) != d)
        fail(where + ": ragged atom rows");
      Eigen::Index j = 0;
      for (const auto& e : row) rows(static_cast<Eigen::Index>(k), j++) = e.get<double>();
      ++k;
    }
    return std::make_shared<DiscreteAtomsGenerator>(rows, probs);
  }
  if (kind == "indicators") {
    auto base = parse_generator(require(g, "base", where));
    const json& law = require(g, "law", where);
    SubsetLaw sl;
    if (law.contains("subsets")) {
      sl.dimension = base->dimension();
      sl.probs = parse_subset_probs(law["subsets"], where,
                                    /*allow_empty_subset=*/true);
    } else {
      sl = SubsetLaw::from_bivariate(require_number(law, "p", where),
                                     require_number(law, "q", where),
                                     require_number(law, "r", where));
    }
    return std::make_shared<IndicatorsGenerator>(std::move(base), std::move(sl));
  }
  if (kind == "dirichlet_gamma")
    return std::make_shared<DirichletGammaGenerator>(
        require_vector(g, "alpha", where));
  if (kind == "gaussian_pair")
    return std::make_shared<GaussianPairGenerator>(
        require_number(g, "rho", where));
  if (kind == "lognormal_pair")
    return std::make_shared<LognormalPairGenerator>(
        require_number(g, "rho", where), require_number(g, "sigma", where));
  if (kind == "random_sum_exponential")
    return std::make_shared<RandomSumExponentialGenerator>(
        require_vector(g, "j_probs", where), require_vector(g, "k_probs", where));
  if (kind == "constant")
    return std::make_shared<ConstantGenerator>(require_vector(g, "a", where));
  if (kind == "frechet_stable")
    return std::make_shared<FrechetStableGenerator>(
        require_number(g, "theta", where),
        static_cast<int>(require_number(g, "dimension", where)));
  if (kind == "scaled")
    return std::make_shared<ScaledGenerator>(
        parse_generator(require(g, "base", where)),
        require_vector(g, "scale", where));
  if (kind == "mc_standardized") {
    const std::int64_t presamples =
        g.contains("presamples") ? g["presamples"].get<std::int64_t>()
                                 : 10'000'000;
    const std::uint64_t seed =
        g.contains("seed") ? g["seed"].get<std::uint64_t>() : 0x5eedu;
    return std::make_shared<McStandardizedGenerator>(
        parse_generator(require(g, "base", where)), presamples, seed);
  }
  fail("unknown generator kind \"" + kind + "\"");
}

ModelDocument parse_model_document(const json& doc, const McOverrides& ov) {
  if (!doc.is_object()) fail("model document: top level must be an object");
  const json& version = require(doc, "version", "model document");
  if (!version.is_number_integer() || version.get<int>() != 1)
    fail("model document: unsupported version (expected 1)");
  const int dimension = static_cast<int>(
      require_number(doc, "dimension", "model document"));
  if (dimension < 1) fail("model document: dimension must be >= 1");
  const std::string backend =
      require(doc, "backend", "model document").get<std::string>();

  const McConfig cfg = parse_mc(doc, ov);

  DependenceModel model = [&] {
    if (backend == "closed_form") {
      const std::string family =
          require(doc, "family", "model document").get<std::string>();
      const json params =
          doc.contains("params") ? doc["params"] : json::object();
      const FamilySpec spec = parse_family(family, params, dimension);
      if (family_dimension(spec) != dimension)
        fail("model document: family \"" + family + "\" has dimension " +
             std::to_string(family_dimension(spec)) +
             ", document says " + std::to_string(dimension));
      return DependenceModel::closed_form(spec);
    }
    if (backend == "discrete")
      return DependenceModel::discrete(
          parse_atoms(require(doc, "atoms", "model document"), dimension));
    if (backend == "generator") {
      auto gen = parse_generator(require(doc, "generator", "model document"));
      if (gen->dimension() != dimension)
        fail("model document: generator dimension " +
             std::to_string(gen->dimension()) + ", document says " +
             std::to_string(dimension));
      return DependenceModel::generator_backed(std::move(gen), cfg,
                                               parse_cache_policy(doc));
    }
    fail("model document: unknown backend \"" + backend + "\"");
  }();

  return ModelDocument{doc, std::move(model), cfg};
}

ModelDocument load_model_file(const std::string& path,
                              const McOverrides& overrides) {
  std::ifstream in(path);
  if (!in) fail("cannot open model document: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail("invalid JSON in " + path + ": " + e.what());
  }
  return parse_model_document(doc, overrides);
}

std::shared_ptr<const Generator> document_generator(const ModelDocument& doc) {
  if (doc.model.backend() == DependenceModel::Backend::GeneratorBacked)
    return doc.model.generator();
  if (doc.model.backend() == DependenceModel::Backend::Discrete) {
    // A = d * W with W drawn from the profile distribution reproduces the
    // discrete spectral measure.
    const SpectralAtoms& atoms = *doc.model.spectral_atoms();
    const int d = atoms.dimension();
    const std::size_t m = atoms.atoms().size();
    Mat rows(static_cast<Eigen::Index>(m), d);
    Vec probs(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const auto& atom = atoms.atoms()[k];
      rows.row(static_cast<Eigen::Index>(k)) =
          (atom.weight * static_cast<double>(d)).transpose();
      probs[static_cast<Eigen::Index>(k)] = atom.mass / static_cast<double>(d);
    }
    return std::make_shared<DiscreteAtomsGenerator>(rows, probs);
  }
  return nullptr;
}

}  // namespace maxstable
