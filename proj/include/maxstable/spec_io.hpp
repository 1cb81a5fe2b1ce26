#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "maxstable/model.hpp"

namespace maxstable {

// Command-line overrides applied on top of a model document's "mc" block.
struct McOverrides {
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> streams;
  std::optional<int> threads;
  std::optional<bool> antithetic;
};

// A parsed model document: the model plus the original JSON for manifests.
struct ModelDocument {
  nlohmann::json raw;
  DependenceModel model;
  McConfig mc;  // effective config (document + overrides); also set for
                // exact backends, where simulation commands still need it
};

// Document schema (version 1):
//   {
//     "version": 1,
//     "dimension": d,
//     "backend": "closed_form" | "discrete" | "generator",
//     "family": "...", "params": {...},        closed_form
//     "atoms": [{"w": [...], "m": ...}, ...],  discrete
//     "generator": {"kind": "...", ...},       generator
//     "mc": {"samples": n, "seed": s, "streams": t,
//            "antithetic": false, "cache": "regenerate"|"materialize"}
//   }
// Families: logistic (theta may be the string "inf"), marshall_olkin,
// mv_marshall_olkin, tawn, rational, schlather, husler_reiss, dirichlet11,
// independence, perfect_dependence.
// Generator kinds: discrete_atoms, indicators, dirichlet_gamma,
// gaussian_pair, lognormal_pair, random_sum_exponential, constant,
// frechet_stable, scaled, mc_standardized.
ModelDocument parse_model_document(const nlohmann::json& doc,
                                   const McOverrides& overrides = {});

ModelDocument load_model_file(const std::string& path,
                              const McOverrides& overrides = {});

std::shared_ptr<const Generator> parse_generator(const nlohmann::json& g);

// The generator a document describes, also for closed_form/discrete
// backends where one exists (used by `simulate`); null otherwise.
std::shared_ptr<const Generator> document_generator(const ModelDocument& doc);

}  // namespace maxstable
