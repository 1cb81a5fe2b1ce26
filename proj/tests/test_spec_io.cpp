#include <doctest.h>

#include <cmath>

#include "maxstable/spec_io.hpp"

using namespace maxstable;
using nlohmann::json;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("closed-form documents") {
  const json doc = {{"version", 1},
                    {"dimension", 2},
                    {"backend", "closed_form"},
                    {"family", "schlather"},
                    {"params", {{"rho", 0.0}}}};
  const ModelDocument parsed = parse_model_document(doc);
  CHECK(parsed.model.backend() == DependenceModel::Backend::ClosedForm);
  CHECK(parsed.model.ell(Point(vec2(1, 1))).value ==
        doctest::Approx(1.70710678118654752).epsilon(1e-14));

  const json logistic_inf = {{"version", 1},
                             {"dimension", 3},
                             {"backend", "closed_form"},
                             {"family", "logistic"},
                             {"params", {{"theta", "inf"}}}};
  const ModelDocument li = parse_model_document(logistic_inf);
  Vec x(3);
  x << 1, 2, 3;
  CHECK(li.model.ell(Point(x)).value == 3.0);

  const json mvmo = {
      {"version", 1},
      {"dimension", 3},
      {"backend", "closed_form"},
      {"family", "mv_marshall_olkin"},
      {"params",
       {{"subsets", json::array({{{"set", {0, 1}}, {"p", 0.5}},
                                 {{"set", {2}}, {"p", 0.5}}})}}}};
  const ModelDocument mm = parse_model_document(mvmo);
  CHECK(mm.model.ell(Point(x)).value == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("discrete and generator documents") {
  const json disc = {
      {"version", 1},
      {"dimension", 2},
      {"backend", "discrete"},
      {"atoms", json::array({{{"w", {1.0, 0.0}}, {"m", 1.0}},
                             {{"w", {0.0, 1.0}}, {"m", 1.0}}})}};
  const ModelDocument dm = parse_model_document(disc);
  CHECK(dm.model.ell(Point(vec2(2, 3))).value == 5.0);

  const json gen = {{"version", 1},
                    {"dimension", 2},
                    {"backend", "generator"},
                    {"generator", {{"kind", "gaussian_pair"}, {"rho", 0.4}}},
                    {"mc", {{"samples", 40000}, {"seed", 11}, {"streams", 4}}}};
  const ModelDocument gm = parse_model_document(gen);
  CHECK(gm.model.is_monte_carlo());
  CHECK(gm.mc.sample_count == 40000);
  CHECK(gm.mc.seed == 11);
  const Estimate e = gm.model.ell(Point(vec2(1, 1)));
  CHECK(std::abs(e.value - schlather_ell(0.4, 1, 1)) <= 3.5 * e.se);

  // overrides win over the document
  McOverrides ov;
  ov.samples = 2000;
  ov.seed = 5;
  const ModelDocument om = parse_model_document(gen, ov);
  CHECK(om.mc.sample_count == 2000);
  CHECK(om.mc.seed == 5);

  // nested kinds parse
  const json thinned = {
      {"version", 1},
      {"dimension", 2},
      {"backend", "generator"},
      {"generator",
       {{"kind", "indicators"},
        {"base", {{"kind", "constant"}, {"a", {1.0, 1.0}}}},
        {"law", {{"p", 0.8}, {"q", 0.6}, {"r", 0.5}}}}},
      {"mc", {{"samples", 2000}, {"seed", 3}}}};
  CHECK_NOTHROW(parse_model_document(thinned));

  const json estimated = {
      {"version", 1},
      {"dimension", 2},
      {"backend", "generator"},
      {"generator",
       {{"kind", "mc_standardized"},
        {"presamples", 5000},
        {"seed", 1},
        {"base",
         {{"kind", "scaled"},
          {"scale", {2.0, 0.5}},
          {"base", {{"kind", "dirichlet_gamma"}, {"alpha", {1.0, 1.0}}}}}}}},
      {"mc", {{"samples", 2000}, {"seed", 3}}}};
  const ModelDocument em = parse_model_document(estimated);
  CHECK(em.model.generator()->standardization() ==
        Standardization::McEstimated);
}

TEST_CASE("document validation errors") {
  auto base = json{{"version", 1},
                   {"dimension", 2},
                   {"backend", "closed_form"},
                   {"family", "dirichlet11"}};
  CHECK_NOTHROW(parse_model_document(base));

  json no_version = base;
  no_version.erase("version");
  CHECK_THROWS_AS(parse_model_document(no_version), SpecError);

  json bad_version = base;
  bad_version["version"] = 2;
  CHECK_THROWS_AS(parse_model_document(bad_version), SpecError);

  json bad_family = base;
  bad_family["family"] = "gaussian_copula";
  CHECK_THROWS_AS(parse_model_document(bad_family), SpecError);

  json bad_dim = base;
  bad_dim["dimension"] = 3;  // dirichlet11 is bivariate
  CHECK_THROWS_AS(parse_model_document(bad_dim), SpecError);

  json bad_backend = base;
  bad_backend["backend"] = "quantum";
  CHECK_THROWS_AS(parse_model_document(bad_backend), SpecError);

  // spectral constraints enforced at parse time
  const json broken_atoms = {
      {"version", 1},
      {"dimension", 2},
      {"backend", "discrete"},
      {"atoms", json::array({{{"w", {0.5, 0.5}}, {"m", 1.0}}})}};
  CHECK_THROWS_AS(parse_model_document(broken_atoms), SpecError);

  const json bad_param = {{"version", 1},
                          {"dimension", 2},
                          {"backend", "closed_form"},
                          {"family", "schlather"},
                          {"params", {{"rho", 1.5}}}};
  CHECK_THROWS_AS(parse_model_document(bad_param), SpecError);

  CHECK_THROWS_AS(load_model_file("/nonexistent/path.json"), SpecError);
}

TEST_CASE("document generator for simulation") {
  const json disc = {
      {"version", 1},
      {"dimension", 2},
      {"backend", "discrete"},
      {"atoms", json::array({{{"w", {0.75, 0.25}}, {"m", 1.0}},
                             {{"w", {0.25, 0.75}}, {"m", 1.0}}})}};
  const ModelDocument dm = parse_model_document(disc);
  const auto gen = document_generator(dm);
  REQUIRE(gen);
  const auto* da = dynamic_cast<const DiscreteAtomsGenerator*>(gen.get());
  REQUIRE(da);
  // the induced generator reproduces the document's exact ell
  for (double x : {0.5, 1.0, 2.0})
    CHECK(da->exact_ell(vec2(x, 1.0)) ==
          doctest::Approx(dm.model.ell(Point(vec2(x, 1.0))).value)
              .epsilon(1e-12));

  const json cf = {{"version", 1},
                   {"dimension", 2},
                   {"backend", "closed_form"},
                   {"family", "dirichlet11"}};
  CHECK(document_generator(parse_model_document(cf)) == nullptr);
}
