#include <doctest.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "taxokit/config.hpp"
#include "taxokit/errors.hpp"
#include "tempdir.hpp"

using namespace taxokit;
using oracles::TempDir;

namespace {

nlohmann::json minimal_config() {
  return nlohmann::json{{"paths",
                         {{"corpus", "corpus.jsonl"},
                          {"lexicon", "lexicon.tsv"},
                          {"base_taxonomy", "base.json"}}}};
}

}  // namespace

TEST_CASE("defaults fill everything except the required paths") {
  const auto config = config_from_json(minimal_config());

  CHECK(config.paths.output_dir == "out");
  CHECK(config.preprocessing.min_frequency == 4);
  CHECK(config.preprocessing.min_count == 1);
  CHECK(config.preprocessing.fold_case);
  CHECK(config.preprocessing.fold_width);
  CHECK(config.preprocessing.delimiters == default_sentence_delimiters());
  CHECK(config.embedding.dim == 200);
  CHECK(config.embedding.window == 5);
  CHECK(config.embedding.negatives == 5);
  CHECK(config.embedding.epochs == 5);
  CHECK(config.embedding.learning_rate == 0.025);
  CHECK(config.assignment.min_entities == 100);
  CHECK(config.sweeps.damping == 0.9);
  CHECK(config.sweeps.max_iter == 1000);
  CHECK(config.sweeps.stable_iters == 50);
  CHECK(config.sweeps.kmeans_restarts == 5);
  CHECK(config.sweeps.min_clusters == 10);
  CHECK(config.evaluation.dissimilarity == Dissimilarity::cosine);
  CHECK(config.evaluation.neighbor == NeighborDef::cluster_mean);
  CHECK(config.taxonomy.top_k == 5);
  CHECK(config.taxonomy.overrides.empty());
  CHECK(config.seed == 42);
  CHECK(config.deterministic);
  CHECK(config.jobs == 1);
}

TEST_CASE("default grids produce the documented sweep sizes") {
  const PipelineConfig config;
  const auto prefs = config.sweeps.ap_preferences.values();
  REQUIRE(prefs.size() == 21);
  CHECK(prefs.front() == 0.0);
  CHECK(prefs.back() == doctest::Approx(1.0));

  const auto levels = config.sweeps.agglomerative_levels.values();
  REQUIRE(levels.size() == 51);
  CHECK(levels[25] == doctest::Approx(0.5));

  const auto ks = config.sweeps.kmeans_ks.values();
  CHECK(ks == std::vector<int>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120});
}

TEST_CASE("grid specs honor custom ranges and reject bad ones") {
  GridSpec tight{0.2, 0.4, 0.1};
  const auto values = tight.values();
  REQUIRE(values.size() == 3);
  CHECK(values[0] == doctest::Approx(0.2));
  CHECK(values[2] == doctest::Approx(0.4));

  GridSpec single{0.3, 0.3, 0.05};
  CHECK(single.values() == std::vector<double>{0.3});

  GridSpec reversed{0.5, 0.1, 0.1};
  CHECK_THROWS_AS(reversed.values(), ConfigError);
  GridSpec flat{0.0, 1.0, 0.0};
  CHECK_THROWS_AS(flat.values(), ConfigError);

  IntGridSpec ints{3, 9, 3};
  CHECK(ints.values() == std::vector<int>{3, 6, 9});
  IntGridSpec backwards{9, 3, 3};
  CHECK_THROWS_AS(backwards.values(), ConfigError);
}

TEST_CASE("unknown keys are named with their full path") {
  auto doc = minimal_config();
  doc["colour"] = "red";
  CHECK_THROWS_WITH_AS(config_from_json(doc), "unknown config key: colour", ConfigError);

  doc = minimal_config();
  doc["paths"]["extra"] = 1;
  CHECK_THROWS_WITH_AS(config_from_json(doc), "unknown config key: paths.extra",
                       ConfigError);

  doc = minimal_config();
  doc["sweeps"]["ap_preferences"] = {{"start", 0.0}, {"finish", 1.0}};
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "unknown config key: sweeps.ap_preferences.finish", ConfigError);
}

TEST_CASE("type mismatches name the offending field") {
  auto doc = minimal_config();
  doc["embedding"]["dim"] = "wide";
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "config field embedding.dim has the wrong type", ConfigError);

  doc = minimal_config();
  doc["jobs"] = "many";
  CHECK_THROWS_WITH_AS(config_from_json(doc), "config field jobs has the wrong type",
                       ConfigError);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("validation messages name the failing field") {
  CHECK_THROWS_WITH_AS(config_from_json(nlohmann::json::object()),
                       "config field paths.corpus is required", ConfigError);

  auto doc = minimal_config();
  doc["paths"].erase("lexicon");
  CHECK_THROWS_WITH_AS(config_from_json(doc), "config field paths.lexicon is required",
                       ConfigError);

  doc = minimal_config();
  doc["assignment"]["min_entities"] = 0;
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "config field assignment.min_entities must be at least 1",
                       ConfigError);

  doc = minimal_config();
  doc["sweeps"]["damping"] = 1.0;
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "config field sweeps.damping must lie in [0.5, 1)", ConfigError);

  doc = minimal_config();
  doc["sweeps"]["min_clusters"] = 1;
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "config field sweeps.min_clusters must be at least 2", ConfigError);

  doc = minimal_config();
  doc["embedding"]["dim"] = 0;
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);

  doc = minimal_config();
  doc["evaluation"]["dissimilarity"] = "hamming";
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);

  doc = minimal_config();
  doc["preprocessing"]["delimiters"] = nlohmann::json::array();
  CHECK_THROWS_WITH_AS(config_from_json(doc),
                       "config field preprocessing.delimiters must not be empty",
                       ConfigError);
}

TEST_CASE("config files load and invalid ones carry useful errors") {
  TempDir dir;
  const auto good = dir.write("config.json", minimal_config().dump());
  const auto config = load_config(good);
  CHECK(config.paths.corpus == "corpus.jsonl");

  CHECK_THROWS_AS(load_config(dir.path() / "absent.json"), ConfigError);
  const auto broken = dir.write("broken.json", "{ not json");
  CHECK_THROWS_AS(load_config(broken), ConfigError);
}

TEST_CASE("round trip through JSON preserves every field") {
  auto doc = minimal_config();
  doc["paths"]["output_dir"] = "results";
  doc["preprocessing"] = {{"delimiters", {".", "!"}},
                          {"min_frequency", 7},
                          {"min_count", 2},
                          {"fold_case", false},
                          {"fold_width", false}};
  doc["embedding"] = {{"dim", 64},
                      {"window", 3},
                      {"negatives", 9},
                      {"epochs", 11},
                      {"learning_rate", 0.01}};
  doc["assignment"] = {{"min_entities", 30}};
  doc["sweeps"] = {{"ap_preferences", {{"start", 0.1}, {"stop", 0.9}, {"step", 0.1}}},
                   {"agglomerative_levels", {{"start", 0.0}, {"stop", 0.5}, {"step", 0.25}}},
                   {"kmeans_ks", {{"start", 5}, {"stop", 25}, {"step", 5}}},
                   {"damping", 0.75},
                   {"max_iter", 300},
                   {"stable_iters", 20},
                   {"kmeans_restarts", 3},
                   {"kmeans_max_rounds", 50},
                   {"min_clusters", 4}};
  doc["evaluation"] = {{"dissimilarity", "euclidean"}, {"neighbor", "point_min"}};
  doc["taxonomy"] = {{"top_k", 7}, {"overrides", "overrides.json"}};
  doc["seed"] = 7;
  doc["deterministic"] = false;
  doc["jobs"] = 4;

  const auto config = config_from_json(doc);
  CHECK(config.preprocessing.delimiters == std::vector<std::string>{".", "!"});
  CHECK_FALSE(config.preprocessing.fold_case);
  CHECK(config.embedding.dim == 64);
  CHECK(config.sweeps.ap_preferences.values().size() == 9);
  CHECK(config.sweeps.kmeans_ks.values() == std::vector<int>{5, 10, 15, 20, 25});
  CHECK(config.evaluation.dissimilarity == Dissimilarity::euclidean);
  CHECK(config.evaluation.neighbor == NeighborDef::point_min);
  CHECK(config.taxonomy.top_k == 7);
  CHECK(config.taxonomy.overrides == "overrides.json");
  CHECK(config.seed == 7);
  CHECK_FALSE(config.deterministic);
  CHECK(config.jobs == 4);

  // Serializing and reparsing lands on the same configuration.
  const auto twice = config_from_json(config_to_json(config));
  CHECK(config_to_json(twice) == config_to_json(config));
}
