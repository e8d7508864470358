#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxokit/embedding.hpp"
#include "taxokit/evaluation.hpp"
#include "taxokit/text.hpp"

namespace taxokit {

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;

  std::vector<double> values() const;  // inclusive endpoints
};

struct IntGridSpec {
  int start = 10;
  int stop = 120;
  int step = 10;

  std::vector<int> values() const;
};

struct PipelineConfig {
  struct Paths {
    std::string corpus;
    std::string lexicon;
    std::string base_taxonomy;
    std::string output_dir = "out";
  } paths;

  struct Preprocessing {
    std::vector<std::string> delimiters = default_sentence_delimiters();
    int min_frequency = 4;
    int min_count = 1;
    bool fold_case = true;
    bool fold_width = true;
  } preprocessing;

  EmbeddingConfig embedding;

  struct Assignment {
    int min_entities = 100;
  } assignment;

  struct Sweeps {
    GridSpec ap_preferences{0.0, 1.0, 0.05};
    GridSpec agglomerative_levels{0.0, 1.0, 0.02};
    IntGridSpec kmeans_ks{10, 120, 10};
    double damping = 0.9;
    int max_iter = 1000;
    int stable_iters = 50;
    int kmeans_restarts = 5;
    int kmeans_max_rounds = 100;
    int min_clusters = 10;
  } sweeps;

  struct Evaluation {
    Dissimilarity dissimilarity = Dissimilarity::cosine;
    NeighborDef neighbor = NeighborDef::cluster_mean;
  } evaluation;

  struct Taxonomy {
    int top_k = 5;
    std::string overrides;  // optional tag override file
  } taxonomy;

  std::uint64_t seed = 42;
  bool deterministic = true;
  int jobs = 1;

  void validate() const;  // throws ConfigError naming the offending field
};

// Parses and validates; unknown keys and type mismatches report their full
// field path.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const PipelineConfig& config);

}  // namespace taxokit
