#include "taxokit/config.hpp"

#include <cmath>
#include <fstream>

#include "taxokit/errors.hpp"

namespace taxokit {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::string& path,
                         std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* key : known) {
      if (it.key() == key) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError("unknown config key: " + (path.empty() ? it.key() : path + "." + it.key()));
    }
  }
}

template <typename T>
void read_field(const nlohmann::json& obj, const std::string& path, const char* key,
                T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config field " + (path.empty() ? std::string(key) : path + "." + key) +
                      " has the wrong type");
  }
}

void read_grid(const nlohmann::json& obj, const std::string& path, const char* key,
               GridSpec& grid) {
  if (!obj.contains(key)) return;
  const auto& spec = obj.at(key);
  std::string full = path + "." + key;
  if (!spec.is_object()) throw ConfigError("config field " + full + " must be an object");
  reject_unknown_keys(spec, full, {"start", "stop", "step"});
  read_field(spec, full, "start", grid.start);
  read_field(spec, full, "stop", grid.stop);
  read_field(spec, full, "step", grid.step);
}

void read_int_grid(const nlohmann::json& obj, const std::string& path, const char* key,
                   IntGridSpec& grid) {
  if (!obj.contains(key)) return;
  const auto& spec = obj.at(key);
  std::string full = path + "." + key;
  if (!spec.is_object()) throw ConfigError("config field " + full + " must be an object");
  reject_unknown_keys(spec, full, {"start", "stop", "step"});
  read_field(spec, full, "start", grid.start);
  read_field(spec, full, "stop", grid.stop);
  read_field(spec, full, "step", grid.step);
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<double> GridSpec::values() const {
  check(step > 0.0, "grid step must be positive");
  check(start <= stop, "grid start must not exceed stop");
  std::vector<double> out;
  // The epsilon admits endpoints that land a rounding error past stop.
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<int> IntGridSpec::values() const {
  check(step > 0, "grid step must be positive");
  check(start <= stop, "grid start must not exceed stop");
  std::vector<int> out;
  for (int v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

void PipelineConfig::validate() const {
  check(!paths.corpus.empty(), "config field paths.corpus is required");
  check(!paths.lexicon.empty(), "config field paths.lexicon is required");
  check(!paths.base_taxonomy.empty(), "config field paths.base_taxonomy is required");
  check(!paths.output_dir.empty(), "config field paths.output_dir must not be empty");

  check(!preprocessing.delimiters.empty(),
        "config field preprocessing.delimiters must not be empty");
  for (const auto& delimiter : preprocessing.delimiters) {
    check(!delimiter.empty(), "config field preprocessing.delimiters holds an empty string");
  }
  check(preprocessing.min_frequency >= 0,
        "config field preprocessing.min_frequency must not be negative");
  check(preprocessing.min_count >= 1,
        "config field preprocessing.min_count must be at least 1");

  embedding.validate();

  check(assignment.min_entities >= 1,
        "config field assignment.min_entities must be at least 1");

  check(sweeps.ap_preferences.step > 0.0 && sweeps.agglomerative_levels.step > 0.0,
        "config field sweeps grid steps must be positive");
  check(sweeps.ap_preferences.start <= sweeps.ap_preferences.stop,
        "config field sweeps.ap_preferences range is reversed");
  check(sweeps.agglomerative_levels.start <= sweeps.agglomerative_levels.stop,
        "config field sweeps.agglomerative_levels range is reversed");
  check(sweeps.kmeans_ks.step > 0, "config field sweeps.kmeans_ks.step must be positive");
  check(sweeps.kmeans_ks.start <= sweeps.kmeans_ks.stop,
        "config field sweeps.kmeans_ks range is reversed");
  check(sweeps.kmeans_ks.start >= 1, "config field sweeps.kmeans_ks.start must be at least 1");
  check(sweeps.damping >= 0.5 && sweeps.damping < 1.0,
        "config field sweeps.damping must lie in [0.5, 1)");
  check(sweeps.max_iter >= 1, "config field sweeps.max_iter must be at least 1");
  check(sweeps.stable_iters >= 1, "config field sweeps.stable_iters must be at least 1");
  check(sweeps.kmeans_restarts >= 1,
        "config field sweeps.kmeans_restarts must be at least 1");
  check(sweeps.kmeans_max_rounds >= 1,
        "config field sweeps.kmeans_max_rounds must be at least 1");
  check(sweeps.min_clusters >= 2, "config field sweeps.min_clusters must be at least 2");

  check(taxonomy.top_k >= 1, "config field taxonomy.top_k must be at least 1");
  check(jobs >= 1, "config field jobs must be at least 1");
}

PipelineConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc, "", {"paths", "preprocessing", "embedding", "assignment",
                                "sweeps", "evaluation", "taxonomy", "seed",
                                "deterministic", "jobs"});
  PipelineConfig config;

  if (doc.contains("paths")) {
    const auto& paths = doc.at("paths");
    reject_unknown_keys(paths, "paths",
                        {"corpus", "lexicon", "base_taxonomy", "output_dir"});
    read_field(paths, "paths", "corpus", config.paths.corpus);
    read_field(paths, "paths", "lexicon", config.paths.lexicon);
    read_field(paths, "paths", "base_taxonomy", config.paths.base_taxonomy);
    read_field(paths, "paths", "output_dir", config.paths.output_dir);
  }

  if (doc.contains("preprocessing")) {
    const auto& pre = doc.at("preprocessing");
    reject_unknown_keys(pre, "preprocessing",
                        {"delimiters", "min_frequency", "min_count", "fold_case",
                         "fold_width"});
    read_field(pre, "preprocessing", "delimiters", config.preprocessing.delimiters);
    read_field(pre, "preprocessing", "min_frequency", config.preprocessing.min_frequency);
    read_field(pre, "preprocessing", "min_count", config.preprocessing.min_count);
    read_field(pre, "preprocessing", "fold_case", config.preprocessing.fold_case);
    read_field(pre, "preprocessing", "fold_width", config.preprocessing.fold_width);
  }

  if (doc.contains("embedding")) {
    const auto& embedding = doc.at("embedding");
    reject_unknown_keys(embedding, "embedding",
                        {"dim", "window", "negatives", "epochs", "learning_rate"});
    read_field(embedding, "embedding", "dim", config.embedding.dim);
    read_field(embedding, "embedding", "window", config.embedding.window);
    read_field(embedding, "embedding", "negatives", config.embedding.negatives);
    read_field(embedding, "embedding", "epochs", config.embedding.epochs);
    read_field(embedding, "embedding", "learning_rate", config.embedding.learning_rate);
  }

  if (doc.contains("assignment")) {
    const auto& assignment = doc.at("assignment");
    reject_unknown_keys(assignment, "assignment", {"min_entities"});
    read_field(assignment, "assignment", "min_entities", config.assignment.min_entities);
  }

  if (doc.contains("sweeps")) {
    const auto& sweeps = doc.at("sweeps");
    reject_unknown_keys(sweeps, "sweeps",
                        {"ap_preferences", "agglomerative_levels", "kmeans_ks", "damping",
                         "max_iter", "stable_iters", "kmeans_restarts",
                         "kmeans_max_rounds", "min_clusters"});
    read_grid(sweeps, "sweeps", "ap_preferences", config.sweeps.ap_preferences);
    read_grid(sweeps, "sweeps", "agglomerative_levels", config.sweeps.agglomerative_levels);
    read_int_grid(sweeps, "sweeps", "kmeans_ks", config.sweeps.kmeans_ks);
    read_field(sweeps, "sweeps", "damping", config.sweeps.damping);
    read_field(sweeps, "sweeps", "max_iter", config.sweeps.max_iter);
    read_field(sweeps, "sweeps", "stable_iters", config.sweeps.stable_iters);
    read_field(sweeps, "sweeps", "kmeans_restarts", config.sweeps.kmeans_restarts);
    read_field(sweeps, "sweeps", "kmeans_max_rounds", config.sweeps.kmeans_max_rounds);
    read_field(sweeps, "sweeps", "min_clusters", config.sweeps.min_clusters);
  }

  if (doc.contains("evaluation")) {
    const auto& evaluation = doc.at("evaluation");
    reject_unknown_keys(evaluation, "evaluation", {"dissimilarity", "neighbor"});
    std::string dissimilarity = dissimilarity_name(config.evaluation.dissimilarity);
    std::string neighbor = neighbor_name(config.evaluation.neighbor);
    read_field(evaluation, "evaluation", "dissimilarity", dissimilarity);
    read_field(evaluation, "evaluation", "neighbor", neighbor);
    config.evaluation.dissimilarity = parse_dissimilarity(dissimilarity);
    config.evaluation.neighbor = parse_neighbor(neighbor);
  }

  if (doc.contains("taxonomy")) {
    const auto& taxonomy = doc.at("taxonomy");
    reject_unknown_keys(taxonomy, "taxonomy", {"top_k", "overrides"});
    read_field(taxonomy, "taxonomy", "top_k", config.taxonomy.top_k);
    read_field(taxonomy, "taxonomy", "overrides", config.taxonomy.overrides);
  }

  read_field(doc, "", "seed", config.seed);
  read_field(doc, "", "deterministic", config.deterministic);
  read_field(doc, "", "jobs", config.jobs);

  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::json config_to_json(const PipelineConfig& config) {
  nlohmann::json doc;
  doc["paths"] = {{"corpus", config.paths.corpus},
                  {"lexicon", config.paths.lexicon},
                  {"base_taxonomy", config.paths.base_taxonomy},
                  {"output_dir", config.paths.output_dir}};
  doc["preprocessing"] = {{"delimiters", config.preprocessing.delimiters},
                          {"min_frequency", config.preprocessing.min_frequency},
                          {"min_count", config.preprocessing.min_count},
                          {"fold_case", config.preprocessing.fold_case},
                          {"fold_width", config.preprocessing.fold_width}};
  doc["embedding"] = {{"dim", config.embedding.dim},
                      {"window", config.embedding.window},
                      {"negatives", config.embedding.negatives},
                      {"epochs", config.embedding.epochs},
                      {"learning_rate", config.embedding.learning_rate}};
  doc["assignment"] = {{"min_entities", config.assignment.min_entities}};
  doc["sweeps"] = {{"ap_preferences",
                    {{"start", config.sweeps.ap_preferences.start},
                     {"stop", config.sweeps.ap_preferences.stop},
                     {"step", config.sweeps.ap_preferences.step}}},
                   {"agglomerative_levels",
                    {{"start", config.sweeps.agglomerative_levels.start},
                     {"stop", config.sweeps.agglomerative_levels.stop},
                     {"step", config.sweeps.agglomerative_levels.step}}},
                   {"kmeans_ks",
                    {{"start", config.sweeps.kmeans_ks.start},
                     {"stop", config.sweeps.kmeans_ks.stop},
                     {"step", config.sweeps.kmeans_ks.step}}},
                   {"damping", config.sweeps.damping},
                   {"max_iter", config.sweeps.max_iter},
                   {"stable_iters", config.sweeps.stable_iters},
                   {"kmeans_restarts", config.sweeps.kmeans_restarts},
                   {"kmeans_max_rounds", config.sweeps.kmeans_max_rounds},
                   {"min_clusters", config.sweeps.min_clusters}};
  doc["evaluation"] = {{"dissimilarity", dissimilarity_name(config.evaluation.dissimilarity)},
                       {"neighbor", neighbor_name(config.evaluation.neighbor)}};
  doc["taxonomy"] = {{"top_k", config.taxonomy.top_k},
                     {"overrides", config.taxonomy.overrides}};
  doc["seed"] = config.seed;
  doc["deterministic"] = config.deterministic;
  doc["jobs"] = config.jobs;
  return doc;
}

}  // namespace taxokit
