#include "taxokit/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "taxokit/errors.hpp"
#include "taxokit/parallel.hpp"
#include "taxokit/rng.hpp"

namespace taxokit {

namespace {

std::string filter_reason(std::size_t k, int min_clusters, std::size_t n) {
  return "k=" + std::to_string(k) + " outside [" + std::to_string(min_clusters) +
         ", " + std::to_string(n) + ")";
}

bool passes_filter(std::size_t k, const SweepOptions& options, std::size_t n) {
  return k >= static_cast<std::size_t>(options.min_clusters) && k < n;
}

void validate_options(const SweepOptions& options) {
  if (options.min_clusters < 2) throw ConfigError("min_clusters must be at least 2");
  if (options.kmeans_restarts < 1) throw ConfigError("kmeans_restarts must be at least 1");
}

}  // namespace

std::vector<double> ap_preference_grid() {
  std::vector<double> grid;
  grid.reserve(21);
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

std::vector<double> agglomerative_level_grid() {
  std::vector<double> grid;
  grid.reserve(51);
  for (int i = 0; i <= 50; ++i) grid.push_back(i / 50.0);
  return grid;
}

std::vector<int> kmeans_k_grid() {
  std::vector<int> grid;
  grid.reserve(12);
  for (int k = 10; k <= 120; k += 10) grid.push_back(k);
  return grid;
}

SweepResult sweep_ap(const std::string& category_id, const SquareMatrix& similarity,
                     const SquareMatrix& dissimilarity, const SweepOptions& options) {
  validate_options(options);
  const std::size_t n = similarity.size();
  if (n == 0) throw DataError("sweep over an empty similarity matrix");
  if (dissimilarity.size() != n) {
    throw DataError("similarity and dissimilarity sizes differ");
  }

  const auto& grid = options.ap_preferences;
  std::vector<std::optional<ClusterRun>> slots(grid.size());
  std::vector<std::optional<SweepSkip>> skip_slots(grid.size());

  parallel_for(grid.size(), options.jobs, [&](std::size_t g) {
    ApResult ap = ap_cluster(similarity, grid[g], options.damping, options.max_iter,
                             options.stable_iters);
    std::size_t k = ap.partition.cluster_count;
    if (!passes_filter(k, options, n)) {
      skip_slots[g] = SweepSkip{"ap", grid[g], filter_reason(k, options.min_clusters, n)};
      return;
    }
    SilhouetteReport score = silhouette(ap.partition, dissimilarity, options.neighbor,
                                        options.dissimilarity);
    ClusterRun run;
    run.category_id = category_id;
    run.algorithm = "ap";
    run.parameter = grid[g];
    run.partition = std::move(ap.partition);
    run.mean_silhouette = score.mean;
    run.silhouettes = std::move(score.values);
    run.converged = ap.converged;
    run.iterations = ap.iterations;
    slots[g] = std::move(run);
  });

  SweepResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (slots[g]) result.runs.push_back(std::move(*slots[g]));
    if (skip_slots[g]) result.skips.push_back(std::move(*skip_slots[g]));
  }
  return result;
}

SweepResult sweep_agglomerative(const std::string& category_id,
                                const std::vector<std::vector<double>>& vectors,
                                const SquareMatrix& dissimilarity,
                                const SweepOptions& options) {
  validate_options(options);
  const std::size_t n = vectors.size();
  if (dissimilarity.size() != n) {
    throw DataError("vectors and dissimilarity sizes differ");
  }

  SweepResult result;
  if (n < 2) {
    for (double level : options.agglomerative_levels) {
      result.skips.push_back(
          {"agglomerative", level, "fewer than two vectors"});
    }
    return result;
  }

  Dendrogram tree = agglomerative(vectors);
  // Cut at every level; identical partitions collapse into one run that
  // lists the other producing levels as aliases.
  for (double level : options.agglomerative_levels) {
    Partition cut = cut_dendrogram(tree, level);
    std::size_t k = cut.cluster_count;
    if (!passes_filter(k, options, n)) {
      result.skips.push_back(
          {"agglomerative", level, filter_reason(k, options.min_clusters, n)});
      continue;
    }
    auto duplicate = std::find_if(result.runs.begin(), result.runs.end(),
                                  [&](const ClusterRun& run) {
                                    return run.partition.labels == cut.labels;
                                  });
    if (duplicate != result.runs.end()) {
      duplicate->parameter_aliases.push_back(level);
      continue;
    }
    SilhouetteReport score =
        silhouette(cut, dissimilarity, options.neighbor, options.dissimilarity);
    ClusterRun run;
    run.category_id = category_id;
    run.algorithm = "agglomerative";
    run.parameter = level;
    run.partition = std::move(cut);
    run.mean_silhouette = score.mean;
    run.silhouettes = std::move(score.values);
    result.runs.push_back(std::move(run));
  }
  return result;
}

SweepResult sweep_kmeans(const std::string& category_id,
                         const std::vector<std::vector<double>>& vectors,
                         const SquareMatrix& dissimilarity,
                         const SweepOptions& options) {
  validate_options(options);
  const std::size_t n = vectors.size();
  if (dissimilarity.size() != n) {
    throw DataError("vectors and dissimilarity sizes differ");
  }

  const auto& grid = options.kmeans_ks;
  std::vector<std::optional<ClusterRun>> slots(grid.size());
  std::vector<std::optional<SweepSkip>> skip_slots(grid.size());

  parallel_for(grid.size(), options.jobs, [&](std::size_t g) {
    const int k = grid[g];
    if (k < 1 || static_cast<std::size_t>(k) > n) {
      skip_slots[g] = SweepSkip{"kmeans", static_cast<double>(k), "k > n"};
      return;
    }

    KMeansResult best;
    std::uint64_t best_seed = 0;
    for (int restart = 0; restart < options.kmeans_restarts; ++restart) {
      std::uint64_t seed = mix_seed(mix_seed(options.seed, static_cast<std::uint64_t>(k)),
                                    static_cast<std::uint64_t>(restart));
      KMeansResult attempt = kmeans(vectors, static_cast<std::size_t>(k), seed,
                                    options.kmeans_max_rounds);
      if (restart == 0 || attempt.sse < best.sse) {
        best = std::move(attempt);
        best_seed = seed;
      }
    }

    std::size_t actual = best.partition.cluster_count;
    if (!passes_filter(actual, options, n)) {
      skip_slots[g] = SweepSkip{"kmeans", static_cast<double>(k),
                                filter_reason(actual, options.min_clusters, n)};
      return;
    }
    SilhouetteReport score = silhouette(best.partition, dissimilarity,
                                        options.neighbor, options.dissimilarity);
    ClusterRun run;
    run.category_id = category_id;
    run.algorithm = "kmeans";
    run.parameter = static_cast<double>(k);
    run.seed = best_seed;
    run.partition = std::move(best.partition);
    run.mean_silhouette = score.mean;
    run.silhouettes = std::move(score.values);
    run.converged = true;
    run.iterations = best.rounds;
    slots[g] = std::move(run);
  });

  SweepResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (slots[g]) result.runs.push_back(std::move(*slots[g]));
    if (skip_slots[g]) result.skips.push_back(std::move(*skip_slots[g]));
  }
  return result;
}

CategoryRuns cluster_category(const std::string& category_id,
                              const std::vector<std::string>& entities,
                              const std::vector<std::vector<double>>& vectors,
                              const SweepOptions& options) {
  if (entities.size() != vectors.size()) {
    throw DataError("entity list and vector list sizes differ");
  }
  if (vectors.empty()) throw DataError("cluster_category needs at least one vector");

  SquareMatrix sim = similarity_matrix(vectors);
  SquareMatrix dissim(sim.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    for (std::size_t j = i + 1; j < sim.size(); ++j) {
      double value = options.dissimilarity == Dissimilarity::cosine
                         ? 1.0 - sim(i, j)
                         : std::sqrt(std::max(0.0, 2.0 - 2.0 * sim(i, j)));
      dissim(i, j) = value;
      dissim(j, i) = value;
    }
  }

  CategoryRuns out;
  out.category_id = category_id;
  out.entities = entities;
  for (SweepResult part : {sweep_ap(category_id, sim, dissim, options),
                           sweep_agglomerative(category_id, vectors, dissim, options),
                           sweep_kmeans(category_id, vectors, dissim, options)}) {
    std::move(part.runs.begin(), part.runs.end(), std::back_inserter(out.runs));
    std::move(part.skips.begin(), part.skips.end(), std::back_inserter(out.skips));
  }
  return out;
}

void save_runs(const std::filesystem::path& path,
               const std::vector<CategoryRuns>& categories) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write run ledger: " + path.string());

  for (const auto& category : categories) {
    nlohmann::json header;
    header["type"] = "category";
    header["id"] = category.category_id;
    header["entities"] = category.entities;
    out << header.dump() << '\n';

    for (const auto& run : category.runs) {
      nlohmann::json line;
      line["type"] = "run";
      line["category"] = run.category_id;
      line["algorithm"] = run.algorithm;
      line["parameter"] = run.parameter;
      if (!run.parameter_aliases.empty()) line["parameter_aliases"] = run.parameter_aliases;
      if (run.algorithm == "kmeans") line["seed"] = run.seed;
      line["k"] = run.partition.cluster_count;
      line["labels"] = run.partition.labels;
      line["mean_silhouette"] = run.mean_silhouette;
      line["converged"] = run.converged;
      line["iterations"] = run.iterations;
      out << line.dump() << '\n';
    }
    for (const auto& skip : category.skips) {
      nlohmann::json line;
      line["type"] = "skip";
      line["category"] = category.category_id;
      line["algorithm"] = skip.algorithm;
      line["parameter"] = skip.parameter;
      line["reason"] = skip.reason;
      out << line.dump() << '\n';
    }
  }
  if (!out) throw DataError("failed while writing run ledger: " + path.string());
}

std::vector<CategoryRuns> load_runs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run ledger: " + path.string());

  std::vector<CategoryRuns> categories;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      nlohmann::json entry = nlohmann::json::parse(line);
      const std::string type = entry.value("type", "");
      if (type == "category") {
        CategoryRuns category;
        category.category_id = entry.at("id").get<std::string>();
        category.entities = entry.at("entities").get<std::vector<std::string>>();
        categories.push_back(std::move(category));
      } else if (type == "skip") {
        if (categories.empty()) {
          throw ParseError(path.string(), line_no, "type",
                           "skip line before any category line");
        }
        SweepSkip skip;
        skip.algorithm = entry.at("algorithm").get<std::string>();
        skip.parameter = entry.at("parameter").get<double>();
        skip.reason = entry.at("reason").get<std::string>();
        categories.back().skips.push_back(std::move(skip));
      } else if (type == "run") {
        if (categories.empty()) {
          throw ParseError(path.string(), line_no, "type",
                           "run line before any category line");
        }
        auto& category = categories.back();
        ClusterRun run;
        run.category_id = entry.at("category").get<std::string>();
        run.algorithm = entry.at("algorithm").get<std::string>();
        run.parameter = entry.at("parameter").get<double>();
        if (entry.contains("parameter_aliases")) {
          run.parameter_aliases = entry["parameter_aliases"].get<std::vector<double>>();
        }
        run.seed = entry.value("seed", std::uint64_t{0});
        run.partition.labels = entry.at("labels").get<std::vector<std::uint32_t>>();
        run.partition.cluster_count = entry.at("k").get<std::size_t>();
        run.mean_silhouette = entry.at("mean_silhouette").get<double>();
        run.converged = entry.at("converged").get<bool>();
        run.iterations = entry.at("iterations").get<int>();
        if (run.partition.labels.size() != category.entities.size()) {
          throw ParseError(path.string(), line_no, "labels",
                           "label count differs from the category entity count");
        }
        for (std::uint32_t label : run.partition.labels) {
          if (label >= run.partition.cluster_count) {
            throw ParseError(path.string(), line_no, "labels", "label out of range");
          }
        }
        category.runs.push_back(std::move(run));
      } else {
        throw ParseError(path.string(), line_no, "type", "unknown line type: " + type);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), line_no, "json", e.what());
    }
  }
  return categories;
}

}  // namespace taxokit
