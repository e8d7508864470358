#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "taxokit/clustering.hpp"
#include "taxokit/evaluation.hpp"

namespace taxokit {

struct SweepOptions {
  std::vector<double> ap_preferences = ap_preference_grid();
  std::vector<double> agglomerative_levels = agglomerative_level_grid();
  std::vector<int> kmeans_ks = kmeans_k_grid();
  double damping = 0.9;
  int max_iter = 1000;
  int stable_iters = 50;
  int kmeans_restarts = 5;
  int kmeans_max_rounds = 100;
  std::uint64_t seed = 42;
  Dissimilarity dissimilarity = Dissimilarity::cosine;
  NeighborDef neighbor = NeighborDef::cluster_mean;
  int min_clusters = 10;  // recording filter: min_clusters <= k < n
  int jobs = 1;
};

// Attempt that produced no recordable run, with the reason.
struct SweepSkip {
  std::string algorithm;
  double parameter = 0.0;
  std::string reason;
};

struct SweepResult {
  std::vector<ClusterRun> runs;
  std::vector<SweepSkip> skips;
};

SweepResult sweep_ap(const std::string& category_id, const SquareMatrix& similarity,
                     const SquareMatrix& dissimilarity, const SweepOptions& options);

SweepResult sweep_agglomerative(const std::string& category_id,
                                const std::vector<std::vector<double>>& vectors,
                                const SquareMatrix& dissimilarity,
                                const SweepOptions& options);

SweepResult sweep_kmeans(const std::string& category_id,
                         const std::vector<std::vector<double>>& vectors,
                         const SquareMatrix& dissimilarity,
                         const SweepOptions& options);

// One category's full run ledger entry.
struct CategoryRuns {
  std::string category_id;
  std::vector<std::string> entities;  // label order reference
  std::vector<ClusterRun> runs;       // ap, then agglomerative, then kmeans
  std::vector<SweepSkip> skips;
};

// Runs all three sweeps over the category's entity vectors.
CategoryRuns cluster_category(const std::string& category_id,
                              const std::vector<std::string>& entities,
                              const std::vector<std::vector<double>>& vectors,
                              const SweepOptions& options);

// JSON-lines ledger: a category line carrying the entity order, then one
// line per run and per skip.
void save_runs(const std::filesystem::path& path,
               const std::vector<CategoryRuns>& categories);
std::vector<CategoryRuns> load_runs(const std::filesystem::path& path);

}  // namespace taxokit
