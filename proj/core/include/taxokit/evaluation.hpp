#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "taxokit/clustering.hpp"
#include "taxokit/embedding.hpp"
#include "taxokit/matrix.hpp"

namespace taxokit {

enum class Dissimilarity { cosine, euclidean };

// How b_i reads "dissimilarity to other clusters": the standard mean over
// each cluster, or the nearest single point (kept for sensitivity checks).
enum class NeighborDef { cluster_mean, point_min };

const char* dissimilarity_name(Dissimilarity kind);
const char* neighbor_name(NeighborDef kind);
Dissimilarity parse_dissimilarity(const std::string& name);
NeighborDef parse_neighbor(const std::string& name);

// d = 1 - cosine, or the Euclidean distance between L2-normalized vectors.
SquareMatrix pairwise_dissimilarity(const std::vector<std::vector<double>>& vectors,
                                    Dissimilarity kind = Dissimilarity::cosine);
SquareMatrix pairwise_dissimilarity(const std::vector<std::string>& entities,
                                    const EmbeddingModel& model,
                                    Dissimilarity kind = Dissimilarity::cosine);

struct SilhouetteReport {
  std::vector<double> values;  // one per entity, each in [-1, 1]
  double mean = 0.0;           // over all entities, singletons included
  std::string definition;      // dissimilarity tag
};

SilhouetteReport silhouette(const Partition& partition,
                            const SquareMatrix& dissimilarity,
                            NeighborDef neighbor = NeighborDef::cluster_mean,
                            Dissimilarity kind = Dissimilarity::cosine);

// Argmax mean silhouette; ties prefer smaller k, then ap < agglomerative <
// kmeans, then the smaller parameter.
const ClusterRun& select_best(const std::vector<ClusterRun>& runs);

struct ComparisonCell {
  bool present = false;
  double mean_silhouette = 0.0;
  double parameter = 0.0;
  std::size_t k = 0;
};

struct CategoryComparison {
  std::string category_id;
  std::map<std::string, ComparisonCell> cells;  // keyed by algorithm tag
  std::string winner;                           // best present algorithm
};

struct ComparisonReport {
  std::vector<CategoryComparison> categories;   // category id order
  std::map<std::string, int> wins;              // per present algorithm
  std::map<std::string, double> mean_of_means;  // over categories with a cell
  std::vector<std::string> ranking;             // wins desc, then mean of means
  std::string winner;
};

// Takes each category's best run per algorithm (at most one per pair).
ComparisonReport compare_algorithms(const std::vector<ClusterRun>& best_runs);

void save_comparison_json(const std::filesystem::path& path, const ComparisonReport& report);
void save_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report);

}  // namespace taxokit
