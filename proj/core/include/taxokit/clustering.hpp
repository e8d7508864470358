#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taxokit/matrix.hpp"

namespace taxokit {

struct Partition {
  std::vector<std::uint32_t> labels;  // dense 0..k-1
  std::size_t cluster_count = 0;
};

// Relabels arbitrary cluster ids densely in first-appearance order and
// validates the result.
Partition make_partition(const std::vector<std::uint32_t>& labels);

// One clustering attempt on one category, with its quality score attached.
struct ClusterRun {
  std::string category_id;
  std::string algorithm;  // "ap" | "agglomerative" | "kmeans"
  double parameter = 0.0; // preference | similarity level | k
  // Further cut levels that produced this same partition (agglomerative
  // sweeps record duplicate partitions once).
  std::vector<double> parameter_aliases;
  std::uint64_t seed = 0;  // kmeans restarts only
  Partition partition;
  double mean_silhouette = 0.0;
  std::vector<double> silhouettes;  // per entity; empty when reloaded
  bool converged = true;
  int iterations = 0;
};

struct ApResult {
  Partition partition;
  bool converged = false;
  int iterations = 0;
  std::vector<std::size_t> exemplars;  // ascending point indices
};

// Affinity propagation by damped responsibility/availability passing. The
// preference overwrites the similarity diagonal; exemplars are the points
// with positive responsibility+availability self-evidence.
ApResult ap_cluster(const SquareMatrix& similarity, double preference,
                    double damping = 0.9, int max_iter = 1000,
                    int stable_iters = 50);

struct Merge {
  std::uint32_t left = 0;  // node ids: leaves 0..n-1, merge m creates n+m
  std::uint32_t right = 0;
  double similarity = 0.0;
  std::vector<double> centroid;  // mean of all member vectors
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;  // exactly leaves-1 entries
};

// Bottom-up centroid linkage under cosine similarity.
Dendrogram agglomerative(const std::vector<std::vector<double>>& vectors);

// Applies merges in recorded order while their similarity stays >= level and
// stops at the first merge below it, so partitions are nested across levels
// even when centroid linkage inverts.
Partition cut_dendrogram(const Dendrogram& dendrogram, double level);

struct KMeansResult {
  Partition partition;
  int rounds = 0;
  double sse = 0.0;
  std::vector<double> sse_history;  // one entry per round, non-increasing
};

// Lloyd iteration on L2-normalized copies of the vectors, k-means++ seeded.
// Empty clusters are repaired by re-seeding them on the point currently
// farthest from its center.
KMeansResult kmeans(const std::vector<std::vector<double>>& vectors, std::size_t k,
                    std::uint64_t seed, int max_rounds = 100);

// The sweep protocol grids.
std::vector<double> ap_preference_grid();       // 0.00 .. 1.00 step 0.05
std::vector<double> agglomerative_level_grid(); // 0.00 .. 1.00 step 0.02
std::vector<int> kmeans_k_grid();               // 10 .. 120 step 10

}  // namespace taxokit
