#include "taxokit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "taxokit/errors.hpp"

namespace taxokit {

namespace {

std::string format_value(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

int algorithm_rank(const std::string& algorithm) {
  if (algorithm == "ap") return 0;
  if (algorithm == "agglomerative") return 1;
  if (algorithm == "kmeans") return 2;
  throw DataError("unknown algorithm tag: " + algorithm);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

const char* dissimilarity_name(Dissimilarity kind) {
  return kind == Dissimilarity::cosine ? "cosine" : "euclidean";
}

const char* neighbor_name(NeighborDef kind) {
  return kind == NeighborDef::cluster_mean ? "cluster_mean" : "point_min";
}

Dissimilarity parse_dissimilarity(const std::string& name) {
  if (name == "cosine") return Dissimilarity::cosine;
  if (name == "euclidean") return Dissimilarity::euclidean;
  throw ConfigError("unknown dissimilarity: " + name + " (want cosine or euclidean)");
}

NeighborDef parse_neighbor(const std::string& name) {
  if (name == "cluster_mean") return NeighborDef::cluster_mean;
  if (name == "point_min") return NeighborDef::point_min;
  throw ConfigError("unknown neighbor definition: " + name +
                    " (want cluster_mean or point_min)");
}

SquareMatrix pairwise_dissimilarity(const std::vector<std::vector<double>>& vectors,
                                    Dissimilarity kind) {
  SquareMatrix sim = similarity_matrix(vectors);
  SquareMatrix d(sim.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    for (std::size_t j = i + 1; j < sim.size(); ++j) {
      double value = kind == Dissimilarity::cosine
                         ? 1.0 - sim(i, j)
                         : std::sqrt(std::max(0.0, 2.0 - 2.0 * sim(i, j)));
      d(i, j) = value;
      d(j, i) = value;
    }
  }
  return d;
}

SquareMatrix pairwise_dissimilarity(const std::vector<std::string>& entities,
                                    const EmbeddingModel& model, Dissimilarity kind) {
  return pairwise_dissimilarity(gather_vectors(entities, model), kind);
}

SilhouetteReport silhouette(const Partition& partition,
                            const SquareMatrix& dissimilarity, NeighborDef neighbor,
                            Dissimilarity kind) {
  const std::size_t n = partition.labels.size();
  if (n != dissimilarity.size()) {
    throw DataError("silhouette: partition and matrix sizes differ");
  }
  if (n < 2 || partition.cluster_count < 2) {
    throw DataError("silhouette undefined for fewer than two clusters");
  }
  if (!dissimilarity.is_symmetric(0.0)) {
    throw DataError("silhouette needs a symmetric dissimilarity matrix");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dissimilarity(i, i) != 0.0) {
      throw DataError("silhouette needs a zero-diagonal dissimilarity matrix");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (dissimilarity(i, j) < 0.0) {
        throw DataError("silhouette needs non-negative dissimilarities");
      }
    }
  }

  const std::size_t k = partition.cluster_count;
  std::vector<std::size_t> sizes(k, 0);
  for (std::uint32_t label : partition.labels) {
    if (label >= k) throw DataError("silhouette: label out of range");
    sizes[label] += 1;
  }

  SilhouetteReport report;
  report.definition = dissimilarity_name(kind);
  report.values.resize(n, 0.0);

  std::vector<double> to_cluster(k);
  std::vector<double> nearest(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t own = partition.labels[i];
    if (sizes[own] == 1) {
      report.values[i] = 0.0;  // singleton convention
      continue;
    }

    std::fill(to_cluster.begin(), to_cluster.end(), 0.0);
    std::fill(nearest.begin(), nearest.end(), std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::uint32_t other = partition.labels[j];
      to_cluster[other] += dissimilarity(i, j);
      nearest[other] = std::min(nearest[other], dissimilarity(i, j));
    }

    double a = to_cluster[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      double candidate = neighbor == NeighborDef::cluster_mean
                             ? to_cluster[c] / static_cast<double>(sizes[c])
                             : nearest[c];
      b = std::min(b, candidate);
    }

    double denom = std::max(a, b);
    double s = denom == 0.0 ? 0.0 : (b - a) / denom;
    report.values[i] = std::clamp(s, -1.0, 1.0);
    total += report.values[i];
  }
  report.mean = total / static_cast<double>(n);
  return report;
}

const ClusterRun& select_best(const std::vector<ClusterRun>& runs) {
  if (runs.empty()) throw DataError("no admissible runs");
  const ClusterRun* best = &runs[0];
  for (const auto& run : runs) {
    if (run.mean_silhouette > best->mean_silhouette) {
      best = &run;
      continue;
    }
    if (run.mean_silhouette < best->mean_silhouette) continue;
    if (run.partition.cluster_count != best->partition.cluster_count) {
      if (run.partition.cluster_count < best->partition.cluster_count) best = &run;
      continue;
    }
    int lhs = algorithm_rank(run.algorithm);
    int rhs = algorithm_rank(best->algorithm);
    if (lhs != rhs) {
      if (lhs < rhs) best = &run;
      continue;
    }
    if (run.parameter < best->parameter) best = &run;
  }
  return *best;
}

ComparisonReport compare_algorithms(const std::vector<ClusterRun>& best_runs) {
  if (best_runs.empty()) throw DataError("algorithm comparison needs at least one run");

  std::map<std::string, CategoryComparison> grouped;
  for (const auto& run : best_runs) {
    algorithm_rank(run.algorithm);
    auto& entry = grouped[run.category_id];
    entry.category_id = run.category_id;
    auto [it, inserted] = entry.cells.emplace(run.algorithm, ComparisonCell{});
    if (!inserted) {
      throw DataError("duplicate best run for category " + run.category_id +
                      ", algorithm " + run.algorithm);
    }
    it->second.present = true;
    it->second.mean_silhouette = run.mean_silhouette;
    it->second.parameter = run.parameter;
    it->second.k = run.partition.cluster_count;
  }

  ComparisonReport report;
  std::map<std::string, double> mean_sum;
  std::map<std::string, int> mean_count;
  for (auto& [category, comparison] : grouped) {
    const std::string* winner = nullptr;
    double winner_mean = 0.0;
    for (const auto& [algorithm, cell] : comparison.cells) {
      mean_sum[algorithm] += cell.mean_silhouette;
      mean_count[algorithm] += 1;
      bool better = winner == nullptr || cell.mean_silhouette > winner_mean ||
                    (cell.mean_silhouette == winner_mean &&
                     algorithm_rank(algorithm) < algorithm_rank(*winner));
      if (better) {
        winner = &algorithm;
        winner_mean = cell.mean_silhouette;
      }
    }
    comparison.winner = *winner;
    report.wins[*winner] += 1;
    report.categories.push_back(std::move(comparison));
  }

  for (const auto& [algorithm, count] : mean_count) {
    report.mean_of_means[algorithm] = mean_sum[algorithm] / count;
    if (report.wins.find(algorithm) == report.wins.end()) report.wins[algorithm] = 0;
  }

  for (const auto& [algorithm, mean] : report.mean_of_means) {
    (void)mean;
    report.ranking.push_back(algorithm);
  }
  std::sort(report.ranking.begin(), report.ranking.end(),
            [&](const std::string& x, const std::string& y) {
              if (report.wins[x] != report.wins[y]) {
                return report.wins[x] > report.wins[y];
              }
              if (report.mean_of_means[x] != report.mean_of_means[y]) {
                return report.mean_of_means[x] > report.mean_of_means[y];
              }
              return algorithm_rank(x) < algorithm_rank(y);
            });
  report.winner = report.ranking.front();
  return report;
}

void save_comparison_json(const std::filesystem::path& path,
                          const ComparisonReport& report) {
  nlohmann::json doc;
  auto& categories = doc["categories"] = nlohmann::json::array();
  for (const auto& comparison : report.categories) {
    nlohmann::json item;
    item["id"] = comparison.category_id;
    item["winner"] = comparison.winner;
    auto& cells = item["algorithms"] = nlohmann::json::object();
    for (const auto& [algorithm, cell] : comparison.cells) {
      cells[algorithm] = {{"mean_silhouette", cell.mean_silhouette},
                          {"parameter", cell.parameter},
                          {"k", cell.k}};
    }
    categories.push_back(std::move(item));
  }
  doc["wins"] = report.wins;
  doc["mean_of_means"] = report.mean_of_means;
  doc["ranking"] = report.ranking;
  doc["winner"] = report.winner;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write comparison file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed while writing comparison file: " + path.string());
}

void save_comparison_csv(const std::filesystem::path& path,
                         const ComparisonReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write comparison CSV: " + path.string());
  out << "category,algorithm,parameter,k,mean_silhouette\n";
  for (const auto& comparison : report.categories) {
    for (const auto& [algorithm, cell] : comparison.cells) {
      out << csv_field(comparison.category_id) << ',' << algorithm << ','
          << format_value(cell.parameter) << ',' << cell.k << ','
          << format_value(cell.mean_silhouette) << '\n';
    }
  }
  if (!out) throw DataError("failed while writing comparison CSV: " + path.string());
}

}  // namespace taxokit
