#include <algorithm>
#include <cmath>
#include <limits>

#include "taxokit/clustering.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/rng.hpp"

namespace taxokit {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& vectors, std::size_t k,
                    std::uint64_t seed, int max_rounds) {
  const std::size_t n = vectors.size();
  if (n == 0) throw DataError("k-means needs at least one vector");
  if (k == 0 || k > n) {
    throw DataError("k-means needs 1 <= k <= n, got k=" + std::to_string(k) +
                    " for n=" + std::to_string(n));
  }
  if (max_rounds < 1) throw ConfigError("max_rounds must be at least 1");

  const std::size_t dim = vectors[0].size();
  std::vector<std::vector<double>> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) throw DataError("k-means: vectors have mixed dimensions");
    double norm = 0.0;
    for (double x : vectors[i]) norm += x * x;
    if (norm == 0.0) {
      throw DataError("k-means: vector " + std::to_string(i) + " has zero norm");
    }
    norm = std::sqrt(norm);
    points[i].resize(dim);
    for (std::size_t d = 0; d < dim; ++d) points[i][d] = vectors[i][d] / norm;
  }

  // k-means++ seeding.
  Rng rng(seed);
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  centers.push_back(points[rng.next_below(n)]);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = rng.next_double() * total;
      double cumulative = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += d2[i];
        if (r < cumulative) {
          pick = i;
          break;
        }
      }
    } else {
      // Every remaining point coincides with a center; any choice is as
      // good, take the first with nonzero weight or just the first point.
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(points[pick]);
  }

  std::vector<std::uint32_t> labels(n, 0);
  std::vector<std::uint32_t> previous(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::size_t> sizes(k, 0);
  KMeansResult result;

  int round = 0;
  while (round < max_rounds) {
    ++round;

    // Assignment; nearest center, ties to the smaller index.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t choice = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double dist = squared_distance(points[i], centers[c]);
        if (dist < best) {
          best = dist;
          choice = static_cast<std::uint32_t>(c);
        }
      }
      labels[i] = choice;
      sizes[choice] += 1;
    }

    // Repair empty clusters: re-seed each on the point farthest from its
    // current center (donor cluster must keep at least one member). Placing
    // the center on the point itself can only lower the objective.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      double worst = -1.0;
      std::size_t moved = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        double dist = squared_distance(points[i], centers[labels[i]]);
        if (dist > worst) {
          worst = dist;
          moved = i;
        }
      }
      if (moved == n) throw DataError("k-means: cannot repair empty cluster");
      sizes[labels[moved]] -= 1;
      labels[moved] = static_cast<std::uint32_t>(c);
      sizes[c] = 1;
      centers[c] = points[moved];
    }

    // Update.
    for (auto& center : centers) std::fill(center.begin(), center.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) centers[labels[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t d = 0; d < dim; ++d) centers[c][d] /= static_cast<double>(sizes[c]);
    }

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += squared_distance(points[i], centers[labels[i]]);
    result.sse_history.push_back(sse);

    if (labels == previous) break;
    previous = labels;
  }

  result.partition.labels = std::move(labels);
  result.partition.cluster_count = k;
  result.rounds = round;
  result.sse = result.sse_history.back();
  return result;
}

}  // namespace taxokit
