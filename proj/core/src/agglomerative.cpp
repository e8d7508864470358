#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "taxokit/clustering.hpp"
#include "taxokit/errors.hpp"

namespace taxokit {

namespace {

double cosine_of_sums(const std::vector<double>& a, double norm_a,
                      const std::vector<double>& b, double norm_b) {
  double dot = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) dot += a[d] * b[d];
  return std::clamp(dot / (norm_a * norm_b), -1.0, 1.0);
}

double norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

Dendrogram agglomerative(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw DataError("agglomerative clustering needs at least two vectors");
  const std::size_t dim = vectors[0].size();

  // Cluster representative = mean of members; for cosine purposes the member
  // sum works directly since the 1/count factors cancel.
  struct Node {
    std::uint32_t id;
    std::vector<double> sum;
    double sum_norm;
    std::size_t count;
  };
  std::vector<Node> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) {
      throw DataError("agglomerative clustering: vectors have mixed dimensions");
    }
    double len = norm(vectors[i]);
    if (len == 0.0) {
      throw DataError("agglomerative clustering: vector " + std::to_string(i) +
                      " has zero norm");
    }
    active.push_back({static_cast<std::uint32_t>(i), vectors[i], len, 1});
  }

  Dendrogram tree;
  tree.leaves = n;
  tree.merges.reserve(n - 1);

  for (std::size_t m = 0; m + 1 < n; ++m) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        double sim = cosine_of_sums(active[i].sum, active[i].sum_norm,
                                    active[j].sum, active[j].sum_norm);
        // Ties fall to the smallest (left, right) id pair; the scan order
        // with a strict > delivers exactly that.
        if (sim > best) {
          best = sim;
          bi = i;
          bj = j;
        }
      }
    }

    Node merged;
    merged.id = static_cast<std::uint32_t>(n + m);
    merged.count = active[bi].count + active[bj].count;
    merged.sum.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      merged.sum[d] = active[bi].sum[d] + active[bj].sum[d];
    }
    merged.sum_norm = norm(merged.sum);
    if (merged.sum_norm == 0.0) {
      throw DataError("agglomerative clustering: merged centroid has zero norm");
    }

    Merge record;
    record.left = active[bi].id;
    record.right = active[bj].id;
    record.similarity = best;
    record.centroid.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      record.centroid[d] = merged.sum[d] / static_cast<double>(merged.count);
    }
    tree.merges.push_back(std::move(record));

    active.erase(active.begin() + bj);
    active.erase(active.begin() + bi);
    active.push_back(std::move(merged));
  }
  return tree;
}

Partition cut_dendrogram(const Dendrogram& dendrogram, double level) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw ConfigError("similarity level must lie in [0, 1]");
  }
  const std::size_t n = dendrogram.leaves;
  if (n == 0) throw DataError("cut on an empty dendrogram");
  if (dendrogram.merges.size() + 1 != n) {
    throw DataError("dendrogram must hold exactly n-1 merges");
  }

  // Union-find over node ids; merge m creates node n+m.
  std::vector<std::uint32_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  for (std::size_t m = 0; m < dendrogram.merges.size(); ++m) {
    const Merge& merge = dendrogram.merges[m];
    if (merge.similarity < level) break;  // prefix cut
    std::uint32_t node = static_cast<std::uint32_t>(n + m);
    parent[find(merge.left)] = node;
    parent[find(merge.right)] = node;
  }

  std::vector<std::uint32_t> roots(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = find(static_cast<std::uint32_t>(i));
  std::vector<std::int64_t> dense(2 * n - 1, -1);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dense[roots[i]] < 0) dense[roots[i]] = next++;
    labels[i] = static_cast<std::uint32_t>(dense[roots[i]]);
  }

  Partition p;
  p.labels = std::move(labels);
  p.cluster_count = next;
  return p;
}

}  // namespace taxokit
