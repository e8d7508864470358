#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "taxokit/clustering.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/rng.hpp"

namespace taxokit {

namespace {

// Symmetric instances (duplicate points, equidistant pairs) have degenerate
// fixed points where every self-evidence lands exactly on zero and no
// exemplar set can form. A tiny input-keyed perturbation breaks those orbits
// deterministically; it is far below any meaningful similarity difference.
double jitter(std::size_t i, std::size_t k) {
  Rng rng(mix_seed(static_cast<std::uint64_t>(i) + 1,
                   static_cast<std::uint64_t>(k) + 1));
  return rng.next_double();
}

}  // namespace

Partition make_partition(const std::vector<std::uint32_t>& labels) {
  if (labels.empty()) throw DataError("partition needs at least one point");
  Partition p;
  p.labels.reserve(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  dense.reserve(labels.size());
  for (std::uint32_t label : labels) {
    const auto it =
        dense.emplace(label, static_cast<std::uint32_t>(dense.size())).first;
    p.labels.push_back(it->second);
  }
  p.cluster_count = dense.size();
  return p;
}

ApResult ap_cluster(const SquareMatrix& similarity, double preference,
                    double damping, int max_iter, int stable_iters) {
  const std::size_t n = similarity.size();
  if (n == 0) throw DataError("affinity propagation needs at least one point");
  if (!similarity.is_symmetric(0.0)) {
    throw DataError("affinity propagation needs a symmetric similarity matrix");
  }
  if (!std::isfinite(preference)) throw ConfigError("preference must be finite");
  if (!(damping >= 0.5 && damping < 1.0)) {
    throw ConfigError("damping must lie in [0.5, 1)");
  }
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (stable_iters < 1) throw ConfigError("stable_iters must be at least 1");

  ApResult result;
  if (n == 1) {
    result.partition.labels = {0};
    result.partition.cluster_count = 1;
    result.converged = true;
    result.exemplars = {0};
    return result;
  }

  SquareMatrix s = similarity;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = preference;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::fabs(s(i, k)));
  }
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) s(i, k) += 1e-12 * scale * jitter(i, k);
  }

  SquareMatrix r(n), a(n);
  std::vector<bool> exemplar(n, false), previous(n, false);
  int stable = 0;
  bool converged = false;
  int iter = 0;

  while (iter < max_iter) {
    ++iter;

    // Responsibilities: r(i,k) <- s(i,k) - max_{k' != k} (a(i,k') + s(i,k')).
    for (std::size_t i = 0; i < n; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      double second = best;
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < n; ++k) {
        double v = a(i, k) + s(i, k);
        if (v > best) {
          second = best;
          best = v;
          best_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        double fresh = s(i, k) - (k == best_k ? second : best);
        r(i, k) = damping * r(i, k) + (1.0 - damping) * fresh;
      }
    }

    // Availabilities: a(i,k) <- min(0, r(k,k) + sum of others' positive
    // responsibilities); the self-availability takes the plain sum.
    for (std::size_t k = 0; k < n; ++k) {
      double positive_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) positive_sum += std::max(0.0, r(i, k));
      }
      for (std::size_t i = 0; i < n; ++i) {
        double fresh;
        if (i == k) {
          fresh = positive_sum;
        } else {
          fresh = std::min(0.0, r(k, k) + positive_sum - std::max(0.0, r(i, k)));
        }
        a(i, k) = damping * a(i, k) + (1.0 - damping) * fresh;
      }
    }

    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      exemplar[k] = r(k, k) + a(k, k) > 0.0;
      any = any || exemplar[k];
    }
    if (any && exemplar == previous) {
      if (++stable >= stable_iters) {
        converged = true;
        break;
      }
    } else {
      stable = 0;
      previous = exemplar;
    }
  }

  std::vector<std::size_t> exemplars;
  for (std::size_t k = 0; k < n; ++k) {
    if (exemplar[k]) exemplars.push_back(k);
  }
  if (exemplars.empty()) {
    // No point accumulated positive self-evidence; fall back to the single
    // strongest candidate so the result is still a partition.
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (r(k, k) + a(k, k) > r(best, best) + a(best, best)) best = k;
    }
    exemplars.push_back(best);
    converged = false;
  }

  std::vector<std::uint32_t> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t choice = exemplars[0];
    for (std::size_t e : exemplars) {
      if (e == i) {
        choice = e;
        break;
      }
      if (s(i, e) > s(i, choice)) choice = e;
    }
    labels[i] = static_cast<std::uint32_t>(
        std::lower_bound(exemplars.begin(), exemplars.end(), choice) -
        exemplars.begin());
  }

  result.partition.labels = std::move(labels);
  result.partition.cluster_count = exemplars.size();
  result.converged = converged;
  result.iterations = iter;
  result.exemplars = std::move(exemplars);
  return result;
}

}  // namespace taxokit
