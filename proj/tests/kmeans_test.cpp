#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "taxokit/clustering.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/rng.hpp"

using namespace taxokit;

namespace {

std::vector<std::vector<double>> random_vectors(std::size_t n, std::size_t dim,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> vectors(n, std::vector<double>(dim));
  for (auto& v : vectors) {
    for (auto& x : v) x = rng.next_double() + 0.05;
  }
  return vectors;
}

// The line fixture: x in {0, 2, 10, 12} lifted to (x, 1). Normalization bends
// the line onto the unit circle, pulling 2 toward the 10/12 end.
std::vector<std::vector<double>> line_fixture() {
  return {{0.0, 1.0}, {2.0, 1.0}, {10.0, 1.0}, {12.0, 1.0}};
}

}  // namespace

TEST_CASE("k equal to n puts every point alone at zero error") {
  const auto vectors = random_vectors(6, 3, 11);
  const auto result = kmeans(vectors, 6, 0);
  CHECK(result.partition.cluster_count == 6);
  CHECK(result.sse == doctest::Approx(0.0).epsilon(1e-12));
  std::set<std::uint32_t> distinct(result.partition.labels.begin(),
                                   result.partition.labels.end());
  CHECK(distinct.size() == 6);
}

TEST_CASE("k equal to one centers on the normalized mean") {
  const auto vectors = random_vectors(9, 4, 13);
  const auto result = kmeans(vectors, 1, 5);
  CHECK(result.partition.cluster_count == 1);
  for (auto label : result.partition.labels) CHECK(label == 0);
  const double oracle =
      oracles::partition_sse(vectors, std::vector<std::uint32_t>(9, 0));
  CHECK(result.sse == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("line fixture reaches the brute-force optimum from every seed") {
  const auto vectors = line_fixture();
  const auto oracle = oracles::brute_force_kmeans(vectors, 2);
  const double oracle_sse = oracles::partition_sse(vectors, oracle);

  // Normalization makes {0} | {2, 10, 12} optimal, not the arithmetic
  // midpoint split {0, 2} | {10, 12}.
  CHECK(oracle == std::vector<std::uint32_t>{0, 1, 1, 1});
  CHECK(oracle_sse == doctest::Approx(0.0914485).epsilon(1e-4));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto result = kmeans(vectors, 2, seed);
    CHECK(oracles::canonical_labels(result.partition.labels) == oracle);
    CHECK(result.sse == doctest::Approx(oracle_sse).epsilon(1e-9));
  }
}

TEST_CASE("sse history never increases") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 20 + seed * 3;
    const auto vectors = random_vectors(n, 5, 1000 + seed);
    const auto result = kmeans(vectors, 4 + seed % 5, seed);
    REQUIRE(!result.sse_history.empty());
    for (std::size_t r = 1; r < result.sse_history.size(); ++r) {
      CHECK(result.sse_history[r] <= result.sse_history[r - 1] + 1e-12);
    }
    CHECK(result.sse == result.sse_history.back());
    CHECK(result.rounds == static_cast<int>(result.sse_history.size()));
  }
}

TEST_CASE("reported sse matches the oracle objective for the labels") {
  const auto vectors = random_vectors(30, 4, 77);
  const auto result = kmeans(vectors, 5, 3);
  const double oracle = oracles::partition_sse(vectors, result.partition.labels);
  CHECK(result.sse == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("same seed reproduces the identical run") {
  const auto vectors = random_vectors(40, 6, 55);
  const auto first = kmeans(vectors, 7, 42);
  const auto second = kmeans(vectors, 7, 42);
  CHECK(first.partition.labels == second.partition.labels);
  CHECK(first.sse == second.sse);
  CHECK(first.rounds == second.rounds);
}

TEST_CASE("scaling a vector does not change the clustering") {
  auto vectors = random_vectors(15, 3, 8);
  const auto baseline = kmeans(vectors, 3, 9);
  for (auto& x : vectors[4]) x *= 250.0;
  for (auto& x : vectors[9]) x *= 1e-3;
  const auto scaled = kmeans(vectors, 3, 9);
  CHECK(baseline.partition.labels == scaled.partition.labels);
  CHECK(baseline.sse == doctest::Approx(scaled.sse));
}

TEST_CASE("duplicate-heavy input keeps every cluster populated") {
  std::vector<std::vector<double>> vectors(5, {1.0, 0.0});
  vectors.push_back({0.0, 1.0});
  vectors.push_back({0.7, 0.7});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto result = kmeans(vectors, 3, seed);
    std::vector<std::size_t> sizes(3, 0);
    for (auto label : result.partition.labels) {
      REQUIRE(label < 3);
      sizes[label] += 1;
    }
    CHECK(*std::min_element(sizes.begin(), sizes.end()) >= 1);
    for (std::size_t r = 1; r < result.sse_history.size(); ++r) {
      CHECK(result.sse_history[r] <= result.sse_history[r - 1] + 1e-12);
    }
  }
}

TEST_CASE("planted blobs are separated at the right k") {
  const auto blobs = oracles::planted_blobs(4, 15, 8, 0.02, 17);
  const auto result = kmeans(blobs.vectors, 4, 0);
  CHECK(oracles::adjusted_rand_index(result.partition.labels, blobs.labels) == 1.0);
}

TEST_CASE("invalid k-means inputs are rejected") {
  const auto vectors = random_vectors(5, 2, 1);
  CHECK_THROWS_AS(kmeans({}, 1, 0), DataError);
  CHECK_THROWS_AS(kmeans(vectors, 0, 0), DataError);
  CHECK_THROWS_AS(kmeans(vectors, 6, 0), DataError);
  CHECK_THROWS_WITH_AS(kmeans(vectors, 6, 0),
                       "k-means needs 1 <= k <= n, got k=6 for n=5", DataError);
  CHECK_THROWS_AS(kmeans(vectors, 2, 0, 0), ConfigError);
  CHECK_THROWS_AS(kmeans({{1.0, 0.0}, {0.0, 0.0}}, 1, 0), DataError);
  CHECK_THROWS_AS(kmeans({{1.0, 0.0}, {1.0}}, 1, 0), DataError);
}
