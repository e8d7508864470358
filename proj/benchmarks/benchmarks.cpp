// Microbenchmarks for the pipeline's hot paths. Sizes mirror the per-category
// workloads the sweeps actually see (tens to low hundreds of entities).
#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "taxokit/assignment.hpp"
#include "taxokit/clustering.hpp"
#include "taxokit/corpus.hpp"
#include "taxokit/embedding.hpp"
#include "taxokit/evaluation.hpp"
#include "taxokit/rng.hpp"
#include "taxokit/text.hpp"

namespace {

using namespace taxokit;

std::vector<std::vector<double>> random_vectors(std::size_t n, std::size_t dim,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> vectors(n, std::vector<double>(dim));
  for (auto& v : vectors) {
    for (auto& x : v) x = rng.next_double() + 0.05;
  }
  return vectors;
}

void BM_TokenizeSentence(benchmark::State& state) {
  EntityLexicon lexicon;
  for (const char* surface :
       {"support vector machine", "latent dirichlet allocation", "random forest",
        "social network analysis", "k means"}) {
    lexicon.index[surface] = lexicon.entries.size();
    lexicon.entries.push_back({surface, 10});
  }
  const EntityMatcher matcher(lexicon);
  const DefaultTokenizer tokenizer;
  const std::string sentence =
      "we compare a support vector machine against random forest baselines and "
      "run social network analysis over the citation graph, then k means on the "
      "latent dirichlet allocation topic mixtures for every document in the set";
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize_sentence(sentence, matcher, tokenizer));
  }
}
BENCHMARK(BM_TokenizeSentence);

void BM_ChiSquare(benchmark::State& state) {
  Rng rng(3);
  std::vector<ContingencyTable> tables(1024);
  for (auto& table : tables) {
    table.A = static_cast<std::int64_t>(rng.next_below(500));
    table.B = static_cast<std::int64_t>(rng.next_below(500));
    table.C = static_cast<std::int64_t>(rng.next_below(500));
    table.D = static_cast<std::int64_t>(rng.next_below(500));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_square(tables[i++ & 1023]).value);
  }
}
BENCHMARK(BM_ChiSquare);

void BM_SkipgramStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::vector<std::string> surfaces;
  for (int i = 0; i < 1000; ++i) surfaces.push_back("w" + std::to_string(i));
  EmbeddingModel model(surfaces, dim);
  Rng rng(9);
  for (std::uint32_t id = 0; id < 1000; ++id) {
    auto row = model.mutable_vector(id);
    for (auto& x : row) x = rng.next_double() - 0.5;
  }
  model.output_vectors().assign(surfaces.size() * static_cast<std::size_t>(dim), 0.0);
  for (auto& x : model.output_vectors()) x = rng.next_double() - 0.5;

  const std::vector<std::uint32_t> negatives = {17, 256, 511, 640, 903};
  std::uint32_t center = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(skipgram_step(model, center, center + 1, negatives));
    center = (center + 2) % 998;
  }
}
BENCHMARK(BM_SkipgramStep)->Arg(50)->Arg(200);

void BM_Silhouette(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto vectors = random_vectors(n, 32, 21);
  const auto dissimilarity = pairwise_dissimilarity(vectors);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i % 12);
  const Partition partition = make_partition(labels);
  for (auto _ : state) {
    benchmark::DoNotOptimize(silhouette(partition, dissimilarity).mean);
  }
}
BENCHMARK(BM_Silhouette)->Arg(60)->Arg(120)->Unit(benchmark::kMicrosecond);

void BM_ApCluster(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto vectors = random_vectors(n, 32, 33);
  const auto similarity = similarity_matrix(vectors);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ap_cluster(similarity, 0.5).partition.cluster_count);
  }
}
BENCHMARK(BM_ApCluster)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Agglomerative(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto vectors = random_vectors(n, 32, 45);
  for (auto _ : state) {
    benchmark::DoNotOptimize(agglomerative(vectors).merges.size());
  }
}
BENCHMARK(BM_Agglomerative)->Arg(60)->Arg(120)->Unit(benchmark::kMicrosecond);

void BM_KMeans(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto vectors = random_vectors(n, 32, 57);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans(vectors, 12, seed++).sse);
  }
}
BENCHMARK(BM_KMeans)->Arg(120)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
