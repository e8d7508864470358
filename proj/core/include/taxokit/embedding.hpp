#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxokit/corpus.hpp"
#include "taxokit/matrix.hpp"
#include "taxokit/rng.hpp"

namespace taxokit {

struct EmbeddingConfig {
  int dim = 200;
  int window = 5;  // context half-width in tokens
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;  // initial; decays linearly
  std::uint64_t seed = 42;
  bool deterministic = true;  // single-threaded, bit-reproducible
  int threads = 1;            // used only when deterministic is false

  void validate() const;  // throws ConfigError
};

// Distributed token representations. Input vectors are the embeddings; the
// output matrix is kept after training so training can be resumed, and is
// empty on models loaded from disk.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::vector<std::string> tokens, int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::span<const double> vector(std::uint32_t id) const;
  std::span<double> mutable_vector(std::uint32_t id);

  // Accepts both the raw surface and its encoded on-disk form.
  std::optional<std::uint32_t> find(const std::string& surface) const;

  std::vector<double>& output_vectors() { return output_; }
  const std::vector<double>& output_vectors() const { return output_; }

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<double> input_;   // size() * dim, row major
  std::vector<double> output_;  // empty unless produced by training
};

// On-disk token form: spaces become underscores so the conventional
// line-oriented text format stays parseable. Lookups encode the query, so
// the mapping never has to be inverted.
std::string encode_model_token(std::string_view surface);

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_losses;  // mean loss per pair, one entry per epoch
};

// Skip-gram with negative sampling over the corpus sentence streams.
TrainResult train_embeddings(const Corpus& corpus, const EmbeddingConfig& config);

// One positive pair plus its negative samples: loss and the gradients with
// respect to every touched vector. Exposed so the inner loop can be checked
// against finite differences.
struct SgnsStep {
  double loss = 0.0;
  std::vector<double> grad_center;                  // wrt input[center]
  std::vector<double> grad_context;                 // wrt output[context]
  std::vector<std::vector<double>> grad_negatives;  // wrt output[negatives[i]]
};

SgnsStep skipgram_step(const EmbeddingModel& model, std::uint32_t center,
                       std::uint32_t context,
                       std::span<const std::uint32_t> negatives);

// Unigram^power draw used for negative sampling.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const std::int64_t> counts, double power = 0.75);
  std::uint32_t sample(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Symmetric cosine matrix with unit diagonal, each unordered pair computed
// once.
SquareMatrix similarity_matrix(const std::vector<std::vector<double>>& vectors);

// Vectors for the given entities; throws DataError listing every entity the
// model does not cover.
std::vector<std::vector<double>> gather_vectors(const std::vector<std::string>& entities,
                                                const EmbeddingModel& model);

SquareMatrix similarity_matrix(const std::vector<std::string>& entities,
                               const EmbeddingModel& model);

void save_model(const std::filesystem::path& path, const EmbeddingModel& model);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace taxokit
