#include "taxokit/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "taxokit/errors.hpp"
#include "taxokit/parallel.hpp"

namespace taxokit {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// ln(1 + e^x) without overflow for large |x|.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double dot(const double* a, const double* b, int dim) {
  double sum = 0.0;
  for (int d = 0; d < dim; ++d) sum += a[d] * b[d];
  return sum;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

void EmbeddingConfig::validate() const {
  if (dim < 1) throw ConfigError("embedding dim must be at least 1");
  if (window < 1) throw ConfigError("embedding window must be at least 1");
  if (negatives < 0) throw ConfigError("embedding negatives must not be negative");
  if (epochs < 1) throw ConfigError("embedding epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("embedding learning_rate must be positive");
  if (threads < 1) throw ConfigError("embedding threads must be at least 1");
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> tokens, int dim)
    : dim_(dim), tokens_(std::move(tokens)) {
  if (dim < 1) throw ConfigError("embedding dim must be at least 1");
  ids_.reserve(tokens_.size());
  for (std::uint32_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], i).second) {
      throw DataError("duplicate token in embedding model: " + tokens_[i]);
    }
  }
  input_.assign(tokens_.size() * static_cast<std::size_t>(dim_), 0.0);
}

std::span<const double> EmbeddingModel::vector(std::uint32_t id) const {
  if (id >= tokens_.size()) throw DataError("embedding token id out of range");
  return {input_.data() + static_cast<std::size_t>(id) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::span<double> EmbeddingModel::mutable_vector(std::uint32_t id) {
  if (id >= tokens_.size()) throw DataError("embedding token id out of range");
  return {input_.data() + static_cast<std::size_t>(id) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::optional<std::uint32_t> EmbeddingModel::find(const std::string& surface) const {
  auto it = ids_.find(surface);
  if (it == ids_.end()) it = ids_.find(encode_model_token(surface));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string encode_model_token(std::string_view surface) {
  std::string encoded(surface);
  std::replace(encoded.begin(), encoded.end(), ' ', '_');
  return encoded;
}

NegativeSampler::NegativeSampler(std::span<const std::int64_t> counts, double power) {
  cumulative_.reserve(counts.size());
  double total = 0.0;
  for (std::int64_t c : counts) {
    if (c < 0) throw DataError("negative token count in sampler");
    total += std::pow(static_cast<double>(c), power);
    cumulative_.push_back(total);
  }
  if (cumulative_.empty() || total <= 0.0) {
    throw DataError("negative sampler needs at least one token with a positive count");
  }
}

std::uint32_t NegativeSampler::sample(Rng& rng) const {
  double r = rng.next_double() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  if (it == cumulative_.end()) --it;
  return static_cast<std::uint32_t>(it - cumulative_.begin());
}

SgnsStep skipgram_step(const EmbeddingModel& model, std::uint32_t center,
                       std::uint32_t context,
                       std::span<const std::uint32_t> negatives) {
  if (model.output_vectors().empty()) {
    throw DataError("embedding model has no output vectors");
  }
  const int dim = model.dim();
  auto out_row = [&](std::uint32_t id) {
    if (id >= model.size()) throw DataError("embedding token id out of range");
    return model.output_vectors().data() + static_cast<std::size_t>(id) * dim;
  };

  SgnsStep step;
  step.grad_center.assign(dim, 0.0);
  const double* v = model.vector(center).data();

  const double* ctx = out_row(context);
  double pos_dot = dot(v, ctx, dim);
  double g_pos = sigmoid(pos_dot) - 1.0;
  step.loss += softplus(-pos_dot);
  step.grad_context.assign(dim, 0.0);
  for (int d = 0; d < dim; ++d) {
    step.grad_center[d] += g_pos * ctx[d];
    step.grad_context[d] = g_pos * v[d];
  }

  step.grad_negatives.reserve(negatives.size());
  for (std::uint32_t neg : negatives) {
    const double* out = out_row(neg);
    double neg_dot = dot(v, out, dim);
    double g_neg = sigmoid(neg_dot);
    step.loss += softplus(neg_dot);
    std::vector<double> grad(dim);
    for (int d = 0; d < dim; ++d) {
      step.grad_center[d] += g_neg * out[d];
      grad[d] = g_neg * v[d];
    }
    step.grad_negatives.push_back(std::move(grad));
  }
  return step;
}

TrainResult train_embeddings(const Corpus& corpus, const EmbeddingConfig& config) {
  config.validate();
  const auto& vocab = corpus.vocabulary;
  if (vocab.surfaces.empty()) throw DataError("cannot train embeddings: vocabulary is empty");

  std::vector<const std::vector<std::uint32_t>*> sentences;
  std::size_t positions_per_epoch = 0;
  bool any_pair = false;
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.sentences) {
      if (sentence.empty()) continue;
      sentences.push_back(&sentence);
      positions_per_epoch += sentence.size();
      if (sentence.size() >= 2) any_pair = true;
    }
  }
  if (!any_pair) {
    throw DataError("cannot train embeddings: no sentence has two or more tokens");
  }

  const int dim = config.dim;
  TrainResult result;
  result.model = EmbeddingModel(vocab.surfaces, dim);
  EmbeddingModel& model = result.model;

  Rng init_rng(config.seed);
  for (std::uint32_t id = 0; id < model.size(); ++id) {
    auto row = model.mutable_vector(id);
    for (int d = 0; d < dim; ++d) row[d] = (init_rng.next_double() - 0.5) / dim;
  }
  model.output_vectors().assign(model.size() * static_cast<std::size_t>(dim), 0.0);

  NegativeSampler sampler(vocab.counts);

  double* input = model.mutable_vector(0).data();
  double* output = model.output_vectors().data();
  const double total_positions =
      static_cast<double>(positions_per_epoch) * config.epochs;
  const int jobs = config.deterministic ? 1 : config.threads;

  std::atomic<std::size_t> processed{0};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::atomic<double> epoch_loss{0.0};
    std::atomic<std::size_t> epoch_pairs{0};

    parallel_for(sentences.size(), jobs, [&](std::size_t si) {
      const auto& sentence = *sentences[si];
      // Sampling is keyed by (epoch, sentence), so the draws do not depend
      // on thread scheduling.
      Rng rng(mix_seed(config.seed,
                       static_cast<std::uint64_t>(epoch) * sentences.size() + si + 1));
      std::vector<double> grad_v(dim);
      double loss = 0.0;
      std::size_t pairs = 0;

      for (std::size_t c = 0; c < sentence.size(); ++c) {
        std::size_t done = processed.fetch_add(1, std::memory_order_relaxed);
        double lr = config.learning_rate *
                    std::max(1e-4, 1.0 - static_cast<double>(done) / total_positions);
        std::uint32_t center = sentence[c];
        double* v = input + static_cast<std::size_t>(center) * dim;

        for (int off = -config.window; off <= config.window; ++off) {
          if (off == 0) continue;
          std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(c) + off;
          if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(sentence.size())) continue;
          std::uint32_t context = sentence[static_cast<std::size_t>(pos)];

          std::fill(grad_v.begin(), grad_v.end(), 0.0);
          double* ctx = output + static_cast<std::size_t>(context) * dim;
          double pos_dot = dot(v, ctx, dim);
          double g = sigmoid(pos_dot) - 1.0;
          loss += softplus(-pos_dot);
          for (int d = 0; d < dim; ++d) {
            grad_v[d] += g * ctx[d];
            ctx[d] -= lr * g * v[d];
          }

          for (int n = 0; n < config.negatives; ++n) {
            std::uint32_t neg = sampler.sample(rng);
            if (neg == context) continue;
            double* out = output + static_cast<std::size_t>(neg) * dim;
            double neg_dot = dot(v, out, dim);
            double gn = sigmoid(neg_dot);
            loss += softplus(neg_dot);
            for (int d = 0; d < dim; ++d) {
              grad_v[d] += gn * out[d];
              out[d] -= lr * gn * v[d];
            }
          }

          for (int d = 0; d < dim; ++d) v[d] -= lr * grad_v[d];
          ++pairs;
        }
      }

      epoch_loss.fetch_add(loss, std::memory_order_relaxed);
      epoch_pairs.fetch_add(pairs, std::memory_order_relaxed);
    });

    std::size_t pairs = epoch_pairs.load();
    result.epoch_losses.push_back(pairs == 0 ? 0.0 : epoch_loss.load() / pairs);
  }

  for (std::uint32_t id = 0; id < model.size(); ++id) {
    auto row = model.vector(id);
    bool all_zero = true;
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw DataError("training produced a non-finite value for token: " +
                        vocab.surfaces[id]);
      }
      if (x != 0.0) all_zero = false;
    }
    if (all_zero && vocab.is_entity[id]) {
      throw DataError("training produced an all-zero vector for entity: " +
                      vocab.surfaces[id]);
    }
  }
  return result;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DataError("cosine similarity: dimension mismatch");
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t d = 0; d < u.size(); ++d) {
    uu += u[d] * u[d];
    vv += v[d] * v[d];
    uv += u[d] * v[d];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw DataError("cosine similarity is undefined for a zero vector");
  }
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

SquareMatrix similarity_matrix(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  SquareMatrix sim(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != vectors[0].size()) {
      throw DataError("similarity matrix: vectors have mixed dimensions");
    }
    double norm = 0.0;
    for (double x : vectors[i]) norm += x * x;
    if (norm == 0.0) {
      throw DataError("similarity matrix: vector " + std::to_string(i) +
                      " has zero norm");
    }
    sim(i, i) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = cosine_similarity(vectors[i], vectors[j]);
      sim(i, j) = s;
      sim(j, i) = s;
    }
  }
  return sim;
}

std::vector<std::vector<double>> gather_vectors(const std::vector<std::string>& entities,
                                                const EmbeddingModel& model) {
  std::vector<std::vector<double>> vectors;
  vectors.reserve(entities.size());
  std::string missing;
  for (const auto& entity : entities) {
    auto id = model.find(entity);
    if (!id) {
      if (!missing.empty()) missing += ", ";
      missing += entity;
      continue;
    }
    auto row = model.vector(*id);
    vectors.emplace_back(row.begin(), row.end());
  }
  if (!missing.empty()) {
    throw DataError("entities missing from embedding model: " + missing);
  }
  return vectors;
}

SquareMatrix similarity_matrix(const std::vector<std::string>& entities,
                               const EmbeddingModel& model) {
  return similarity_matrix(gather_vectors(entities, model));
}

void save_model(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::unordered_map<std::string, std::string> seen;
  seen.reserve(model.size());
  for (const auto& token : model.tokens()) {
    std::string encoded = encode_model_token(token);
    auto [it, inserted] = seen.emplace(std::move(encoded), token);
    if (!inserted) {
      throw DataError("model tokens collide after encoding: '" + it->second +
                      "' and '" + token + "'");
    }
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path.string());
  out << model.size() << ' ' << model.dim() << '\n';
  for (std::uint32_t id = 0; id < model.size(); ++id) {
    out << encode_model_token(model.tokens()[id]);
    for (double x : model.vector(id)) out << ' ' << format_double(x);
    out << '\n';
  }
  if (!out) throw DataError("failed while writing model file: " + path.string());
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, "header", "empty model file");
  }
  std::size_t count = 0;
  int dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || dim < 1) {
      throw ParseError(path.string(), 1, "header", "expected 'count dim'");
    }
    std::string extra;
    if (header >> extra) {
      throw ParseError(path.string(), 1, "header", "expected 'count dim'");
    }
  }

  std::vector<std::string> tokens;
  tokens.reserve(count);
  std::vector<double> values;
  values.reserve(count * static_cast<std::size_t>(dim));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    if (tokens.size() == count) {
      throw ParseError(path.string(), line_no, "token",
                       "more rows than the header declares");
    }
    tokens.push_back(token);
    for (int d = 0; d < dim; ++d) {
      double x;
      if (!(row >> x)) {
        throw ParseError(path.string(), line_no, "vector",
                         "expected " + std::to_string(dim) + " components");
      }
      if (!std::isfinite(x)) {
        throw ParseError(path.string(), line_no, "vector", "non-finite component");
      }
      values.push_back(x);
    }
    std::string extra;
    if (row >> extra) {
      throw ParseError(path.string(), line_no, "vector",
                       "more than " + std::to_string(dim) + " components");
    }
  }
  if (tokens.size() != count) {
    throw ParseError(path.string(), line_no, "token",
                     "header declares " + std::to_string(count) + " rows, found " +
                         std::to_string(tokens.size()));
  }

  EmbeddingModel model(std::move(tokens), dim);
  for (std::uint32_t id = 0; id < model.size(); ++id) {
    auto row = model.mutable_vector(id);
    std::copy_n(values.begin() + static_cast<std::size_t>(id) * dim, dim, row.begin());
  }
  return model;
}

}  // namespace taxokit
