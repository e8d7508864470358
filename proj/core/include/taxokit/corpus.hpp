#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxokit/text.hpp"

namespace taxokit {

struct RawDocument {
  std::string doc_id;
  std::vector<std::string> category_ids;  // empty: embedding-only document
  std::string text;
};

struct EntityEntry {
  std::string surface;
  std::int64_t frequency = 0;
};

// Methodology entity lexicon. Surfaces are stored normalized and unique.
struct EntityLexicon {
  std::vector<EntityEntry> entries;
  std::unordered_map<std::string, std::size_t> index;

  bool contains(const std::string& surface) const {
    return index.find(surface) != index.end();
  }
  const EntityEntry* find(const std::string& surface) const {
    auto it = index.find(surface);
    return it == index.end() ? nullptr : &entries[it->second];
  }
};

// Longest-match recognizer for lexicon surfaces inside normalized text.
// Matches may not abut ASCII alphanumerics on either side, so "svm" does not
// fire inside "svms"; adjacency to multi-byte characters is allowed since
// scripts without word delimiters have no boundary to respect.
class EntityMatcher {
 public:
  EntityMatcher() = default;
  explicit EntityMatcher(const EntityLexicon& lexicon);

  // Byte length of the longest admissible surface starting at pos; 0 if none.
  std::size_t match(std::string_view text, std::size_t pos) const;

 private:
  struct Node {
    std::map<unsigned char, std::int32_t> next;
    bool terminal = false;
  };
  std::vector<Node> nodes_;
};

// Entity-aware tokenization: maximal lexicon surfaces become single tokens,
// the spans between them go through the plugged tokenizer.
std::vector<std::string> tokenize_sentence(std::string_view normalized_sentence,
                                           const EntityMatcher& matcher,
                                           const Tokenizer& tokenizer);

struct Vocabulary {
  std::vector<std::string> surfaces;   // dense ids 0..V-1
  std::vector<std::int64_t> counts;    // occurrences in the token streams
  std::vector<bool> is_entity;
  std::unordered_map<std::string, std::uint32_t> ids;

  std::size_t size() const { return surfaces.size(); }
  std::optional<std::uint32_t> find(const std::string& surface) const {
    auto it = ids.find(surface);
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }
  std::uint32_t id_of(const std::string& surface) const;  // throws DataError
};

struct TokenizedDocument {
  std::string doc_id;
  std::vector<std::string> category_ids;
  std::vector<std::vector<std::uint32_t>> sentences;  // token ids, ordinal order
};

struct Corpus {
  std::vector<TokenizedDocument> documents;
  Vocabulary vocabulary;
  std::size_t labeled_count = 0;  // documents with at least one category label
};

struct IngestOptions {
  std::vector<std::string> delimiters = default_sentence_delimiters();
  std::int64_t min_frequency = 4;  // lexicon entries below this are dropped
  std::int64_t min_count = 1;      // vocabulary floor; lexicon surfaces exempt
  NormalizeOptions normalize;
  const Tokenizer* tokenizer = nullptr;  // null: DefaultTokenizer
  int jobs = 1;
};

struct IngestReport {
  std::size_t documents = 0;
  std::size_t labeled_documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t lexicon_dropped_low_frequency = 0;
  std::vector<std::string> lexicon_merged_surfaces;  // collided after folding
  std::vector<std::string> entities_missing_from_corpus;
};

// Corpus file: JSON lines {"doc_id", "category_ids", "text"}. Unknown
// categories, duplicate ids and empty text are schema errors.
std::vector<RawDocument> load_documents(const std::filesystem::path& path,
                                        const std::set<std::string>& known_categories);

// Lexicon file: TSV surface<TAB>frequency, UTF-8, no header. Surfaces are
// normalized; entries below min_frequency are dropped and counted.
EntityLexicon load_lexicon(const std::filesystem::path& path,
                           std::int64_t min_frequency,
                           const NormalizeOptions& normalize,
                           IngestReport* report = nullptr);

void save_lexicon(const std::filesystem::path& path, const EntityLexicon& lexicon);

// Segments, normalizes and tokenizes every document and builds the
// vocabulary. Lexicon surfaces always receive an id, even at zero count.
Corpus build_corpus(const std::vector<RawDocument>& documents,
                    const EntityLexicon& lexicon, const IngestOptions& options,
                    IngestReport* report = nullptr);

struct IngestResult {
  Corpus corpus;
  EntityLexicon lexicon;
  IngestReport report;
};

IngestResult ingest(const std::filesystem::path& corpus_path,
                    const std::filesystem::path& lexicon_path,
                    const std::set<std::string>& known_categories,
                    const IngestOptions& options);

// Persisted intermediates: token streams as JSON lines and the vocabulary as
// TSV (surface, id, count, entity flag). Loading restores identical ids.
void save_tokens(const std::filesystem::path& path, const Corpus& corpus);
void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocabulary);
Vocabulary load_vocabulary(const std::filesystem::path& path);
Corpus load_tokens(const std::filesystem::path& tokens_path,
                   const std::filesystem::path& vocabulary_path);

}  // namespace taxokit
