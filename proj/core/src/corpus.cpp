#include "taxokit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "taxokit/errors.hpp"
#include "taxokit/parallel.hpp"

namespace taxokit {

using nlohmann::json;

namespace {

bool is_ascii_alnum_byte(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path.string());
  return out;
}

}  // namespace

std::uint32_t Vocabulary::id_of(const std::string& surface) const {
  auto it = ids.find(surface);
  if (it == ids.end()) throw DataError("unknown token: " + surface);
  return it->second;
}

EntityMatcher::EntityMatcher(const EntityLexicon& lexicon) {
  nodes_.emplace_back();
  for (const auto& entry : lexicon.entries) {
    std::int32_t node = 0;
    for (unsigned char byte : entry.surface) {
      auto it = nodes_[node].next.find(byte);
      if (it == nodes_[node].next.end()) {
        nodes_.emplace_back();
        std::int32_t child = static_cast<std::int32_t>(nodes_.size() - 1);
        nodes_[node].next.emplace(byte, child);
        node = child;
      } else {
        node = it->second;
      }
    }
    nodes_[node].terminal = true;
  }
}

std::size_t EntityMatcher::match(std::string_view text, std::size_t pos) const {
  if (nodes_.empty()) return 0;
  if (pos > 0 && is_ascii_alnum_byte(text[pos - 1])) return 0;
  std::vector<std::size_t> terminal_lengths;
  std::int32_t node = 0;
  std::size_t i = pos;
  while (i < text.size()) {
    auto it = nodes_[node].next.find(static_cast<unsigned char>(text[i]));
    if (it == nodes_[node].next.end()) break;
    node = it->second;
    ++i;
    if (nodes_[node].terminal) terminal_lengths.push_back(i - pos);
  }
  for (auto rit = terminal_lengths.rbegin(); rit != terminal_lengths.rend(); ++rit) {
    std::size_t end = pos + *rit;
    if (end >= text.size() || !is_ascii_alnum_byte(text[end])) return *rit;
  }
  return 0;
}

std::vector<std::string> tokenize_sentence(std::string_view normalized_sentence,
                                           const EntityMatcher& matcher,
                                           const Tokenizer& tokenizer) {
  std::vector<std::string> tokens;
  auto flush = [&](std::size_t from, std::size_t to) {
    if (from >= to) return;
    auto span_tokens = tokenizer.tokenize(normalized_sentence.substr(from, to - from));
    tokens.insert(tokens.end(), std::make_move_iterator(span_tokens.begin()),
                  std::make_move_iterator(span_tokens.end()));
  };
  std::size_t flush_start = 0;
  std::size_t i = 0;
  while (i < normalized_sentence.size()) {
    std::size_t len = matcher.match(normalized_sentence, i);
    if (len > 0) {
      flush(flush_start, i);
      tokens.emplace_back(normalized_sentence.substr(i, len));
      i += len;
      flush_start = i;
    } else {
      utf8_decode(normalized_sentence, i);
    }
  }
  flush(flush_start, normalized_sentence.size());
  return tokens;
}

std::vector<RawDocument> load_documents(const std::filesystem::path& path,
                                        const std::set<std::string>& known_categories) {
  auto in = open_input(path);
  std::vector<RawDocument> documents;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  const std::string file = path.string();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || is_blank(line)) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(file, line_no, "-", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(file, line_no, "-", "expected a JSON object");
    if (!doc.contains("doc_id") || !doc["doc_id"].is_string())
      throw ParseError(file, line_no, "doc_id", "missing or not a string");
    if (!doc.contains("text") || !doc["text"].is_string())
      throw ParseError(file, line_no, "text", "missing or not a string");

    RawDocument raw;
    raw.doc_id = doc["doc_id"].get<std::string>();
    raw.text = doc["text"].get<std::string>();
    if (raw.doc_id.empty())
      throw ParseError(file, line_no, "doc_id", "must be non-empty");
    if (raw.text.empty())
      throw ParseError(file, line_no, "text", "must be non-empty");
    if (!seen_ids.insert(raw.doc_id).second)
      throw ParseError(file, line_no, "doc_id", "duplicate doc_id '" + raw.doc_id + "'");

    if (doc.contains("category_ids")) {
      if (!doc["category_ids"].is_array())
        throw ParseError(file, line_no, "category_ids", "must be an array of strings");
      std::set<std::string> unique;
      for (const auto& item : doc["category_ids"]) {
        if (!item.is_string())
          throw ParseError(file, line_no, "category_ids", "must be an array of strings");
        std::string id = item.get<std::string>();
        if (known_categories.find(id) == known_categories.end())
          throw ParseError(file, line_no, "category_ids",
                           "unknown category id '" + id + "'");
        unique.insert(std::move(id));
      }
      raw.category_ids.assign(unique.begin(), unique.end());
    }
    documents.push_back(std::move(raw));
  }
  return documents;
}

EntityLexicon load_lexicon(const std::filesystem::path& path,
                           std::int64_t min_frequency,
                           const NormalizeOptions& normalize, IngestReport* report) {
  auto in = open_input(path);
  EntityLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  const std::string file = path.string();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(file, line_no, "surface", "expected surface<TAB>frequency");
    std::string surface = normalize_text(line.substr(0, tab), normalize);
    std::string freq_text = line.substr(tab + 1);
    if (surface.empty())
      throw ParseError(file, line_no, "surface", "must be non-empty");
    std::int64_t frequency = 0;
    try {
      std::size_t used = 0;
      frequency = std::stoll(freq_text, &used);
      if (used != freq_text.size()) throw std::invalid_argument(freq_text);
    } catch (const std::exception&) {
      throw ParseError(file, line_no, "frequency",
                       "not an integer: '" + freq_text + "'");
    }
    if (frequency < 0)
      throw ParseError(file, line_no, "frequency", "must be non-negative");
    if (frequency < min_frequency) {
      if (report != nullptr) ++report->lexicon_dropped_low_frequency;
      continue;
    }
    auto it = lexicon.index.find(surface);
    if (it != lexicon.index.end()) {
      // distinct raw surfaces folded to the same form: merge counts
      lexicon.entries[it->second].frequency += frequency;
      if (report != nullptr) report->lexicon_merged_surfaces.push_back(surface);
      continue;
    }
    lexicon.index.emplace(surface, lexicon.entries.size());
    lexicon.entries.push_back({std::move(surface), frequency});
  }
  return lexicon;
}

void save_lexicon(const std::filesystem::path& path, const EntityLexicon& lexicon) {
  auto out = open_output(path);
  for (const auto& entry : lexicon.entries) {
    out << entry.surface << '\t' << entry.frequency << '\n';
  }
}

Corpus build_corpus(const std::vector<RawDocument>& documents,
                    const EntityLexicon& lexicon, const IngestOptions& options,
                    IngestReport* report) {
  EntityMatcher matcher(lexicon);
  DefaultTokenizer default_tokenizer;
  const Tokenizer& tokenizer =
      options.tokenizer != nullptr ? *options.tokenizer : default_tokenizer;

  // Per-document tokenization is pure; documents are processed independently
  // and merged in input order.
  std::vector<std::vector<std::vector<std::string>>> doc_sentences(documents.size());
  parallel_for(documents.size(), options.jobs, [&](std::size_t d) {
    std::vector<std::vector<std::string>> sentences;
    for (const auto& sentence : segment_sentences(documents[d].text, options.delimiters)) {
      std::string normalized = normalize_text(sentence, options.normalize);
      auto tokens = tokenize_sentence(normalized, matcher, tokenizer);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
    doc_sentences[d] = std::move(sentences);
  });

  // Count token types across the whole corpus.
  std::unordered_map<std::string, std::int64_t> counts;
  std::size_t total_tokens = 0;
  for (const auto& sentences : doc_sentences) {
    for (const auto& sentence : sentences) {
      for (const auto& token : sentence) ++counts[token];
      total_tokens += sentence.size();
    }
  }

  // Vocabulary ids: count descending, then surface ascending. Lexicon
  // surfaces are always retained.
  std::vector<std::pair<std::string, std::int64_t>> retained;
  retained.reserve(counts.size());
  for (auto& [surface, count] : counts) {
    if (count >= options.min_count || lexicon.contains(surface)) {
      retained.emplace_back(surface, count);
    }
  }
  for (const auto& entry : lexicon.entries) {
    if (counts.find(entry.surface) == counts.end()) {
      retained.emplace_back(entry.surface, 0);
      if (report != nullptr) {
        report->entities_missing_from_corpus.push_back(entry.surface);
      }
    }
  }
  std::sort(retained.begin(), retained.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Corpus corpus;
  corpus.vocabulary.surfaces.reserve(retained.size());
  for (auto& [surface, count] : retained) {
    auto id = static_cast<std::uint32_t>(corpus.vocabulary.surfaces.size());
    corpus.vocabulary.ids.emplace(surface, id);
    corpus.vocabulary.is_entity.push_back(lexicon.contains(surface));
    corpus.vocabulary.counts.push_back(count);
    corpus.vocabulary.surfaces.push_back(std::move(surface));
  }

  corpus.documents.reserve(documents.size());
  std::size_t kept_sentences = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    TokenizedDocument doc;
    doc.doc_id = documents[d].doc_id;
    doc.category_ids = documents[d].category_ids;
    for (const auto& sentence : doc_sentences[d]) {
      std::vector<std::uint32_t> ids;
      ids.reserve(sentence.size());
      for (const auto& token : sentence) {
        auto id = corpus.vocabulary.find(token);
        if (id.has_value()) ids.push_back(*id);
      }
      if (!ids.empty()) {
        doc.sentences.push_back(std::move(ids));
        ++kept_sentences;
      }
    }
    if (!doc.category_ids.empty()) ++corpus.labeled_count;
    corpus.documents.push_back(std::move(doc));
  }

  if (report != nullptr) {
    report->documents = documents.size();
    report->labeled_documents = corpus.labeled_count;
    report->sentences = kept_sentences;
    report->tokens = total_tokens;
  }
  return corpus;
}

IngestResult ingest(const std::filesystem::path& corpus_path,
                    const std::filesystem::path& lexicon_path,
                    const std::set<std::string>& known_categories,
                    const IngestOptions& options) {
  IngestResult result;
  result.lexicon = load_lexicon(lexicon_path, options.min_frequency,
                                options.normalize, &result.report);
  auto documents = load_documents(corpus_path, known_categories);
  result.corpus = build_corpus(documents, result.lexicon, options, &result.report);
  return result;
}

void save_tokens(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_output(path);
  for (const auto& doc : corpus.documents) {
    json sentences = json::array();
    for (const auto& sentence : doc.sentences) {
      json tokens = json::array();
      for (auto id : sentence) tokens.push_back(corpus.vocabulary.surfaces[id]);
      sentences.push_back(std::move(tokens));
    }
    json line = {{"doc_id", doc.doc_id},
                 {"category_ids", doc.category_ids},
                 {"sentences", std::move(sentences)}};
    out << line.dump() << '\n';
  }
}

void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocabulary) {
  auto out = open_output(path);
  for (std::size_t id = 0; id < vocabulary.size(); ++id) {
    out << vocabulary.surfaces[id] << '\t' << id << '\t' << vocabulary.counts[id]
        << '\t' << (vocabulary.is_entity[id] ? 1 : 0) << '\n';
  }
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  auto in = open_input(path);
  Vocabulary vocabulary;
  std::string line;
  std::size_t line_no = 0;
  const std::string file = path.string();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 4)
      throw ParseError(file, line_no, "-", "expected 4 tab-separated fields");
    auto expected_id = static_cast<std::uint32_t>(vocabulary.size());
    if (std::to_string(expected_id) != fields[1])
      throw ParseError(file, line_no, "id", "ids must be dense and in order");
    vocabulary.ids.emplace(fields[0], expected_id);
    vocabulary.surfaces.push_back(fields[0]);
    vocabulary.counts.push_back(std::stoll(fields[2]));
    vocabulary.is_entity.push_back(fields[3] == "1");
  }
  return vocabulary;
}

Corpus load_tokens(const std::filesystem::path& tokens_path,
                   const std::filesystem::path& vocabulary_path) {
  Corpus corpus;
  corpus.vocabulary = load_vocabulary(vocabulary_path);
  auto in = open_input(tokens_path);
  std::string line;
  std::size_t line_no = 0;
  const std::string file = tokens_path.string();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(file, line_no, "-", std::string("invalid JSON: ") + e.what());
    }
    TokenizedDocument tokenized;
    tokenized.doc_id = doc.at("doc_id").get<std::string>();
    tokenized.category_ids = doc.at("category_ids").get<std::vector<std::string>>();
    for (const auto& sentence : doc.at("sentences")) {
      std::vector<std::uint32_t> ids;
      ids.reserve(sentence.size());
      for (const auto& token : sentence) {
        ids.push_back(corpus.vocabulary.id_of(token.get<std::string>()));
      }
      tokenized.sentences.push_back(std::move(ids));
    }
    if (!tokenized.category_ids.empty()) ++corpus.labeled_count;
    corpus.documents.push_back(std::move(tokenized));
  }
  return corpus;
}

}  // namespace taxokit
