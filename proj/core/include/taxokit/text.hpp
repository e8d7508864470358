#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace taxokit {

// ---------------------------------------------------------------------------
// UTF-8 helpers
// ---------------------------------------------------------------------------

// Decodes the code point starting at byte offset i and advances i past it.
// Malformed bytes decode as U+FFFD and advance by one byte.
std::uint32_t utf8_decode(std::string_view s, std::size_t& i);

void utf8_encode(std::uint32_t cp, std::string& out);

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

struct NormalizeOptions {
  bool fold_case = true;   // ASCII A-Z -> a-z (after width folding)
  bool fold_width = true;  // U+FF01..U+FF5E -> ASCII, U+3000 -> space
};

// Folds width and case per options and collapses horizontal whitespace runs
// to a single space. Leading/trailing whitespace is trimmed.
std::string normalize_text(std::string_view text, const NormalizeOptions& options);

// True if the string contains only whitespace (including U+3000).
bool is_blank(std::string_view text);

// ---------------------------------------------------------------------------
// Sentence segmentation
// ---------------------------------------------------------------------------

// Default delimiter set: full-width period, full- and half-width question
// mark, double ellipsis, newline.
std::vector<std::string> default_sentence_delimiters();

struct RawSegment {
  std::string text;       // may be empty or blank
  std::string delimiter;  // the delimiter that ended this segment; empty at EOF
};

// Lossless split: concatenating text+delimiter over all segments reproduces
// the input byte for byte. Delimiters are matched longest-first.
std::vector<RawSegment> split_raw(std::string_view text,
                                  const std::vector<std::string>& delimiters);

// split_raw with blank segments dropped; returns sentence strings only.
std::vector<std::string> segment_sentences(std::string_view text,
                                           const std::vector<std::string>& delimiters);

// ---------------------------------------------------------------------------
// Tokenization plug point
// ---------------------------------------------------------------------------

// Tokenizes the spans between recognized entity mentions. Implementations
// must be pure and thread-safe for concurrent use on distinct inputs.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view span) const = 0;
};

// Splits on whitespace and punctuation. Runs of non-ASCII letters (e.g. CJK
// text) are kept as single tokens; plugging a language-specific segmenter
// refines that behavior.
class DefaultTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view span) const override;
};

}  // namespace taxokit
