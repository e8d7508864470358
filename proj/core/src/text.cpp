#include "taxokit/text.hpp"

#include <algorithm>

namespace taxokit {

namespace {

constexpr std::uint32_t kReplacement = 0xFFFD;

bool is_ascii_space(std::uint32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\n' || cp == '\v' ||
         cp == '\f';
}

bool is_space_cp(std::uint32_t cp) {
  return is_ascii_space(cp) || cp == 0x3000;  // ideographic space
}

bool is_ascii_alnum(std::uint32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
         (cp >= 'A' && cp <= 'Z');
}

// Non-ASCII punctuation that should separate tokens: general punctuation
// (includes the ellipsis), CJK symbols and punctuation, full-width forms.
bool is_wide_punct(std::uint32_t cp) {
  return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFFEF) ||
         (cp >= 0xFE30 && cp <= 0xFE4F);
}

}  // namespace

std::uint32_t utf8_decode(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) -> std::uint32_t {
    return static_cast<unsigned char>(s[k]);
  };
  std::uint32_t b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    std::uint32_t cp = ((b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
    i += 2;
    return cp >= 0x80 ? cp : kReplacement;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    std::uint32_t cp = ((b0 & 0x0F) << 12) | ((byte(i + 1) & 0x3F) << 6) |
                       (byte(i + 2) & 0x3F);
    i += 3;
    return cp >= 0x800 ? cp : kReplacement;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    std::uint32_t cp = ((b0 & 0x07) << 18) | ((byte(i + 1) & 0x3F) << 12) |
                       ((byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
    i += 4;
    return (cp >= 0x10000 && cp <= 0x10FFFF) ? cp : kReplacement;
  }
  ++i;
  return kReplacement;
}

void utf8_encode(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string normalize_text(std::string_view text, const NormalizeOptions& options) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  bool seen_content = false;
  std::size_t i = 0;
  while (i < text.size()) {
    std::uint32_t cp = utf8_decode(text, i);
    if (options.fold_width) {
      if (cp >= 0xFF01 && cp <= 0xFF5E) cp -= 0xFEE0;
      else if (cp == 0x3000) cp = ' ';
    }
    if (options.fold_case && cp >= 'A' && cp <= 'Z') cp += 32;
    if (is_space_cp(cp)) {
      pending_space = seen_content;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8_encode(cp, out);
    seen_content = true;
  }
  return out;
}

bool is_blank(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_space_cp(utf8_decode(text, i))) return false;
  }
  return true;
}

std::vector<std::string> default_sentence_delimiters() {
  return {
      "\xE3\x80\x82",              // U+3002 ideographic full stop
      "\xEF\xBC\x9F",              // U+FF1F full-width question mark
      "?",                         // half-width question mark
      "\xE2\x80\xA6\xE2\x80\xA6",  // double ellipsis
      "\n",
  };
}

std::vector<RawSegment> split_raw(std::string_view text,
                                  const std::vector<std::string>& delimiters) {
  std::vector<std::string> delims(delimiters.begin(), delimiters.end());
  std::erase_if(delims, [](const std::string& d) { return d.empty(); });
  std::sort(delims.begin(), delims.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });

  std::vector<RawSegment> segments;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::string* hit = nullptr;
    for (const auto& d : delims) {
      if (text.compare(i, d.size(), d) == 0) {
        hit = &d;
        break;
      }
    }
    if (hit != nullptr) {
      segments.push_back({std::string(text.substr(start, i - start)), *hit});
      i += hit->size();
      start = i;
    } else {
      ++i;
    }
  }
  if (start < text.size()) {
    segments.push_back({std::string(text.substr(start)), ""});
  }
  return segments;
}

std::vector<std::string> segment_sentences(std::string_view text,
                                           const std::vector<std::string>& delimiters) {
  std::vector<std::string> sentences;
  for (auto& segment : split_raw(text, delimiters)) {
    if (!segment.text.empty() && !is_blank(segment.text)) {
      sentences.push_back(std::move(segment.text));
    }
  }
  return sentences;
}

std::vector<std::string> DefaultTokenizer::tokenize(std::string_view span) const {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < span.size()) {
    std::size_t at = i;
    std::uint32_t cp = utf8_decode(span, i);
    bool word_char =
        is_ascii_alnum(cp) ||
        (cp >= 0x80 && !is_space_cp(cp) && !is_wide_punct(cp) && cp != kReplacement);
    if (word_char) {
      current.append(span.substr(at, i - at));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace taxokit
