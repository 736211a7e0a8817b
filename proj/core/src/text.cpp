#include "geoloc/text.hpp"

#include <cstdint>

namespace geoloc {
namespace {

// Decodes one UTF-8 code point starting at `pos`; invalid sequences yield
// U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
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

bool is_removed_non_ascii(char32_t cp) {
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFF00 && cp <= 0xFF0F) || cp == 0xFFFD;
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  // A period only counts once a word has been written since the last one.
  bool word_since_period = false;

  auto emit_word_char = [&](char32_t cp) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    append_utf8(out, cp);
    word_since_period = true;
  };

  std::size_t pos = 0;
  while (pos < raw.size()) {
    char32_t cp = decode_utf8(raw, pos);
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      const bool digit_before = !pending_space && !out.empty() && out.back() >= '0' && out.back() <= '9';
      const bool digit_after = pos < raw.size() && raw[pos] >= '0' && raw[pos] <= '9';
      if ((c == ',' || c == '.') && digit_before && digit_after) continue;  // "2,000", "3.5"
      if (c >= 'A' && c <= 'Z') {
        emit_word_char(static_cast<char32_t>(c - 'A' + 'a'));
      } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        emit_word_char(cp);
      } else if (c == '.') {
        if (word_since_period) {
          out.push_back('.');
          word_since_period = false;
        }
        pending_space = true;
      } else {
        pending_space = true;
      }
      continue;
    }
    if (is_removed_non_ascii(cp)) {
      pending_space = true;
      continue;
    }
    if (cp >= 0xC0 && cp <= 0xDE) cp += 0x20;
    emit_word_char(cp);
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                               text[i] == '\r' || text[i] == '\f' || text[i] == '\v')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                                text[i] == '\r' || text[i] == '\f' || text[i] == '\v')) {
      ++i;
    }
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<Sentence> split_sentences(std::string_view cleaned) {
  std::vector<Sentence> sentences;
  std::size_t start = 0;
  while (start <= cleaned.size()) {
    std::size_t end = cleaned.find('.', start);
    if (end == std::string_view::npos) end = cleaned.size();
    auto tokens = split_tokens(cleaned.substr(start, end - start));
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
    start = end + 1;
  }
  return sentences;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first,
                        std::size_t count) {
  std::string out;
  for (std::size_t i = first; i < first + count && i < tokens.size(); ++i) {
    if (i != first) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  return join_tokens(tokens, 0, tokens.size());
}

std::string normalize_phrase(std::string_view phrase) {
  std::string cleaned = clean_text(phrase);
  std::string no_periods;
  no_periods.reserve(cleaned.size());
  for (char c : cleaned) no_periods.push_back(c == '.' ? ' ' : c);
  return join_tokens(split_tokens(no_periods));
}

bool is_digit_run(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace geoloc
