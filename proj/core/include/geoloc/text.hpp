#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geoloc {

using Sentence = std::vector<std::string>;

/// Lowercases and strips everything except letters, digits, whitespace and
/// periods. Removed characters become whitespace, every period is followed by
/// a space, and runs of whitespace collapse to one space. A comma or period
/// between two digits is dropped so "2,000" stays one number.
///
/// "BEIJING, Dec 4 (AFP) --" -> "beijing dec 4 afp"
/// "a.b,c!"                  -> "a. b c"
///
/// Non-ASCII letters survive as UTF-8; Latin-1 capitals are lowercased and
/// general punctuation (curly quotes, dashes, ellipsis) is removed.
std::string clean_text(std::string_view raw);

/// Splits cleaned text on periods, then each piece on whitespace.
/// Empty sentences are dropped.
std::vector<Sentence> split_sentences(std::string_view cleaned);

/// Whitespace tokenization without sentence handling.
std::vector<std::string> split_tokens(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first,
                        std::size_t count);
std::string join_tokens(const std::vector<std::string>& tokens);

/// Canonical lookup key for a lexicon phrase: cleaned, periods dropped,
/// tokens joined by single spaces.
std::string normalize_phrase(std::string_view phrase);

bool is_digit_run(std::string_view token);

}  // namespace geoloc
