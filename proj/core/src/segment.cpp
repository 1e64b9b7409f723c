#include "psylex/segment.hpp"

#include <algorithm>

#include "psylex/unicode.hpp"

namespace psylex {

std::size_t Vocabulary::Hash::operator()(std::u32string_view s) const noexcept {
  std::size_t h = 14695981039346656037ull;
  for (char32_t cp : s) {
    h ^= static_cast<std::size_t>(cp);
    h *= 1099511628211ull;
  }
  return h;
}

Vocabulary::Vocabulary(const std::vector<std::string>& entries) {
  for (const std::string& entry : entries) add(entry);
}

void Vocabulary::add(std::string_view entry) {
  std::u32string cps = utf8_decode_lenient(entry);
  if (cps.empty()) return;
  max_length_ = std::max(max_length_, cps.size());
  entries_.insert(std::move(cps));
}

bool Vocabulary::contains(std::u32string_view candidate) const {
  return entries_.find(candidate) != entries_.end();
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocabulary) {
  std::u32string cps = utf8_decode_lenient(text);
  TokenSequence out;
  out.original_length = cps.size();

  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t boundary = i;
    while (boundary < n && !is_space(cps[boundary])) ++boundary;

    std::size_t match = 0;
    std::size_t cap = std::min(vocabulary.max_length(), boundary - i);
    for (std::size_t len = cap; len >= 1; --len) {
      if (vocabulary.contains(std::u32string_view(cps).substr(i, len))) {
        match = len;
        break;
      }
    }
    if (is_ascii_digit(cps[i])) {
      std::size_t run = i;
      while (run < boundary && is_ascii_digit(cps[run])) ++run;
      match = std::max(match, run - i);
    }
    if (match == 0) match = 1;
    out.tokens.push_back(utf8_encode(std::u32string_view(cps).substr(i, match)));
    i += match;
  }
  return out;
}

namespace {

bool pure_punctuation(const std::string& token) {
  std::u32string cps = utf8_decode_lenient(token);
  if (cps.empty()) return true;
  return std::all_of(cps.begin(), cps.end(),
                     [](char32_t cp) { return is_punct_or_symbol(cp); });
}

}  // namespace

TokenSequence segment(std::string_view text, const Vocabulary& vocabulary,
                      const Lexicon* stop_words) {
  TokenSequence raw = tokenize(text, vocabulary);
  TokenSequence out;
  out.original_length = raw.original_length;
  out.tokens.reserve(raw.tokens.size());
  for (std::string& token : raw.tokens) {
    if (pure_punctuation(token)) continue;
    if (stop_words != nullptr && stop_words->contains(token)) continue;
    out.tokens.push_back(std::move(token));
  }
  return out;
}

}  // namespace psylex
