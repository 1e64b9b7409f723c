#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "psylex/lexicon.hpp"

namespace psylex {

// Match dictionary for forward maximum matching, keyed by code points.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& entries);

  void add(std::string_view entry);
  bool contains(std::u32string_view candidate) const;
  std::size_t size() const { return entries_.size(); }
  // Longest entry in code points; bounds the match window.
  std::size_t max_length() const { return max_length_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::u32string_view s) const noexcept;
  };
  struct Eq {
    using is_transparent = void;
    bool operator()(std::u32string_view a, std::u32string_view b) const noexcept {
      return a == b;
    }
  };

  std::unordered_set<std::u32string, Hash, Eq> entries_;
  std::size_t max_length_ = 0;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  // Code-point count of the source text, spaces and punctuation included.
  std::size_t original_length = 0;

  bool operator==(const TokenSequence&) const = default;
};

// Greedy left-to-right longest match against the vocabulary. Whitespace is a
// hard boundary and is dropped; ASCII digit runs stay together; anything else
// without a vocabulary match becomes a single-character token.
TokenSequence tokenize(std::string_view text, const Vocabulary& vocabulary);

// tokenize, then drop pure punctuation/symbol tokens and stop words.
TokenSequence segment(std::string_view text, const Vocabulary& vocabulary,
                      const Lexicon* stop_words = nullptr);

}  // namespace psylex
