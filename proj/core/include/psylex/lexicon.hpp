#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace psylex {

enum class LexiconCategory {
  PositiveEmotion,
  NegativeEmotion,
  PsychologicalTerm,
  SelfReference,
  OtherReference,
  StopWord,
  PosAdjective,
  PosNoun,
  PosVerb,
};

// CLI-facing names: positive, negative, psych, self, other, stop,
// adjective, noun, verb.
std::string_view to_string(LexiconCategory category);
std::optional<LexiconCategory> lexicon_category_from(std::string_view name);

// Immutable word/phrase set tagged with a category. Entries are trimmed,
// non-empty and unique; construction records how many duplicates were folded.
class Lexicon {
 public:
  Lexicon(std::string name, LexiconCategory category,
          std::vector<std::string> entries);

  const std::string& name() const { return name_; }
  LexiconCategory category() const { return category_; }
  bool contains(std::string_view entry) const;
  std::size_t size() const { return ordered_.size(); }
  // Entries in a stable sorted order, for serialization and fingerprints.
  const std::vector<std::string>& entries() const { return ordered_; }
  std::size_t duplicates_dropped() const { return duplicates_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct Eq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const noexcept {
      return a == b;
    }
  };

  std::string name_;
  LexiconCategory category_;
  std::vector<std::string> ordered_;
  std::unordered_set<std::string, Hash, Eq> set_;
  std::size_t duplicates_ = 0;
};

// UTF-8 word list, one entry per line, '#' comments and blank lines ignored.
// Throws on unreadable file, invalid UTF-8 (with byte offset), or a file
// with no entries left after filtering. Entries keep file order.
std::vector<std::string> load_wordlist(const std::filesystem::path& path);

Lexicon load_lexicon(const std::filesystem::path& path, LexiconCategory category,
                     std::string name = "");

// Per-post occurrence counts for each feature-bearing category.
struct CategoryCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t psych_terms = 0;
  std::size_t self_refs = 0;
  std::size_t other_refs = 0;
  std::size_t adjectives = 0;
  std::size_t nouns = 0;
  std::size_t verbs = 0;

  bool operator==(const CategoryCounts&) const = default;
};

// Longest phrase entry, measured in joined adjacent tokens, that matching
// will consider.
inline constexpr std::size_t kMaxPhraseTokens = 4;

// Number of token positions covered by at least one lexicon match, where a
// match is any window of 1..kMaxPhraseTokens adjacent tokens whose
// concatenation is an entry. Each position counts once per category.
std::size_t count_category(const std::vector<std::string>& tokens,
                           const Lexicon& lexicon);

CategoryCounts count_categories(const std::vector<std::string>& tokens,
                                const std::vector<Lexicon>& lexicons);

}  // namespace psylex
