#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/lexicon.hpp"
#include "psylex/segment.hpp"

namespace psylex {

enum class TimeBin { Night, Morning, Afternoon, Evening };

std::string_view to_string(TimeBin bin);

// Half-open bins covering all 24 hours: [23,7) [7,14) [14,18) [18,23).
TimeBin time_bin(int hour);
TimeBin time_bin(const Timestamp& posted_at);

// Dense indices 0..kFixedSlotCount-1; n-gram slots follow.
enum class FixedSlot : std::uint32_t {
  PositiveCount = 0,
  NegativeCount,
  NegPosRatio,
  PsychCount,
  SelfRefCount,
  OtherRefCount,
  AdjectiveCount,
  NounCount,
  VerbCount,
  TimeNight,
  TimeMorning,
  TimeAfternoon,
  TimeEvening,
  IsOriginal,
  PostingFreqDeviation,
};

inline constexpr std::uint32_t kFixedSlotCount = 15;

std::string_view to_string(FixedSlot slot);
std::optional<FixedSlot> fixed_slot_from(std::string_view name);

inline FixedSlot time_bin_slot(TimeBin bin) {
  return static_cast<FixedSlot>(static_cast<std::uint32_t>(FixedSlot::TimeNight) +
                                static_cast<std::uint32_t>(bin));
}

// Sparse vector: sorted (index, value) pairs, finite values, no stored zeros.
class FeatureVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  FeatureVector() = default;
  // Sorts, rejects duplicate indices and non-finite values, drops zeros.
  explicit FeatureVector(std::vector<Entry> entries);

  void set(std::uint32_t index, double value);
  double at(std::uint32_t index) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

double dot(const FeatureVector& a, const FeatureVector& b);
double squared_distance(const FeatureVector& a, const FeatureVector& b);

// Separator used when joining tokens into an n-gram key.
inline constexpr char kNgramJoin = '\x1f';

// All contiguous n-grams of the given order, in sliding-window order
// (repeats preserved). Throws unless order is 1, 2 or 3.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens,
                                        std::size_t order);

inline double neg_pos_ratio(std::size_t negative, std::size_t positive) {
  return static_cast<double>(negative) / (static_cast<double>(positive) + 1.0);
}

// ln(posts on this post's calendar day / author's mean posts per active day);
// 0 when the history holds at most one post.
double posting_freq_deviation(const Post& post,
                              const std::vector<Timestamp>& author_history);

using AuthorHistories = std::unordered_map<std::string, std::vector<Timestamp>>;

AuthorHistories build_author_histories(const std::vector<Post>& posts);

// Bundles the loaded lexicons with the segmentation vocabulary derived from
// them (plus any extra general-vocabulary entries).
class Analyzer {
 public:
  explicit Analyzer(std::vector<Lexicon> lexicons,
                    const std::vector<std::string>& extra_vocabulary = {});

  const std::vector<Lexicon>& lexicons() const { return lexicons_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const Lexicon* stop_words() const;

  TokenSequence segment(std::string_view text) const;
  CategoryCounts counts(const std::vector<std::string>& tokens) const;

 private:
  std::vector<Lexicon> lexicons_;
  Vocabulary vocabulary_;
  std::ptrdiff_t stop_index_ = -1;
};

// Frozen feature index space: fixed slots first, then the n-gram inventory.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  // Inventory entries are n-gram keys (tokens joined with kNgramJoin) in
  // their final index order.
  explicit FeatureSpace(std::vector<std::string> ngrams);

  // N-grams of orders 1..3 with at least min_ngram_count total occurrences
  // across the posts enter the inventory, ordered by (order, key).
  static FeatureSpace build(const std::vector<Post>& posts,
                            const Analyzer& analyzer,
                            std::size_t min_ngram_count);

  std::size_t size() const { return kFixedSlotCount + ngrams_.size(); }
  std::size_t ngram_count() const { return ngrams_.size(); }
  const std::vector<std::string>& ngrams() const { return ngrams_; }

  std::uint32_t index_of(FixedSlot slot) const {
    return static_cast<std::uint32_t>(slot);
  }
  std::optional<std::uint32_t> ngram_index(std::string_view key) const;
  // Fixed-slot name or the n-gram key at this index.
  std::string feature_name(std::uint32_t index) const;

  bool operator==(const FeatureSpace& other) const {
    return ngrams_ == other.ngrams_;
  }

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

  std::vector<std::string> ngrams_;
  std::unordered_map<std::string, std::uint32_t, Hash, Eq> index_;
};

FeatureVector featurize(const Post& post, const FeatureSpace& space,
                        const Analyzer& analyzer,
                        const std::vector<Timestamp>& author_history);

}  // namespace psylex
