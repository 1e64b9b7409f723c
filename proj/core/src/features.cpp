#include "psylex/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "psylex/error.hpp"

namespace psylex {

std::string_view to_string(TimeBin bin) {
  switch (bin) {
    case TimeBin::Night: return "night";
    case TimeBin::Morning: return "morning";
    case TimeBin::Afternoon: return "afternoon";
    case TimeBin::Evening: return "evening";
  }
  return "unknown";
}

TimeBin time_bin(int hour) {
  if (hour >= 23 || hour < 7) return TimeBin::Night;
  if (hour < 14) return TimeBin::Morning;
  if (hour < 18) return TimeBin::Afternoon;
  return TimeBin::Evening;
}

TimeBin time_bin(const Timestamp& posted_at) { return time_bin(posted_at.hour); }

std::string_view to_string(FixedSlot slot) {
  switch (slot) {
    case FixedSlot::PositiveCount: return "positive_count";
    case FixedSlot::NegativeCount: return "negative_count";
    case FixedSlot::NegPosRatio: return "neg_pos_ratio";
    case FixedSlot::PsychCount: return "psych_count";
    case FixedSlot::SelfRefCount: return "self_ref_count";
    case FixedSlot::OtherRefCount: return "other_ref_count";
    case FixedSlot::AdjectiveCount: return "adjective_count";
    case FixedSlot::NounCount: return "noun_count";
    case FixedSlot::VerbCount: return "verb_count";
    case FixedSlot::TimeNight: return "time_night";
    case FixedSlot::TimeMorning: return "time_morning";
    case FixedSlot::TimeAfternoon: return "time_afternoon";
    case FixedSlot::TimeEvening: return "time_evening";
    case FixedSlot::IsOriginal: return "is_original";
    case FixedSlot::PostingFreqDeviation: return "posting_freq_deviation";
  }
  return "unknown";
}

std::optional<FixedSlot> fixed_slot_from(std::string_view name) {
  for (std::uint32_t i = 0; i < kFixedSlotCount; ++i) {
    FixedSlot slot = static_cast<FixedSlot>(i);
    if (to_string(slot) == name) return slot;
  }
  return std::nullopt;
}

FeatureVector::FeatureVector(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  std::uint32_t prev = 0;
  bool first = true;
  for (const auto& [index, value] : entries_) {
    if (!first && index == prev) {
      throw Error("duplicate feature index " + std::to_string(index));
    }
    if (!std::isfinite(value)) {
      throw Error("non-finite value at feature " + std::to_string(index));
    }
    prev = index;
    first = false;
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
}

void FeatureVector::set(std::uint32_t index, double value) {
  if (!std::isfinite(value)) {
    throw Error("non-finite value at feature " + std::to_string(index));
  }
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::uint32_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) {
    if (value == 0.0) {
      entries_.erase(it);
    } else {
      it->second = value;
    }
  } else if (value != 0.0) {
    entries_.insert(it, {index, value});
  }
}

double FeatureVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::uint32_t i) { return e.first < i; });
  return it != entries_.end() && it->first == index ? it->second : 0.0;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() || ib != b.entries().end()) {
    double d;
    if (ib == b.entries().end() ||
        (ia != a.entries().end() && ia->first < ib->first)) {
      d = ia->second;
      ++ia;
    } else if (ia == a.entries().end() || ib->first < ia->first) {
      d = ib->second;
      ++ib;
    } else {
      d = ia->second - ib->second;
      ++ia;
      ++ib;
    }
    sum += d * d;
  }
  return sum;
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens,
                                        std::size_t order) {
  if (order < 1 || order > 3) {
    throw Error("n-gram order " + std::to_string(order) + " not in 1..3");
  }
  std::vector<std::string> out;
  if (tokens.size() < order) return out;
  out.reserve(tokens.size() - order + 1);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < order; ++j) {
      key += kNgramJoin;
      key += tokens[i + j];
    }
    out.push_back(std::move(key));
  }
  return out;
}

double posting_freq_deviation(const Post& post,
                              const std::vector<Timestamp>& author_history) {
  if (author_history.size() <= 1) return 0.0;
  std::set<int> active_days;
  std::size_t same_day = 0;
  const int day = post.posted_at.day_key();
  for (const Timestamp& ts : author_history) {
    active_days.insert(ts.day_key());
    if (ts.day_key() == day) ++same_day;
  }
  if (same_day == 0 || active_days.empty()) return 0.0;
  double mean = static_cast<double>(author_history.size()) /
                static_cast<double>(active_days.size());
  return std::log(static_cast<double>(same_day) / mean);
}

AuthorHistories build_author_histories(const std::vector<Post>& posts) {
  AuthorHistories histories;
  for (const Post& post : posts) {
    histories[post.author_id].push_back(post.posted_at);
  }
  return histories;
}

Analyzer::Analyzer(std::vector<Lexicon> lexicons,
                   const std::vector<std::string>& extra_vocabulary)
    : lexicons_(std::move(lexicons)) {
  for (std::size_t i = 0; i < lexicons_.size(); ++i) {
    for (const std::string& entry : lexicons_[i].entries()) {
      vocabulary_.add(entry);
    }
    if (lexicons_[i].category() == LexiconCategory::StopWord) {
      stop_index_ = static_cast<std::ptrdiff_t>(i);
    }
  }
  for (const std::string& entry : extra_vocabulary) vocabulary_.add(entry);
}

const Lexicon* Analyzer::stop_words() const {
  return stop_index_ < 0 ? nullptr
                         : &lexicons_[static_cast<std::size_t>(stop_index_)];
}

TokenSequence Analyzer::segment(std::string_view text) const {
  return psylex::segment(text, vocabulary_, stop_words());
}

CategoryCounts Analyzer::counts(const std::vector<std::string>& tokens) const {
  return count_categories(tokens, lexicons_);
}

FeatureSpace::FeatureSpace(std::vector<std::string> ngrams)
    : ngrams_(std::move(ngrams)) {
  index_.reserve(ngrams_.size());
  for (std::uint32_t i = 0; i < ngrams_.size(); ++i) {
    if (!index_.emplace(ngrams_[i], kFixedSlotCount + i).second) {
      throw Error("duplicate n-gram inventory entry '" + ngrams_[i] + "'");
    }
  }
}

FeatureSpace FeatureSpace::build(const std::vector<Post>& posts,
                                 const Analyzer& analyzer,
                                 std::size_t min_ngram_count) {
  if (posts.empty()) throw Error("cannot build a feature space from an empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const Post& post : posts) {
    TokenSequence seq = analyzer.segment(post.text);
    for (std::size_t order = 1; order <= 3; ++order) {
      for (std::string& key : extract_ngrams(seq.tokens, order)) {
        ++counts[std::move(key)];
      }
    }
  }
  std::vector<std::string> kept;
  for (const auto& [key, count] : counts) {
    if (count >= min_ngram_count) kept.push_back(key);
  }
  // Group by order, then key; map order is by key alone.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const std::string& a, const std::string& b) {
                     auto order = [](const std::string& s) {
                       return std::count(s.begin(), s.end(), kNgramJoin);
                     };
                     return order(a) < order(b);
                   });
  return FeatureSpace(std::move(kept));
}

std::optional<std::uint32_t> FeatureSpace::ngram_index(
    std::string_view key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string FeatureSpace::feature_name(std::uint32_t index) const {
  if (index < kFixedSlotCount) {
    return std::string(to_string(static_cast<FixedSlot>(index)));
  }
  std::size_t i = index - kFixedSlotCount;
  if (i >= ngrams_.size()) {
    throw Error("feature index " + std::to_string(index) + " out of range");
  }
  return ngrams_[i];
}

FeatureVector featurize(const Post& post, const FeatureSpace& space,
                        const Analyzer& analyzer,
                        const std::vector<Timestamp>& author_history) {
  TokenSequence seq = analyzer.segment(post.text);
  CategoryCounts counts = analyzer.counts(seq.tokens);

  FeatureVector v;
  auto set_count = [&](FixedSlot slot, std::size_t n) {
    if (n > 0) v.set(space.index_of(slot), static_cast<double>(n));
  };
  set_count(FixedSlot::PositiveCount, counts.positive);
  set_count(FixedSlot::NegativeCount, counts.negative);
  double ratio = neg_pos_ratio(counts.negative, counts.positive);
  if (ratio != 0.0) v.set(space.index_of(FixedSlot::NegPosRatio), ratio);
  set_count(FixedSlot::PsychCount, counts.psych_terms);
  set_count(FixedSlot::SelfRefCount, counts.self_refs);
  set_count(FixedSlot::OtherRefCount, counts.other_refs);
  set_count(FixedSlot::AdjectiveCount, counts.adjectives);
  set_count(FixedSlot::NounCount, counts.nouns);
  set_count(FixedSlot::VerbCount, counts.verbs);
  v.set(space.index_of(time_bin_slot(time_bin(post.posted_at))), 1.0);
  if (post.post_type == PostType::Original) {
    v.set(space.index_of(FixedSlot::IsOriginal), 1.0);
  }
  double dev = posting_freq_deviation(post, author_history);
  if (dev != 0.0) v.set(space.index_of(FixedSlot::PostingFreqDeviation), dev);

  for (std::size_t order = 1; order <= 3; ++order) {
    for (const std::string& key : extract_ngrams(seq.tokens, order)) {
      if (auto index = space.ngram_index(key)) {
        v.set(*index, v.at(*index) + 1.0);
      }
    }
  }
  return v;
}

}  // namespace psylex
