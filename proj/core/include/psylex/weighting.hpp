#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/features.hpp"

namespace psylex {

// Per-class feature occurrence totals fitted on a training set.
struct WeightingContext {
  std::size_t n_suicidal = 0;
  std::size_t n_non_suicidal = 0;
  // Dense over the feature space; index -> total occurrences in that class.
  std::vector<double> s_suicidal;
  std::vector<double> s_non_suicidal;

  bool operator==(const WeightingContext&) const = default;
};

// Sums feature values per class. Throws when either class is absent or a
// vector indexes outside the space.
WeightingContext fit_weights(const std::vector<FeatureVector>& vectors,
                             const std::vector<Label>& labels,
                             std::size_t space_size);

// w_o * ln(s_s / (s_n + 1)) * (n_n / n_s), with the log argument floored at
// 1 / (s_n + 1 + n_s) so s_s = 0 stays finite. Throws when n_s is 0.
double weight(double w_o, double s_s, double s_n, std::size_t n_s,
              std::size_t n_n);

enum class WeightSlots { All, NgramsOnly, FixedOnly };

std::string_view to_string(WeightSlots slots);
std::optional<WeightSlots> weight_slots_from(std::string_view name);

// Re-weights every stored value through weight(); identity when disabled.
// The slots selector limits re-weighting to n-gram or fixed indices.
FeatureVector apply_weights(const FeatureVector& v, const WeightingContext& ctx,
                            bool enabled, WeightSlots slots = WeightSlots::All);

// Appends sampled-with-replacement copies of minority originals until the
// minority count reaches ceil(target_ratio * majority count). Originals are
// always retained; deterministic per seed.
void oversample(std::vector<FeatureVector>& vectors, std::vector<Label>& labels,
                double target_ratio, std::uint64_t seed);

}  // namespace psylex
