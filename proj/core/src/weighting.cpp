#include "psylex/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "psylex/error.hpp"
#include "psylex/rng.hpp"

namespace psylex {

WeightingContext fit_weights(const std::vector<FeatureVector>& vectors,
                             const std::vector<Label>& labels,
                             std::size_t space_size) {
  if (vectors.size() != labels.size()) {
    throw Error("vector/label count mismatch");
  }
  WeightingContext ctx;
  ctx.s_suicidal.assign(space_size, 0.0);
  ctx.s_non_suicidal.assign(space_size, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    bool suicidal = labels[i] == Label::Suicidal;
    auto& totals = suicidal ? ctx.s_suicidal : ctx.s_non_suicidal;
    (suicidal ? ctx.n_suicidal : ctx.n_non_suicidal) += 1;
    for (const auto& [index, value] : vectors[i].entries()) {
      if (index >= space_size) {
        throw Error("feature index " + std::to_string(index) +
                    " outside space of size " + std::to_string(space_size));
      }
      totals[index] += value;
    }
  }
  if (ctx.n_suicidal == 0 || ctx.n_non_suicidal == 0) {
    throw Error("weighting requires both classes in the training set");
  }
  return ctx;
}

double weight(double w_o, double s_s, double s_n, std::size_t n_s,
              std::size_t n_n) {
  if (n_s == 0) throw Error("weight() requires a non-empty positive class");
  double denom = s_n + 1.0;
  double floor_arg = 1.0 / (denom + static_cast<double>(n_s));
  double arg = std::max(s_s / denom, floor_arg);
  return w_o * std::log(arg) *
         (static_cast<double>(n_n) / static_cast<double>(n_s));
}

std::string_view to_string(WeightSlots slots) {
  switch (slots) {
    case WeightSlots::All: return "all";
    case WeightSlots::NgramsOnly: return "ngrams";
    case WeightSlots::FixedOnly: return "fixed";
  }
  return "unknown";
}

std::optional<WeightSlots> weight_slots_from(std::string_view name) {
  if (name == "all") return WeightSlots::All;
  if (name == "ngrams") return WeightSlots::NgramsOnly;
  if (name == "fixed") return WeightSlots::FixedOnly;
  return std::nullopt;
}

FeatureVector apply_weights(const FeatureVector& v, const WeightingContext& ctx,
                            bool enabled, WeightSlots slots) {
  if (!enabled) return v;
  FeatureVector out;
  for (const auto& [index, value] : v.entries()) {
    bool fixed = index < kFixedSlotCount;
    bool selected = slots == WeightSlots::All ||
                    (fixed ? slots == WeightSlots::FixedOnly
                           : slots == WeightSlots::NgramsOnly);
    if (!selected) {
      out.set(index, value);
      continue;
    }
    if (index >= ctx.s_suicidal.size()) {
      throw Error("feature index " + std::to_string(index) +
                  " outside the fitted weighting context");
    }
    out.set(index, weight(value, ctx.s_suicidal[index], ctx.s_non_suicidal[index],
                          ctx.n_suicidal, ctx.n_non_suicidal));
  }
  return out;
}

void oversample(std::vector<FeatureVector>& vectors, std::vector<Label>& labels,
                double target_ratio, std::uint64_t seed) {
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw Error("oversample ratio must be in (0, 1]");
  }
  if (vectors.size() != labels.size()) {
    throw Error("vector/label count mismatch");
  }
  std::vector<std::size_t> suicidal_idx;
  std::vector<std::size_t> non_suicidal_idx;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::Suicidal ? suicidal_idx : non_suicidal_idx).push_back(i);
  }
  if (suicidal_idx.empty() || non_suicidal_idx.empty()) {
    throw Error("oversampling requires both classes");
  }
  const auto& minority = suicidal_idx.size() <= non_suicidal_idx.size()
                             ? suicidal_idx
                             : non_suicidal_idx;
  const auto& majority = suicidal_idx.size() <= non_suicidal_idx.size()
                             ? non_suicidal_idx
                             : suicidal_idx;
  auto target = static_cast<std::size_t>(
      std::ceil(target_ratio * static_cast<double>(majority.size())));

  std::mt19937_64 rng(seed);
  std::size_t have = minority.size();
  while (have < target) {
    std::size_t pick = minority[uniform_index(rng, minority.size())];
    vectors.push_back(vectors[pick]);
    labels.push_back(labels[pick]);
    ++have;
  }
}

}  // namespace psylex
