#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psylex/classify.hpp"
#include "psylex/corpus.hpp"
#include "psylex/features.hpp"
#include "psylex/weighting.hpp"

namespace psylex {

// Everything the training pipeline needs beyond the posts themselves.
struct PipelineConfig {
  std::vector<Lexicon> lexicons;
  std::vector<std::string> extra_vocabulary;
  std::size_t min_ngram_count = 2;
  bool weighting_enabled = false;
  WeightSlots weight_slots = WeightSlots::All;
  // 0 disables; otherwise minority is resampled up to ratio * majority.
  double oversample_ratio = 0.0;
  ClassifierKind kind = ClassifierKind::RbfSvm;
  Hyperparameters hyperparameters;
};

// A trained classifier together with the frozen feature space, fitted
// weighting context and the lexicons everything was computed against.
class PipelineModel {
 public:
  PipelineModel(PipelineConfig config, FeatureSpace space,
                std::optional<WeightingContext> weighting, TrainedModel model,
                std::uint64_t seed);

  const PipelineConfig& config() const { return config_; }
  const Analyzer& analyzer() const { return analyzer_; }
  const FeatureSpace& space() const { return space_; }
  const std::optional<WeightingContext>& weighting() const { return weighting_; }
  const TrainedModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

 private:
  PipelineConfig config_;
  Analyzer analyzer_;
  FeatureSpace space_;
  std::optional<WeightingContext> weighting_;
  TrainedModel model_;
  std::uint64_t seed_;
};

// Segment, build the feature space, featurize, fit weights, oversample and
// train, all on the given posts only. Throws when a post is unlabeled.
PipelineModel train_pipeline(const std::vector<Post>& posts,
                             const PipelineConfig& config, std::uint64_t seed);
PipelineModel train_pipeline(const Corpus& corpus, const PipelineConfig& config,
                             std::uint64_t seed);

// Featurizes with the model's frozen space (author histories come from the
// given posts) and scores each post, preserving order.
std::vector<Prediction> predict_pipeline(const PipelineModel& model,
                                         const std::vector<Post>& posts);

// 64-bit FNV-1a over the sorted entries, as a fixed-width hex string.
std::string lexicon_fingerprint(const Lexicon& lexicon);

// Versioned JSON manifest; serialize -> parse -> serialize is byte-identical.
std::string model_to_json(const PipelineModel& model);
void save_model(const PipelineModel& model, const std::filesystem::path& path);

// Lexicons are not stored in the manifest, only fingerprinted; the caller
// supplies them again and they are checked category-by-category.
PipelineModel load_model(const std::filesystem::path& path,
                         std::vector<Lexicon> lexicons);
PipelineModel model_from_json(const std::string& text,
                              std::vector<Lexicon> lexicons);

}  // namespace psylex
