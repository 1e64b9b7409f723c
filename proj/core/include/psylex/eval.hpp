#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/pipeline.hpp"

namespace psylex {

// Positive class is Suicidal.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double accuracy = 0.0;

  bool operator==(const Metrics&) const = default;
};

// Zero denominators yield 0.
Metrics metrics(const ConfusionCounts& c);

// Partition of 0..n-1 into k folds with sizes within 1 of each other,
// deterministic per seed. With labels supplied the split is stratified:
// per-fold positive counts also differ by at most 1. Each fold is sorted.
std::vector<std::vector<std::size_t>> kfold_split(
    std::size_t n, std::size_t k, std::uint64_t seed,
    const std::vector<Label>& labels = {});

struct EvalReport {
  ClassifierKind kind = ClassifierKind::RbfSvm;
  Hyperparameters hyperparameters;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<ConfusionCounts> fold_counts;
  ConfusionCounts total;
  // Micro-averaged: computed once from the summed counts.
  Metrics aggregate;
};

// Called after each fold with the model fitted on that fold's training set.
using FoldObserver = std::function<void(
    std::size_t fold, const PipelineModel& model,
    const std::vector<std::size_t>& test_indices)>;

// Fits the entire pipeline (feature space, weights, oversampling, training)
// on each training fold only; fold f trains with seed derive_seed(seed, f).
EvalReport cross_validate(const Corpus& corpus, const PipelineConfig& config,
                          std::size_t k, std::uint64_t seed,
                          const FoldObserver& observer = {});

std::string format_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

struct GridSearchResult {
  struct Cell {
    double c = 0.0;
    double gamma = 0.0;
    Metrics metrics;
  };
  std::vector<Cell> table;
  double best_c = 0.0;
  double best_gamma = 0.0;
  Metrics best_metrics;
};

// Cross-validates an RBF model per (C, gamma) cell; best by F-measure with
// ties broken toward smaller C, then smaller gamma.
GridSearchResult grid_search(const Corpus& corpus, PipelineConfig config,
                             const std::vector<double>& c_grid,
                             const std::vector<double>& gamma_grid,
                             std::size_t k, std::uint64_t seed);

// 2^-5 .. 2^15 and 2^-15 .. 2^3, exponent step 1.
std::vector<double> default_c_grid();
std::vector<double> default_gamma_grid();

std::string format_grid(const GridSearchResult& result);
std::string grid_to_json(const GridSearchResult& result);

// Marker tokens that carry the minority-class signal in synthetic corpora.
const std::vector<std::string>& synth_markers();

// Lexicons covering the synthetic generator's word pools, markers included.
std::vector<Lexicon> synth_lexicons();

// Deterministic labeled corpus: minority (Suicidal) posts contain a marker
// token with probability signal + (1-signal)*base rate, skew night-ward and
// original-ward; majority posts mirror the reported contrasts.
Corpus synth_corpus(std::size_t n_minority, std::size_t n_majority,
                    double signal_strength, std::uint64_t seed);

}  // namespace psylex
