#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "psylex/classify.hpp"
#include "psylex/eval.hpp"
#include "psylex/features.hpp"
#include "psylex/pipeline.hpp"
#include "psylex/rng.hpp"
#include "psylex/segment.hpp"
#include "psylex/weighting.hpp"

namespace {

using namespace psylex;

// Shared fixtures, built once. A mid-sized synthetic corpus exercises the
// same code paths as a real one without shipping any data.
const Corpus& corpus() {
  static const Corpus c = synth_corpus(100, 400, 0.9, 42);
  return c;
}

const std::vector<Lexicon>& lexicons() {
  static const std::vector<Lexicon> l = synth_lexicons();
  return l;
}

const Analyzer& analyzer() {
  static const Analyzer a(lexicons(), {});
  return a;
}

struct Featurized {
  FeatureSpace space;
  AuthorHistories histories;
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
};

const Featurized& featurized() {
  static const Featurized f = [] {
    Featurized out{FeatureSpace::build(corpus().posts(), analyzer(), 2),
                   build_author_histories(corpus().posts()),
                   {},
                   {}};
    for (const Post& post : corpus()) {
      out.vectors.push_back(
          featurize(post, out.space, analyzer(), out.histories.at(post.author_id)));
      out.labels.push_back(*post.label);
    }
    return out;
  }();
  return f;
}

void bm_tokenize(benchmark::State& state) {
  const Analyzer& a = analyzer();
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < 64; ++i) texts.push_back(corpus()[i].text);
  for (auto _ : state) {
    for (const std::string& text : texts) {
      benchmark::DoNotOptimize(tokenize(text, a.vocabulary()));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(bm_tokenize);

void bm_featurize_post(benchmark::State& state) {
  const Featurized& f = featurized();
  const Post& post = corpus()[0];
  const std::vector<Timestamp>& history = f.histories.at(post.author_id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurize(post, f.space, analyzer(), history));
  }
}
BENCHMARK(bm_featurize_post);

void bm_feature_space_build(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(FeatureSpace::build(corpus().posts(), analyzer(), 2));
  }
}
BENCHMARK(bm_feature_space_build);

void bm_rbf_kernel(benchmark::State& state) {
  const Featurized& f = featurized();
  const FeatureVector& a = f.vectors[0];
  const FeatureVector& b = f.vectors[f.vectors.size() / 2];
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbf_kernel(a, b, 0.0078125));
  }
}
BENCHMARK(bm_rbf_kernel);

void bm_apply_weights(benchmark::State& state) {
  const Featurized& f = featurized();
  WeightingContext ctx = fit_weights(f.vectors, f.labels, f.space.size());
  for (auto _ : state) {
    for (const FeatureVector& v : f.vectors) {
      benchmark::DoNotOptimize(apply_weights(v, ctx, true));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(f.vectors.size()));
}
BENCHMARK(bm_apply_weights);

void bm_train(benchmark::State& state) {
  const Featurized& f = featurized();
  auto kind = static_cast<ClassifierKind>(state.range(0));
  Hyperparameters hp;
  hp.nb_alpha = 0.3;
  hp.svm_gamma = 0.0078125;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train(kind, f.vectors, f.labels, f.space.size(), hp, 42));
  }
}
BENCHMARK(bm_train)
    ->Arg(static_cast<int>(ClassifierKind::NaiveBayes))
    ->Arg(static_cast<int>(ClassifierKind::LogisticRegression))
    ->Arg(static_cast<int>(ClassifierKind::LinearSvm))
    ->Arg(static_cast<int>(ClassifierKind::RbfSvm))
    ->Unit(benchmark::kMillisecond);

void bm_predict_pipeline(benchmark::State& state) {
  PipelineConfig config;
  config.lexicons = lexicons();
  config.kind = ClassifierKind::LinearSvm;
  PipelineModel model = train_pipeline(corpus(), config, 42);
  std::vector<Post> posts(corpus().posts().begin(), corpus().posts().begin() + 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_pipeline(model, posts));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(posts.size()));
}
BENCHMARK(bm_predict_pipeline);

}  // namespace

BENCHMARK_MAIN();
