#include "psylex/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "manifest_json.hpp"
#include "psylex/error.hpp"
#include "psylex/rng.hpp"

namespace psylex {

namespace {

using json = nlohmann::ordered_json;

std::vector<Label> require_labels(const std::vector<Post>& posts) {
  std::vector<Label> labels;
  labels.reserve(posts.size());
  for (const Post& post : posts) {
    if (!post.label) {
      throw Error("unlabeled post '" + post.id + "' in training set");
    }
    labels.push_back(*post.label);
  }
  return labels;
}

}  // namespace

PipelineModel::PipelineModel(PipelineConfig config, FeatureSpace space,
                             std::optional<WeightingContext> weighting,
                             TrainedModel model, std::uint64_t seed)
    : config_(std::move(config)),
      analyzer_(config_.lexicons, config_.extra_vocabulary),
      space_(std::move(space)),
      weighting_(std::move(weighting)),
      model_(std::move(model)),
      seed_(seed) {}

PipelineModel train_pipeline(const std::vector<Post>& posts,
                             const PipelineConfig& config, std::uint64_t seed) {
  std::vector<Label> labels = require_labels(posts);
  Analyzer analyzer(config.lexicons, config.extra_vocabulary);
  FeatureSpace space =
      FeatureSpace::build(posts, analyzer, config.min_ngram_count);
  AuthorHistories histories = build_author_histories(posts);

  std::vector<FeatureVector> vectors;
  vectors.reserve(posts.size());
  for (const Post& post : posts) {
    vectors.push_back(
        featurize(post, space, analyzer, histories.at(post.author_id)));
  }

  std::optional<WeightingContext> ctx;
  if (config.weighting_enabled) {
    ctx = fit_weights(vectors, labels, space.size());
    for (FeatureVector& v : vectors) {
      v = apply_weights(v, *ctx, true, config.weight_slots);
    }
  }
  if (config.oversample_ratio > 0) {
    oversample(vectors, labels, config.oversample_ratio, derive_seed(seed, 1));
  }
  TrainedModel model = train(config.kind, vectors, labels, space.size(),
                             config.hyperparameters, derive_seed(seed, 2));
  return PipelineModel(config, std::move(space), std::move(ctx),
                       std::move(model), seed);
}

PipelineModel train_pipeline(const Corpus& corpus, const PipelineConfig& config,
                             std::uint64_t seed) {
  return train_pipeline(corpus.posts(), config, seed);
}

std::vector<Prediction> predict_pipeline(const PipelineModel& model,
                                         const std::vector<Post>& posts) {
  AuthorHistories histories = build_author_histories(posts);
  static const std::vector<Timestamp> kEmptyHistory;
  std::vector<Prediction> out;
  out.reserve(posts.size());
  for (const Post& post : posts) {
    auto it = histories.find(post.author_id);
    const auto& history = it == histories.end() ? kEmptyHistory : it->second;
    FeatureVector v = featurize(post, model.space(), model.analyzer(), history);
    if (model.weighting()) {
      v = apply_weights(v, *model.weighting(), true,
                        model.config().weight_slots);
    }
    out.push_back(model.model().predict(v));
  }
  return out;
}

std::string lexicon_fingerprint(const Lexicon& lexicon) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (const std::string& entry : lexicon.entries()) {
    for (unsigned char ch : entry) mix(ch);
    mix('\n');
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf);
}

namespace detail {

json hyperparameters_to_json(const Hyperparameters& hp) {
  json j;
  j["nb_alpha"] = hp.nb_alpha;
  j["lr_learning_rate"] = hp.lr_learning_rate;
  j["lr_epochs"] = hp.lr_epochs;
  j["lr_lambda"] = hp.lr_lambda;
  j["svm_c"] = hp.svm_c;
  j["svm_epochs"] = hp.svm_epochs;
  j["svm_gamma"] = hp.svm_gamma;
  j["smo_tolerance"] = hp.smo_tolerance;
  j["smo_max_passes"] = hp.smo_max_passes;
  return j;
}

Hyperparameters hyperparameters_from_json(const json& j) {
  Hyperparameters hp;
  hp.nb_alpha = j.at("nb_alpha").get<double>();
  hp.lr_learning_rate = j.at("lr_learning_rate").get<double>();
  hp.lr_epochs = j.at("lr_epochs").get<std::size_t>();
  hp.lr_lambda = j.at("lr_lambda").get<double>();
  hp.svm_c = j.at("svm_c").get<double>();
  hp.svm_epochs = j.at("svm_epochs").get<std::size_t>();
  hp.svm_gamma = j.at("svm_gamma").get<double>();
  hp.smo_tolerance = j.at("smo_tolerance").get<double>();
  hp.smo_max_passes = j.at("smo_max_passes").get<std::size_t>();
  return hp;
}

}  // namespace detail

namespace {

json vector_to_json(const FeatureVector& v) {
  json indices = json::array();
  json values = json::array();
  for (const auto& [index, value] : v.entries()) {
    indices.push_back(index);
    values.push_back(value);
  }
  json j;
  j["indices"] = std::move(indices);
  j["values"] = std::move(values);
  return j;
}

FeatureVector vector_from_json(const json& j) {
  const auto& indices = j.at("indices");
  const auto& values = j.at("values");
  if (indices.size() != values.size()) {
    throw Error("manifest vector index/value length mismatch");
  }
  std::vector<FeatureVector::Entry> entries;
  entries.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    entries.emplace_back(indices[i].get<std::uint32_t>(),
                         values[i].get<double>());
  }
  return FeatureVector(std::move(entries));
}

json parameters_to_json(const TrainedModel& model) {
  json j;
  if (const auto* nb = model.naive_bayes()) {
    j["log_prior_suicidal"] = nb->log_prior_suicidal;
    j["log_prior_non_suicidal"] = nb->log_prior_non_suicidal;
    j["log_likelihood_suicidal"] = nb->log_likelihood_suicidal;
    j["log_likelihood_non_suicidal"] = nb->log_likelihood_non_suicidal;
  } else if (const auto* lin = model.linear()) {
    j["weights"] = lin->weights;
    j["bias"] = lin->bias;
  } else if (const auto* svm = model.rbf()) {
    j["bias"] = svm->bias;
    j["gamma"] = svm->gamma;
    j["converged"] = svm->converged;
    json support = json::array();
    for (const SupportVector& sv : svm->support) {
      json entry = vector_to_json(sv.x);
      entry["coefficient"] = sv.coefficient;
      support.push_back(std::move(entry));
    }
    j["support"] = std::move(support);
  }
  return j;
}

TrainedModel::Params parameters_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: {
      NaiveBayesParams p;
      p.log_prior_suicidal = j.at("log_prior_suicidal").get<double>();
      p.log_prior_non_suicidal = j.at("log_prior_non_suicidal").get<double>();
      p.log_likelihood_suicidal =
          j.at("log_likelihood_suicidal").get<std::vector<double>>();
      p.log_likelihood_non_suicidal =
          j.at("log_likelihood_non_suicidal").get<std::vector<double>>();
      return p;
    }
    case ClassifierKind::LogisticRegression:
    case ClassifierKind::LinearSvm: {
      LinearParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      return p;
    }
    case ClassifierKind::RbfSvm: {
      RbfSvmParams p;
      p.bias = j.at("bias").get<double>();
      p.gamma = j.at("gamma").get<double>();
      p.converged = j.at("converged").get<bool>();
      for (const json& entry : j.at("support")) {
        p.support.push_back(SupportVector{
            vector_from_json(entry), entry.at("coefficient").get<double>()});
      }
      return p;
    }
  }
  throw Error("unknown classifier kind in manifest");
}

constexpr int kManifestVersion = 1;

}  // namespace

std::string model_to_json(const PipelineModel& model) {
  const PipelineConfig& config = model.config();
  json j;
  j["format"] = "psylex-model";
  j["version"] = kManifestVersion;
  j["seed"] = model.seed();
  j["classifier"] = std::string(to_string(config.kind));
  j["hyperparameters"] = detail::hyperparameters_to_json(config.hyperparameters);

  json pipeline;
  pipeline["min_ngram_count"] = config.min_ngram_count;
  pipeline["weighting"] = config.weighting_enabled;
  pipeline["weight_slots"] = std::string(to_string(config.weight_slots));
  pipeline["oversample_ratio"] = config.oversample_ratio;
  pipeline["extra_vocabulary"] = config.extra_vocabulary;
  j["pipeline"] = std::move(pipeline);

  json lexicons = json::array();
  for (const Lexicon& lex : config.lexicons) {
    json entry;
    entry["name"] = lex.name();
    entry["category"] = std::string(to_string(lex.category()));
    entry["entries"] = lex.size();
    entry["fingerprint"] = lexicon_fingerprint(lex);
    lexicons.push_back(std::move(entry));
  }
  j["lexicons"] = std::move(lexicons);

  json space;
  space["fixed_slot_count"] = kFixedSlotCount;
  space["ngrams"] = model.space().ngrams();
  j["feature_space"] = std::move(space);

  if (model.weighting()) {
    const WeightingContext& ctx = *model.weighting();
    json w;
    w["n_suicidal"] = ctx.n_suicidal;
    w["n_non_suicidal"] = ctx.n_non_suicidal;
    w["s_suicidal"] = ctx.s_suicidal;
    w["s_non_suicidal"] = ctx.s_non_suicidal;
    j["weighting_context"] = std::move(w);
  } else {
    j["weighting_context"] = nullptr;
  }

  j["parameters"] = parameters_to_json(model.model());
  return j.dump() + "\n";
}

void save_model(const PipelineModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model manifest '" + path.string() + "'");
  out << model_to_json(model);
}

PipelineModel model_from_json(const std::string& text,
                              std::vector<Lexicon> lexicons) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("model manifest is not valid JSON");
  }
  if (j.value("format", "") != "psylex-model") {
    throw Error("not a model manifest (missing format marker)");
  }
  if (j.at("version").get<int>() != kManifestVersion) {
    throw Error("unsupported model manifest version " +
                j.at("version").dump());
  }

  const json& manifest_lexicons = j.at("lexicons");
  if (manifest_lexicons.size() != lexicons.size()) {
    throw Error("model expects " + std::to_string(manifest_lexicons.size()) +
                " lexicons, got " + std::to_string(lexicons.size()));
  }
  for (std::size_t i = 0; i < lexicons.size(); ++i) {
    const json& expected = manifest_lexicons[i];
    std::string category = expected.at("category").get<std::string>();
    std::string fingerprint = expected.at("fingerprint").get<std::string>();
    if (category != to_string(lexicons[i].category())) {
      throw Error("lexicon " + std::to_string(i) + " ('" + lexicons[i].name() +
                  "') has category " +
                  std::string(to_string(lexicons[i].category())) +
                  ", model expects " + category);
    }
    if (fingerprint != lexicon_fingerprint(lexicons[i])) {
      throw Error("lexicon '" + lexicons[i].name() +
                  "' does not match the fingerprint in the model manifest");
    }
  }

  PipelineConfig config;
  config.lexicons = std::move(lexicons);
  const json& pipeline = j.at("pipeline");
  config.extra_vocabulary =
      pipeline.at("extra_vocabulary").get<std::vector<std::string>>();
  config.min_ngram_count = pipeline.at("min_ngram_count").get<std::size_t>();
  config.weighting_enabled = pipeline.at("weighting").get<bool>();
  auto slots =
      weight_slots_from(pipeline.at("weight_slots").get<std::string>());
  if (!slots) {
    throw Error("unknown weight_slots value in model manifest");
  }
  config.weight_slots = *slots;
  config.oversample_ratio = pipeline.at("oversample_ratio").get<double>();
  auto kind = classifier_kind_from(j.at("classifier").get<std::string>());
  if (!kind) throw Error("unknown classifier kind in model manifest");
  config.kind = *kind;
  config.hyperparameters =
      detail::hyperparameters_from_json(j.at("hyperparameters"));

  if (j.at("feature_space").at("fixed_slot_count").get<std::uint32_t>() !=
      kFixedSlotCount) {
    throw Error("model manifest fixed slot layout does not match this build");
  }
  FeatureSpace space(
      j.at("feature_space").at("ngrams").get<std::vector<std::string>>());

  std::optional<WeightingContext> ctx;
  const json& w = j.at("weighting_context");
  if (!w.is_null()) {
    WeightingContext loaded;
    loaded.n_suicidal = w.at("n_suicidal").get<std::size_t>();
    loaded.n_non_suicidal = w.at("n_non_suicidal").get<std::size_t>();
    loaded.s_suicidal = w.at("s_suicidal").get<std::vector<double>>();
    loaded.s_non_suicidal = w.at("s_non_suicidal").get<std::vector<double>>();
    ctx = std::move(loaded);
  }

  TrainedModel model(config.kind, config.hyperparameters, space.size(),
                     parameters_from_json(config.kind, j.at("parameters")));
  return PipelineModel(std::move(config), std::move(space), std::move(ctx),
                       std::move(model), j.at("seed").get<std::uint64_t>());
}

PipelineModel load_model(const std::filesystem::path& path,
                         std::vector<Lexicon> lexicons) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), std::move(lexicons));
}

}  // namespace psylex
