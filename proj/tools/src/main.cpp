#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psylex/classify.hpp"
#include "psylex/corpus.hpp"
#include "psylex/error.hpp"
#include "psylex/eval.hpp"
#include "psylex/features.hpp"
#include "psylex/lexicon.hpp"
#include "psylex/pipeline.hpp"
#include "psylex/weighting.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string corpus;
  std::vector<std::pair<std::string, std::string>> lexicons;  // category, path
  std::string vocab;
  std::string model;
  std::string classifier = "svm-rbf";
  double c = 16.0;
  double gamma = 3.0517578125e-5;
  std::size_t k = 10;
  std::uint64_t seed = 42;
  std::string weighting = "off";
  std::string weight_slots = "all";
  double oversample_ratio = 0.0;
  std::size_t min_ngram_count = 2;
  std::string out = ".";
  std::size_t minority = 614;
  std::size_t majority = 6090;
  double signal = 0.9;
  std::map<std::string, std::string> fields;
  std::vector<double> c_grid;
  std::vector<double> gamma_grid;
};

json config_to_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["corpus"] = cfg.corpus;
  json lexicons = json::array();
  for (const auto& [category, path] : cfg.lexicons) {
    lexicons.push_back(json::array({category, path}));
  }
  j["lexicons"] = std::move(lexicons);
  j["vocab"] = cfg.vocab;
  j["model"] = cfg.model;
  j["classifier"] = cfg.classifier;
  j["c"] = cfg.c;
  j["gamma"] = cfg.gamma;
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  j["weighting"] = cfg.weighting;
  j["weight_slots"] = cfg.weight_slots;
  j["oversample_ratio"] = cfg.oversample_ratio;
  j["min_ngram_count"] = cfg.min_ngram_count;
  j["out"] = cfg.out;
  j["minority"] = cfg.minority;
  j["majority"] = cfg.majority;
  j["signal"] = cfg.signal;
  j["fields"] = cfg.fields;
  j["c_grid"] = cfg.c_grid;
  j["gamma_grid"] = cfg.gamma_grid;
  return j;
}

void config_from_json(RunConfig& cfg, const json& j) {
  auto get = [&j](const char* key, auto& target) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
      target = it->get<std::decay_t<decltype(target)>>();
    }
  };
  get("corpus", cfg.corpus);
  if (auto it = j.find("lexicons"); it != j.end()) {
    cfg.lexicons.clear();
    for (const json& pair : *it) {
      cfg.lexicons.emplace_back(pair.at(0).get<std::string>(),
                                pair.at(1).get<std::string>());
    }
  }
  get("vocab", cfg.vocab);
  get("model", cfg.model);
  get("classifier", cfg.classifier);
  get("c", cfg.c);
  get("gamma", cfg.gamma);
  get("k", cfg.k);
  get("seed", cfg.seed);
  get("weighting", cfg.weighting);
  get("weight_slots", cfg.weight_slots);
  get("oversample_ratio", cfg.oversample_ratio);
  get("min_ngram_count", cfg.min_ngram_count);
  get("out", cfg.out);
  get("minority", cfg.minority);
  get("majority", cfg.majority);
  get("signal", cfg.signal);
  get("fields", cfg.fields);
  get("c_grid", cfg.c_grid);
  get("gamma_grid", cfg.gamma_grid);
}

RunConfig load_config_file(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw psylex::ConfigError("cannot open config file '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw psylex::ConfigError("config file '" + path + "' is not a JSON object");
  }
  config_from_json(cfg, j);
  return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw psylex::Error("cannot write '" + path.string() + "'");
  out << contents;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw psylex::Error("cannot create output directory '" + cfg.out + "'");
  }
  write_file(dir / "resolved_config.json", config_to_json(cfg).dump(2) + "\n");
  return dir;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) {
    throw psylex::ConfigError(std::string("--") + what + " is required");
  }
  if (!fs::exists(path)) {
    throw psylex::ConfigError(std::string(what) + " file not found: '" + path +
                              "'");
  }
}

std::vector<psylex::Lexicon> load_lexicons(const RunConfig& cfg) {
  std::vector<psylex::Lexicon> lexicons;
  for (const auto& [category_name, path] : cfg.lexicons) {
    auto category = psylex::lexicon_category_from(category_name);
    if (!category) {
      throw psylex::ConfigError("unknown lexicon category '" + category_name +
                                "'");
    }
    if (!fs::exists(path)) {
      throw psylex::ConfigError("lexicon file not found: '" + path + "'");
    }
    lexicons.push_back(psylex::load_lexicon(path, *category));
  }
  return lexicons;
}

psylex::IngestResult load_corpus(const RunConfig& cfg) {
  require_file(cfg.corpus, "corpus");
  psylex::IngestResult result = psylex::ingest(cfg.corpus, cfg.fields);
  if (!result.errors.empty()) {
    std::cerr << "warning: skipped " << result.errors.size()
              << " malformed records (first at line "
              << result.errors.front().line << ": "
              << result.errors.front().message << ")\n";
  }
  return result;
}

psylex::PipelineConfig build_pipeline_config(const RunConfig& cfg,
                                             std::vector<psylex::Lexicon> lexicons) {
  psylex::PipelineConfig config;
  config.lexicons = std::move(lexicons);
  if (!cfg.vocab.empty()) {
    require_file(cfg.vocab, "vocab");
    config.extra_vocabulary = psylex::load_wordlist(cfg.vocab);
  }
  config.min_ngram_count = cfg.min_ngram_count;

  if (cfg.weighting == "on") {
    config.weighting_enabled = true;
  } else if (cfg.weighting != "off") {
    throw psylex::ConfigError("--weighting must be 'on' or 'off'");
  }
  auto slots = psylex::weight_slots_from(cfg.weight_slots);
  if (!slots) {
    throw psylex::ConfigError(
        "--weight-slots must be 'all', 'ngrams' or 'fixed'");
  }
  config.weight_slots = *slots;
  if (cfg.oversample_ratio != 0.0 &&
      !(cfg.oversample_ratio > 0.0 && cfg.oversample_ratio <= 1.0)) {
    throw psylex::ConfigError("--oversample-ratio must be 0 or in (0, 1]");
  }
  config.oversample_ratio = cfg.oversample_ratio;

  auto kind = psylex::classifier_kind_from(cfg.classifier);
  if (!kind) {
    throw psylex::ConfigError(
        "--classifier must be one of nb, lr, svm-linear, svm-rbf");
  }
  config.kind = *kind;
  config.hyperparameters.svm_c = cfg.c;
  config.hyperparameters.svm_gamma = cfg.gamma;
  try {
    psylex::validate(config.kind, config.hyperparameters);
  } catch (const psylex::Error& e) {
    throw psylex::ConfigError(e.what());
  }
  return config;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

int do_ingest(const RunConfig& cfg) {
  psylex::IngestResult result = load_corpus(cfg);
  fs::path dir = prepare_out_dir(cfg);
  psylex::write_corpus(result.corpus, dir / "corpus.jsonl");

  json report;
  report["format"] = "psylex-ingest";
  report["version"] = 1;
  report["kept"] = result.corpus.size();
  report["dropped_blank"] = result.dropped_blank;
  json errors = json::array();
  for (const psylex::RecordError& err : result.errors) {
    json entry;
    entry["line"] = err.line;
    entry["message"] = err.message;
    errors.push_back(std::move(entry));
  }
  report["errors"] = std::move(errors);
  write_file(dir / "ingest_report.json", report.dump(2) + "\n");

  std::cout << "kept " << result.corpus.size() << " posts, dropped "
            << result.dropped_blank << " blank, " << result.errors.size()
            << " malformed\n";
  return 0;
}

int do_featurize(const RunConfig& cfg) {
  psylex::IngestResult ingested = load_corpus(cfg);
  std::vector<psylex::Lexicon> lexicons = load_lexicons(cfg);
  psylex::PipelineConfig config = build_pipeline_config(cfg, std::move(lexicons));
  fs::path dir = prepare_out_dir(cfg);

  psylex::Analyzer analyzer(config.lexicons, config.extra_vocabulary);
  const auto& posts = ingested.corpus.posts();
  psylex::FeatureSpace space =
      psylex::FeatureSpace::build(posts, analyzer, config.min_ngram_count);
  psylex::AuthorHistories histories = psylex::build_author_histories(posts);

  json space_json;
  space_json["format"] = "psylex-feature-space";
  space_json["version"] = 1;
  json fixed = json::array();
  for (std::uint32_t i = 0; i < psylex::kFixedSlotCount; ++i) {
    fixed.push_back(
        std::string(to_string(static_cast<psylex::FixedSlot>(i))));
  }
  space_json["fixed_slots"] = std::move(fixed);
  space_json["ngrams"] = space.ngrams();
  write_file(dir / "feature_space.json", space_json.dump() + "\n");

  std::ofstream features(dir / "features.jsonl", std::ios::binary);
  if (!features) throw psylex::Error("cannot write features.jsonl");
  for (const psylex::Post& post : posts) {
    psylex::FeatureVector v =
        featurize(post, space, analyzer, histories.at(post.author_id));
    json line;
    line["id"] = post.id;
    json indices = json::array();
    json values = json::array();
    for (const auto& [index, value] : v.entries()) {
      indices.push_back(index);
      values.push_back(value);
    }
    line["indices"] = std::move(indices);
    line["values"] = std::move(values);
    features << line.dump() << "\n";
  }
  std::cout << "featurized " << posts.size() << " posts over " << space.size()
            << " features (" << space.ngram_count() << " n-grams)\n";
  return 0;
}

int do_train(const RunConfig& cfg) {
  psylex::IngestResult ingested = load_corpus(cfg);
  std::vector<psylex::Lexicon> lexicons = load_lexicons(cfg);
  psylex::PipelineConfig config = build_pipeline_config(cfg, std::move(lexicons));
  fs::path dir = prepare_out_dir(cfg);

  psylex::PipelineModel model =
      psylex::train_pipeline(ingested.corpus, config, cfg.seed);
  fs::path model_path = cfg.model.empty() ? dir / "model.json" : fs::path(cfg.model);
  psylex::save_model(model, model_path);
  std::cout << "trained " << to_string(config.kind) << " on "
            << ingested.corpus.size() << " posts, model written to "
            << model_path.string() << "\n";
  return 0;
}

int do_predict(const RunConfig& cfg) {
  require_file(cfg.model, "model");
  psylex::IngestResult ingested = load_corpus(cfg);
  std::vector<psylex::Lexicon> lexicons = load_lexicons(cfg);
  fs::path dir = prepare_out_dir(cfg);

  psylex::PipelineModel model = psylex::load_model(cfg.model, std::move(lexicons));
  const auto& posts = ingested.corpus.posts();
  std::vector<psylex::Prediction> predictions =
      psylex::predict_pipeline(model, posts);

  std::ofstream out(dir / "predictions.tsv", std::ios::binary);
  if (!out) throw psylex::Error("cannot write predictions.tsv");
  for (std::size_t i = 0; i < posts.size(); ++i) {
    out << posts[i].id << '\t' << to_string(predictions[i].label) << '\t'
        << format_double(predictions[i].score) << '\n';
  }
  std::cout << "predicted " << posts.size() << " posts\n";
  return 0;
}

int do_cross_validate(const RunConfig& cfg) {
  psylex::IngestResult ingested = load_corpus(cfg);
  std::vector<psylex::Lexicon> lexicons = load_lexicons(cfg);
  psylex::PipelineConfig config = build_pipeline_config(cfg, std::move(lexicons));
  fs::path dir = prepare_out_dir(cfg);

  psylex::EvalReport report =
      psylex::cross_validate(ingested.corpus, config, cfg.k, cfg.seed);
  write_file(dir / "report.json", psylex::report_to_json(report));
  std::string table = psylex::format_report(report);
  write_file(dir / "report.txt", table);
  std::cout << table;
  return 0;
}

int do_grid_search(const RunConfig& cfg) {
  psylex::IngestResult ingested = load_corpus(cfg);
  std::vector<psylex::Lexicon> lexicons = load_lexicons(cfg);
  psylex::PipelineConfig config = build_pipeline_config(cfg, std::move(lexicons));
  fs::path dir = prepare_out_dir(cfg);

  std::vector<double> c_grid =
      cfg.c_grid.empty() ? psylex::default_c_grid() : cfg.c_grid;
  std::vector<double> gamma_grid =
      cfg.gamma_grid.empty() ? psylex::default_gamma_grid() : cfg.gamma_grid;
  psylex::GridSearchResult result = psylex::grid_search(
      ingested.corpus, config, c_grid, gamma_grid, cfg.k, cfg.seed);
  write_file(dir / "grid.json", psylex::grid_to_json(result));
  write_file(dir / "grid.txt", psylex::format_grid(result));
  std::cout << "best: C=" << format_double(result.best_c)
            << " gamma=" << format_double(result.best_gamma)
            << " F=" << result.best_metrics.f_measure << "\n";
  return 0;
}

int do_synth(const RunConfig& cfg) {
  if (!(cfg.signal >= 0.0 && cfg.signal <= 1.0)) {
    throw psylex::ConfigError("--signal must be in [0, 1]");
  }
  if (cfg.minority < 1 || cfg.majority < 1) {
    throw psylex::ConfigError("--minority and --majority must be at least 1");
  }
  fs::path dir = prepare_out_dir(cfg);
  psylex::Corpus corpus =
      psylex::synth_corpus(cfg.minority, cfg.majority, cfg.signal, cfg.seed);
  psylex::write_corpus(corpus, dir / "corpus.jsonl");

  fs::path lexdir = dir / "lexicons";
  std::error_code ec;
  fs::create_directories(lexdir, ec);
  if (ec) throw psylex::Error("cannot create '" + lexdir.string() + "'");
  for (const psylex::Lexicon& lex : psylex::synth_lexicons()) {
    std::string contents;
    for (const std::string& entry : lex.entries()) {
      contents += entry;
      contents += '\n';
    }
    write_file(lexdir / (std::string(to_string(lex.category())) + ".txt"),
               contents);
  }
  std::cout << "wrote " << corpus.size() << " posts (" << cfg.minority
            << " suicidal, " << cfg.majority << " non-suicidal) and "
            << psylex::synth_lexicons().size() << " lexicons\n";
  return 0;
}

std::vector<std::pair<std::string, std::string>> parse_bindings(
    const std::vector<std::string>& raw, const char* flag) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& binding : raw) {
    auto eq = binding.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == binding.size()) {
      throw psylex::ConfigError(std::string(flag) + " expects <name>=<value>, got '" +
                                binding + "'");
    }
    out.emplace_back(binding.substr(0, eq), binding.substr(eq + 1));
  }
  return out;
}

int run(int argc, char** argv) {
  // --config is resolved before the main parse so explicit flags override it.
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") config_path = argv[i + 1];
  }
  RunConfig cfg = load_config_file(config_path);

  CLI::App app{"suicidal-post classification pipeline"};
  app.require_subcommand(1);
  std::string config_flag;
  app.add_option("--config", config_flag,
                 "JSON config with defaults; flags take precedence");

  std::vector<std::string> lexicon_flags;
  std::vector<std::string> field_flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed recorded in artifacts");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--config", config_flag,
                    "JSON config with defaults; flags take precedence");
  };
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", cfg.corpus, "JSONL corpus path");
    sub->add_option("--field", field_flags,
                    "record key remapping, canonical=actual (repeatable)");
  };
  auto add_analysis = [&](CLI::App* sub) {
    sub->add_option("--lexicon", lexicon_flags,
                    "category=path binding (repeatable)");
    sub->add_option("--vocab", cfg.vocab, "general vocabulary word list");
    sub->add_option("--min-ngram-count", cfg.min_ngram_count,
                    "n-gram inventory threshold");
  };
  auto add_training = [&](CLI::App* sub) {
    sub->add_option("--classifier", cfg.classifier,
                    "nb, lr, svm-linear or svm-rbf");
    sub->add_option("--c", cfg.c, "SVM C");
    sub->add_option("--gamma", cfg.gamma, "RBF kernel gamma");
    sub->add_option("--weighting", cfg.weighting,
                    "imbalance re-weighting, on or off");
    sub->add_option("--weight-slots", cfg.weight_slots,
                    "which slots to re-weight: all, ngrams or fixed");
    sub->add_option("--oversample-ratio", cfg.oversample_ratio,
                    "minority target as a fraction of majority, 0 disables");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "validate and canonicalize a corpus");
  add_corpus(ingest);
  add_common(ingest);

  CLI::App* featurize = app.add_subcommand("featurize", "freeze a feature space and emit vectors");
  add_corpus(featurize);
  add_analysis(featurize);
  add_common(featurize);

  CLI::App* train = app.add_subcommand("train", "fit the pipeline and write a model manifest");
  add_corpus(train);
  add_analysis(train);
  add_training(train);
  train->add_option("--model", cfg.model, "model manifest output path");
  add_common(train);

  CLI::App* predict = app.add_subcommand("predict", "score posts with a trained model");
  add_corpus(predict);
  predict->add_option("--lexicon", lexicon_flags,
                      "category=path binding (repeatable)");
  predict->add_option("--model", cfg.model, "model manifest path");
  add_common(predict);

  CLI::App* cv = app.add_subcommand("cross-validate", "k-fold evaluation");
  add_corpus(cv);
  add_analysis(cv);
  add_training(cv);
  cv->add_option("--k", cfg.k, "fold count");
  add_common(cv);

  CLI::App* grid = app.add_subcommand("grid-search", "cross-validated C/gamma sweep");
  add_corpus(grid);
  add_analysis(grid);
  add_training(grid);
  grid->add_option("--k", cfg.k, "fold count");
  grid->add_option("--c-grid", cfg.c_grid, "C values (default powers of two)")
      ->delimiter(',');
  grid->add_option("--gamma-grid", cfg.gamma_grid,
                   "gamma values (default powers of two)")
      ->delimiter(',');
  add_common(grid);

  CLI::App* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  synth->add_option("--minority", cfg.minority, "suicidal post count");
  synth->add_option("--majority", cfg.majority, "non-suicidal post count");
  synth->add_option("--signal", cfg.signal, "marker signal strength in [0,1]");
  add_common(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!lexicon_flags.empty()) {
    cfg.lexicons = parse_bindings(lexicon_flags, "--lexicon");
  }
  if (!field_flags.empty()) {
    cfg.fields.clear();
    for (auto& [key, value] : parse_bindings(field_flags, "--field")) {
      cfg.fields[key] = value;
    }
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (sub == ingest) return do_ingest(cfg);
  if (sub == featurize) return do_featurize(cfg);
  if (sub == train) return do_train(cfg);
  if (sub == predict) return do_predict(cfg);
  if (sub == cv) return do_cross_validate(cfg);
  if (sub == grid) return do_grid_search(cfg);
  if (sub == synth) return do_synth(cfg);
  throw psylex::ConfigError("unknown subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const psylex::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
