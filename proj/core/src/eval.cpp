#include "psylex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "manifest_json.hpp"
#include "psylex/error.hpp"
#include "psylex/rng.hpp"

namespace psylex {

namespace {

using json = nlohmann::ordered_json;

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  double tp = static_cast<double>(c.tp);
  double fp = static_cast<double>(c.fp);
  double fn = static_cast<double>(c.fn);
  double tn = static_cast<double>(c.tn);
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f_measure = m.precision + m.recall > 0
                    ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
  m.accuracy = c.total() > 0 ? (tp + tn) / static_cast<double>(c.total()) : 0.0;
  return m;
}

std::vector<std::vector<std::size_t>> kfold_split(
    std::size_t n, std::size_t k, std::uint64_t seed,
    const std::vector<Label>& labels) {
  if (k < 2) throw Error("fold count must be at least 2");
  if (k > n) {
    throw Error("fold count " + std::to_string(k) + " exceeds item count " +
                std::to_string(n));
  }
  if (!labels.empty() && labels.size() != n) {
    throw Error("label count does not match item count");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> deal;
  deal.reserve(n);
  if (labels.empty()) {
    deal.resize(n);
    std::iota(deal.begin(), deal.end(), std::size_t{0});
    deterministic_shuffle(deal, rng);
  } else {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < n; ++i) {
      (labels[i] == Label::Suicidal ? positives : negatives).push_back(i);
    }
    deterministic_shuffle(positives, rng);
    deterministic_shuffle(negatives, rng);
    // One continuous round-robin deal, positives first, keeps both the fold
    // sizes and the per-fold positive counts within 1.
    deal.insert(deal.end(), positives.begin(), positives.end());
    deal.insert(deal.end(), negatives.begin(), negatives.end());
  }

  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(deal[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

EvalReport cross_validate(const Corpus& corpus, const PipelineConfig& config,
                          std::size_t k, std::uint64_t seed,
                          const FoldObserver& observer) {
  const std::vector<Post>& posts = corpus.posts();
  std::vector<Label> labels;
  labels.reserve(posts.size());
  for (const Post& post : posts) {
    if (!post.label) {
      throw Error("unlabeled post '" + post.id + "' in evaluation corpus");
    }
    labels.push_back(*post.label);
  }

  auto folds = kfold_split(posts.size(), k, seed, labels);
  EvalReport report;
  report.kind = config.kind;
  report.hyperparameters = config.hyperparameters;
  report.k = k;
  report.seed = seed;

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> held(posts.size(), 0);
    for (std::size_t idx : folds[f]) held[idx] = 1;
    std::vector<Post> train_posts;
    std::vector<Post> test_posts;
    for (std::size_t i = 0; i < posts.size(); ++i) {
      (held[i] ? test_posts : train_posts).push_back(posts[i]);
    }
    bool has_s = false;
    bool has_n = false;
    for (const Post& post : train_posts) {
      (*post.label == Label::Suicidal ? has_s : has_n) = true;
    }
    if (!has_s || !has_n) {
      throw Error("training fold " + std::to_string(f) + " is missing a class");
    }

    PipelineModel model = train_pipeline(train_posts, config, derive_seed(seed, f));
    std::vector<Prediction> predictions = predict_pipeline(model, test_posts);

    ConfusionCounts counts;
    for (std::size_t i = 0; i < test_posts.size(); ++i) {
      bool truth = *test_posts[i].label == Label::Suicidal;
      bool predicted = predictions[i].label == Label::Suicidal;
      if (truth && predicted) ++counts.tp;
      if (!truth && predicted) ++counts.fp;
      if (truth && !predicted) ++counts.fn;
      if (!truth && !predicted) ++counts.tn;
    }
    report.fold_counts.push_back(counts);
    report.total += counts;
    if (observer) observer(f, model, folds[f]);
  }
  report.aggregate = metrics(report.total);
  return report;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  out << "classifier: " << to_string(report.kind) << "  k: " << report.k
      << "  seed: " << report.seed << "\n";
  out << "fold      tp      fp      fn      tn\n";
  for (std::size_t f = 0; f < report.fold_counts.size(); ++f) {
    const ConfusionCounts& c = report.fold_counts[f];
    std::snprintf(line, sizeof(line), "%4zu  %6zu  %6zu  %6zu  %6zu\n", f, c.tp,
                  c.fp, c.fn, c.tn);
    out << line;
  }
  const ConfusionCounts& t = report.total;
  std::snprintf(line, sizeof(line), "total %6zu  %6zu  %6zu  %6zu\n", t.tp, t.fp,
                t.fn, t.tn);
  out << line;
  out << "\n          F-measure  Precision  Recall  Accuracy\n";
  std::snprintf(line, sizeof(line),
                "aggregate    %.4f     %.4f  %.4f    %.4f\n",
                report.aggregate.f_measure, report.aggregate.precision,
                report.aggregate.recall, report.aggregate.accuracy);
  out << line;
  return out.str();
}

namespace {

json counts_to_json(const ConfusionCounts& c) {
  json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  return j;
}

json metrics_to_json(const Metrics& m) {
  json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f_measure"] = m.f_measure;
  j["accuracy"] = m.accuracy;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json j;
  j["format"] = "psylex-report";
  j["version"] = 1;
  j["classifier"] = std::string(to_string(report.kind));
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["hyperparameters"] = detail::hyperparameters_to_json(report.hyperparameters);
  json folds = json::array();
  for (const ConfusionCounts& c : report.fold_counts) {
    folds.push_back(counts_to_json(c));
  }
  j["folds"] = std::move(folds);
  j["total"] = counts_to_json(report.total);
  j["aggregate"] = metrics_to_json(report.aggregate);
  return j.dump() + "\n";
}

GridSearchResult grid_search(const Corpus& corpus, PipelineConfig config,
                             const std::vector<double>& c_grid,
                             const std::vector<double>& gamma_grid,
                             std::size_t k, std::uint64_t seed) {
  if (c_grid.empty() || gamma_grid.empty()) {
    throw Error("grid search requires non-empty grids");
  }
  config.kind = ClassifierKind::RbfSvm;
  GridSearchResult result;
  bool have_best = false;
  for (double c : c_grid) {
    for (double gamma : gamma_grid) {
      config.hyperparameters.svm_c = c;
      config.hyperparameters.svm_gamma = gamma;
      EvalReport report = cross_validate(corpus, config, k, seed);
      GridSearchResult::Cell cell{c, gamma, report.aggregate};
      bool better =
          !have_best || cell.metrics.f_measure > result.best_metrics.f_measure ||
          (cell.metrics.f_measure == result.best_metrics.f_measure &&
           (cell.c < result.best_c ||
            (cell.c == result.best_c && cell.gamma < result.best_gamma)));
      if (better) {
        result.best_c = cell.c;
        result.best_gamma = cell.gamma;
        result.best_metrics = cell.metrics;
        have_best = true;
      }
      result.table.push_back(cell);
    }
  }
  return result;
}

namespace {

std::vector<double> power_grid(int lo, int hi) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int e = lo; e <= hi; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

}  // namespace

std::vector<double> default_c_grid() { return power_grid(-5, 15); }

std::vector<double> default_gamma_grid() { return power_grid(-15, 3); }

std::string format_grid(const GridSearchResult& result) {
  std::ostringstream out;
  char line[160];
  out << "           C        gamma  F-measure  Precision  Recall  Accuracy\n";
  for (const auto& cell : result.table) {
    std::snprintf(line, sizeof(line),
                  "%12g %12g     %.4f     %.4f  %.4f    %.4f\n", cell.c,
                  cell.gamma, cell.metrics.f_measure, cell.metrics.precision,
                  cell.metrics.recall, cell.metrics.accuracy);
    out << line;
  }
  std::snprintf(line, sizeof(line), "best: C=%g gamma=%g F=%.4f\n",
                result.best_c, result.best_gamma,
                result.best_metrics.f_measure);
  out << line;
  return out.str();
}

std::string grid_to_json(const GridSearchResult& result) {
  json j;
  j["format"] = "psylex-grid";
  j["version"] = 1;
  json table = json::array();
  for (const auto& cell : result.table) {
    json entry;
    entry["c"] = cell.c;
    entry["gamma"] = cell.gamma;
    entry["metrics"] = metrics_to_json(cell.metrics);
    table.push_back(std::move(entry));
  }
  j["table"] = std::move(table);
  j["best_c"] = result.best_c;
  j["best_gamma"] = result.best_gamma;
  j["best_metrics"] = metrics_to_json(result.best_metrics);
  return j.dump() + "\n";
}

namespace {

const std::vector<std::string>& positive_pool() {
  static const std::vector<std::string> pool = {"开心", "快乐", "幸福", "满足",
                                                "期待"};
  return pool;
}

const std::vector<std::string>& negative_pool() {
  static const std::vector<std::string> pool = {"难过", "伤心", "孤独", "失眠",
                                                "疲惫"};
  return pool;
}

const std::vector<std::string>& noun_pool() {
  static const std::vector<std::string> pool = {"天气", "工作", "朋友", "电影",
                                                "学校", "午饭", "音乐", "小猫"};
  return pool;
}

const std::vector<std::string>& verb_pool() {
  static const std::vector<std::string> pool = {"吃饭", "看书", "出门",
                                                "睡觉", "散步", "回家"};
  return pool;
}

const std::vector<std::string>& adjective_pool() {
  static const std::vector<std::string> pool = {"很好", "不错", "好冷", "好热",
                                                "很忙"};
  return pool;
}

const std::vector<std::string>& self_pool() {
  static const std::vector<std::string> pool = {"我", "自己"};
  return pool;
}

const std::vector<std::string>& other_pool() {
  static const std::vector<std::string> pool = {"妈妈", "爸爸", "哥哥"};
  return pool;
}

const std::vector<std::string>& stop_pool() {
  static const std::vector<std::string> pool = {"的", "了", "是", "在", "很"};
  return pool;
}

const std::vector<std::string>& background_pool() {
  static const std::vector<std::string> pool = [] {
    std::vector<std::string> all;
    for (const auto* source :
         {&positive_pool(), &negative_pool(), &noun_pool(), &verb_pool(),
          &adjective_pool(), &self_pool(), &other_pool(), &stop_pool()}) {
      all.insert(all.end(), source->begin(), source->end());
    }
    return all;
  }();
  return pool;
}

// Hours per bin, night wrapping midnight.
const std::vector<int>& bin_hours(std::size_t bin) {
  static const std::vector<int> night = {23, 0, 1, 2, 3, 4, 5, 6};
  static const std::vector<int> morning = {7, 8, 9, 10, 11, 12, 13};
  static const std::vector<int> afternoon = {14, 15, 16, 17};
  static const std::vector<int> evening = {18, 19, 20, 21, 22};
  static const std::vector<int>* bins[4] = {&night, &morning, &afternoon,
                                            &evening};
  return *bins[bin];
}

std::size_t draw_bin(std::mt19937_64& rng, const double (&probs)[4]) {
  double u = uniform_real01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return 3;
}

}  // namespace

const std::vector<std::string>& synth_markers() {
  static const std::vector<std::string> markers = {"绝望", "自杀", "想死",
                                                   "痛苦", "活不下去"};
  return markers;
}

std::vector<Lexicon> synth_lexicons() {
  std::vector<std::string> negative = negative_pool();
  negative.push_back("绝望");
  negative.push_back("痛苦");
  std::vector<std::string> psych = {"自杀", "想死", "活不下去", "抑郁", "焦虑"};

  std::vector<Lexicon> lexicons;
  lexicons.emplace_back("synth-positive", LexiconCategory::PositiveEmotion,
                        positive_pool());
  lexicons.emplace_back("synth-negative", LexiconCategory::NegativeEmotion,
                        std::move(negative));
  lexicons.emplace_back("synth-psych", LexiconCategory::PsychologicalTerm,
                        std::move(psych));
  lexicons.emplace_back("synth-self", LexiconCategory::SelfReference,
                        self_pool());
  lexicons.emplace_back("synth-other", LexiconCategory::OtherReference,
                        other_pool());
  lexicons.emplace_back("synth-stop", LexiconCategory::StopWord, stop_pool());
  lexicons.emplace_back("synth-adjective", LexiconCategory::PosAdjective,
                        adjective_pool());
  lexicons.emplace_back("synth-noun", LexiconCategory::PosNoun, noun_pool());
  lexicons.emplace_back("synth-verb", LexiconCategory::PosVerb, verb_pool());
  return lexicons;
}

Corpus synth_corpus(std::size_t n_minority, std::size_t n_majority,
                    double signal_strength, std::uint64_t seed) {
  if (n_minority < 1 || n_majority < 1) {
    throw Error("synthetic corpus needs at least one post per class");
  }
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    throw Error("signal strength must be in [0, 1]");
  }

  // Base marker rate shared by both classes; signal shifts the minority up.
  const double base_rate = 0.2;
  const double p_minority =
      signal_strength + (1.0 - signal_strength) * base_rate;
  const double p_majority = (1.0 - signal_strength) * base_rate;
  // Posting-time and post-type contrasts the generator reproduces.
  const double minority_bins[4] = {0.40, 0.13, 0.20, 0.27};
  const double majority_bins[4] = {0.13, 0.28, 0.27, 0.32};
  const double minority_original = 0.87;
  const double majority_original = 0.33;

  std::mt19937_64 rng(seed);
  std::vector<Post> posts;
  posts.reserve(n_minority + n_majority);

  auto make_posts = [&](std::size_t count, bool minority) {
    std::size_t authors = std::max<std::size_t>(1, count / 4);
    // One post per author per calendar day keeps the posting-frequency
    // feature flat (and every feature non-negative); the class signal
    // lives in marker words, posting hours, and post type.
    constexpr std::size_t kDays = 4 * 28;
    std::vector<std::vector<bool>> taken(authors,
                                         std::vector<bool>(kDays, false));
    std::vector<std::size_t> taken_count(authors, 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<std::string> words;
      std::size_t body = 3 + uniform_index(rng, 6);
      for (std::size_t w = 0; w < body; ++w) {
        words.push_back(
            background_pool()[uniform_index(rng, background_pool().size())]);
      }
      double p = minority ? p_minority : p_majority;
      if (uniform_real01(rng) < p) {
        const std::string& marker =
            synth_markers()[uniform_index(rng, synth_markers().size())];
        words.insert(words.begin() +
                         static_cast<std::ptrdiff_t>(
                             uniform_index(rng, words.size() + 1)),
                     marker);
      }
      std::string text;
      for (const std::string& word : words) text += word;
      text += "。";

      std::size_t bin =
          draw_bin(rng, minority ? minority_bins : majority_bins);
      const std::vector<int>& hours = bin_hours(bin);
      std::size_t who = uniform_index(rng, authors);
      std::size_t slot = uniform_index(rng, kDays);
      if (taken_count[who] < kDays) {
        while (taken[who][slot]) slot = (slot + 1) % kDays;
        taken[who][slot] = true;
        ++taken_count[who];
      }
      Timestamp ts;
      ts.year = 2015;
      ts.month = 3 + static_cast<int>(slot / 28);
      ts.day = 1 + static_cast<int>(slot % 28);
      ts.hour = hours[uniform_index(rng, hours.size())];
      ts.minute = static_cast<int>(uniform_index(rng, 60));

      char id[32];
      std::snprintf(id, sizeof(id), "%s%05zu", minority ? "s" : "n", i);
      char author[32];
      std::snprintf(author, sizeof(author), "%s%03zu", minority ? "su" : "nu",
                    who);
      double p_original = minority ? minority_original : majority_original;
      PostType type = uniform_real01(rng) < p_original ? PostType::Original
                                                       : PostType::Forward;
      posts.push_back(Post{id, author, std::move(text), ts, type,
                           minority ? Label::Suicidal : Label::NonSuicidal});
    }
  };
  make_posts(n_minority, true);
  make_posts(n_majority, false);
  return Corpus(std::move(posts));
}

}  // namespace psylex
