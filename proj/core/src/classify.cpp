#include "psylex/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psylex/error.hpp"
#include "psylex/rng.hpp"

namespace psylex {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: return "nb";
    case ClassifierKind::LogisticRegression: return "lr";
    case ClassifierKind::LinearSvm: return "svm-linear";
    case ClassifierKind::RbfSvm: return "svm-rbf";
  }
  return "unknown";
}

std::optional<ClassifierKind> classifier_kind_from(std::string_view name) {
  if (name == "nb") return ClassifierKind::NaiveBayes;
  if (name == "lr") return ClassifierKind::LogisticRegression;
  if (name == "svm-linear") return ClassifierKind::LinearSvm;
  if (name == "svm-rbf") return ClassifierKind::RbfSvm;
  return std::nullopt;
}

void validate(ClassifierKind kind, const Hyperparameters& hp) {
  switch (kind) {
    case ClassifierKind::NaiveBayes:
      if (!(hp.nb_alpha > 0)) throw Error("nb smoothing alpha must be > 0");
      break;
    case ClassifierKind::LogisticRegression:
      if (!(hp.lr_learning_rate > 0)) throw Error("lr learning rate must be > 0");
      if (hp.lr_epochs < 1) throw Error("lr epochs must be >= 1");
      if (!(hp.lr_lambda >= 0)) throw Error("lr lambda must be >= 0");
      break;
    case ClassifierKind::LinearSvm:
      if (!(hp.svm_c > 0)) throw Error("svm C must be > 0");
      if (hp.svm_epochs < 1) throw Error("svm epochs must be >= 1");
      break;
    case ClassifierKind::RbfSvm:
      if (!(hp.svm_c > 0)) throw Error("svm C must be > 0");
      if (!(hp.svm_gamma > 0)) throw Error("svm gamma must be > 0");
      if (!(hp.smo_tolerance > 0)) throw Error("smo tolerance must be > 0");
      if (hp.smo_max_passes < 1) throw Error("smo max passes must be >= 1");
      break;
  }
}

double rbf_kernel(const FeatureVector& x, const FeatureVector& y, double gamma) {
  return std::exp(-gamma * squared_distance(x, y));
}

TrainedModel::TrainedModel(ClassifierKind kind, Hyperparameters hp,
                           std::size_t space_size, Params params)
    : kind_(kind), hp_(hp), space_size_(space_size), params_(std::move(params)) {}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

void check_indices(const FeatureVector& v, std::size_t space_size) {
  if (!v.entries().empty() && v.entries().back().first >= space_size) {
    throw Error("feature index " + std::to_string(v.entries().back().first) +
                " outside space of size " + std::to_string(space_size));
  }
}

double sparse_dot_dense(const FeatureVector& v, const std::vector<double>& w) {
  double sum = 0.0;
  for (const auto& [index, value] : v.entries()) sum += value * w[index];
  return sum;
}

NaiveBayesParams train_naive_bayes(const std::vector<FeatureVector>& vectors,
                                   const std::vector<Label>& labels,
                                   std::size_t space_size,
                                   const Hyperparameters& hp) {
  std::vector<double> totals_s(space_size, 0.0);
  std::vector<double> totals_n(space_size, 0.0);
  std::size_t count_s = 0;
  std::size_t count_n = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    bool suicidal = labels[i] == Label::Suicidal;
    (suicidal ? count_s : count_n) += 1;
    auto& totals = suicidal ? totals_s : totals_n;
    for (const auto& [index, value] : vectors[i].entries()) {
      if (value < 0) {
        throw Error("naive bayes requires non-negative values; feature " +
                    std::to_string(index) + " is " + std::to_string(value));
      }
      totals[index] += value;
    }
  }

  NaiveBayesParams params;
  double n = static_cast<double>(vectors.size());
  params.log_prior_suicidal = std::log(static_cast<double>(count_s) / n);
  params.log_prior_non_suicidal = std::log(static_cast<double>(count_n) / n);
  double alpha = hp.nb_alpha;
  double denom_s = std::accumulate(totals_s.begin(), totals_s.end(), 0.0) +
                   alpha * static_cast<double>(space_size);
  double denom_n = std::accumulate(totals_n.begin(), totals_n.end(), 0.0) +
                   alpha * static_cast<double>(space_size);
  params.log_likelihood_suicidal.resize(space_size);
  params.log_likelihood_non_suicidal.resize(space_size);
  for (std::size_t j = 0; j < space_size; ++j) {
    params.log_likelihood_suicidal[j] = std::log((totals_s[j] + alpha) / denom_s);
    params.log_likelihood_non_suicidal[j] =
        std::log((totals_n[j] + alpha) / denom_n);
  }
  return params;
}

// SGD with the weight vector kept as scale * accum so the per-step L2 decay
// stays O(nnz).
struct ScaledWeights {
  std::vector<double> accum;
  double scale = 1.0;

  explicit ScaledWeights(std::size_t size) : accum(size, 0.0) {}

  void decay(double factor) {
    scale *= factor;
    if (scale < 1e-9) {
      for (double& w : accum) w *= scale;
      scale = 1.0;
    }
  }
  void add(const FeatureVector& v, double step) {
    for (const auto& [index, value] : v.entries()) {
      accum[index] += step * value / scale;
    }
  }
  double dot(const FeatureVector& v) const {
    return scale * sparse_dot_dense(v, accum);
  }
  std::vector<double> finish() {
    for (double& w : accum) w *= scale;
    scale = 1.0;
    return std::move(accum);
  }
};

LinearParams train_logistic(const std::vector<FeatureVector>& vectors,
                            const std::vector<Label>& labels,
                            std::size_t space_size, const Hyperparameters& hp,
                            std::uint64_t seed) {
  ScaledWeights w(space_size);
  double bias = 0.0;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);

  double n = static_cast<double>(vectors.size());
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < hp.lr_epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (std::size_t i : order) {
      double eta =
          hp.lr_learning_rate / (1.0 + static_cast<double>(step) / n);
      ++step;
      double z = w.dot(vectors[i]) + bias;
      double y = labels[i] == Label::Suicidal ? 1.0 : 0.0;
      double g = sigmoid(z) - y;
      if (hp.lr_lambda > 0) w.decay(1.0 - eta * hp.lr_lambda);
      w.add(vectors[i], -eta * g);
      bias -= eta * g;
    }
  }
  return LinearParams{w.finish(), bias};
}

LinearParams train_linear_svm(const std::vector<FeatureVector>& vectors,
                              const std::vector<Label>& labels,
                              std::size_t space_size, const Hyperparameters& hp,
                              std::uint64_t seed) {
  ScaledWeights w(space_size);
  double bias = 0.0;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);

  double n = static_cast<double>(vectors.size());
  double lambda = 1.0 / (hp.svm_c * n);
  const double eta0 = 0.1;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < hp.svm_epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (std::size_t i : order) {
      double eta = eta0 / (1.0 + static_cast<double>(step) / n);
      ++step;
      double y = labels[i] == Label::Suicidal ? 1.0 : -1.0;
      double margin = y * (w.dot(vectors[i]) + bias);
      w.decay(1.0 - eta * lambda);
      if (margin < 1.0) {
        w.add(vectors[i], eta * y);
        bias += eta * y;
      }
    }
  }
  return LinearParams{w.finish(), bias};
}

class KernelCache {
 public:
  KernelCache(const std::vector<FeatureVector>& vectors, double gamma)
      : vectors_(vectors), gamma_(gamma) {
    n_ = vectors.size();
    if (n_ <= 2000) {
      matrix_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          double k = rbf_kernel(vectors_[i], vectors_[j], gamma_);
          matrix_[i * n_ + j] = k;
          matrix_[j * n_ + i] = k;
        }
      }
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (!matrix_.empty()) return matrix_[i * n_ + j];
    return rbf_kernel(vectors_[i], vectors_[j], gamma_);
  }

 private:
  const std::vector<FeatureVector>& vectors_;
  double gamma_;
  std::size_t n_ = 0;
  std::vector<double> matrix_;
};

// Simplified sequential minimal optimization: scan for KKT violators, pair
// each with a random partner, solve the two-variable subproblem analytically.
RbfSvmParams train_rbf_svm(const std::vector<FeatureVector>& vectors,
                           const std::vector<Label>& labels,
                           const Hyperparameters& hp, std::uint64_t seed) {
  const std::size_t n = vectors.size();
  const double c = hp.svm_c;
  const double tol = hp.smo_tolerance;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = labels[i] == Label::Suicidal ? 1.0 : -1.0;
  }
  KernelCache kernel(vectors, hp.svm_gamma);
  std::vector<double> alpha(n, 0.0);
  double b = 0.0;
  std::mt19937_64 rng(seed);

  auto decision = [&](std::size_t i) {
    double f = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] > 0) f += alpha[j] * y[j] * kernel(j, i);
    }
    return f;
  };

  // Consecutive violation-free passes end training; the absolute cap keeps
  // degenerate problems bounded.
  const std::size_t kTotalPassCap = 200;
  std::size_t quiet_passes = 0;
  std::size_t total_passes = 0;
  while (quiet_passes < hp.smo_max_passes && total_passes < kTotalPassCap) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double e_i = decision(i) - y[i];
      double r_i = y[i] * e_i;
      if (!((r_i < -tol && alpha[i] < c) || (r_i > tol && alpha[i] > 0))) {
        continue;
      }
      std::size_t j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      double e_j = decision(j) - y[j];

      double lo, hi;
      if (y[i] != y[j]) {
        lo = std::max(0.0, alpha[j] - alpha[i]);
        hi = std::min(c, c + alpha[j] - alpha[i]);
      } else {
        lo = std::max(0.0, alpha[i] + alpha[j] - c);
        hi = std::min(c, alpha[i] + alpha[j]);
      }
      if (lo >= hi) continue;
      double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
      if (eta >= 0) continue;

      double aj_old = alpha[j];
      double ai_old = alpha[i];
      double aj = std::clamp(aj_old - y[j] * (e_i - e_j) / eta, lo, hi);
      if (std::abs(aj - aj_old) < 1e-5) continue;
      double ai = std::clamp(ai_old + y[i] * y[j] * (aj_old - aj), 0.0, c);

      double b1 = b - e_i - y[i] * (ai - ai_old) * kernel(i, i) -
                  y[j] * (aj - aj_old) * kernel(i, j);
      double b2 = b - e_j - y[i] * (ai - ai_old) * kernel(i, j) -
                  y[j] * (aj - aj_old) * kernel(j, j);
      if (ai > 0 && ai < c) {
        b = b1;
      } else if (aj > 0 && aj < c) {
        b = b2;
      } else {
        b = (b1 + b2) / 2.0;
      }
      alpha[i] = ai;
      alpha[j] = aj;
      ++changed;
    }
    quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
    ++total_passes;
  }

  RbfSvmParams params;
  params.bias = b;
  params.gamma = hp.svm_gamma;
  params.training_alphas = alpha;
  params.converged = true;
  for (std::size_t i = 0; i < n; ++i) {
    double r_i = y[i] * (decision(i) - y[i]);
    if ((alpha[i] < c && r_i < -tol) || (alpha[i] > 0 && r_i > tol)) {
      params.converged = false;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0) {
      params.support.push_back(SupportVector{vectors[i], alpha[i] * y[i]});
    }
  }
  return params;
}

}  // namespace

TrainedModel train(ClassifierKind kind, const std::vector<FeatureVector>& vectors,
                   const std::vector<Label>& labels, std::size_t space_size,
                   const Hyperparameters& hp, std::uint64_t seed) {
  validate(kind, hp);
  if (vectors.size() != labels.size()) {
    throw Error("vector/label count mismatch");
  }
  if (vectors.empty()) throw Error("cannot train on an empty set");
  bool has_s = false;
  bool has_n = false;
  for (Label label : labels) {
    (label == Label::Suicidal ? has_s : has_n) = true;
  }
  if (!has_s || !has_n) {
    throw Error("training data contains a single class");
  }
  for (const FeatureVector& v : vectors) check_indices(v, space_size);

  switch (kind) {
    case ClassifierKind::NaiveBayes:
      return TrainedModel(kind, hp, space_size,
                          train_naive_bayes(vectors, labels, space_size, hp));
    case ClassifierKind::LogisticRegression:
      return TrainedModel(kind, hp, space_size,
                          train_logistic(vectors, labels, space_size, hp, seed));
    case ClassifierKind::LinearSvm:
      return TrainedModel(
          kind, hp, space_size,
          train_linear_svm(vectors, labels, space_size, hp, seed));
    case ClassifierKind::RbfSvm:
      return TrainedModel(kind, hp, space_size,
                          train_rbf_svm(vectors, labels, hp, seed));
  }
  throw Error("unknown classifier kind");
}

Prediction TrainedModel::predict(const FeatureVector& v) const {
  check_indices(v, space_size_);
  double score = 0.0;
  if (const auto* nb = naive_bayes()) {
    score = nb->log_prior_suicidal - nb->log_prior_non_suicidal;
    for (const auto& [index, value] : v.entries()) {
      score += value * (nb->log_likelihood_suicidal[index] -
                        nb->log_likelihood_non_suicidal[index]);
    }
  } else if (const auto* lin = linear()) {
    score = sparse_dot_dense(v, lin->weights) + lin->bias;
  } else if (const auto* svm = rbf()) {
    score = svm->bias;
    for (const SupportVector& sv : svm->support) {
      score += sv.coefficient * rbf_kernel(sv.x, v, svm->gamma);
    }
  }
  return Prediction{score > 0 ? Label::Suicidal : Label::NonSuicidal, score};
}

double lr_loss(const std::vector<FeatureVector>& vectors,
               const std::vector<Label>& labels,
               const std::vector<double>& weights, double bias, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double z = sparse_dot_dense(vectors[i], weights) + bias;
    double y = labels[i] == Label::Suicidal ? 1.0 : 0.0;
    // ln(1 + e^z) - y z, computed without overflow.
    loss += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - y * z;
  }
  loss /= static_cast<double>(vectors.size());
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * lambda * reg;
}

void lr_gradient(const std::vector<FeatureVector>& vectors,
                 const std::vector<Label>& labels,
                 const std::vector<double>& weights, double bias, double lambda,
                 std::vector<double>& grad_w, double& grad_b) {
  grad_w.assign(weights.size(), 0.0);
  grad_b = 0.0;
  double n = static_cast<double>(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double z = sparse_dot_dense(vectors[i], weights) + bias;
    double y = labels[i] == Label::Suicidal ? 1.0 : 0.0;
    double g = (sigmoid(z) - y) / n;
    for (const auto& [index, value] : vectors[i].entries()) {
      grad_w[index] += g * value;
    }
    grad_b += g;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    grad_w[j] += lambda * weights[j];
  }
}

}  // namespace psylex
