#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/features.hpp"

namespace psylex {

enum class ClassifierKind { NaiveBayes, LogisticRegression, LinearSvm, RbfSvm };

// CLI names: nb, lr, svm-linear, svm-rbf.
std::string_view to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_kind_from(std::string_view name);

struct Hyperparameters {
  double nb_alpha = 1.0;
  double lr_learning_rate = 0.1;
  std::size_t lr_epochs = 50;
  double lr_lambda = 1e-4;
  double svm_c = 16.0;
  std::size_t svm_epochs = 50;
  double svm_gamma = 3.0517578125e-5;
  double smo_tolerance = 1e-3;
  std::size_t smo_max_passes = 5;

  bool operator==(const Hyperparameters&) const = default;
};

// Throws when a hyperparameter the kind uses is out of range.
void validate(ClassifierKind kind, const Hyperparameters& hp);

struct Prediction {
  Label label = Label::NonSuicidal;
  // Signed decision value: log-odds for the probabilistic models, margin for
  // the SVMs. label is Suicidal iff score > 0.
  double score = 0.0;
};

struct NaiveBayesParams {
  double log_prior_suicidal = 0.0;
  double log_prior_non_suicidal = 0.0;
  // Dense per feature index, Laplace-smoothed, each summing to 1 in
  // probability space.
  std::vector<double> log_likelihood_suicidal;
  std::vector<double> log_likelihood_non_suicidal;

  bool operator==(const NaiveBayesParams&) const = default;
};

// Shared by logistic regression and the linear SVM.
struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;

  bool operator==(const LinearParams&) const = default;
};

struct SupportVector {
  FeatureVector x;
  // alpha_i * y_i with y in {-1, +1}.
  double coefficient = 0.0;

  bool operator==(const SupportVector&) const = default;
};

struct RbfSvmParams {
  std::vector<SupportVector> support;
  double bias = 0.0;
  double gamma = 0.0;
  bool converged = false;
  // Full dual solution in training order; diagnostic only, not serialized.
  std::vector<double> training_alphas;

  bool operator==(const RbfSvmParams& other) const {
    return support == other.support && bias == other.bias &&
           gamma == other.gamma && converged == other.converged;
  }
};

// exp(-gamma * ||x - y||^2) over the sparse index union.
double rbf_kernel(const FeatureVector& x, const FeatureVector& y, double gamma);

class TrainedModel {
 public:
  using Params = std::variant<NaiveBayesParams, LinearParams, RbfSvmParams>;

  TrainedModel(ClassifierKind kind, Hyperparameters hp, std::size_t space_size,
               Params params);

  ClassifierKind kind() const { return kind_; }
  const Hyperparameters& hyperparameters() const { return hp_; }
  std::size_t space_size() const { return space_size_; }

  // Throws when v holds an index outside the model's feature space.
  Prediction predict(const FeatureVector& v) const;

  const NaiveBayesParams* naive_bayes() const {
    return std::get_if<NaiveBayesParams>(&params_);
  }
  const LinearParams* linear() const {
    return std::get_if<LinearParams>(&params_);
  }
  const RbfSvmParams* rbf() const { return std::get_if<RbfSvmParams>(&params_); }

  bool operator==(const TrainedModel&) const = default;

 private:
  ClassifierKind kind_;
  Hyperparameters hp_;
  std::size_t space_size_ = 0;
  Params params_;
};

// Deterministic per seed. Throws on single-class data, non-finite feature
// values, an index outside space_size, or (NaiveBayes only) negative values.
TrainedModel train(ClassifierKind kind, const std::vector<FeatureVector>& vectors,
                   const std::vector<Label>& labels, std::size_t space_size,
                   const Hyperparameters& hp, std::uint64_t seed);

// Mean logistic loss plus (lambda/2)*||w||^2; the gradient fills grad_w and
// grad_b with the matching partial derivatives. Exposed so the training step
// can be checked against finite differences.
double lr_loss(const std::vector<FeatureVector>& vectors,
               const std::vector<Label>& labels,
               const std::vector<double>& weights, double bias, double lambda);
void lr_gradient(const std::vector<FeatureVector>& vectors,
                 const std::vector<Label>& labels,
                 const std::vector<double>& weights, double bias, double lambda,
                 std::vector<double>& grad_w, double& grad_b);

}  // namespace psylex
