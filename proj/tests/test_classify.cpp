#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "psylex/classify.hpp"
#include "psylex/error.hpp"
#include "psylex/rng.hpp"

using namespace psylex;

namespace {

// Two well-separated clusters on feature 0, one vector per step.
void separable_data(std::vector<FeatureVector>& vectors,
                    std::vector<Label>& labels, std::size_t per_class) {
  for (std::size_t i = 0; i < per_class; ++i) {
    double jitter = 0.1 * static_cast<double>(i % 5);
    vectors.push_back(FeatureVector({{0, 2.0 + jitter}, {1, 1.0}}));
    labels.push_back(Label::Suicidal);
    vectors.push_back(FeatureVector({{0, -2.0 - jitter}, {1, 1.0}}));
    labels.push_back(Label::NonSuicidal);
  }
}

}  // namespace

TEST_CASE("classifier names round-trip") {
  CHECK(to_string(ClassifierKind::NaiveBayes) == "nb");
  CHECK(to_string(ClassifierKind::LogisticRegression) == "lr");
  CHECK(to_string(ClassifierKind::LinearSvm) == "svm-linear");
  CHECK(to_string(ClassifierKind::RbfSvm) == "svm-rbf");
  for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression,
                    ClassifierKind::LinearSvm, ClassifierKind::RbfSvm})
    CHECK(classifier_kind_from(to_string(kind)) == kind);
  CHECK_FALSE(classifier_kind_from("forest").has_value());
}

TEST_CASE("hyperparameter validation is per-kind") {
  Hyperparameters hp;
  CHECK_NOTHROW(validate(ClassifierKind::NaiveBayes, hp));
  CHECK_NOTHROW(validate(ClassifierKind::RbfSvm, hp));

  Hyperparameters bad_alpha;
  bad_alpha.nb_alpha = 0.0;
  CHECK_THROWS_AS(validate(ClassifierKind::NaiveBayes, bad_alpha), Error);
  // Other kinds ignore alpha.
  CHECK_NOTHROW(validate(ClassifierKind::LogisticRegression, bad_alpha));

  Hyperparameters bad_rate;
  bad_rate.lr_learning_rate = -1.0;
  CHECK_THROWS_AS(validate(ClassifierKind::LogisticRegression, bad_rate), Error);

  Hyperparameters bad_lambda;
  bad_lambda.lr_lambda = -1e-9;
  CHECK_THROWS_AS(validate(ClassifierKind::LogisticRegression, bad_lambda),
                  Error);

  Hyperparameters bad_c;
  bad_c.svm_c = 0.0;
  CHECK_THROWS_AS(validate(ClassifierKind::LinearSvm, bad_c), Error);
  CHECK_THROWS_AS(validate(ClassifierKind::RbfSvm, bad_c), Error);

  Hyperparameters bad_gamma;
  bad_gamma.svm_gamma = -0.5;
  CHECK_THROWS_AS(validate(ClassifierKind::RbfSvm, bad_gamma), Error);
  CHECK_NOTHROW(validate(ClassifierKind::LinearSvm, bad_gamma));

  // The reference operating point is valid.
  Hyperparameters paper;
  paper.svm_c = 16.0;
  paper.svm_gamma = 3.0517578125e-5;
  CHECK_NOTHROW(validate(ClassifierKind::RbfSvm, paper));
}

TEST_CASE("train rejects degenerate input") {
  Hyperparameters hp;
  std::vector<FeatureVector> vectors = {FeatureVector({{0, 1.0}})};
  std::vector<Label> one_label = {Label::Suicidal};
  CHECK_THROWS_AS(train(ClassifierKind::NaiveBayes, {}, {}, 4, hp, 1), Error);
  CHECK_THROWS_AS(
      train(ClassifierKind::NaiveBayes, vectors, {}, 4, hp, 1), Error);
  CHECK_THROWS_AS(
      train(ClassifierKind::NaiveBayes, vectors, one_label, 4, hp, 1), Error);

  std::vector<FeatureVector> outside = {FeatureVector({{9, 1.0}}),
                                        FeatureVector({{0, 1.0}})};
  std::vector<Label> labels = {Label::Suicidal, Label::NonSuicidal};
  CHECK_THROWS_AS(
      train(ClassifierKind::LogisticRegression, outside, labels, 4, hp, 1),
      Error);
}

TEST_CASE("naive bayes rejects negative values naming the feature") {
  Hyperparameters hp;
  std::vector<FeatureVector> vectors = {FeatureVector({{2, -1.0}}),
                                        FeatureVector({{0, 1.0}})};
  std::vector<Label> labels = {Label::Suicidal, Label::NonSuicidal};
  try {
    train(ClassifierKind::NaiveBayes, vectors, labels, 4, hp, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("naive bayes reproduces the hand-computed Laplace estimate") {
  // Class S: tokens "a a"; class N: tokens "b b"; alpha = 1.
  std::vector<FeatureVector> vectors = {FeatureVector({{0, 2.0}}),
                                        FeatureVector({{1, 2.0}})};
  std::vector<Label> labels = {Label::Suicidal, Label::NonSuicidal};
  Hyperparameters hp;
  TrainedModel model =
      train(ClassifierKind::NaiveBayes, vectors, labels, 2, hp, 1);
  const NaiveBayesParams* params = model.naive_bayes();
  REQUIRE(params != nullptr);
  CHECK(params->log_likelihood_suicidal[0] ==
        doctest::Approx(std::log(0.75)).epsilon(1e-12));
  CHECK(params->log_likelihood_suicidal[1] ==
        doctest::Approx(std::log(0.25)).epsilon(1e-12));
  CHECK(params->log_likelihood_non_suicidal[0] ==
        doctest::Approx(std::log(0.25)).epsilon(1e-12));
  CHECK(params->log_likelihood_non_suicidal[1] ==
        doctest::Approx(std::log(0.75)).epsilon(1e-12));
  CHECK(params->log_prior_suicidal ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));

  // Predicting "a" yields the S class with posterior 0.75 under equal
  // priors, i.e. score = logit(0.75) = ln 3.
  Prediction p = model.predict(FeatureVector({{0, 1.0}}));
  CHECK(p.label == Label::Suicidal);
  CHECK(p.score == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(1.0 / (1.0 + std::exp(-p.score)) == doctest::Approx(0.75));
}

TEST_CASE("naive bayes likelihoods sum to one per class") {
  std::vector<FeatureVector> vectors = {
      FeatureVector({{0, 3.0}, {2, 1.0}}),
      FeatureVector({{1, 2.0}}),
      FeatureVector({{0, 1.0}, {3, 5.0}}),
      FeatureVector({{3, 2.0}}),
  };
  std::vector<Label> labels = {Label::Suicidal, Label::Suicidal,
                               Label::NonSuicidal, Label::NonSuicidal};
  for (double alpha : {0.3, 1.0, 2.5}) {
    Hyperparameters hp;
    hp.nb_alpha = alpha;
    TrainedModel model =
        train(ClassifierKind::NaiveBayes, vectors, labels, 4, hp, 1);
    const NaiveBayesParams* params = model.naive_bayes();
    REQUIRE(params != nullptr);
    double sum_s = 0.0;
    double sum_n = 0.0;
    for (std::size_t f = 0; f < 4; ++f) {
      sum_s += std::exp(params->log_likelihood_suicidal[f]);
      sum_n += std::exp(params->log_likelihood_non_suicidal[f]);
    }
    CHECK(sum_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_n == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("integer-scaling counts and the smoothing together "
          "preserves naive bayes labels") {
  // Balanced classes; alpha scales with the counts so the smoothed
  // likelihoods are exactly unchanged.
  std::mt19937_64 rng(99);
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < 30; ++i) {
    FeatureVector v;
    for (std::uint32_t f = 0; f < 8; ++f) {
      auto count = static_cast<double>(rng() % 4);
      if (i % 2 == 0 && f < 4) count += static_cast<double>(rng() % 3);
      if (i % 2 == 1 && f >= 4) count += static_cast<double>(rng() % 3);
      if (count > 0) v.set(f, count);
    }
    if (v.empty()) v.set(0, 1.0);
    vectors.push_back(std::move(v));
    labels.push_back(i % 2 == 0 ? Label::Suicidal : Label::NonSuicidal);
  }

  const double scale = 3.0;
  std::vector<FeatureVector> scaled;
  for (const auto& v : vectors) {
    FeatureVector s;
    for (auto [index, value] : v.entries()) s.set(index, value * scale);
    scaled.push_back(std::move(s));
  }

  Hyperparameters hp;
  TrainedModel base = train(ClassifierKind::NaiveBayes, vectors, labels, 8,
                            hp, 1);
  Hyperparameters scaled_hp;
  scaled_hp.nb_alpha = hp.nb_alpha * scale;
  TrainedModel rescaled =
      train(ClassifierKind::NaiveBayes, scaled, labels, 8, scaled_hp, 1);

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    CHECK(base.predict(vectors[i]).label ==
          rescaled.predict(scaled[i]).label);
  }
}

TEST_CASE("logistic regression separates the clusters") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 20);
  Hyperparameters hp;
  TrainedModel model =
      train(ClassifierKind::LogisticRegression, vectors, labels, 2, hp, 7);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    CHECK(model.predict(vectors[i]).label == labels[i]);
}

TEST_CASE("lr gradient matches central finite differences") {
  std::mt19937_64 rng(1234);
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < 12; ++i) {
    FeatureVector v;
    for (std::uint32_t f = 0; f < 5; ++f)
      if (rng() % 3 != 0) v.set(f, uniform_real01(rng) * 4.0 - 2.0);
    vectors.push_back(std::move(v));
    labels.push_back(rng() % 2 ? Label::Suicidal : Label::NonSuicidal);
  }
  std::vector<double> weights(5);
  for (double& w : weights) w = uniform_real01(rng) - 0.5;
  double bias = 0.25;
  double lambda = 0.01;

  std::vector<double> grad_w;
  double grad_b = 0.0;
  lr_gradient(vectors, labels, weights, bias, lambda, grad_w, grad_b);

  const double h = 1e-6;
  for (std::size_t f = 0; f < weights.size(); ++f) {
    auto plus = weights;
    auto minus = weights;
    plus[f] += h;
    minus[f] -= h;
    double numeric = (lr_loss(vectors, labels, plus, bias, lambda) -
                      lr_loss(vectors, labels, minus, bias, lambda)) /
                     (2 * h);
    CHECK(grad_w[f] == doctest::Approx(numeric).epsilon(1e-5));
  }
  double numeric_b = (lr_loss(vectors, labels, weights, bias + h, lambda) -
                      lr_loss(vectors, labels, weights, bias - h, lambda)) /
                     (2 * h);
  CHECK(grad_b == doctest::Approx(numeric_b).epsilon(1e-5));
}

TEST_CASE("linear svm reaches full training accuracy on separable data") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 20);

  // Perceptron oracle: the set really is linearly separable.
  {
    double w0 = 0.0, w1 = 0.0, b = 0.0;
    bool converged = false;
    for (int epoch = 0; epoch < 100 && !converged; ++epoch) {
      converged = true;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        double y = labels[i] == Label::Suicidal ? 1.0 : -1.0;
        double z = w0 * vectors[i].at(0) + w1 * vectors[i].at(1) + b;
        if (y * z <= 0) {
          w0 += y * vectors[i].at(0);
          w1 += y * vectors[i].at(1);
          b += y;
          converged = false;
        }
      }
    }
    REQUIRE(converged);
  }

  Hyperparameters hp;
  TrainedModel model =
      train(ClassifierKind::LinearSvm, vectors, labels, 2, hp, 7);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    CHECK(model.predict(vectors[i]).label == labels[i]);
}

TEST_CASE("rbf kernel evaluates the documented cases") {
  FeatureVector x({{0, 1.0}, {1, 2.0}});
  CHECK(rbf_kernel(x, x, 0.7) == 1.0);

  FeatureVector a({{0, 1.0}});
  FeatureVector b({{0, 2.0}, {1, 1.0}});  // squared distance 2
  CHECK(rbf_kernel(a, b, 0.5) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  FeatureVector e0({{0, 1.0}});
  FeatureVector e1({{1, 1.0}});
  CHECK(rbf_kernel(e0, e1, 1.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("rbf svm fits a small separable problem") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 10);
  Hyperparameters hp;
  hp.svm_c = 16.0;
  hp.svm_gamma = 0.125;
  TrainedModel model = train(ClassifierKind::RbfSvm, vectors, labels, 2, hp, 7);
  const RbfSvmParams* params = model.rbf();
  REQUIRE(params != nullptr);
  CHECK(params->converged);
  CHECK_FALSE(params->support.empty());

  // Dual feasibility on exit.
  double balance = 0.0;
  for (double alpha : params->training_alphas) {
    CHECK(alpha >= 0.0);
    CHECK(alpha <= hp.svm_c);
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double y = labels[i] == Label::Suicidal ? 1.0 : -1.0;
    balance += params->training_alphas[i] * y;
  }
  CHECK(std::abs(balance) <= 1e-6);

  for (std::size_t i = 0; i < vectors.size(); ++i)
    CHECK(model.predict(vectors[i]).label == labels[i]);
}

TEST_CASE("support coefficients are alpha times the class sign") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 6);
  Hyperparameters hp;
  hp.svm_gamma = 0.125;
  TrainedModel model = train(ClassifierKind::RbfSvm, vectors, labels, 2, hp, 3);
  const RbfSvmParams* params = model.rbf();
  REQUIRE(params != nullptr);
  for (const SupportVector& sv : params->support)
    CHECK(sv.coefficient != 0.0);
  // Both classes contribute support vectors, so both signs appear.
  std::size_t positives = 0;
  for (const SupportVector& sv : params->support)
    positives += sv.coefficient > 0.0;
  CHECK(positives > 0);
  CHECK(positives < params->support.size());
}

TEST_CASE("training is deterministic per seed") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 10);
  // Shift onto the positive orthant so naive bayes accepts the data too.
  std::vector<FeatureVector> shifted;
  for (const FeatureVector& v : vectors) {
    std::vector<FeatureVector::Entry> entries;
    for (const auto& [index, value] : v.entries()) {
      entries.emplace_back(index, value + 4.0);
    }
    shifted.emplace_back(std::move(entries));
  }
  Hyperparameters hp;
  hp.svm_gamma = 0.125;
  for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression,
                    ClassifierKind::LinearSvm, ClassifierKind::RbfSvm}) {
    TrainedModel first = train(kind, shifted, labels, 2, hp, 11);
    TrainedModel second = train(kind, shifted, labels, 2, hp, 11);
    CHECK(first == second);
  }
}

TEST_CASE("prediction rejects out-of-space indices") {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  separable_data(vectors, labels, 4);
  Hyperparameters hp;
  TrainedModel model =
      train(ClassifierKind::LogisticRegression, vectors, labels, 2, hp, 1);
  CHECK_THROWS_AS(model.predict(FeatureVector({{7, 1.0}})), Error);
}

TEST_CASE("an all-zero linear model scores zero and predicts the negative "
          "class") {
  Hyperparameters hp;
  TrainedModel model(ClassifierKind::LogisticRegression, hp, 3,
                     LinearParams{{0.0, 0.0, 0.0}, 0.0});
  Prediction p = model.predict(FeatureVector({{1, 5.0}}));
  CHECK(p.score == 0.0);
  CHECK(p.label == Label::NonSuicidal);
}

TEST_CASE("an empty vector scores the bias alone") {
  Hyperparameters hp;
  TrainedModel positive(ClassifierKind::LogisticRegression, hp, 2,
                        LinearParams{{1.0, -1.0}, 0.75});
  CHECK(positive.predict(FeatureVector{}).score == 0.75);
  CHECK(positive.predict(FeatureVector{}).label == Label::Suicidal);
  TrainedModel negative(ClassifierKind::LogisticRegression, hp, 2,
                        LinearParams{{1.0, -1.0}, -0.75});
  CHECK(negative.predict(FeatureVector{}).label == Label::NonSuicidal);
}
