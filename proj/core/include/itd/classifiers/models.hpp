#pragma once

#include "itd/classifiers/tree.hpp"

#include <map>
#include <string>

namespace itd {

using Hyperparams = std::map<std::string, double>;

/// Per-feature z-score constants; zero-variance features keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const SampleSet &s);
  static Standardizer identity(std::size_t d);
  void apply(std::span<const double> in, std::span<double> out) const;
  bool operator==(const Standardizer &) const = default;
};

struct EnsembleModel {
  enum class Vote : std::uint8_t { distribution, majority, weighted };
  Vote vote = Vote::majority;
  std::vector<DecisionTree> trees;
  /// Per-tree vote weights (boosting); empty means 1 each.
  std::vector<double> alpha;

  ClassScores scores(std::span<const double> x) const;
};

struct KnnModel {
  std::size_t k = 5;
  Standardizer z;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> y;
  std::vector<double> count;

  ClassScores scores(std::span<const double> x) const;
};

struct NaiveBayesModel {
  std::size_t d = 0;
  std::array<bool, kNumClasses> present{};
  std::array<double, kNumClasses> log_prior{};
  std::vector<double> mean;
  std::vector<double> var;

  ClassScores scores(std::span<const double> x) const;
};

struct LinearModel {
  std::size_t d = 0;
  Standardizer z;
  std::array<bool, kNumClasses> present{};
  /// kNumClasses x (d + 1), bias last.
  std::vector<double> w;

  ClassScores scores(std::span<const double> x) const;
};

struct MlpModel {
  std::size_t d = 0;
  std::size_t hidden = 16;
  Standardizer z;
  std::array<bool, kNumClasses> present{};
  /// hidden x (d + 1) and kNumClasses x (hidden + 1), bias last.
  std::vector<double> w1;
  std::vector<double> w2;

  ClassScores scores(std::span<const double> x) const;
};

struct FitFlags {
  bool non_convergence = false;
};

double param_or(const Hyperparams &p, const std::string &key, double fallback);

EnsembleModel fit_single_tree(const SampleSet &s, const Hyperparams &p, std::uint64_t seed);
EnsembleModel fit_forest(const SampleSet &s, std::size_t n_rows, const Hyperparams &p,
                         std::uint64_t seed, bool random_thresholds, bool bootstrap,
                         std::size_t default_mtry);
EnsembleModel fit_adaboost(const SampleSet &s, const Hyperparams &p, std::uint64_t seed);
KnnModel fit_knn(const SampleSet &s, const Hyperparams &p);
NaiveBayesModel fit_naive_bayes(const SampleSet &s, const Hyperparams &p);
LinearModel fit_linear(const SampleSet &s, const Hyperparams &p, FitFlags &flags);
MlpModel fit_mlp(const SampleSet &s, const Hyperparams &p, std::uint64_t seed, FitFlags &flags);

/// Normalizes logits over the present classes into probabilities.
ClassScores softmax(const ClassScores &logits, const std::array<bool, kNumClasses> &present);

} // namespace itd
