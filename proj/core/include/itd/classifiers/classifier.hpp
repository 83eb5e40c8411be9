#pragma once

#include "itd/classifiers/models.hpp"
#include "itd/dataset.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace itd {

enum class Algorithm : std::uint8_t {
  cart,
  random_forest,
  extra_trees,
  bagged_cart,
  adaboost,
  knn,
  gaussian_nb,
  multinom_logreg,
  shallow_mlp,
};

std::span<const Algorithm> all_algorithms();
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
/// Classifier family used to group methods in reports.
std::string_view family_name(Algorithm a);
bool is_tree_family(Algorithm a);
/// Documented defaults; every key a spec may override.
Hyperparams default_params(Algorithm a);

struct ClassifierSpec {
  Algorithm algorithm = Algorithm::random_forest;
  /// Overrides of default_params; unknown keys are rejected by fit.
  Hyperparams params;
  std::uint64_t seed = 7;

  std::string_view family() const { return family_name(algorithm); }
  /// Defaults merged with overrides.
  Hyperparams resolved() const;
  bool operator==(const ClassifierSpec &) const = default;
};

struct TrainedModel {
  ClassifierSpec spec;
  std::vector<std::string> columns;
  double fit_seconds = 0.0;
  /// Single-class training data; the model predicts that class.
  bool degenerate = false;
  /// Iterative learner stopped at its epoch limit (best-so-far weights).
  bool non_convergence = false;
  std::uint8_t constant_class = 0;
  std::variant<std::monostate, EnsembleModel, KnnModel, NaiveBayesModel, LinearModel, MlpModel>
      state;

  ClassScores scores(std::span<const double> x) const;
  ClassLabel predict_one(std::span<const double> x) const;
};

struct Predictions {
  std::vector<ClassLabel> labels;
  std::vector<ClassScores> scores;
};

/// Throws DegenerateData on an empty table and InvalidConfig on unknown
/// hyperparameters. A single-class table yields a flagged constant model.
TrainedModel fit(const ClassifierSpec &spec, const DatasetTable &train);

/// Throws SchemaMismatch when the columns differ from training.
Predictions predict(const TrainedModel &model, const DatasetTable &rows);

/// Mean decrease in Gini impurity per feature, normalized to sum 1 (all
/// zeros when no split was made). Throws UnsupportedModel for non-tree models.
std::vector<double> feature_importance(const TrainedModel &model);

} // namespace itd
