#pragma once

#include "itd/classifiers/classifier.hpp"
#include "itd/dataset.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace itd {

enum class ImportanceKind : std::uint8_t { gini, permutation };

struct BorutaConfig {
  std::size_t iterations = 100;
  double alpha = 0.01;
  ClassifierSpec forest{Algorithm::random_forest, {}, 7};
  ImportanceKind importance = ImportanceKind::gini;
  std::uint64_t seed = 7;

  /// Throws InvalidConfig unless 0 < alpha < 1 and iterations >= 10.
  void validate() const;
};

enum class FeatureStatus : std::uint8_t { confirmed, rejected, tentative };
std::string_view status_name(FeatureStatus s);

struct BorutaVerdict {
  std::vector<std::string> features;
  std::vector<FeatureStatus> status;
  std::vector<std::size_t> hits;
  std::size_t iterations = 0;
  std::vector<double> median_importance;
  /// Two-sided binomial p-value of the hit count against p = 0.5.
  std::vector<double> p_value;
  /// Feature indices by descending median importance, ties to lower index.
  std::vector<std::size_t> ranking;
};

/// Appends `shadow_<name>`, a row permutation of each column.
DatasetTable shadow_extend(const DatasetTable &table, std::uint64_t seed);

/// Two-sided exact binomial test of `hits` successes in `n` trials, p = 0.5.
double binomial_two_sided(std::size_t hits, std::size_t n);

/// Accuracy drop on `table` when each column is permuted in turn.
std::vector<double> permutation_importance(const TrainedModel &model, const DatasetTable &table,
                                           std::uint64_t seed);

/// Shadow-feature all-relevant selection. Throws DegenerateData unless at
/// least two classes are present and each present class has two rows.
BorutaVerdict boruta(const DatasetTable &table, const BorutaConfig &config);

struct RankingRow {
  std::size_t rank = 0;
  std::size_t feature = 0;
  std::string name;
  double median_importance = 0.0;
  FeatureStatus status = FeatureStatus::tentative;
};

/// Rows in descending median importance.
std::vector<RankingRow> importance_ranking(const BorutaVerdict &verdict);

/// `feature,status,hits,iterations,median_importance,rank` in feature order.
void write_boruta_report(std::ostream &out, const BorutaVerdict &verdict);

} // namespace itd
