#pragma once

#include "itd/classifiers/classifier.hpp"
#include "itd/dataset.hpp"
#include "itd/sampling.hpp"

#include <array>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itd {

/// Square count matrix indexed by (actual, predicted) class index.
class ConfusionMatrix {
public:
  explicit ConfusionMatrix(std::size_t n = kNumClasses) : n_(n), counts_(n * n, 0.0) {}
  static ConfusionMatrix from_counts(std::size_t n, std::vector<double> counts);

  std::size_t size() const { return n_; }
  void add(std::size_t actual, std::size_t predicted, double count = 1.0) {
    counts_[actual * n_ + predicted] += count;
  }
  void add(ClassLabel actual, ClassLabel predicted) {
    add(class_index(actual), class_index(predicted));
  }
  double at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * n_ + predicted];
  }
  double total() const;
  double row_sum(std::size_t actual) const;
  double col_sum(std::size_t predicted) const;
  ConfusionMatrix &operator+=(const ConfusionMatrix &o);
  bool operator==(const ConfusionMatrix &) const = default;

private:
  std::size_t n_;
  std::vector<double> counts_;
};

/// trace / total. Throws EmptyMatrix.
double accuracy(const ConfusionMatrix &cm);
/// Cohen's kappa; 0 when chance agreement is 1. Throws EmptyMatrix.
double cohen_kappa(const ConfusionMatrix &cm);
/// log(1 + 1000 t) / max log(1 + 1000 t). Throws NonPositiveTime.
std::vector<double> time_score(std::span<const double> seconds);

enum class SamplingMode : std::uint8_t { none, over, under };
std::string_view sampling_name(SamplingMode m);
std::optional<SamplingMode> parse_sampling(std::string_view name);

/// Rebalances a training table; `under` keeps min(n_per_class, smallest
/// present class) rows per class.
DatasetTable balance(const DatasetTable &train, SamplingMode mode, std::size_t n_per_class,
                     std::uint64_t seed);

struct BenchOptions {
  SamplingMode sampling = SamplingMode::over;
  std::size_t n_per_class = 10;
  /// Summed fit+predict seconds after which a method is excluded.
  double timeout_seconds = std::numeric_limits<double>::infinity();
  /// Worker threads evaluating folds; per-fold times are still summed.
  std::size_t jobs = 1;
};

struct BenchmarkResult {
  std::string method;
  std::string family;
  double accuracy = 0.0;
  double kappa = 0.0;
  double seconds = 0.0;
  double time_score = 0.0;
  std::size_t folds = 0;
  bool non_convergence = false;
};

struct Exclusion {
  std::string method;
  std::string reason;
};

struct BenchmarkRun {
  /// Sorted by descending median accuracy, then method id.
  std::vector<BenchmarkResult> results;
  /// Test-fold confusion pooled over all folds, aligned with results.
  std::vector<ConfusionMatrix> matrices;
  std::vector<Exclusion> exclusions;
};

/// Evaluates every spec over the plan's folds. Training folds are balanced
/// per options; test folds are left untouched. Failures and timeouts are
/// recorded as exclusions.
BenchmarkRun run_benchmark(std::span<const ClassifierSpec> specs, const DatasetTable &table,
                           const SplitPlan &plan, const BenchOptions &options = {});

/// Fits on train and returns the confusion over test.
ConfusionMatrix evaluate_holdout(const ClassifierSpec &spec, const DatasetTable &train,
                                 const DatasetTable &test);

struct OneVsBenign {
  ClassLabel threat = ClassLabel::thief;
  /// [actual][predicted], index 0 Benign and 1 the threat class.
  std::array<std::array<double, 2>, 2> counts{};
  /// Row-normalized percentages.
  std::array<std::array<double, 2>, 2> percent{};
  double false_assignment = 0.0;
};

/// Restricted to rows whose truth is Benign or the threat class; a row is
/// positive when predicted as the threat class. Throws NoRowsForClass.
OneVsBenign one_vs_benign_matrix(std::span<const ClassLabel> predicted,
                                 std::span<const ClassLabel> truth, ClassLabel threat);
OneVsBenign one_vs_benign_matrix(const ConfusionMatrix &cm, ClassLabel threat);

enum class PriIndicator : std::uint8_t {
  file_freq,
  risk_sabotage,
  unauthorized_log,
  email_compete,
  device_freq,
  web_sentiment,
};

std::span<const PriIndicator> all_pri_indicators();
std::string_view pri_name(PriIndicator p);
/// Industry wording of the indicator.
std::string_view pri_description(PriIndicator p);
Feature pri_feature(PriIndicator p);
std::optional<PriIndicator> parse_pri(std::string_view name);

struct PriResult {
  std::string indicator;
  std::string metric;
  std::size_t k = 0;
  double false_accusation = 0.0;
  double eludes_detection = 0.0;
};

/// Flags the top K rows by score (ascending when `ascending`), ties to the
/// lower row index. Throws BudgetExceedsRows and NoThreats.
PriResult pri_rank(std::span<const double> scores, std::span<const ClassLabel> labels,
                   std::size_t k, bool ascending);

/// Ranks by the indicator's feature column, or by `override_scores` when
/// non-empty (e.g. competitor emails carrying attachments).
PriResult pri_baseline(const DatasetTable &table, PriIndicator indicator, std::size_t k,
                       std::span<const double> override_scores = {});

struct ReportInput {
  const BenchmarkRun *run = nullptr;
  /// Method whose pooled matrix feeds the per-class confusion files.
  std::string confusion_method;
  std::vector<PriResult> pri;
  std::string title = "Benchmark report";
};

/// Writes ranking.csv, scatter.csv, confusion_<class>.csv, exclusions.csv,
/// pri.csv (when any PRI results are given) and report.md. Throws IoFailure.
void emit_reports(const ReportInput &input, const std::filesystem::path &dir);

void write_pri_csv(const std::filesystem::path &path, std::span<const PriResult> pri);

/// Renders report.md from whichever of ranking.csv, exclusions.csv,
/// confusion_<class>.csv, pri.csv, boruta_report.csv and rules.csv exist in
/// the directory, in that order.
void render_report(const std::filesystem::path &dir, const std::string &title = "Benchmark report");

} // namespace itd
