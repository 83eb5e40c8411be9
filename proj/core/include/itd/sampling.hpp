#pragma once

#include "itd/dataset.hpp"

#include <cstdint>
#include <vector>

namespace itd {

/// Resamples each minority class with replacement up to the majority count.
/// All original rows are kept and the result is shuffled. Throws
/// EmptyClassSet on an empty table.
DatasetTable oversample(const DatasetTable &table, std::uint64_t seed);

/// Exactly n_per_class rows of every present class, drawn without
/// replacement, in original row order. Throws InsufficientClassRows.
DatasetTable undersample(const DatasetTable &table, std::size_t n_per_class,
                         std::uint64_t seed);

/// At most `cap` rows per class, drawn without replacement, in original
/// row order; smaller classes pass through whole.
DatasetTable cap_classes(const DatasetTable &table, std::size_t cap, std::uint64_t seed);

struct SplitPlan {
  std::size_t k = 5;
  std::size_t repeats = 3;
  std::uint64_t seed = 7;
  bool stratified = true;
};

struct Fold {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  /// Sorted row indices.
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// k x repeats folds, repeat-major. Within a repeat the test sets partition
/// the rows; stratified plans deal each class round-robin so per-fold class
/// counts differ by at most one. Throws TooFewRows (and InvalidConfig for
/// k < 2 or repeats == 0).
std::vector<Fold> kfold(const DatasetTable &table, const SplitPlan &plan);

} // namespace itd
