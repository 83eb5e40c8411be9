#pragma once

#include "itd/dataset.hpp"
#include "itd/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace itd {

using ClassScores = std::array<double, kNumClasses>;

/// 1 - sum p_i^2. Throws EmptyNode when all counts are zero.
double gini(std::span<const double> counts);

/// Training rows collapsed to unique (values, label) pairs with their
/// multiplicity, so heavily over-sampled tables fit at the cost of their
/// distinct rows.
struct SampleSet {
  std::size_t n_features = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> y;
  std::vector<double> count;
  /// Unique sample index of each original table row.
  std::vector<std::uint32_t> of_row;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * n_features, n_features};
  }
  static SampleSet from_table(const DatasetTable &table);
};

struct TreeNode {
  /// Split feature, or -1 for a leaf.
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  /// Normalized class distribution of the training weight reaching the node.
  ClassScores dist{};
  /// Training rows (with multiplicity) reaching the node.
  double support = 0.0;
  std::uint8_t label = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
  int max_depth = 30;
  double min_split = 2.0;
  /// Candidate features per node; 0 means all.
  std::size_t mtry = 0;
  bool random_thresholds = false;
};

/// Binary tree stored pre-order; node 0 is the root. Rows go left when
/// x[feature] <= threshold.
class DecisionTree {
public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::vector<double> importance)
      : nodes_(std::move(nodes)), importance_(std::move(importance)) {}

  const std::vector<TreeNode> &nodes() const { return nodes_; }
  std::size_t leaf_index(std::span<const double> x) const;
  const TreeNode &leaf(std::span<const double> x) const { return nodes_[leaf_index(x)]; }
  std::size_t leaf_count() const;
  std::size_t depth() const;
  /// Unnormalized weighted Gini decrease per feature.
  const std::vector<double> &importance() const { return importance_; }

private:
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_;
};

/// Fits a CART tree. `weight` drives class distributions and split gains,
/// `count` drives support and the min_split rule; entries with zero weight
/// are out of bag. Split ties go to the candidate feature drawn first
/// (index order when every feature is a candidate), then the lowest threshold.
DecisionTree fit_tree(const SampleSet &samples, std::span<const double> weight,
                      std::span<const double> count, const TreeParams &params, Rng &rng);

/// Lowest index among the maximal entries.
std::size_t argmax(std::span<const double> v);

} // namespace itd
