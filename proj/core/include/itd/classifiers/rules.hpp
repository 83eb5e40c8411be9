#pragma once

#include "itd/classifiers/classifier.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace itd {

struct Condition {
  std::size_t feature = 0;
  /// true for `<=`, false for `>`.
  bool less_equal = true;
  double threshold = 0.0;
  bool operator==(const Condition &) const = default;
};

struct Rule {
  std::size_t tree = 0;
  std::vector<Condition> conditions;
  ClassLabel label = ClassLabel::benign;
  /// Training rows reaching the leaf.
  double support = 0.0;
  /// Leaf share of the predicted label.
  double confidence = 0.0;
  /// Vote weight of the owning tree.
  double weight = 1.0;

  bool matches(std::span<const double> x) const;
};

/// One rule per root-to-leaf path per tree, trees in order, leaves in
/// pre-order. A tree that never split yields one rule with no conditions.
/// Throws UnsupportedModel for non-tree models.
std::vector<Rule> extract_rules(const TrainedModel &model);

/// `risk_leak <= 0.5 AND device_freq > 3`
std::string condition_text(const Rule &rule, const std::vector<std::string> &columns);
/// `IF <conditions> THEN <label>`; `IF TRUE THEN ...` for an empty conjunction.
std::string rule_text(const Rule &rule, const std::vector<std::string> &columns);

void write_rules_csv(std::ostream &out, const std::vector<Rule> &rules,
                     const std::vector<std::string> &columns);
void write_rules_text(std::ostream &out, const std::vector<Rule> &rules,
                      const std::vector<std::string> &columns);

/// Weighted vote of the first matching rule of each tree, ties to the
/// lowest class index.
ClassLabel classify_by_rules(const std::vector<Rule> &rules, std::span<const double> x);

} // namespace itd
