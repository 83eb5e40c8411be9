#include "itd/classifiers/rules.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

namespace itd {

bool Rule::matches(std::span<const double> x) const {
  for (const auto &c : conditions) {
    bool le = x[c.feature] <= c.threshold;
    if (le != c.less_equal)
      return false;
  }
  return true;
}

namespace {

void walk(const DecisionTree &tree, std::size_t tree_index, double weight, std::int32_t node,
          std::vector<Condition> &path, std::vector<Rule> &out) {
  const auto &n = tree.nodes()[static_cast<std::size_t>(node)];
  if (n.is_leaf()) {
    Rule r;
    r.tree = tree_index;
    r.conditions = path;
    r.label = static_cast<ClassLabel>(n.label);
    r.support = n.support;
    r.confidence = n.dist[n.label];
    r.weight = weight;
    out.push_back(std::move(r));
    return;
  }
  auto f = static_cast<std::size_t>(n.feature);
  path.push_back({f, true, n.threshold});
  walk(tree, tree_index, weight, n.left, path, out);
  path.back().less_equal = false;
  walk(tree, tree_index, weight, n.right, path, out);
  path.pop_back();
}

} // namespace

std::vector<Rule> extract_rules(const TrainedModel &model) {
  if (!is_tree_family(model.spec.algorithm))
    throw Error(Errc::unsupported_model, std::string(algorithm_name(model.spec.algorithm)) +
                                             " has no tree structure");
  std::vector<Rule> out;
  if (model.degenerate) {
    Rule r;
    r.label = static_cast<ClassLabel>(model.constant_class);
    r.confidence = 1.0;
    out.push_back(r);
    return out;
  }
  const auto &e = std::get<EnsembleModel>(model.state);
  std::vector<Condition> path;
  for (std::size_t t = 0; t < e.trees.size(); ++t)
    walk(e.trees[t], t, e.alpha.empty() ? 1.0 : e.alpha[t], 0, path, out);
  return out;
}

std::string condition_text(const Rule &rule, const std::vector<std::string> &columns) {
  std::string s;
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const auto &c = rule.conditions[i];
    if (i)
      s += " AND ";
    s += c.feature < columns.size() ? columns[c.feature] : "x" + std::to_string(c.feature);
    s += c.less_equal ? " <= " : " > ";
    append_number(s, c.threshold);
  }
  return s;
}

std::string rule_text(const Rule &rule, const std::vector<std::string> &columns) {
  std::string s = "IF ";
  s += rule.conditions.empty() ? "TRUE" : condition_text(rule, columns);
  s += " THEN ";
  s += label_name(rule.label);
  return s;
}

void write_rules_csv(std::ostream &out, const std::vector<Rule> &rules,
                     const std::vector<std::string> &columns) {
  std::string buf = "rule_id,conditions,label,support,confidence\n";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    buf += std::to_string(i + 1);
    buf += ',';
    append_csv_field(buf, condition_text(rules[i], columns));
    buf += ',';
    buf += label_name(rules[i].label);
    buf += ',';
    append_number(buf, rules[i].support);
    buf += ',';
    append_number(buf, rules[i].confidence);
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void write_rules_text(std::ostream &out, const std::vector<Rule> &rules,
                      const std::vector<std::string> &columns) {
  for (const auto &r : rules)
    out << rule_text(r, columns) << '\n';
}

ClassLabel classify_by_rules(const std::vector<Rule> &rules, std::span<const double> x) {
  ClassScores votes{};
  std::size_t i = 0;
  while (i < rules.size()) {
    std::size_t tree = rules[i].tree;
    bool found = false;
    for (; i < rules.size() && rules[i].tree == tree; ++i) {
      if (!found && rules[i].matches(x)) {
        votes[class_index(rules[i].label)] += rules[i].weight;
        found = true;
      }
    }
  }
  return static_cast<ClassLabel>(argmax(votes));
}

} // namespace itd
