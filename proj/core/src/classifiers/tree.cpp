#include "itd/classifiers/tree.hpp"

#include "itd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <unordered_map>

namespace itd {

double gini(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts)
    total += c;
  if (!(total > 0.0))
    throw Error(Errc::empty_node, "gini of an empty node");
  double s = 0.0;
  for (double c : counts)
    s += (c / total) * (c / total);
  return 1.0 - s;
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best])
      best = i;
  return best;
}

namespace {

struct RowHash {
  std::size_t n;
  const std::vector<double> *x;
  const std::vector<std::uint8_t> *y;
  std::size_t operator()(std::uint32_t i) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (*y)[i];
    const double *p = x->data() + static_cast<std::size_t>(i) * n;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t b;
      double v = p[j] == 0.0 ? 0.0 : p[j];
      std::memcpy(&b, &v, sizeof b);
      h = (h ^ b) * 0x100000001b3ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEq {
  std::size_t n;
  const std::vector<double> *x;
  const std::vector<std::uint8_t> *y;
  bool operator()(std::uint32_t a, std::uint32_t b) const {
    if ((*y)[a] != (*y)[b])
      return false;
    const double *p = x->data() + static_cast<std::size_t>(a) * n;
    const double *q = x->data() + static_cast<std::size_t>(b) * n;
    for (std::size_t j = 0; j < n; ++j)
      if (p[j] != q[j])
        return false;
    return true;
  }
};

} // namespace

SampleSet SampleSet::from_table(const DatasetTable &table) {
  SampleSet s;
  s.n_features = table.cols();
  const std::size_t n = table.rows();
  s.of_row.resize(n);
  s.x.reserve(n * s.n_features);
  RowHash hash{s.n_features, &s.x, &s.y};
  RowEq eq{s.n_features, &s.x, &s.y};
  std::unordered_map<std::uint32_t, std::uint32_t, RowHash, RowEq> seen(n, hash, eq);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = table.row(i);
    auto candidate = static_cast<std::uint32_t>(s.y.size());
    s.x.insert(s.x.end(), r.begin(), r.end());
    s.y.push_back(static_cast<std::uint8_t>(table.label(i)));
    auto [it, inserted] = seen.emplace(candidate, candidate);
    if (inserted) {
      s.count.push_back(1.0);
      s.of_row[i] = candidate;
    } else {
      s.x.resize(s.x.size() - s.n_features);
      s.y.pop_back();
      s.count[it->second] += 1.0;
      s.of_row[i] = it->second;
    }
  }
  return s;
}

std::size_t DecisionTree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto &n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                         : n.right);
  }
  return i;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode &n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty())
    return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

namespace {

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = -1.0;
};

double purity_score(const ClassScores &c, double w) {
  double s = 0.0;
  for (double v : c)
    s += v * v;
  return s / w;
}

class TreeBuilder {
public:
  TreeBuilder(const SampleSet &s, std::span<const double> weight, std::span<const double> count,
              const TreeParams &p, Rng &rng)
      : s_(s), w_(weight), c_(count), p_(p), rng_(rng), importance_(s.n_features, 0.0) {
    features_.resize(s.n_features);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  DecisionTree build() {
    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (w_[i] > 0.0)
        idx.push_back(static_cast<std::uint32_t>(i));
    if (idx.empty())
      throw Error(Errc::degenerate_data, "tree fit on an empty sample");
    grow(idx, 0);
    return DecisionTree(std::move(nodes_), std::move(importance_));
  }

private:
  void grow(std::vector<std::uint32_t> &idx, int depth) {
    ClassScores cls{};
    double w = 0.0, n = 0.0;
    for (auto i : idx) {
      cls[s_.y[i]] += w_[i];
      w += w_[i];
      n += c_[i];
    }
    auto at = nodes_.size();
    nodes_.emplace_back();
    {
      auto &node = nodes_[at];
      for (std::size_t k = 0; k < kNumClasses; ++k)
        node.dist[k] = cls[k] / w;
      node.support = n;
      node.label = static_cast<std::uint8_t>(argmax(node.dist));
    }
    const double parent = purity_score(cls, w);
    const bool pure = std::count_if(cls.begin(), cls.end(), [](double v) { return v > 0; }) <= 1;
    if (pure || depth >= p_.max_depth || n < p_.min_split)
      return;

    Split best = search(idx, cls, w);
    if (!best.found)
      return;
    importance_[best.feature] += best.score - parent;

    std::vector<std::uint32_t> left, right;
    for (auto i : idx)
      (s_.x[i * s_.n_features + best.feature] <= best.threshold ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    nodes_[at].feature = static_cast<std::int32_t>(best.feature);
    nodes_[at].threshold = best.threshold;
    nodes_[at].left = static_cast<std::int32_t>(nodes_.size());
    grow(left, depth + 1);
    nodes_[at].right = static_cast<std::int32_t>(nodes_.size());
    grow(right, depth + 1);
  }

  Split search(const std::vector<std::uint32_t> &idx, const ClassScores &total, double w) {
    const std::size_t d = s_.n_features;
    const std::size_t mtry = p_.mtry == 0 || p_.mtry > d ? d : p_.mtry;
    // partial Fisher-Yates: first mtry entries are the candidates
    for (std::size_t k = 0; k < mtry && mtry < d; ++k) {
      auto j = k + static_cast<std::size_t>(rng_.below(d - k));
      std::swap(features_[k], features_[j]);
    }
    Split best;
    bool any_varying = false;
    for (std::size_t k = 0; k < mtry; ++k)
      any_varying |= evaluate(idx, features_[k], total, w, best);
    if (!any_varying)
      for (std::size_t k = mtry; k < d; ++k)
        evaluate(idx, features_[k], total, w, best);
    return best;
  }

  // thresholds are offered in ascending order, so a strict comparison keeps
  // the first candidate feature and its lowest threshold
  static void offer(Split &best, std::size_t f, double threshold, double score) {
    if (!best.found || score > best.score)
      best = Split{true, f, threshold, score};
  }

  /// Returns false when the feature is constant within the node.
  bool evaluate(const std::vector<std::uint32_t> &idx, std::size_t f, const ClassScores &total,
                double w, Split &best) {
    const std::size_t d = s_.n_features;
    if (p_.random_thresholds) {
      double lo = s_.x[idx[0] * d + f], hi = lo;
      for (auto i : idx) {
        double v = s_.x[i * d + f];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(lo < hi))
        return false;
      double t = rng_.uniform(lo, hi);
      ClassScores l{};
      double wl = 0.0;
      for (auto i : idx)
        if (s_.x[i * d + f] <= t) {
          l[s_.y[i]] += w_[i];
          wl += w_[i];
        }
      if (wl <= 0.0 || wl >= w) {
        return true;
      }
      ClassScores r{};
      for (std::size_t k = 0; k < kNumClasses; ++k)
        r[k] = total[k] - l[k];
      offer(best, f, t, purity_score(l, wl) + purity_score(r, w - wl));
      return true;
    }
    buf_.clear();
    for (auto i : idx)
      buf_.emplace_back(s_.x[i * d + f], i);
    std::sort(buf_.begin(), buf_.end());
    if (buf_.front().first == buf_.back().first)
      return false;
    ClassScores l{};
    double wl = 0.0;
    for (std::size_t k = 0; k + 1 < buf_.size(); ++k) {
      auto i = buf_[k].second;
      l[s_.y[i]] += w_[i];
      wl += w_[i];
      double v = buf_[k].first, next = buf_[k + 1].first;
      if (v == next)
        continue;
      ClassScores r;
      for (std::size_t c = 0; c < kNumClasses; ++c)
        r[c] = total[c] - l[c];
      double wr = w - wl;
      if (wl <= 0.0 || wr <= 0.0)
        continue;
      double t = v + (next - v) / 2.0;
      if (!(t < next))
        t = v;
      offer(best, f, t, purity_score(l, wl) + purity_score(r, wr));
    }
    return true;
  }

  const SampleSet &s_;
  std::span<const double> w_;
  std::span<const double> c_;
  const TreeParams &p_;
  Rng &rng_;
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, std::uint32_t>> buf_;
};

} // namespace

DecisionTree fit_tree(const SampleSet &samples, std::span<const double> weight,
                      std::span<const double> count, const TreeParams &params, Rng &rng) {
  return TreeBuilder(samples, weight, count, params, rng).build();
}

} // namespace itd
