#include "itd/classifiers/models.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace itd {

Standardizer Standardizer::identity(std::size_t d) {
  return Standardizer{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
}

Standardizer Standardizer::fit(const SampleSet &s) {
  const std::size_t d = s.n_features;
  Standardizer z = identity(d);
  double total = 0.0;
  for (double c : s.count)
    total += c;
  if (total <= 0.0)
    return z;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      z.mean[j] += s.count[i] * s.x[i * d + j];
  for (auto &m : z.mean)
    m /= total;
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double t = s.x[i * d + j] - z.mean[j];
      var[j] += s.count[i] * t * t;
    }
  for (std::size_t j = 0; j < d; ++j) {
    double sd = std::sqrt(var[j] / total);
    z.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return z;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j)
    out[j] = (in[j] - mean[j]) / scale[j];
}

double param_or(const Hyperparams &p, const std::string &key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

KnnModel fit_knn(const SampleSet &s, const Hyperparams &p) {
  KnnModel m;
  m.k = static_cast<std::size_t>(std::max(1.0, param_or(p, "k", 5.0)));
  m.d = s.n_features;
  m.z = param_or(p, "standardize", 1.0) != 0.0 ? Standardizer::fit(s) : Standardizer::identity(m.d);
  m.x.resize(s.x.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    m.z.apply(s.row(i), std::span<double>(m.x.data() + i * m.d, m.d));
  m.y = s.y;
  m.count = s.count;
  return m;
}

ClassScores KnnModel::scores(std::span<const double> raw) const {
  std::vector<double> q(d);
  z.apply(raw, q);
  // max-heap of the k closest (distance, index); at most k unique rows are
  // needed because every row has multiplicity >= 1
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double *r = x.data() + i * d;
    double dist = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double t = r[j] - q[j];
      dist += t * t;
    }
    Entry e{dist, i};
    if (heap.size() < k)
      heap.push(e);
    else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
  }
  std::vector<Entry> near;
  while (!heap.empty()) {
    near.push_back(heap.top());
    heap.pop();
  }
  std::sort(near.begin(), near.end());
  ClassScores votes{};
  double need = static_cast<double>(k), got = 0.0;
  for (const auto &[dist, i] : near) {
    double take = std::min(count[i], need - got);
    votes[y[i]] += take;
    got += take;
    if (got >= need)
      break;
  }
  for (auto &v : votes)
    v /= got;
  return votes;
}

} // namespace itd
