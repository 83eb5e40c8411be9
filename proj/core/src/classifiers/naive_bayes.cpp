#include "itd/classifiers/models.hpp"

#include "itd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace itd {

ClassScores softmax(const ClassScores &logits, const std::array<bool, kNumClasses> &present) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (present[c])
      top = std::max(top, logits[c]);
  ClassScores out{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (present[c]) {
      out[c] = std::exp(logits[c] - top);
      sum += out[c];
    }
  for (auto &v : out)
    v /= sum;
  return out;
}

NaiveBayesModel fit_naive_bayes(const SampleSet &s, const Hyperparams &p) {
  NaiveBayesModel m;
  const std::size_t d = m.d = s.n_features;
  m.mean.assign(kNumClasses * d, 0.0);
  m.var.assign(kNumClasses * d, 0.0);
  std::array<double, kNumClasses> w{};
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    w[s.y[i]] += s.count[i];
    total += s.count[i];
    for (std::size_t j = 0; j < d; ++j)
      m.mean[s.y[i] * d + j] += s.count[i] * s.x[i * d + j];
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.present[c] = w[c] > 0.0;
    if (!m.present[c])
      continue;
    m.log_prior[c] = std::log(w[c] / total);
    for (std::size_t j = 0; j < d; ++j)
      m.mean[c * d + j] /= w[c];
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double t = s.x[i * d + j] - m.mean[s.y[i] * d + j];
      m.var[s.y[i] * d + j] += s.count[i] * t * t;
    }
  auto overall = Standardizer::fit(s);
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    // Standardizer reports scale 1 for constant columns
    double sd = overall.scale[j];
    bool constant = true;
    for (std::size_t i = 1; i < s.size() && constant; ++i)
      constant = s.x[i * d + j] == s.x[j];
    if (!constant)
      max_var = std::max(max_var, sd * sd);
  }
  double eps = param_or(p, "var_smoothing", 1e-9) * (max_var > 0.0 ? max_var : 1.0);
  for (std::size_t c = 0; c < kNumClasses; ++c)
    for (std::size_t j = 0; j < d; ++j)
      m.var[c * d + j] = (m.present[c] ? m.var[c * d + j] / w[c] : 0.0) + eps;
  return m;
}

ClassScores NaiveBayesModel::scores(std::span<const double> x) const {
  ClassScores logits{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!present[c])
      continue;
    double l = log_prior[c];
    for (std::size_t j = 0; j < d; ++j) {
      double v = var[c * d + j];
      double t = x[j] - mean[c * d + j];
      l -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + t * t / v);
    }
    logits[c] = l;
  }
  return softmax(logits, present);
}

} // namespace itd
