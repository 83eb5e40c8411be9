#include "itd/classifiers/models.hpp"

#include <cmath>

namespace itd {

namespace {

ClassScores linear_logits(const LinearModel &m, std::span<const double> z) {
  ClassScores out{};
  const std::size_t d = m.d;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!m.present[c])
      continue;
    const double *w = m.w.data() + c * (d + 1);
    double a = w[d];
    for (std::size_t j = 0; j < d; ++j)
      a += w[j] * z[j];
    out[c] = a;
  }
  return out;
}

} // namespace

LinearModel fit_linear(const SampleSet &s, const Hyperparams &p, FitFlags &flags) {
  LinearModel m;
  const std::size_t d = m.d = s.n_features;
  const auto epochs = static_cast<int>(param_or(p, "epochs", 500.0));
  const double step = param_or(p, "step", 0.1);
  const double l2 = param_or(p, "l2", 1e-4);
  const double tol = param_or(p, "tolerance", 1e-4);
  m.z = param_or(p, "standardize", 1.0) != 0.0 ? Standardizer::fit(s) : Standardizer::identity(d);
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    m.present[s.y[i]] = true;
    total += s.count[i];
  }
  std::vector<double> zx(s.x.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    m.z.apply(s.row(i), std::span<double>(zx.data() + i * d, d));

  const std::size_t width = d + 1;
  m.w.assign(kNumClasses * width, 0.0);
  std::vector<double> grad(m.w.size());
  std::vector<double> best = m.w;
  double best_loss = INFINITY;
  double grad_norm = INFINITY;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::span<const double> z(zx.data() + i * d, d);
      auto prob = softmax(linear_logits(m, z), m.present);
      const double w = s.count[i] / total;
      loss -= w * std::log(std::max(prob[s.y[i]], 1e-300));
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (!m.present[c])
          continue;
        double g = w * (prob[c] - (s.y[i] == c ? 1.0 : 0.0));
        double *gc = grad.data() + c * width;
        for (std::size_t j = 0; j < d; ++j)
          gc[j] += g * z[j];
        gc[d] += g;
      }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
      for (std::size_t j = 0; j < d; ++j) {
        loss += 0.5 * l2 * m.w[c * width + j] * m.w[c * width + j];
        grad[c * width + j] += l2 * m.w[c * width + j];
      }
    if (loss < best_loss) {
      best_loss = loss;
      best = m.w;
    }
    grad_norm = 0.0;
    for (double g : grad)
      grad_norm = std::max(grad_norm, std::abs(g));
    if (grad_norm < tol)
      break;
    for (std::size_t k = 0; k < m.w.size(); ++k)
      m.w[k] -= step * grad[k];
  }
  if (grad_norm >= tol) {
    flags.non_convergence = true;
    m.w = best;
  }
  return m;
}

ClassScores LinearModel::scores(std::span<const double> x) const {
  std::vector<double> zx(d);
  z.apply(x, zx);
  return softmax(linear_logits(*this, zx), present);
}

} // namespace itd
