#include "itd/classifiers/models.hpp"

#include "itd/rng.hpp"

#include <cmath>
#include <numeric>

namespace itd {

namespace {

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

struct Forward {
  std::vector<double> h;
  ClassScores prob{};
};

void forward(const MlpModel &m, std::span<const double> z, Forward &f) {
  const std::size_t d = m.d;
  f.h.resize(m.hidden);
  for (std::size_t u = 0; u < m.hidden; ++u) {
    const double *w = m.w1.data() + u * (d + 1);
    double a = w[d];
    for (std::size_t j = 0; j < d; ++j)
      a += w[j] * z[j];
    f.h[u] = sigmoid(a);
  }
  ClassScores logits{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!m.present[c])
      continue;
    const double *w = m.w2.data() + c * (m.hidden + 1);
    double a = w[m.hidden];
    for (std::size_t u = 0; u < m.hidden; ++u)
      a += w[u] * f.h[u];
    logits[c] = a;
  }
  f.prob = softmax(logits, m.present);
}

struct Adam {
  double lr, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  std::vector<double> m, v;
  long t = 0;
  Adam(std::size_t n, double rate) : lr(rate), m(n, 0.0), v(n, 0.0) {}
  void step(std::vector<double> &w, const std::vector<double> &g, double c1, double c2) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = b1 * m[k] + (1 - b1) * g[k];
      v[k] = b2 * v[k] + (1 - b2) * g[k] * g[k];
      w[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
    }
  }
};

} // namespace

MlpModel fit_mlp(const SampleSet &s, const Hyperparams &p, std::uint64_t seed, FitFlags &flags) {
  MlpModel m;
  const std::size_t d = m.d = s.n_features;
  m.hidden = static_cast<std::size_t>(std::max(1.0, param_or(p, "hidden", 16.0)));
  const auto epochs = static_cast<int>(param_or(p, "epochs", 200.0));
  const double rate = param_or(p, "learning_rate", 0.01);
  const auto batch = static_cast<std::size_t>(std::max(1.0, param_or(p, "batch", 64.0)));
  const double range = param_or(p, "init_range", 0.7);
  m.z = param_or(p, "standardize", 0.0) != 0.0 ? Standardizer::fit(s) : Standardizer::identity(d);
  for (std::size_t i = 0; i < s.size(); ++i)
    m.present[s.y[i]] = true;

  Rng rng(derive_seed(seed, {0x4d4c50}));
  m.w1.resize(m.hidden * (d + 1));
  m.w2.resize(kNumClasses * (m.hidden + 1));
  for (auto &w : m.w1)
    w = rng.uniform(-range, range);
  for (auto &w : m.w2)
    w = rng.uniform(-range, range);

  std::vector<double> zx(s.x.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    m.z.apply(s.row(i), std::span<double>(zx.data() + i * d, d));

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> g1(m.w1.size()), g2(m.w2.size());
  Adam a1(m.w1.size(), rate), a2(m.w2.size(), rate);
  Forward f;
  std::vector<double> dh(m.hidden);
  double best_loss = INFINITY;
  auto best1 = m.w1, best2 = m.w2;
  std::vector<double> history;
  double c1 = 1.0, c2 = 1.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss = 0.0, seen = 0.0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      std::fill(g1.begin(), g1.end(), 0.0);
      std::fill(g2.begin(), g2.end(), 0.0);
      double bw = 0.0;
      const std::size_t end = std::min(order.size(), b + batch);
      for (std::size_t k = b; k < end; ++k)
        bw += s.count[order[k]];
      for (std::size_t k = b; k < end; ++k) {
        const std::size_t i = order[k];
        std::span<const double> z(zx.data() + i * d, d);
        forward(m, z, f);
        const double w = s.count[i] / bw;
        loss -= s.count[i] * std::log(std::max(f.prob[s.y[i]], 1e-300));
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          if (!m.present[c])
            continue;
          double go = w * (f.prob[c] - (s.y[i] == c ? 1.0 : 0.0));
          double *g = g2.data() + c * (m.hidden + 1);
          const double *wc = m.w2.data() + c * (m.hidden + 1);
          for (std::size_t u = 0; u < m.hidden; ++u) {
            g[u] += go * f.h[u];
            dh[u] += go * wc[u];
          }
          g[m.hidden] += go;
        }
        for (std::size_t u = 0; u < m.hidden; ++u) {
          double gu = dh[u] * f.h[u] * (1.0 - f.h[u]);
          double *g = g1.data() + u * (d + 1);
          for (std::size_t j = 0; j < d; ++j)
            g[j] += gu * z[j];
          g[d] += gu;
        }
      }
      seen += bw;
      c1 *= a1.b1;
      c2 *= a1.b2;
      a1.step(m.w1, g1, 1.0 - c1, 1.0 - c2);
      a2.step(m.w2, g2, 1.0 - c1, 1.0 - c2);
    }
    loss /= seen;
    history.push_back(loss);
    if (loss < best_loss) {
      best_loss = loss;
      best1 = m.w1;
      best2 = m.w2;
    }
  }
  // still improving by more than 0.1% over the last tenth of training
  const std::size_t tail = std::max<std::size_t>(1, history.size() / 10);
  if (history.size() > tail) {
    double before = history[history.size() - 1 - tail];
    if (before - history.back() > 1e-3 * std::abs(before))
      flags.non_convergence = true;
  }
  m.w1 = std::move(best1);
  m.w2 = std::move(best2);
  return m;
}

ClassScores MlpModel::scores(std::span<const double> x) const {
  std::vector<double> zx(d);
  z.apply(x, zx);
  Forward f;
  forward(*this, zx, f);
  return f.prob;
}

} // namespace itd
