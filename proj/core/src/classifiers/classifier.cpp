#include "itd/classifiers/classifier.hpp"

#include "itd/errors.hpp"

#include <chrono>
#include <cmath>

namespace itd {

namespace {

constexpr std::array<Algorithm, 9> kAlgorithms = {
    Algorithm::cart,        Algorithm::random_forest,   Algorithm::extra_trees,
    Algorithm::bagged_cart, Algorithm::adaboost,        Algorithm::knn,
    Algorithm::gaussian_nb, Algorithm::multinom_logreg, Algorithm::shallow_mlp};

constexpr std::array<std::string_view, 9> kNames = {
    "cart", "random_forest", "extra_trees", "bagged_cart", "adaboost",
    "knn",  "gaussian_nb",   "multinom_logreg", "shallow_mlp"};

constexpr std::array<std::string_view, 9> kFamilies = {
    "Decision Tree",    "Bagging",  "Bagging",
    "Bagging",          "Boosting", "Nearest Neighbor",
    "Bayesian",         "Generalized Linear Model", "Neural Network"};

std::size_t ai(Algorithm a) { return static_cast<std::size_t>(a); }

} // namespace

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }
std::string_view algorithm_name(Algorithm a) { return kNames[ai(a)]; }
std::string_view family_name(Algorithm a) { return kFamilies[ai(a)]; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name)
      return kAlgorithms[i];
  return std::nullopt;
}

bool is_tree_family(Algorithm a) {
  return a == Algorithm::cart || a == Algorithm::random_forest || a == Algorithm::extra_trees ||
         a == Algorithm::bagged_cart || a == Algorithm::adaboost;
}

Hyperparams default_params(Algorithm a) {
  switch (a) {
  case Algorithm::cart:
    return {{"max_depth", 30}, {"min_split", 2}};
  case Algorithm::random_forest:
  case Algorithm::extra_trees:
    // mtry 0 resolves to floor(sqrt(feature count))
    return {{"trees", 100}, {"mtry", 0}, {"max_depth", 30}, {"min_split", 2}};
  case Algorithm::bagged_cart:
    return {{"trees", 25}, {"max_depth", 30}, {"min_split", 2}};
  case Algorithm::adaboost:
    return {{"rounds", 50}, {"max_depth", 3}};
  case Algorithm::knn:
    return {{"k", 5}, {"standardize", 1}};
  case Algorithm::gaussian_nb:
    return {{"var_smoothing", 1e-9}};
  case Algorithm::multinom_logreg:
    return {{"epochs", 500}, {"step", 0.1}, {"l2", 1e-4}, {"standardize", 1}, {"tolerance", 1e-4}};
  case Algorithm::shallow_mlp:
    return {{"hidden", 16},       {"epochs", 200}, {"learning_rate", 0.01},
            {"batch", 64},        {"init_range", 0.7}, {"standardize", 0}};
  }
  return {};
}

Hyperparams ClassifierSpec::resolved() const {
  auto p = default_params(algorithm);
  for (const auto &[k, v] : params) {
    if (!p.count(k))
      throw Error(Errc::invalid_config, "unknown hyperparameter '" + k + "' for " +
                                            std::string(algorithm_name(algorithm)));
    p[k] = v;
  }
  return p;
}

ClassScores EnsembleModel::scores(std::span<const double> x) const {
  ClassScores out{};
  if (vote == Vote::distribution) {
    return trees.front().leaf(x).dist;
  }
  double total = 0.0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    double w = alpha.empty() ? 1.0 : alpha[t];
    out[trees[t].leaf(x).label] += w;
    total += w;
  }
  for (auto &v : out)
    v /= total;
  return out;
}

EnsembleModel fit_single_tree(const SampleSet &s, const Hyperparams &p, std::uint64_t seed) {
  TreeParams tp;
  tp.max_depth = static_cast<int>(param_or(p, "max_depth", 30));
  tp.min_split = param_or(p, "min_split", 2);
  Rng rng(derive_seed(seed, {0}));
  EnsembleModel m;
  m.vote = EnsembleModel::Vote::distribution;
  m.trees.push_back(fit_tree(s, s.count, s.count, tp, rng));
  return m;
}

EnsembleModel fit_forest(const SampleSet &s, std::size_t n_rows, const Hyperparams &p,
                         std::uint64_t seed, bool random_thresholds, bool bootstrap,
                         std::size_t default_mtry) {
  TreeParams tp;
  tp.max_depth = static_cast<int>(param_or(p, "max_depth", 30));
  tp.min_split = param_or(p, "min_split", 2);
  auto mtry = static_cast<std::size_t>(param_or(p, "mtry", 0));
  tp.mtry = mtry == 0 ? default_mtry : mtry;
  tp.random_thresholds = random_thresholds;
  const auto n_trees = static_cast<std::size_t>(std::max(1.0, param_or(p, "trees", 100)));
  EnsembleModel m;
  m.vote = EnsembleModel::Vote::majority;
  m.trees.reserve(n_trees);
  std::vector<double> counts(s.size());
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(seed, {t}));
    if (bootstrap) {
      std::fill(counts.begin(), counts.end(), 0.0);
      for (std::size_t k = 0; k < n_rows; ++k)
        counts[s.of_row[rng.below(n_rows)]] += 1.0;
      m.trees.push_back(fit_tree(s, counts, counts, tp, rng));
    } else {
      m.trees.push_back(fit_tree(s, s.count, s.count, tp, rng));
    }
  }
  return m;
}

EnsembleModel fit_adaboost(const SampleSet &s, const Hyperparams &p, std::uint64_t seed) {
  TreeParams tp;
  tp.max_depth = static_cast<int>(param_or(p, "max_depth", 3));
  tp.min_split = 2;
  const auto rounds = static_cast<std::size_t>(std::max(1.0, param_or(p, "rounds", 50)));
  std::array<bool, kNumClasses> present{};
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    present[s.y[i]] = true;
    total += s.count[i];
  }
  double k = 0;
  for (bool b : present)
    k += b;
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    w[i] = s.count[i] / total;
  EnsembleModel m;
  m.vote = EnsembleModel::Vote::weighted;
  std::vector<char> miss(s.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    Rng rng(derive_seed(seed, {r}));
    auto tree = fit_tree(s, w, s.count, tp, rng);
    double err = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      miss[i] = tree.leaf(s.row(i)).label != s.y[i];
      err += miss[i] ? w[i] : 0.0;
      wsum += w[i];
    }
    err /= wsum;
    if (err <= 1e-12) {
      m.trees.push_back(std::move(tree));
      m.alpha.push_back(1.0);
      break;
    }
    if (err >= 1.0 - 1.0 / k) {
      if (m.trees.empty()) {
        m.trees.push_back(std::move(tree));
        m.alpha.push_back(1.0);
      }
      break;
    }
    double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
    m.trees.push_back(std::move(tree));
    m.alpha.push_back(alpha);
    double norm = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (miss[i])
        w[i] *= std::exp(alpha);
      norm += w[i];
    }
    for (auto &v : w)
      v /= norm;
  }
  return m;
}

ClassScores TrainedModel::scores(std::span<const double> x) const {
  if (degenerate) {
    ClassScores out{};
    out[constant_class] = 1.0;
    return out;
  }
  return std::visit(
      [&](const auto &m) -> ClassScores {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>)
          throw Error(Errc::unsupported_model, "model has no fitted state");
        else
          return m.scores(x);
      },
      state);
}

ClassLabel TrainedModel::predict_one(std::span<const double> x) const {
  return static_cast<ClassLabel>(argmax(scores(x)));
}

TrainedModel fit(const ClassifierSpec &spec, const DatasetTable &train) {
  const auto params = spec.resolved();
  if (train.empty())
    throw Error(Errc::degenerate_data, "cannot fit on an empty table");
  auto start = std::chrono::steady_clock::now();
  TrainedModel model;
  model.spec = spec;
  model.columns = train.columns();
  auto counts = train.class_counts();
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (counts[c] > 0) {
      ++present;
      model.constant_class = static_cast<std::uint8_t>(c);
    }
  if (present < 2) {
    model.degenerate = true;
  } else {
    auto s = SampleSet::from_table(train);
    const std::size_t d = train.cols();
    const auto sqrt_d = static_cast<std::size_t>(std::max(1.0, std::floor(std::sqrt(double(d)))));
    FitFlags flags;
    switch (spec.algorithm) {
    case Algorithm::cart:
      model.state = fit_single_tree(s, params, spec.seed);
      break;
    case Algorithm::random_forest:
      model.state = fit_forest(s, train.rows(), params, spec.seed, false, true, sqrt_d);
      break;
    case Algorithm::extra_trees:
      model.state = fit_forest(s, train.rows(), params, spec.seed, true, false, sqrt_d);
      break;
    case Algorithm::bagged_cart:
      model.state = fit_forest(s, train.rows(), params, spec.seed, false, true, d);
      break;
    case Algorithm::adaboost:
      model.state = fit_adaboost(s, params, spec.seed);
      break;
    case Algorithm::knn:
      model.state = fit_knn(s, params);
      break;
    case Algorithm::gaussian_nb:
      model.state = fit_naive_bayes(s, params);
      break;
    case Algorithm::multinom_logreg:
      model.state = fit_linear(s, params, flags);
      break;
    case Algorithm::shallow_mlp:
      model.state = fit_mlp(s, params, spec.seed, flags);
      break;
    }
    model.non_convergence = flags.non_convergence;
  }
  model.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

Predictions predict(const TrainedModel &model, const DatasetTable &rows) {
  if (rows.columns() != model.columns)
    throw Error(Errc::schema_mismatch, "prediction columns differ from training columns");
  Predictions out;
  out.labels.reserve(rows.rows());
  out.scores.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    auto s = model.scores(rows.row(i));
    out.labels.push_back(static_cast<ClassLabel>(argmax(s)));
    out.scores.push_back(s);
  }
  return out;
}

std::vector<double> feature_importance(const TrainedModel &model) {
  if (!is_tree_family(model.spec.algorithm))
    throw Error(Errc::unsupported_model, std::string(algorithm_name(model.spec.algorithm)) +
                                             " has no tree structure");
  std::vector<double> imp(model.columns.size(), 0.0);
  if (const auto *e = std::get_if<EnsembleModel>(&model.state)) {
    for (std::size_t t = 0; t < e->trees.size(); ++t) {
      const auto &raw = e->trees[t].importance();
      double root = e->trees[t].nodes().front().support;
      double w = e->alpha.empty() ? 1.0 : e->alpha[t];
      for (std::size_t j = 0; j < imp.size(); ++j)
        imp[j] += w * raw[j] / (root > 0 ? root : 1.0);
    }
  }
  double sum = 0.0;
  for (double v : imp)
    sum += v;
  if (sum > 0.0)
    for (auto &v : imp)
      v /= sum;
  return imp;
}

} // namespace itd
