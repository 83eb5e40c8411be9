#include "itd/selection.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"
#include "itd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace itd {

void BorutaConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(Errc::invalid_config, "alpha must lie in (0, 1)");
  if (iterations < 10)
    throw Error(Errc::invalid_config, "at least 10 iterations are required");
  if (!is_tree_family(forest.algorithm))
    throw Error(Errc::invalid_config, "importance requires a tree-family model");
}

std::string_view status_name(FeatureStatus s) {
  switch (s) {
  case FeatureStatus::confirmed:
    return "Confirmed";
  case FeatureStatus::rejected:
    return "Rejected";
  case FeatureStatus::tentative:
    return "Tentative";
  }
  return "Tentative";
}

DatasetTable shadow_extend(const DatasetTable &table, std::uint64_t seed) {
  const std::size_t d = table.cols();
  const std::size_t n = table.rows();
  auto columns = table.columns();
  for (std::size_t j = 0; j < d; ++j)
    columns.push_back("shadow_" + table.columns()[j]);
  std::vector<std::vector<double>> shadows(d);
  for (std::size_t j = 0; j < d; ++j) {
    shadows[j] = table.column(j);
    Rng rng(derive_seed(seed, {j}));
    rng.shuffle(std::span(shadows[j]));
  }
  DatasetTable out(std::move(columns));
  out.reserve(n);
  std::vector<double> row(2 * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = table.row(i);
    std::copy(src.begin(), src.end(), row.begin());
    for (std::size_t j = 0; j < d; ++j)
      row[d + j] = shadows[j][i];
    out.add_row(table.key(i), row, table.label(i));
  }
  out.set_labeled(table.labeled());
  return out;
}

double binomial_two_sided(std::size_t hits, std::size_t n) {
  if (hits > n)
    throw Error(Errc::invalid_config, "hits exceed trials");
  auto pmf = [n](std::size_t k) {
    double lc = std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) -
                std::lgamma(double(n - k) + 1);
    return std::exp(lc - double(n) * std::log(2.0));
  };
  double lower = 0.0, upper = 0.0;
  for (std::size_t k = 0; k <= hits; ++k)
    lower += pmf(k);
  for (std::size_t k = hits; k <= n; ++k)
    upper += pmf(k);
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

std::vector<double> permutation_importance(const TrainedModel &model, const DatasetTable &table,
                                           std::uint64_t seed) {
  const std::size_t d = table.cols();
  const std::size_t n = table.rows();
  if (n == 0)
    throw Error(Errc::degenerate_data, "no rows for permutation importance");
  auto hits_of = [&](const std::vector<double> &values) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
      hits += model.predict_one({values.data() + i * d, d}) == table.label(i);
    return static_cast<double>(hits) / static_cast<double>(n);
  };
  const double base = hits_of(table.values());
  std::vector<double> out(d);
  std::vector<double> work = table.values();
  for (std::size_t j = 0; j < d; ++j) {
    auto col = table.column(j);
    Rng rng(derive_seed(seed, {j}));
    rng.shuffle(std::span(col));
    for (std::size_t i = 0; i < n; ++i)
      work[i * d + j] = col[i];
    out[j] = base - hits_of(work);
    for (std::size_t i = 0; i < n; ++i)
      work[i * d + j] = table.at(i, j);
  }
  return out;
}

BorutaVerdict boruta(const DatasetTable &table, const BorutaConfig &config) {
  config.validate();
  std::size_t present = 0;
  for (auto c : table.class_counts()) {
    if (c == 1)
      throw Error(Errc::degenerate_data, "every present class needs at least two rows");
    present += c > 0;
  }
  if (present < 2)
    throw Error(Errc::degenerate_data, "feature selection needs at least two classes");
  if (table.cols() == 0)
    throw Error(Errc::degenerate_data, "no feature columns");

  const std::size_t d = table.cols();
  BorutaVerdict v;
  v.features = table.columns();
  v.iterations = config.iterations;
  v.hits.assign(d, 0);
  std::vector<std::vector<double>> history(d);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    auto ext = shadow_extend(table, derive_seed(config.seed, {1, it}));
    auto spec = config.forest;
    spec.seed = derive_seed(config.seed, {2, it});
    auto model = fit(spec, ext);
    auto imp = config.importance == ImportanceKind::gini
                   ? feature_importance(model)
                   : permutation_importance(model, ext, derive_seed(config.seed, {3, it}));
    double shadow_max = *std::max_element(imp.begin() + static_cast<std::ptrdiff_t>(d), imp.end());
    for (std::size_t j = 0; j < d; ++j) {
      v.hits[j] += imp[j] > shadow_max;
      history[j].push_back(imp[j]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    auto &h = history[j];
    std::sort(h.begin(), h.end());
    std::size_t n = h.size();
    v.median_importance.push_back(n % 2 ? h[n / 2] : 0.5 * (h[n / 2 - 1] + h[n / 2]));
    double p = binomial_two_sided(v.hits[j], v.iterations);
    v.p_value.push_back(p);
    auto status = FeatureStatus::tentative;
    if (p <= config.alpha)
      status = 2 * v.hits[j] > v.iterations ? FeatureStatus::confirmed : FeatureStatus::rejected;
    v.status.push_back(status);
  }
  v.ranking.resize(d);
  std::iota(v.ranking.begin(), v.ranking.end(), 0);
  std::stable_sort(v.ranking.begin(), v.ranking.end(), [&](std::size_t a, std::size_t b) {
    return v.median_importance[a] > v.median_importance[b];
  });
  return v;
}

std::vector<RankingRow> importance_ranking(const BorutaVerdict &verdict) {
  std::vector<RankingRow> rows;
  for (std::size_t r = 0; r < verdict.ranking.size(); ++r) {
    std::size_t j = verdict.ranking[r];
    rows.push_back({r + 1, j, verdict.features[j], verdict.median_importance[j], verdict.status[j]});
  }
  return rows;
}

void write_boruta_report(std::ostream &out, const BorutaVerdict &verdict) {
  std::vector<std::size_t> rank(verdict.features.size());
  for (std::size_t r = 0; r < verdict.ranking.size(); ++r)
    rank[verdict.ranking[r]] = r + 1;
  std::string buf = "feature,status,hits,iterations,median_importance,rank\n";
  for (std::size_t j = 0; j < verdict.features.size(); ++j) {
    append_csv_field(buf, verdict.features[j]);
    buf += ',';
    buf += status_name(verdict.status[j]);
    buf += ',' + std::to_string(verdict.hits[j]) + ',' + std::to_string(verdict.iterations) + ',';
    append_number(buf, verdict.median_importance[j]);
    buf += ',' + std::to_string(rank[j]) + '\n';
  }
  out << buf;
}

} // namespace itd
