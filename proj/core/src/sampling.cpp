#include "itd/sampling.hpp"

#include "itd/errors.hpp"
#include "itd/rng.hpp"

#include <algorithm>
#include <numeric>

namespace itd {

namespace {

std::array<std::vector<std::size_t>, kNumClasses> rows_by_class(const DatasetTable &t) {
  std::array<std::vector<std::size_t>, kNumClasses> out;
  for (std::size_t i = 0; i < t.rows(); ++i)
    out[class_index(t.label(i))].push_back(i);
  return out;
}

} // namespace

DatasetTable oversample(const DatasetTable &table, std::uint64_t seed) {
  if (table.empty())
    throw Error(Errc::empty_class_set, "cannot over-sample an empty table");
  auto by_class = rows_by_class(table);
  std::size_t majority = 0;
  for (const auto &rows : by_class)
    majority = std::max(majority, rows.size());
  std::vector<std::size_t> picks(table.rows());
  std::iota(picks.begin(), picks.end(), 0);
  picks.reserve(majority * kNumClasses);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto &rows = by_class[c];
    if (rows.empty())
      continue;
    Rng rng(derive_seed(seed, {1, c}));
    for (std::size_t n = rows.size(); n < majority; ++n)
      picks.push_back(rows[rng.below(rows.size())]);
  }
  Rng rng(derive_seed(seed, {2}));
  rng.shuffle(std::span(picks));
  auto out = table.select(picks);
  out.set_labeled(table.labeled());
  return out;
}

namespace {

DatasetTable draw_per_class(const DatasetTable &table, std::size_t n, bool strict,
                            std::uint64_t seed) {
  auto by_class = rows_by_class(table);
  std::vector<std::size_t> picks;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto &rows = by_class[c];
    if (rows.empty())
      continue;
    if (strict && rows.size() < n)
      throw Error(Errc::insufficient_class_rows,
                  std::string(label_name(static_cast<ClassLabel>(c))) + " has " +
                      std::to_string(rows.size()) + " rows, " + std::to_string(n) +
                      " required");
    std::size_t take = std::min(n, rows.size());
    Rng rng(derive_seed(seed, {3, c}));
    for (std::size_t i = 0; i < take; ++i) {
      auto j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
      std::swap(rows[i], rows[j]);
    }
    picks.insert(picks.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(picks.begin(), picks.end());
  auto out = table.select(picks);
  out.set_labeled(table.labeled());
  return out;
}

} // namespace

DatasetTable undersample(const DatasetTable &table, std::size_t n_per_class,
                         std::uint64_t seed) {
  if (n_per_class == 0)
    throw Error(Errc::invalid_config, "n_per_class must be positive");
  if (table.empty())
    throw Error(Errc::empty_class_set, "cannot under-sample an empty table");
  return draw_per_class(table, n_per_class, true, seed);
}

DatasetTable cap_classes(const DatasetTable &table, std::size_t cap, std::uint64_t seed) {
  if (cap == 0)
    throw Error(Errc::invalid_config, "class cap must be positive");
  return draw_per_class(table, cap, false, seed);
}

std::vector<Fold> kfold(const DatasetTable &table, const SplitPlan &plan) {
  if (plan.k < 2)
    throw Error(Errc::invalid_config, "k must be at least 2");
  if (plan.repeats == 0)
    throw Error(Errc::invalid_config, "repeats must be positive");
  if (table.rows() < plan.k)
    throw Error(Errc::too_few_rows, std::to_string(table.rows()) + " rows for " +
                                        std::to_string(plan.k) + " folds");
  std::vector<Fold> out;
  out.reserve(plan.k * plan.repeats);
  std::vector<std::size_t> assign(table.rows());
  for (std::size_t r = 0; r < plan.repeats; ++r) {
    std::vector<std::size_t> order;
    order.reserve(table.rows());
    if (plan.stratified) {
      auto by_class = rows_by_class(table);
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        Rng rng(derive_seed(plan.seed, {4, r, c}));
        rng.shuffle(std::span(by_class[c]));
        order.insert(order.end(), by_class[c].begin(), by_class[c].end());
      }
    } else {
      order.resize(table.rows());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(derive_seed(plan.seed, {5, r}));
      rng.shuffle(std::span(order));
    }
    for (std::size_t p = 0; p < order.size(); ++p)
      assign[order[p]] = p % plan.k;
    for (std::size_t f = 0; f < plan.k; ++f) {
      Fold fold;
      fold.repeat = r;
      fold.fold = f;
      for (std::size_t i = 0; i < table.rows(); ++i)
        (assign[i] == f ? fold.test : fold.train).push_back(i);
      out.push_back(std::move(fold));
    }
  }
  return out;
}

} // namespace itd
