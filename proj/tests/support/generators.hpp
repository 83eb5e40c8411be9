#pragma once

#include "itd/dataset.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace itd::testgen {

/// Small deterministic source for property trials, independent of the
/// library's own generator.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  std::uint64_t seed() { return eng_(); }

  /// Labeled table with random class sizes (some classes may be absent)
  /// and small integer features, so duplicate rows occur.
  DatasetTable table(std::size_t max_per_class, std::size_t cols, int value_range = 5) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < cols; ++j)
      names.push_back("f" + std::to_string(j));
    DatasetTable t(names);
    std::vector<double> row(cols);
    int id = 0;
    for (auto c : kAllClasses) {
      std::size_t n = coin(0.8) ? index(max_per_class) + 1 : 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (auto &v : row)
          v = integer(0, value_range) + static_cast<double>(class_index(c));
        t.add_row(RowKey{"U" + std::to_string(id++), 1}, row, c);
      }
    }
    if (t.empty()) {
      t.add_row(RowKey{"U0", 1}, row, ClassLabel::benign);
    }
    t.set_labeled(true);
    return t;
  }

private:
  std::mt19937_64 eng_;
};

} // namespace itd::testgen
