#pragma once

#include "itd/bench.hpp"
#include "itd/classifiers/classifier.hpp"
#include "itd/selection.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace itd::cli {

struct RunConfig {
  std::string subcommand;

  std::filesystem::path corpus;
  std::filesystem::path out;
  std::filesystem::path features;
  std::filesystem::path attachments;
  std::filesystem::path model;
  std::filesystem::path lexicon;
  std::filesystem::path domains;
  std::filesystem::path names;

  std::uint64_t seed = 7;
  std::size_t employees = 1000;
  int months = 18;
  std::array<double, kNumClasses> fractions = {0.80, 0.13, 0.03, 0.03, 0.01};
  double post_departure = 0.3;

  SamplingMode sample = SamplingMode::over;
  std::size_t n_per_class = 10;
  std::size_t k = 5;
  std::size_t repeats = 3;
  std::vector<Algorithm> suite;
  std::size_t budget = 100;
  double timeout = std::numeric_limits<double>::infinity();

  std::size_t iterations = 100;
  double alpha = 0.01;
  std::size_t trees = 100;
  /// Rows kept per class before the Boruta table is over-sampled; 0 uses
  /// the table as given.
  std::size_t boruta_cap = 1000;
  ImportanceKind importance = ImportanceKind::gini;

  std::size_t jobs = 1;

  RunConfig();
};

/// Every key accepted in a config file or as a `--key` flag (dashes and
/// underscores are interchangeable).
const std::vector<std::string> &config_keys();

/// Applies one `key = value` setting. Throws UnknownKey or TypeError.
void apply_setting(RunConfig &config, const std::string &key, const std::string &value);

/// `key = value` lines, `#` comments and blank lines ignored.
std::map<std::string, std::string> parse_config_text(std::istream &in);

/// Defaults, then the optional file, then flags.
RunConfig load_config(const std::optional<std::filesystem::path> &path,
                      const std::map<std::string, std::string> &flags);

} // namespace itd::cli
