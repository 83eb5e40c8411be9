#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itd {

enum class ClassLabel : std::uint8_t { benign, departed, leaker, thief, saboteur };

inline constexpr std::size_t kNumClasses = 5;
inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::benign, ClassLabel::departed, ClassLabel::leaker,
    ClassLabel::thief, ClassLabel::saboteur};

std::string_view label_name(ClassLabel label);
std::optional<ClassLabel> parse_label(std::string_view name);
inline std::size_t class_index(ClassLabel label) { return static_cast<std::size_t>(label); }
inline bool is_threat(ClassLabel label) { return label >= ClassLabel::leaker; }

enum class Feature : std::uint8_t {
  risk_leak,
  dow_leak,
  hr_leak,
  risk_thief,
  dow_thief,
  hr_thief,
  risk_sabotage,
  dow_sabotage,
  hr_sabotage,
  device_freq,
  file_freq,
  email_sentiment,
  email_compete,
  web_sentiment,
  executables,
  unauthorized_log,
  gender,
};

inline constexpr std::size_t kNumFeatures = 17;

std::span<const std::string_view> feature_names();
std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);
inline std::size_t feature_index(Feature f) { return static_cast<std::size_t>(f); }

struct RowKey {
  std::string user;
  int month = 0;
  auto operator<=>(const RowKey &) const = default;
};

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Row-major numeric table with one key and one class label per row. The
/// column set is normally the 17 features but may be wider (shadow columns).
class DatasetTable {
public:
  DatasetTable() = default;
  explicit DatasetTable(std::vector<std::string> columns);
  /// Table with the standard 17 feature columns.
  static DatasetTable with_feature_columns();

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return columns_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string> &columns() const { return columns_; }
  std::optional<std::size_t> column_index(std::string_view name) const;

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  double &at(std::size_t i, std::size_t j) { return values_[i * cols() + j]; }
  const RowKey &key(std::size_t i) const { return keys_[i]; }
  ClassLabel label(std::size_t i) const { return labels_[i]; }
  void set_label(std::size_t i, ClassLabel label) { labels_[i] = label; }
  std::span<const ClassLabel> labels() const { return labels_; }
  const std::vector<double> &values() const { return values_; }

  /// Whether labels carry ground truth (false right after extraction).
  bool labeled() const { return labeled_; }
  void set_labeled(bool v) { labeled_ = v; }

  void reserve(std::size_t n);
  void add_row(RowKey key, std::span<const double> values,
               ClassLabel label = ClassLabel::benign);
  /// Copy of the selected rows in the given order (repeats allowed).
  DatasetTable select(std::span<const std::size_t> indices) const;
  /// Copy restricted to the given columns.
  DatasetTable project(std::span<const std::size_t> columns) const;
  std::vector<double> column(std::size_t j) const;
  ColumnStats column_stats(std::size_t j) const;
  std::array<std::size_t, kNumClasses> class_counts() const;

  bool operator==(const DatasetTable &) const = default;

private:
  std::vector<std::string> columns_;
  std::vector<double> values_;
  std::vector<RowKey> keys_;
  std::vector<ClassLabel> labels_;
  bool labeled_ = false;
};

/// Ground-truth labels per (user, month).
class LabelMap {
public:
  void set(std::string_view user, int month, ClassLabel label);
  std::optional<ClassLabel> find(std::string_view user, int month) const;
  std::size_t size() const { return labels_.size(); }
  const std::map<RowKey, ClassLabel> &entries() const { return labels_; }
  bool operator==(const LabelMap &) const = default;

private:
  std::map<RowKey, ClassLabel> labels_;
};

/// Populates the label column from truth. Throws MissingTruth for any key
/// absent from truth.
DatasetTable attach_labels(DatasetTable table, const LabelMap &truth);

/// CSV with header `user,month,<columns...>,label`. Unlabeled tables write an
/// empty label field.
void write_table(std::ostream &out, const DatasetTable &table);
void write_table(const std::string &path, const DatasetTable &table);
/// Throws SchemaMismatch when the header lacks user, month or label.
DatasetTable read_table(std::istream &in);
DatasetTable read_table(const std::string &path);

/// Shortest decimal text that parses back to the same double.
void append_number(std::string &out, double v);
std::optional<double> parse_number(std::string_view text);

} // namespace itd
