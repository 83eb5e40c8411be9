#include "itd/dataset.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace itd {

namespace {

constexpr std::array<std::string_view, kNumClasses> kLabelNames = {
    "Benign", "Departed", "Leaker", "Thief", "Saboteur"};

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "risk_leak",     "dow_leak",        "hr_leak",         "risk_thief",
    "dow_thief",     "hr_thief",        "risk_sabotage",   "dow_sabotage",
    "hr_sabotage",   "device_freq",     "file_freq",       "email_sentiment",
    "email_compete", "web_sentiment",   "executables",     "unauthorized_log",
    "gender"};

} // namespace

std::string_view label_name(ClassLabel label) { return kLabelNames[class_index(label)]; }

std::optional<ClassLabel> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kNumClasses; ++i)
    if (kLabelNames[i] == name)
      return static_cast<ClassLabel>(i);
  return std::nullopt;
}

std::span<const std::string_view> feature_names() { return kFeatureNames; }
std::string_view feature_name(Feature f) { return kFeatureNames[feature_index(f)]; }

std::optional<Feature> parse_feature(std::string_view name) {
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    if (kFeatureNames[i] == name)
      return static_cast<Feature>(i);
  return std::nullopt;
}

DatasetTable::DatasetTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

DatasetTable DatasetTable::with_feature_columns() {
  return DatasetTable(std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end()));
}

std::optional<std::size_t> DatasetTable::column_index(std::string_view name) const {
  for (std::size_t j = 0; j < columns_.size(); ++j)
    if (columns_[j] == name)
      return j;
  return std::nullopt;
}

void DatasetTable::reserve(std::size_t n) {
  values_.reserve(n * cols());
  keys_.reserve(n);
  labels_.reserve(n);
}

void DatasetTable::add_row(RowKey key, std::span<const double> values, ClassLabel label) {
  if (values.size() != cols())
    throw Error(Errc::schema_mismatch, "row has " + std::to_string(values.size()) +
                                           " values, table has " + std::to_string(cols()) +
                                           " columns");
  values_.insert(values_.end(), values.begin(), values.end());
  keys_.push_back(std::move(key));
  labels_.push_back(label);
}

DatasetTable DatasetTable::select(std::span<const std::size_t> indices) const {
  DatasetTable out(columns_);
  out.labeled_ = labeled_;
  out.reserve(indices.size());
  for (auto i : indices)
    out.add_row(keys_[i], row(i), labels_[i]);
  return out;
}

DatasetTable DatasetTable::project(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  for (auto j : columns)
    names.push_back(columns_[j]);
  DatasetTable out(std::move(names));
  out.labeled_ = labeled_;
  out.reserve(rows());
  std::vector<double> buf(columns.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k)
      buf[k] = at(i, columns[k]);
    out.add_row(keys_[i], buf, labels_[i]);
  }
  return out;
}

std::vector<double> DatasetTable::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i)
    out[i] = at(i, j);
  return out;
}

ColumnStats DatasetTable::column_stats(std::size_t j) const {
  ColumnStats s;
  if (rows() == 0)
    return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  // Welford
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    double x = at(i, j);
    double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x - mean);
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = mean;
  s.stddev = rows() > 1 ? std::sqrt(m2 / static_cast<double>(rows() - 1)) : 0.0;
  return s;
}

std::array<std::size_t, kNumClasses> DatasetTable::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (auto l : labels_)
    ++counts[class_index(l)];
  return counts;
}

void LabelMap::set(std::string_view user, int month, ClassLabel label) {
  labels_[RowKey{std::string(user), month}] = label;
}

std::optional<ClassLabel> LabelMap::find(std::string_view user, int month) const {
  auto it = labels_.find(RowKey{std::string(user), month});
  if (it == labels_.end())
    return std::nullopt;
  return it->second;
}

DatasetTable attach_labels(DatasetTable table, const LabelMap &truth) {
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto &k = table.key(i);
    auto label = truth.find(k.user, k.month);
    if (!label)
      throw Error(Errc::missing_truth,
                  "no label for user " + k.user + " month " + std::to_string(k.month));
    table.set_label(i, *label);
  }
  table.set_labeled(true);
  return table;
}

void append_number(std::string &out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    return std::nullopt;
  return v;
}

void write_table(std::ostream &out, const DatasetTable &table) {
  std::string line = "user,month";
  for (const auto &c : table.columns()) {
    line.push_back(',');
    append_csv_field(line, c);
  }
  line += ",label\n";
  out << line;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    line.clear();
    append_csv_field(line, table.key(i).user);
    line.push_back(',');
    line += std::to_string(table.key(i).month);
    for (double v : table.row(i)) {
      line.push_back(',');
      append_number(line, v);
    }
    line.push_back(',');
    if (table.labeled())
      line += label_name(table.label(i));
    line.push_back('\n');
    out << line;
  }
  if (!out)
    throw Error(Errc::io_failure, "failed writing feature table");
}

void write_table(const std::string &path, const DatasetTable &table) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_failure, "cannot open " + path + " for writing");
  write_table(out, table);
}

DatasetTable read_table(std::istream &in) {
  CsvReader reader(in);
  if (!reader.next())
    throw Error(Errc::schema_mismatch, "feature table is empty");
  const std::size_t width = reader.size();
  if (width < 3 || reader.field(0) != "user" || reader.field(1) != "month" ||
      reader.field(width - 1) != "label")
    throw Error(Errc::schema_mismatch,
                "feature table header must be user,month,<features...>,label", 1);
  std::vector<std::string> columns;
  for (std::size_t j = 2; j + 1 < width; ++j)
    columns.emplace_back(reader.field(j));
  DatasetTable table(std::move(columns));
  std::vector<double> buf(table.cols());
  std::optional<bool> labeled;
  while (reader.next()) {
    if (reader.size() != width)
      throw Error(Errc::malformed_row, "expected " + std::to_string(width) + " fields",
                  reader.line());
    RowKey key{std::string(reader.field(0)), 0};
    auto month = parse_number(reader.field(1));
    if (!month || *month != std::floor(*month))
      throw Error(Errc::malformed_row, "bad month", reader.line());
    key.month = static_cast<int>(*month);
    for (std::size_t j = 0; j < buf.size(); ++j) {
      auto v = parse_number(reader.field(j + 2));
      if (!v)
        throw Error(Errc::malformed_row, "bad value in column " + table.columns()[j],
                    reader.line());
      buf[j] = *v;
    }
    auto text = reader.field(width - 1);
    bool has_label = !text.empty();
    if (labeled && *labeled != has_label)
      throw Error(Errc::malformed_row, "label column partially empty", reader.line());
    labeled = has_label;
    ClassLabel label = ClassLabel::benign;
    if (has_label) {
      auto parsed = parse_label(text);
      if (!parsed)
        throw Error(Errc::malformed_row, "unknown label '" + std::string(text) + "'",
                    reader.line());
      label = *parsed;
    }
    table.add_row(std::move(key), buf, label);
  }
  table.set_labeled(labeled.value_or(true));
  return table;
}

DatasetTable read_table(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::io_failure, "cannot open " + path);
  return read_table(in);
}

} // namespace itd
