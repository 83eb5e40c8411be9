#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace itd {

/// Streaming RFC 4180 reader. Memory use is bounded by the chunk size plus
/// the largest record; fields are views valid until the next call to next().
class CsvReader {
public:
  explicit CsvReader(std::istream &in, char delimiter = ',',
                     std::size_t chunk_size = 1 << 20);

  /// Advances to the next record. Blank lines are skipped.
  bool next();

  std::size_t size() const { return ends_.size(); }
  std::string_view field(std::size_t i) const {
    std::size_t begin = i == 0 ? 0 : ends_[i - 1];
    return std::string_view(record_).substr(begin, ends_[i] - begin);
  }
  /// 1-based line on which the current record starts.
  std::size_t line() const { return record_line_; }
  std::uint64_t bytes_consumed() const { return consumed_; }

private:
  bool fill();
  int peek();
  int get();

  std::istream &in_;
  char delimiter_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::string record_;
  std::vector<std::size_t> ends_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  std::uint64_t consumed_ = 0;
};

/// Appends one field, quoting it when it contains the delimiter, a quote,
/// or a line break.
void append_csv_field(std::string &out, std::string_view field,
                      char delimiter = ',');

/// Appends a full record terminated by '\n'.
void append_csv_row(std::string &out, const std::vector<std::string_view> &fields,
                    char delimiter = ',');

/// Splits a header-less single line on the delimiter (no quoting support);
/// used for small plain-text tables.
std::vector<std::string_view> split(std::string_view line, char delimiter);

std::string_view trim(std::string_view s);

} // namespace itd
