#include "itd/csv.hpp"

#include "itd/errors.hpp"

namespace itd {

CsvReader::CsvReader(std::istream &in, char delimiter, std::size_t chunk_size)
    : in_(in), delimiter_(delimiter), buf_(chunk_size) {}

bool CsvReader::fill() {
  if (eof_)
    return false;
  in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  end_ = static_cast<std::size_t>(in_.gcount());
  pos_ = 0;
  if (end_ == 0) {
    eof_ = true;
    return false;
  }
  return true;
}

int CsvReader::peek() {
  if (pos_ == end_ && !fill())
    return -1;
  return static_cast<unsigned char>(buf_[pos_]);
}

int CsvReader::get() {
  if (pos_ == end_ && !fill())
    return -1;
  ++consumed_;
  return static_cast<unsigned char>(buf_[pos_++]);
}

bool CsvReader::next() {
  for (;;) {
    record_.clear();
    ends_.clear();
    record_line_ = line_;
    int c = peek();
    if (c < 0)
      return false;
    if (c == '\n') {
      get();
      ++line_;
      continue;
    }
    if (c == '\r') {
      get();
      if (peek() == '\n') {
        get();
        ++line_;
      }
      continue;
    }
    break;
  }

  for (;;) {
    int c = get();
    if (c == '"') {
      // quoted field
      for (;;) {
        // fast scan for the next quote or newline inside the buffer
        while (pos_ < end_) {
          char ch = buf_[pos_];
          if (ch == '"')
            break;
          if (ch == '\n')
            ++line_;
          record_.push_back(ch);
          ++pos_;
          ++consumed_;
        }
        int q = get();
        if (q < 0)
          throw Error(Errc::malformed_row, "unterminated quoted field",
                      record_line_);
        if (q != '"')
          continue;
        if (peek() == '"') {
          get();
          record_.push_back('"');
          continue;
        }
        break;
      }
      // tolerate stray characters after the closing quote
      c = get();
      while (c >= 0 && c != delimiter_ && c != '\n' && c != '\r') {
        record_.push_back(static_cast<char>(c));
        c = get();
      }
    } else {
      while (c >= 0 && c != delimiter_ && c != '\n' && c != '\r') {
        record_.push_back(static_cast<char>(c));
        // unquoted fast path
        while (pos_ < end_) {
          char ch = buf_[pos_];
          if (ch == delimiter_ || ch == '\n' || ch == '\r' )
            break;
          record_.push_back(ch);
          ++pos_;
          ++consumed_;
        }
        c = get();
      }
    }
    ends_.push_back(record_.size());
    if (c == delimiter_)
      continue;
    if (c == '\r' && peek() == '\n')
      get();
    if (c >= 0)
      ++line_;
    return true;
  }
}

void append_csv_field(std::string &out, std::string_view field, char delimiter) {
  bool quote = false;
  for (char ch : field) {
    if (ch == delimiter || ch == '"' || ch == '\n' || ch == '\r') {
      quote = true;
      break;
    }
  }
  if (!quote) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"')
      out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

void append_csv_row(std::string &out, const std::vector<std::string_view> &fields,
                    char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out.push_back(delimiter);
    append_csv_field(out, fields[i], delimiter);
  }
  out.push_back('\n');
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = line.find(delimiter, start);
    if (p == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, p - start));
    start = p + 1;
  }
}

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n\v\f";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

} // namespace itd
