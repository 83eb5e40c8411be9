#include "itd/corpus.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

#include <charconv>

namespace itd {

namespace {

constexpr std::string_view kWebColumns[] = {"id", "date", "user", "pc", "url", "content"};
constexpr std::string_view kEmailColumns[] = {"id", "date", "user", "pc", "to", "cc",
                                              "bcc", "from", "size", "attachments",
                                              "content"};
constexpr std::string_view kLogonColumns[] = {"id", "date", "user", "pc", "activity"};
constexpr std::string_view kFileColumns[] = {"id", "date", "user", "pc", "filename",
                                             "content"};
constexpr std::string_view kDeviceColumns[] = {"id", "date", "user", "pc", "activity"};

constexpr std::size_t kMaxSkippedLines = 32;

template <class T> bool parse_uint(std::string_view s, T &out) {
  if (s.empty())
    return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> split_recipients(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty())
    return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(';', start);
    std::string_view part = s.substr(start, p == std::string_view::npos ? p : p - start);
    if (!part.empty())
      out.emplace_back(part);
    if (p == std::string_view::npos)
      break;
    start = p + 1;
  }
  return out;
}

void append_recipients(std::string &out, const std::vector<std::string> &list) {
  std::string joined;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i)
      joined.push_back(';');
    joined += list[i];
  }
  append_csv_field(out, joined);
}

struct RowError {
  std::string message;
};

void fill_header(EventHeader &h, const CsvReader &r) {
  h.id = r.field(0);
  auto ts = Timestamp::parse(r.field(1));
  if (!ts)
    throw RowError{"bad date '" + std::string(r.field(1)) + "'"};
  h.date = *ts;
  if (r.field(2).empty())
    throw RowError{"empty user"};
  h.user = r.field(2);
  h.pc = r.field(3);
}

LogEvent decode(const CsvReader &r, ActivityKind kind) {
  const std::size_t expected = activity_columns(kind).size();
  if (r.size() != expected)
    throw RowError{"expected " + std::to_string(expected) + " fields, got " +
                   std::to_string(r.size())};
  switch (kind) {
  case ActivityKind::web: {
    WebEvent e;
    fill_header(e, r);
    e.url = r.field(4);
    e.content = r.field(5);
    return e;
  }
  case ActivityKind::email: {
    EmailEvent e;
    fill_header(e, r);
    e.to = split_recipients(r.field(4));
    e.cc = split_recipients(r.field(5));
    e.bcc = split_recipients(r.field(6));
    e.from = r.field(7);
    if (!parse_uint(r.field(8), e.size))
      throw RowError{"bad size '" + std::string(r.field(8)) + "'"};
    if (!parse_uint(r.field(9), e.attachments))
      throw RowError{"bad attachments '" + std::string(r.field(9)) + "'"};
    e.content = r.field(10);
    return e;
  }
  case ActivityKind::logon: {
    LogonEvent e;
    fill_header(e, r);
    if (r.field(4) == "Logon")
      e.activity = LogonActivity::logon;
    else if (r.field(4) == "Logoff")
      e.activity = LogonActivity::logoff;
    else
      throw RowError{"bad logon activity '" + std::string(r.field(4)) + "'"};
    return e;
  }
  case ActivityKind::file: {
    FileEvent e;
    fill_header(e, r);
    e.filename = r.field(4);
    e.content = r.field(5);
    return e;
  }
  case ActivityKind::device: {
    DeviceEvent e;
    fill_header(e, r);
    if (r.field(4) == "Connect")
      e.activity = DeviceActivity::connect;
    else if (r.field(4) == "Disconnect")
      e.activity = DeviceActivity::disconnect;
    else
      throw RowError{"bad device activity '" + std::string(r.field(4)) + "'"};
    return e;
  }
  }
  throw RowError{"unknown activity kind"};
}

} // namespace

std::string_view activity_file_name(ActivityKind kind) {
  switch (kind) {
  case ActivityKind::web: return "http.csv";
  case ActivityKind::email: return "email.csv";
  case ActivityKind::logon: return "logon.csv";
  case ActivityKind::file: return "file.csv";
  case ActivityKind::device: return "device.csv";
  }
  return "";
}

std::string_view activity_name(ActivityKind kind) {
  switch (kind) {
  case ActivityKind::web: return "http";
  case ActivityKind::email: return "email";
  case ActivityKind::logon: return "logon";
  case ActivityKind::file: return "file";
  case ActivityKind::device: return "device";
  }
  return "";
}

std::span<const std::string_view> activity_columns(ActivityKind kind) {
  switch (kind) {
  case ActivityKind::web: return kWebColumns;
  case ActivityKind::email: return kEmailColumns;
  case ActivityKind::logon: return kLogonColumns;
  case ActivityKind::file: return kFileColumns;
  case ActivityKind::device: return kDeviceColumns;
  }
  return {};
}

ActivityKind kind_of(const LogEvent &event) {
  return static_cast<ActivityKind>(event.index());
}

const EventHeader &header_of(const LogEvent &event) {
  return std::visit([](const auto &e) -> const EventHeader & { return e; }, event);
}

ParseStats for_each_event(std::istream &in, ActivityKind kind, RowPolicy policy,
                          const EventSink &sink) {
  CsvReader reader(in);
  const auto columns = activity_columns(kind);
  if (!reader.next())
    throw Error(Errc::schema_mismatch,
                "missing header for " + std::string(activity_file_name(kind)));
  bool header_ok = reader.size() == columns.size();
  for (std::size_t i = 0; header_ok && i < columns.size(); ++i)
    header_ok = trim(reader.field(i)) == columns[i];
  if (!header_ok) {
    std::string got;
    for (std::size_t i = 0; i < reader.size(); ++i)
      got += (i ? "," : "") + std::string(reader.field(i));
    throw Error(Errc::schema_mismatch, "header '" + got + "' does not match " +
                                           std::string(activity_file_name(kind)));
  }

  ParseStats stats;
  for (;;) {
    bool more;
    try {
      more = reader.next();
    } catch (const Error &e) {
      if (policy == RowPolicy::fail_fast)
        throw;
      ++stats.skipped;
      if (stats.skipped_lines.size() < kMaxSkippedLines && e.line())
        stats.skipped_lines.push_back(*e.line());
      break;
    }
    if (!more)
      break;
    try {
      LogEvent event = decode(reader, kind);
      ++stats.rows;
      sink(std::move(event));
    } catch (const RowError &e) {
      if (policy == RowPolicy::fail_fast)
        throw Error(Errc::malformed_row, e.message, reader.line());
      ++stats.skipped;
      if (stats.skipped_lines.size() < kMaxSkippedLines)
        stats.skipped_lines.push_back(reader.line());
    }
  }
  return stats;
}

std::vector<LogEvent> parse_log_stream(std::istream &in, ActivityKind kind,
                                       RowPolicy policy, ParseStats *stats) {
  std::vector<LogEvent> events;
  ParseStats s = for_each_event(in, kind, policy, [&](LogEvent &&e) {
    events.push_back(std::move(e));
  });
  if (stats)
    *stats = std::move(s);
  return events;
}

void append_header(std::string &out, ActivityKind kind) {
  const auto columns = activity_columns(kind);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i)
      out.push_back(',');
    out.append(columns[i]);
  }
  out.push_back('\n');
}

namespace {

void append_common(std::string &out, const EventHeader &h) {
  append_csv_field(out, h.id);
  out.push_back(',');
  char date[19];
  h.date.format_to(date);
  out.append(date, sizeof date);
  out.push_back(',');
  append_csv_field(out, h.user);
  out.push_back(',');
  append_csv_field(out, h.pc);
}

} // namespace

void append_event(std::string &out, const LogEvent &event) {
  append_common(out, header_of(event));
  out.push_back(',');
  std::visit(
      [&out](const auto &e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, WebEvent>) {
          append_csv_field(out, e.url);
          out.push_back(',');
          append_csv_field(out, e.content);
        } else if constexpr (std::is_same_v<T, EmailEvent>) {
          append_recipients(out, e.to);
          out.push_back(',');
          append_recipients(out, e.cc);
          out.push_back(',');
          append_recipients(out, e.bcc);
          out.push_back(',');
          append_csv_field(out, e.from);
          out.push_back(',');
          out += std::to_string(e.size);
          out.push_back(',');
          out += std::to_string(e.attachments);
          out.push_back(',');
          append_csv_field(out, e.content);
        } else if constexpr (std::is_same_v<T, LogonEvent>) {
          out += e.activity == LogonActivity::logon ? "Logon" : "Logoff";
        } else if constexpr (std::is_same_v<T, FileEvent>) {
          append_csv_field(out, e.filename);
          out.push_back(',');
          append_csv_field(out, e.content);
        } else {
          out += e.activity == DeviceActivity::connect ? "Connect" : "Disconnect";
        }
      },
      event);
  out.push_back('\n');
}

} // namespace itd
