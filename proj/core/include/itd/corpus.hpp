#pragma once

#include "itd/timestamp.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace itd {

enum class ActivityKind { web, email, logon, file, device };

inline constexpr std::array<ActivityKind, 5> kAllActivityKinds = {
    ActivityKind::web, ActivityKind::email, ActivityKind::logon,
    ActivityKind::file, ActivityKind::device};

/// CSV file name used by CERT exports, e.g. "http.csv" for web activity.
std::string_view activity_file_name(ActivityKind kind);
/// Short name ("http", "email", ...) used in manifests and diagnostics.
std::string_view activity_name(ActivityKind kind);
/// Exact header column list of the activity table.
std::span<const std::string_view> activity_columns(ActivityKind kind);

struct EventHeader {
  std::string id;
  Timestamp date;
  std::string user;
  std::string pc;
  bool operator==(const EventHeader &) const = default;
};

struct WebEvent : EventHeader {
  std::string url;
  std::string content;
  bool operator==(const WebEvent &) const = default;
};

struct EmailEvent : EventHeader {
  std::vector<std::string> to;
  std::vector<std::string> cc;
  std::vector<std::string> bcc;
  std::string from;
  std::uint64_t size = 0;
  std::uint32_t attachments = 0;
  std::string content;
  bool operator==(const EmailEvent &) const = default;
};

enum class LogonActivity { logon, logoff };

struct LogonEvent : EventHeader {
  LogonActivity activity = LogonActivity::logon;
  bool operator==(const LogonEvent &) const = default;
};

struct FileEvent : EventHeader {
  std::string filename;
  std::string content;
  bool operator==(const FileEvent &) const = default;
};

enum class DeviceActivity { connect, disconnect };

struct DeviceEvent : EventHeader {
  DeviceActivity activity = DeviceActivity::connect;
  bool operator==(const DeviceEvent &) const = default;
};

using LogEvent = std::variant<WebEvent, EmailEvent, LogonEvent, FileEvent, DeviceEvent>;

ActivityKind kind_of(const LogEvent &event);
const EventHeader &header_of(const LogEvent &event);

enum class RowPolicy { fail_fast, skip_and_count };

struct ParseStats {
  std::size_t rows = 0;
  std::size_t skipped = 0;
  /// Line numbers of the first skipped rows (capped) for diagnostics.
  std::vector<std::size_t> skipped_lines;
};

using EventSink = std::function<void(LogEvent &&)>;

/// Streams the data rows of one activity table into the sink in file order.
/// Throws SchemaMismatch on a bad header; MalformedRow (with line number)
/// on bad rows under fail_fast.
ParseStats for_each_event(std::istream &in, ActivityKind kind, RowPolicy policy,
                          const EventSink &sink);

std::vector<LogEvent> parse_log_stream(std::istream &in, ActivityKind kind,
                                       RowPolicy policy = RowPolicy::fail_fast,
                                       ParseStats *stats = nullptr);

void append_header(std::string &out, ActivityKind kind);
void append_event(std::string &out, const LogEvent &event);

} // namespace itd
