#include "itd/corpus.hpp"
#include "itd/errors.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <sstream>

using namespace itd;

namespace {

std::string text(testgen::Gen &g) {
  static const char *pieces[] = {"alpha", "beta", ",", "\"", "\n", " ", "x;y", "é", ""};
  std::string s;
  for (int i = g.integer(0, 6); i > 0; --i)
    s += pieces[g.index(std::size(pieces))];
  return s;
}

std::string plain(testgen::Gen &g) {
  static const char *words[] = {"a", "dtaa.com", "b.example", "c-d", "PC-12", "ABC0001"};
  return std::string(words[g.index(std::size(words))]) + std::to_string(g.integer(0, 99));
}

std::vector<std::string> addresses(testgen::Gen &g) {
  std::vector<std::string> out;
  for (int i = g.integer(0, 3); i > 0; --i)
    out.push_back(plain(g) + "@" + plain(g));
  return out;
}

LogEvent random_event(testgen::Gen &g, ActivityKind kind) {
  EventHeader h{"{" + plain(g) + "}",
                Timestamp::from_civil(g.integer(2009, 2012), g.integer(1, 12), g.integer(1, 28),
                                      g.integer(0, 23), g.integer(0, 59), g.integer(0, 59)),
                plain(g), plain(g)};
  switch (kind) {
  case ActivityKind::web:
    return WebEvent{h, "http://" + plain(g) + "/p?q=1", text(g)};
  case ActivityKind::email: {
    EmailEvent e{h};
    e.to = addresses(g);
    if (e.to.empty())
      e.to.push_back("x@y.example");
    e.cc = addresses(g);
    e.bcc = addresses(g);
    e.from = plain(g) + "@dtaa.com";
    e.size = std::uint64_t(g.integer(0, 1 << 20));
    e.attachments = std::uint32_t(g.integer(0, 4));
    e.content = text(g);
    return e;
  }
  case ActivityKind::logon:
    return LogonEvent{h, g.coin() ? LogonActivity::logon : LogonActivity::logoff};
  case ActivityKind::file:
    return FileEvent{h, "C:\\" + plain(g) + (g.coin() ? ".exe" : ".doc"), text(g)};
  case ActivityKind::device:
    return DeviceEvent{h, g.coin() ? DeviceActivity::connect : DeviceActivity::disconnect};
  }
  return LogonEvent{h};
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("logon row maps fields") {
  std::istringstream in("id,date,user,pc,activity\n{X1},01/04/2010 08:35:00,AAA0001,PC-1,Logon\n");
  auto events = parse_log_stream(in, ActivityKind::logon);
  REQUIRE(events.size() == 1);
  const auto &e = std::get<LogonEvent>(events[0]);
  CHECK(e.id == "{X1}");
  CHECK(e.user == "AAA0001");
  CHECK(e.pc == "PC-1");
  CHECK(e.date.hour() == 8);
  CHECK(e.activity == LogonActivity::logon);
}

TEST_CASE("recipient lists split on semicolons") {
  std::istringstream in(
      "id,date,user,pc,to,cc,bcc,from,size,attachments,content\n"
      "{E1},01/05/2010 09:00:00,AAA0001,PC-1,a@dtaa.com;b@evil.com,,,"
      "AAA0001@dtaa.com,1200,0,hello there\n");
  auto events = parse_log_stream(in, ActivityKind::email);
  REQUIRE(events.size() == 1);
  const auto &e = std::get<EmailEvent>(events[0]);
  CHECK(e.to == std::vector<std::string>{"a@dtaa.com", "b@evil.com"});
  CHECK(e.cc.empty());
  CHECK(e.content == "hello there");
}

TEST_CASE("malformed rows carry their line number") {
  std::istringstream in("id,date,user,pc,activity\n"
                        "{X1},01/04/2010 08:35:00,U,PC,Logon\n"
                        "{X2},2010-01-04,U,PC,Logon\n");
  try {
    parse_log_stream(in, ActivityKind::logon);
    FAIL("expected MalformedRow");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::malformed_row);
    REQUIRE(e.line());
    CHECK(*e.line() == 3);
  }
  std::istringstream again("id,date,user,pc,activity\n"
                           "{X1},01/04/2010 08:35:00,U,PC,Logon\n"
                           "{X2},2010-01-04,U,PC,Logon\n"
                           "{X3},01/04/2010 08:35:00,U,PC,Logon,extra\n");
  ParseStats stats;
  auto events = parse_log_stream(again, ActivityKind::logon, RowPolicy::skip_and_count, &stats);
  CHECK(events.size() == 1);
  CHECK(stats.skipped == 2);
  CHECK(stats.skipped_lines == std::vector<std::size_t>{3, 4});
}

TEST_CASE("wrong header is a schema mismatch") {
  std::istringstream in("id,date,user,pc,url\n");
  try {
    parse_log_stream(in, ActivityKind::web);
    FAIL("expected SchemaMismatch");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::schema_mismatch);
  }
}

TEST_CASE("serialize then parse is the identity") {
  testgen::Gen g(2024);
  for (auto kind : kAllActivityKinds) {
    CAPTURE(activity_name(kind));
    std::vector<LogEvent> events;
    std::string buf;
    append_header(buf, kind);
    for (int i = 0; i < 200; ++i) {
      events.push_back(random_event(g, kind));
      append_event(buf, events.back());
    }
    std::istringstream in(buf);
    auto back = parse_log_stream(in, kind);
    REQUIRE(back.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i)
      CHECK(back[i] == events[i]);
  }
}

TEST_CASE("file names and kinds") {
  CHECK(activity_file_name(ActivityKind::web) == "http.csv");
  CHECK(activity_file_name(ActivityKind::device) == "device.csv");
  CHECK(activity_columns(ActivityKind::web).size() == 6);
  LogEvent e = DeviceEvent{};
  CHECK(kind_of(e) == ActivityKind::device);
}

TEST_CASE("timestamps") {
  auto t = Timestamp::parse("01/02/2010 10:00:00");
  REQUIRE(t);
  CHECK(t->day_of_week() == Weekday::saturday);
  CHECK(t->month_index() == 1);
  CHECK(t->format() == "01/02/2010 10:00:00");
  CHECK(Timestamp::from_civil(2011, 6, 1).month_index() == 18);
  CHECK_FALSE(Timestamp::parse("1/2/2010 10:00:00"));
  CHECK_FALSE(Timestamp::parse("02/30/2010 10:00:00"));
  CHECK_FALSE(Timestamp::parse("01/02/2010 24:00:00"));
  testgen::Gen g(5);
  for (int i = 0; i < 1000; ++i) {
    auto s = Timestamp::from_seconds(g.integer(0, 2000000000));
    auto back = Timestamp::parse(s.format());
    REQUIRE(back);
    CHECK(*back == s);
  }
}

}
