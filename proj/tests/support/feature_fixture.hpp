#pragma once

#include "itd/corpus.hpp"
#include "itd/features.hpp"

#include <array>
#include <sstream>
#include <string>
#include <vector>

namespace itd::testfix {

inline Timestamp at(int month, int day, int hour, int minute = 0, int second = 0) {
  return Timestamp::from_civil(2010, month, day, hour, minute, second);
}

inline EventHeader hdr(const char *user, Timestamp t) {
  static int n = 0; // ids only need to be distinct
  return {"{" + std::to_string(++n) + "}", t, user, "PC-1"};
}

inline LogEvent web(const char *user, Timestamp t, const char *url, const char *content = "") {
  return WebEvent{hdr(user, t), url, content};
}

inline LogEvent mail(const char *user, Timestamp t, std::vector<std::string> to,
                       std::vector<std::string> cc, std::vector<std::string> bcc,
                       std::uint32_t attachments, const char *content) {
  EmailEvent e{hdr(user, t)};
  e.to = std::move(to);
  e.cc = std::move(cc);
  e.bcc = std::move(bcc);
  e.from = std::string(user) + "@dtaa.com";
  e.attachments = attachments;
  e.content = content;
  return e;
}

inline LogEvent file(const char *user, Timestamp t, const char *name) {
  return FileEvent{hdr(user, t), name, ""};
}

inline LogEvent device(const char *user, Timestamp t, bool connect) {
  return DeviceEvent{hdr(user, t), connect ? DeviceActivity::connect : DeviceActivity::disconnect};
}

inline LogEvent logon(const char *user, Timestamp t, bool on) {
  return LogonEvent{hdr(user, t), on ? LogonActivity::logon : LogonActivity::logoff};
}

struct Toy {
  Roster roster;
  DomainCategoryTable domains;
  SentimentLexicon lexicon;
  NameGenderTable names;

  Toy() {
    std::istringstream r("user_id,first_name,last_name,role,supervisor_id,start_month,end_month\n"
                         "A,Ann,Ames,Analyst,,1,\n"
                         "B,Bob,Bell,Engineer,A,1,1\n"
                         "C,Zed,Cole,Engineer,A,2,\n");
    roster = parse_roster(r);
    std::istringstream d("share.example,FileSharing\n"
                         "jobs.example,JobSearch\n"
                         "rival.example,Competitor\n"
                         "bad.example,Malware\n"
                         "spy.example,Keylogger\n"
                         "both.example,FileSharing\n"
                         "both.example,JobSearch\n");
    domains = load_domain_categories(d);
    std::istringstream l("good\t3\ngreat\t3\nawful\t-3\n");
    lexicon = load_lexicon(l);
    std::istringstream n("Ann,F\nBob,M\n");
    names = load_name_genders(n);
  }

  ExtractOptions options() const { return {{1, 2}, RowPolicy::fail_fast}; }
};

// January 2 2010 is a Saturday; January 4 and February 8 are Mondays.
inline std::vector<LogEvent> thirty_events() {
  return {
      web("A", at(1, 4, 10), "http://share.example/a", "good good"),
      web("A", at(1, 2, 10), "http://files.share.example/b"),
      web("A", at(1, 4, 22), "http://both.example/", "awful"),
      web("A", at(1, 4, 7, 59, 59), "http://bad.example/"),
      web("A", at(1, 3, 18), "https://spy.example/x"),
      web("A", at(1, 4, 12), "http://news.example/", "Great!"),
      mail("A", at(1, 4, 9), {"r@rival.example"}, {}, {}, 2, "good"),
      mail("A", at(1, 9, 9), {"x@dtaa.com"}, {"y@rival.example"}, {}, 0, "awful awful"),
      mail("A", at(1, 4, 17), {"a@bad.example"}, {}, {}, 0, ""),
      mail("A", at(1, 5, 10), {"a@share.example"}, {}, {"b@jobs.example"}, 0, "great great"),
      file("A", at(1, 4, 10), "C:\\tools\\setup.EXE"),
      file("A", at(1, 4, 11), "report.doc"),
      file("A", at(1, 4, 11, 30), "a.exe.txt"),
      device("A", at(1, 4, 10), true),
      device("A", at(1, 4, 11), false),
      logon("A", at(1, 4, 8), true),
      logon("A", at(1, 4, 17), false),
      web("A", at(2, 6, 23), "http://jobs.example/x", "awful"),
      mail("A", at(2, 8, 12), {"r@rival.example"}, {}, {}, 1, ""),
      logon("B", at(1, 4, 8), true),
      device("B", at(1, 4, 9), true),
      logon("B", at(2, 8, 8), true),
      logon("B", at(2, 8, 9), false),
      device("B", at(2, 8, 8, 30), true),
      device("B", at(2, 8, 8, 45), false),
      file("B", at(2, 8, 8, 40), "x.exe"),
      web("C", at(2, 8, 8), "http://share.example", "good"),
      web("C", at(2, 8, 16, 59, 59), "http://rival.example"),
      mail("C", at(2, 8, 17), {"q@share.example"}, {}, {}, 0, "awful"),
      file("C", at(2, 7, 10), "x.doc"),
  };
}

using Row = std::array<double, kNumFeatures>;

// risk_leak dow_leak hr_leak risk_thief dow_thief hr_thief risk_sab dow_sab hr_sab
// device file email_sent email_compete web_sent exe unauth gender
inline const Row kA1 = {4, 1, 1, 4, 1, 1, 2, 1, 2, 1, 3, 3, 2, 6, 1, 0, 1};
inline const Row kA2 = {0, 0, 0, 2, 1, 1, 0, 0, 0, 0, 0, 0, 1, -3, 0, 0, 1};
inline const Row kB1 = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};
inline const Row kB2 = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 2, 0};
inline const Row kC2 = {2, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, -3, 0, 3, 0, 0, 0.5};

} // namespace itd::testfix
