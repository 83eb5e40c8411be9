#include "itd/synthgen.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"
#include "itd/fixtures.hpp"
#include "itd/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace itd {

namespace {

enum Stream : std::uint64_t { kClassStream = 1, kEmployeeStream, kDayStream, kIdStream };

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kHour = 3600;

constexpr std::array<double, kNumClasses> kMaleShare = {0.5, 0.35, 0.8, 0.8, 0.9};
constexpr double kUnknownNameShare = 0.05;
constexpr double kVacationDay = 0.04;
constexpr double kPostDepartureDay = 0.15;
constexpr double kThreatDeparts = 0.5;

constexpr std::array<std::string_view, 8> kRoles = {
    "Engineer", "Technician",    "Salesman",   "ITAdmin",
    "Manager",  "Administrator", "Scientist",  "Accountant"};

constexpr std::array<std::string_view, 7> kFileExtensions = {
    ".doc", ".pdf", ".txt", ".xlsx", ".zip", ".jpg", ".pptx"};

constexpr std::array<std::string_view, 4> kFolders = {"C:\\docs\\", "C:\\projects\\",
                                                       "D:\\shared\\", "C:\\tmp\\"};

struct Profile {
  EmployeeRecord record;
  ClassLabel cls = ClassLabel::benign;
  std::string email;
  std::string pc;
  double activity = 1.0;
  std::array<double, 5> kind_mult{};
  double p_file_sharing = 0, p_job = 0, p_competitor = 0, p_malware = 0, p_webmail = 0;
  double p_email_external = 0, p_email_competitor = 0, p_email_file_sharing = 0;
  double p_off = 0, weekend_factor = 0, device_rate = 0;
  double p_pos = 0, p_neg = 0;
  int first_active = 0, last_active = 0;
  std::optional<int> departure;
  bool post_activity = false;

  bool threat_active(int month) const {
    return first_active > 0 && month >= first_active && month <= last_active;
  }
  bool employed(int month) const { return !departure || month <= *departure; }
};

template <class T> const T &pick(Rng &r, std::span<const T> items) {
  return items[static_cast<std::size_t>(r.below(items.size()))];
}

double clamp01(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

class Generator {
public:
  explicit Generator(const GenConfig &config) : config_(config) {
    config_.validate();
    build_profiles();
  }

  const std::vector<Profile> &profiles() const { return profiles_; }

  Roster roster() const {
    std::vector<EmployeeRecord> records;
    records.reserve(profiles_.size());
    for (const auto &p : profiles_)
      records.push_back(p.record);
    return Roster(std::move(records));
  }

  GroundTruth truth_skeleton() const {
    GroundTruth truth;
    for (const auto &p : profiles_) {
      for (int m = 1; m <= config_.n_months; ++m) {
        ClassLabel label = ClassLabel::benign;
        if (p.departure && m > *p.departure)
          label = ClassLabel::departed;
        if (p.threat_active(m))
          label = p.cls;
        truth.labels.set(p.record.user_id, m, label);
      }
      if (p.cls != ClassLabel::benign && (p.first_active > 0 || p.departure)) {
        Narrative n;
        n.user = p.record.user_id;
        n.cls = p.cls;
        n.first_active = p.first_active;
        n.last_active = p.last_active;
        n.departure_month = p.departure;
        n.post_departure_activity = p.post_activity;
        truth.narratives.push_back(std::move(n));
      }
    }
    return truth;
  }

  /// Calls emit(day_events) once per calendar day with events sorted by time.
  template <class Emit> void run(GroundTruth &truth, Emit &&emit) {
    const std::int64_t begin = month_start(1).seconds();
    const std::int64_t end = month_start(config_.n_months + 1).seconds();
    std::vector<Pending> day;
    for (std::int64_t t0 = begin, d = 0; t0 < end; t0 += kDay, ++d) {
      day.clear();
      day_last_ = t0 + kDay - 1;
      Timestamp start = Timestamp::from_seconds(t0);
      const int month = start.month_index();
      const auto dow = start.day_of_week();
      const bool weekend = dow == Weekday::saturday || dow == Weekday::sunday;
      for (std::size_t e = 0; e < profiles_.size(); ++e) {
        Rng r(derive_seed(config_.seed, {kDayStream, e, static_cast<std::uint64_t>(d)}));
        employee_day(r, e, t0, month, weekend, day, truth);
      }
      std::sort(day.begin(), day.end(), [](const Pending &a, const Pending &b) {
        if (a.t != b.t)
          return a.t < b.t;
        if (a.employee != b.employee)
          return a.employee < b.employee;
        return a.seq < b.seq;
      });
      for (auto &p : day) {
        auto &h = header_mut(p.event);
        h.date = Timestamp::from_seconds(p.t);
        h.id = make_id(next_id_++);
        ++truth.event_counts[static_cast<std::size_t>(kind_of(p.event))];
      }
      emit(day);
    }
  }

  struct Pending {
    std::int64_t t;
    std::uint32_t employee;
    std::uint32_t seq;
    LogEvent event;
  };

private:
  static EventHeader &header_mut(LogEvent &e) {
    return std::visit([](auto &v) -> EventHeader & { return v; }, e);
  }

  std::string make_id(std::uint64_t n) const {
    static constexpr char kDigits[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::uint64_t a = mix64(config_.seed ^ mix64(n + kIdStream));
    std::uint64_t b = mix64(a ^ n);
    std::string id = "{";
    auto put = [&](std::uint64_t &x, int count) {
      for (int i = 0; i < count; ++i) {
        id.push_back(kDigits[x % 36]);
        x /= 36;
      }
    };
    put(a, 4);
    id.push_back('-');
    put(a, 8);
    id.push_back('-');
    put(b, 8);
    id.push_back('}');
    return id;
  }

  void build_profiles() {
    const std::size_t n = config_.n_employees;
    auto counts = class_employee_counts(config_);
    std::vector<ClassLabel> classes;
    for (std::size_t c = 0; c < kNumClasses; ++c)
      classes.insert(classes.end(), counts[c], static_cast<ClassLabel>(c));
    Rng cr(derive_seed(config_.seed, {kClassStream}));
    cr.shuffle(std::span<ClassLabel>(classes));

    const std::size_t managers = std::max<std::size_t>(1, n / 20);
    profiles_.resize(n);
    for (std::size_t e = 0; e < n; ++e) {
      Rng r(derive_seed(config_.seed, {kEmployeeStream, e}));
      auto &p = profiles_[e];
      p.cls = classes[e];
      const auto ci = class_index(p.cls);

      std::string_view first;
      if (r.bernoulli(kUnknownNameShare))
        first = pick(r, fixtures::unlisted_names());
      else if (r.bernoulli(kMaleShare[ci]))
        first = pick(r, fixtures::male_names());
      else
        first = pick(r, fixtures::female_names());
      std::string_view last = pick(r, fixtures::last_names());
      auto &rec = p.record;
      rec.first_name = std::string(first);
      rec.last_name = std::string(last);
      rec.user_id.clear();
      rec.user_id.push_back(first[0]);
      rec.user_id.push_back(last[0]);
      rec.user_id.push_back(static_cast<char>('A' + r.below(26)));
      auto number = std::to_string(1000 + e);
      rec.user_id += number;
      for (auto &ch : rec.user_id)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      rec.role = std::string(e < managers ? std::string_view("Manager") : pick(r, std::span<const std::string_view>(kRoles)));
      rec.start_month = 1;
      p.email = to_lower(rec.first_name) + "." + to_lower(rec.last_name) + number + "@dtaa.com";
      p.pc = "PC-" + std::to_string(1000 + r.below(9000));

      p.activity = r.lognormal(0.0, 0.35);
      for (auto &m : p.kind_mult)
        m = r.lognormal(0.0, 0.3);
      p.p_file_sharing = 0.012 * r.lognormal(0.0, 0.7);
      p.p_job = 0.010 * r.lognormal(0.0, 0.8) * (r.bernoulli(0.1) ? 4.0 : 1.0);
      p.p_competitor = 0.004 * r.lognormal(0.0, 0.7);
      p.p_malware = 0.0004 * r.lognormal(0.0, 0.8);
      p.p_webmail = 0.05 * r.lognormal(0.0, 0.5);
      p.p_email_external = 0.12 * r.lognormal(0.0, 0.4);
      p.p_email_competitor = 0.012 * r.lognormal(0.0, 0.8);
      p.p_email_file_sharing = 0.004 * r.lognormal(0.0, 0.8);
      p.p_off = clamp01(0.12 + 0.05 * r.normal(), 0.01, 0.5);
      p.weekend_factor = clamp01(0.08 + 0.05 * r.normal(), 0.0, 0.5);
      p.device_rate = r.bernoulli(0.3) ? 0.3 * r.lognormal(0.0, 0.5) : 0.02;
      p.p_pos = 0.06 * r.lognormal(0.0, 0.4);
      p.p_neg = 0.04 * r.lognormal(0.0, 0.6);

      const int months = config_.n_months;
      if (p.cls == ClassLabel::departed) {
        if (months >= 2)
          p.departure = static_cast<int>(r.between(1, months - 1));
        p.post_activity = r.bernoulli(config_.post_departure_fraction);
      } else if (is_threat(p.cls)) {
        int len = static_cast<int>(r.between(1, std::min(3, months)));
        p.first_active = static_cast<int>(r.between(1, months - len + 1));
        p.last_active = p.first_active + len - 1;
        if (p.last_active < months && r.bernoulli(kThreatDeparts))
          p.departure = p.last_active;
      }
      if (p.departure)
        rec.end_month = *p.departure;
    }
    for (std::size_t e = 1; e < n; ++e) {
      std::size_t boss = e < managers ? 0 : e % managers;
      profiles_[e].record.supervisor = profiles_[boss].record.user_id;
    }
  }

  std::int64_t draw_time(Rng &r, std::int64_t day_start, double p_off) const {
    std::int64_t s;
    if (r.bernoulli(p_off)) {
      s = static_cast<std::int64_t>(r.uniform(0.0, 15.0 * kHour));
      if (s >= 8 * kHour)
        s += 9 * kHour;
    } else {
      s = 8 * kHour + static_cast<std::int64_t>(r.uniform(0.0, 9.0 * kHour));
    }
    return day_start + s;
  }

  std::string words(Rng &r, int lo, int hi, double p_pos, double p_neg) const {
    std::string out;
    auto n = r.between(lo, hi);
    for (std::int64_t i = 0; i < n; ++i) {
      double u = r.uniform();
      std::string_view w = u < p_pos             ? pick(r, fixtures::positive_words())
                           : u < p_pos + p_neg ? pick(r, fixtures::negative_words())
                                               : pick(r, fixtures::neutral_words());
      if (!out.empty())
        out.push_back(' ');
      std::size_t at = out.size();
      out.append(w);
      if (i == 0)
        out[at] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[at])));
      if (r.bernoulli(0.02))
        out += " " + std::to_string(r.between(2, 2020));
    }
    out.push_back('.');
    return out;
  }

  std::string url_for(Rng &r, std::string_view domain) const {
    std::string u = "http://";
    if (r.bernoulli(0.3))
      u += "www.";
    u.append(domain);
    u.push_back('/');
    u.append(pick(r, fixtures::neutral_words()));
    u.push_back('/');
    u.append(pick(r, fixtures::neutral_words()));
    u += ".html";
    return u;
  }

  std::string address_in(Rng &r, DomainCategory cat) const {
    std::string a(pick(r, fixtures::neutral_words()));
    a.push_back('@');
    a.append(pick(r, fixtures::domains_for(cat)));
    return a;
  }

  const std::string &colleague(Rng &r, std::size_t self) const {
    std::size_t k = static_cast<std::size_t>(r.below(profiles_.size()));
    if (k == self && profiles_.size() > 1)
      k = (k + 1) % profiles_.size();
    return profiles_[k].email;
  }

  template <class Ev> Ev header(const Profile &p) const {
    Ev ev;
    ev.user = p.record.user_id;
    ev.pc = p.pc;
    return ev;
  }

  void push(std::vector<Pending> &day, std::int64_t t, std::size_t e, LogEvent ev) {
    day.push_back(Pending{std::min(t, day_last_), static_cast<std::uint32_t>(e),
                          static_cast<std::uint32_t>(seq_++), std::move(ev)});
  }

  void web_event(Rng &r, std::vector<Pending> &day, std::size_t e, std::int64_t t,
                 std::string_view domain, double p_pos, double p_neg) {
    auto ev = header<WebEvent>(profiles_[e]);
    ev.url = url_for(r, domain);
    ev.content = words(r, 6, 14, p_pos, p_neg);
    push(day, t, e, std::move(ev));
  }

  void email_event(Rng &r, std::vector<Pending> &day, std::size_t e, std::int64_t t,
                   std::vector<std::string> to, std::uint32_t attachments, double p_pos,
                   double p_neg) {
    const auto &p = profiles_[e];
    auto ev = header<EmailEvent>(p);
    ev.to = std::move(to);
    if (r.bernoulli(0.2))
      ev.cc.push_back(colleague(r, e));
    if (r.bernoulli(0.05))
      ev.bcc.push_back(colleague(r, e));
    ev.from = p.email;
    ev.attachments = attachments;
    ev.size = static_cast<std::uint64_t>(2000 + r.lognormal(9.5, 0.8)) +
              static_cast<std::uint64_t>(attachments) * 150000u;
    ev.content = words(r, 8, 20, p_pos, p_neg);
    push(day, t, e, std::move(ev));
  }

  void file_event(Rng &r, std::vector<Pending> &day, std::size_t e, std::int64_t t,
                  bool executable, double p_pos, double p_neg) {
    auto ev = header<FileEvent>(profiles_[e]);
    ev.filename = std::string(pick(r, std::span<const std::string_view>(kFolders)));
    ev.filename.append(pick(r, fixtures::neutral_words()));
    ev.filename += executable ? std::string_view(".exe")
                              : pick(r, std::span<const std::string_view>(kFileExtensions));
    ev.content = words(r, 4, 10, p_pos, p_neg);
    push(day, t, e, std::move(ev));
  }

  void session(std::vector<Pending> &day, std::size_t e, std::int64_t t,
               std::int64_t length) {
    auto on = header<LogonEvent>(profiles_[e]);
    on.activity = LogonActivity::logon;
    push(day, t, e, std::move(on));
    auto off = header<LogonEvent>(profiles_[e]);
    off.activity = LogonActivity::logoff;
    push(day, t + length, e, std::move(off));
  }

  void device_pair(Rng &r, std::vector<Pending> &day, std::size_t e, std::int64_t t) {
    auto c = header<DeviceEvent>(profiles_[e]);
    c.activity = DeviceActivity::connect;
    push(day, t, e, std::move(c));
    auto d = header<DeviceEvent>(profiles_[e]);
    d.activity = DeviceActivity::disconnect;
    push(day, t + 300 + static_cast<std::int64_t>(r.below(7200)), e, std::move(d));
  }

  void employee_day(Rng &r, std::size_t e, std::int64_t t0, int month, bool weekend,
                    std::vector<Pending> &day, GroundTruth &truth) {
    const auto &p = profiles_[e];
    const auto &rates = config_.rates;
    seq_ = 0;
    if (!p.employed(month)) {
      if (p.post_activity && r.bernoulli(weekend ? kPostDepartureDay / 3 : kPostDepartureDay)) {
        std::int64_t t = draw_time(r, t0, 0.5);
        session(day, e, t, 600 + static_cast<std::int64_t>(r.below(3 * kHour)));
        if (r.bernoulli(0.5))
          device_pair(r, day, e, t + 60);
      }
      return;
    }
    const bool threat = p.threat_active(month);
    const double p_pos = p.p_pos, p_neg = p.p_neg;
    double mail_pos = p_pos, mail_neg = p_neg;
    if (threat && p.cls == ClassLabel::leaker) {
      mail_neg *= 3.0;
      mail_pos *= 0.5;
    }

    const bool vacation = !weekend && r.bernoulli(kVacationDay);
    const double scale = vacation ? 0.0 : (weekend ? p.weekend_factor : 1.0) * p.activity;
    const auto n_web = r.poisson(rates.web * p.kind_mult[0] * scale);
    const auto n_email = r.poisson(rates.email * p.kind_mult[1] * scale);
    const auto n_file = r.poisson(rates.file * p.kind_mult[3] * scale);
    const auto n_device = r.poisson(p.device_rate * scale * rates.device / 0.1);
    const std::uint32_t base = n_web + n_email + n_file + n_device;

    std::uint32_t sessions = 0;
    if (rates.logon > 0 && !vacation)
      sessions = weekend ? (base > 0 ? 1u : 0u) : std::max<std::uint32_t>(1, r.poisson(rates.logon));
    for (std::uint32_t s = 0; s < sessions; ++s) {
      std::int64_t start = r.bernoulli(p.p_off) ? draw_time(r, t0, 1.0)
                                                : t0 + 7 * kHour + 30 * 60 +
                                                      static_cast<std::int64_t>(r.below(2 * kHour));
      session(day, e, start, 8 * kHour + static_cast<std::int64_t>(r.below(2 * kHour)));
    }

    for (std::uint32_t i = 0; i < n_web; ++i) {
      double u = r.uniform();
      std::string_view domain;
      if ((u -= p.p_file_sharing) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::file_sharing));
      else if ((u -= p.p_job) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::job_search));
      else if ((u -= p.p_competitor) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::competitor));
      else if ((u -= p.p_malware) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::malware));
      else if ((u -= p.p_webmail) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::webmail));
      else if ((u -= 0.2) < 0)
        domain = pick(r, fixtures::domains_for(DomainCategory::other));
      else
        domain = pick(r, fixtures::uncategorized_sites());
      web_event(r, day, e, draw_time(r, t0, p.p_off), domain, p_pos, p_neg);
    }
    for (std::uint32_t i = 0; i < n_email; ++i) {
      std::vector<std::string> to{colleague(r, e)};
      if (r.bernoulli(0.3))
        to.push_back(colleague(r, e));
      double u = r.uniform();
      if ((u -= p.p_email_competitor) < 0)
        to.push_back(address_in(r, DomainCategory::competitor));
      else if ((u -= p.p_email_file_sharing) < 0)
        to.push_back(address_in(r, DomainCategory::file_sharing));
      else if ((u -= p.p_email_external) < 0)
        to.push_back(address_in(r, DomainCategory::webmail));
      std::uint32_t att = r.bernoulli(0.25) ? static_cast<std::uint32_t>(r.between(1, 3)) : 0;
      email_event(r, day, e, draw_time(r, t0, p.p_off), std::move(to), att, mail_pos, mail_neg);
    }
    for (std::uint32_t i = 0; i < n_file; ++i)
      file_event(r, day, e, draw_time(r, t0, p.p_off), r.bernoulli(0.004), p_pos, p_neg);
    for (std::uint32_t i = 0; i < n_device; ++i)
      device_pair(r, day, e, draw_time(r, t0, p.p_off));

    if (threat)
      narrative_day(r, e, t0, weekend, day, truth, mail_pos, mail_neg);
  }

  void narrative_day(Rng &r, std::size_t e, std::int64_t t0, bool weekend,
                     std::vector<Pending> &day, GroundTruth &truth, double p_pos, double p_neg) {
    const auto &p = profiles_[e];
    const auto &in = config_.intensity;
    const std::size_t before = day.size();
    switch (p.cls) {
    case ClassLabel::leaker: {
      auto n = r.poisson(in.leak * (weekend ? 0.4 : 0.5));
      for (std::uint32_t i = 0; i < n; ++i) {
        auto t = draw_time(r, t0, 0.45);
        if (r.bernoulli(0.6)) {
          web_event(r, day, e, t, pick(r, fixtures::domains_for(DomainCategory::file_sharing)), p.p_pos, p.p_neg);
        } else {
          std::vector<std::string> to{address_in(r, DomainCategory::file_sharing)};
          email_event(r, day, e, t, std::move(to), static_cast<std::uint32_t>(r.between(1, 4)),
                      p_pos, p_neg);
        }
      }
      break;
    }
    case ClassLabel::thief: {
      const double w = weekend ? 0.3 : 1.0;
      auto n_web = r.poisson(in.thief * 0.25 * w);
      for (std::uint32_t i = 0; i < n_web; ++i) {
        auto cat = r.bernoulli(0.6) ? DomainCategory::job_search : DomainCategory::competitor;
        web_event(r, day, e, draw_time(r, t0, 0.25), pick(r, fixtures::domains_for(cat)), p.p_pos, p.p_neg);
      }
      auto n_mail = r.poisson(in.thief * 0.1 * w);
      for (std::uint32_t i = 0; i < n_mail; ++i) {
        std::vector<std::string> to{address_in(r, DomainCategory::competitor)};
        std::uint32_t att = r.bernoulli(0.5) ? static_cast<std::uint32_t>(r.between(1, 3)) : 0;
        email_event(r, day, e, draw_time(r, t0, 0.25), std::move(to), att, p_pos, p_neg);
      }
      break;
    }
    case ClassLabel::saboteur: {
      const double w = weekend ? 0.8 : 1.0;
      auto n_web = r.poisson(in.sabotage * 0.5 * w);
      for (std::uint32_t i = 0; i < n_web; ++i) {
        auto cat = r.bernoulli(0.7) ? DomainCategory::malware : DomainCategory::keylogger;
        web_event(r, day, e, draw_time(r, t0, 0.55), pick(r, fixtures::domains_for(cat)), p.p_pos, p.p_neg);
      }
      auto n_exe = r.poisson(in.sabotage * 0.4 * w);
      for (std::uint32_t i = 0; i < n_exe; ++i)
        file_event(r, day, e, draw_time(r, t0, 0.55), true, p_pos, p_neg);
      break;
    }
    default:
      break;
    }
    truth.narrative_events += day.size() - before;
  }

  GenConfig config_;
  std::vector<Profile> profiles_;
  std::uint64_t next_id_ = 0;
  std::size_t seq_ = 0;
  std::int64_t day_last_ = 0;
};

std::string manifest_key(ActivityKind k) { return "events." + std::string(activity_name(k)); }

} // namespace

void GenConfig::validate() const {
  if (n_employees == 0)
    throw Error(Errc::invalid_config, "n_employees must be positive");
  if (n_months <= 0)
    throw Error(Errc::invalid_config, "n_months must be positive");
  double sum = 0.0;
  for (double f : class_fractions) {
    if (!(f >= 0.0))
      throw Error(Errc::invalid_config, "class fractions must be nonnegative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::invalid_config, "class fractions must sum to 1");
  for (double r : {rates.web, rates.email, rates.logon, rates.file, rates.device,
                   intensity.leak, intensity.thief, intensity.sabotage})
    if (!(r >= 0.0) || !std::isfinite(r))
      throw Error(Errc::invalid_config, "rates and intensities must be nonnegative");
  if (!(post_departure_fraction >= 0.0 && post_departure_fraction <= 1.0))
    throw Error(Errc::invalid_config, "post_departure_fraction must lie in [0, 1]");
}

std::array<std::size_t, kNumClasses> class_employee_counts(const GenConfig &config) {
  std::array<std::size_t, kNumClasses> counts{};
  std::array<double, kNumClasses> rem{};
  std::size_t total = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    double exact = config.class_fractions[c] * static_cast<double>(config.n_employees);
    // Guards against 0.03 * 1000 = 29.999999999999996.
    double fl = std::floor(exact + 1e-9);
    counts[c] = static_cast<std::size_t>(fl);
    rem[c] = exact - fl;
    total += counts[c];
  }
  std::array<std::size_t, kNumClasses> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; total < config.n_employees; ++k, ++total)
    ++counts[order[k % kNumClasses]];
  return counts;
}

std::map<std::string, ClassLabel> GroundTruth::employee_classes() const {
  std::map<std::string, ClassLabel> out;
  for (const auto &[key, label] : labels.entries()) {
    auto [it, inserted] = out.emplace(key.user, label);
    if (!inserted && label > it->second)
      it->second = label;
  }
  return out;
}

std::array<std::size_t, kNumClasses> GroundTruth::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto &[user, label] : employee_classes())
    ++counts[class_index(label)];
  return counts;
}

GeneratedCorpus generate_events(const GenConfig &config, const EventSink &sink) {
  Generator gen(config);
  GeneratedCorpus out{gen.roster(), gen.truth_skeleton()};
  gen.run(out.truth, [&](std::vector<Generator::Pending> &day) {
    for (auto &p : day)
      sink(std::move(p.event));
  });
  return out;
}

GeneratedCorpus generate(const GenConfig &config, const std::filesystem::path &dir) {
  Generator gen(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(Errc::io_failure, "cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](std::string_view name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f)
      throw Error(Errc::io_failure, "cannot open " + (dir / name).string() + " for writing");
    return f;
  };
  std::array<std::ofstream, 5> files;
  std::array<std::string, 5> buffers;
  for (std::size_t k = 0; k < 5; ++k) {
    files[k] = open(activity_file_name(kAllActivityKinds[k]));
    append_header(buffers[k], kAllActivityKinds[k]);
  }
  GeneratedCorpus out{gen.roster(), gen.truth_skeleton()};
  gen.run(out.truth, [&](std::vector<Generator::Pending> &day) {
    for (auto &p : day)
      append_event(buffers[static_cast<std::size_t>(kind_of(p.event))], p.event);
    for (std::size_t k = 0; k < 5; ++k) {
      if (buffers[k].size() > (1u << 20)) {
        files[k].write(buffers[k].data(), static_cast<std::streamsize>(buffers[k].size()));
        buffers[k].clear();
      }
    }
  });
  for (std::size_t k = 0; k < 5; ++k) {
    files[k].write(buffers[k].data(), static_cast<std::streamsize>(buffers[k].size()));
    files[k].close();
    if (!files[k])
      throw Error(Errc::io_failure, "failed writing activity file");
  }
  {
    auto f = open("roster.csv");
    write_roster(f, out.roster);
  }
  {
    auto f = open("truth.csv");
    write_truth(f, out.truth.labels);
  }
  {
    auto f = open("manifest.txt");
    write_manifest(f, config, out.truth);
    if (!f)
      throw Error(Errc::io_failure, "failed writing manifest");
  }
  return out;
}

void write_truth(std::ostream &out, const LabelMap &labels) {
  std::string buf = "user_id,month,label\n";
  for (const auto &[key, label] : labels.entries()) {
    append_csv_field(buf, key.user);
    buf.push_back(',');
    buf += std::to_string(key.month);
    buf.push_back(',');
    buf += label_name(label);
    buf.push_back('\n');
  }
  out << buf;
}

LabelMap read_truth(std::istream &in) {
  CsvReader r(in);
  if (!r.next() || r.size() != 3 || r.field(0) != "user_id" || r.field(1) != "month" ||
      r.field(2) != "label")
    throw Error(Errc::schema_mismatch, "truth header must be user_id,month,label", 1);
  LabelMap labels;
  while (r.next()) {
    if (r.size() != 3)
      throw Error(Errc::malformed_row, "expected 3 fields", r.line());
    auto month = parse_number(r.field(1));
    auto label = parse_label(r.field(2));
    if (!month || !label)
      throw Error(Errc::malformed_row, "bad month or label", r.line());
    labels.set(r.field(0), static_cast<int>(*month), *label);
  }
  return labels;
}

void write_manifest(std::ostream &out, const GenConfig &config, const GroundTruth &truth) {
  out << "# synthetic corpus manifest\n";
  out << "seed = " << config.seed << "\n";
  out << "employees = " << config.n_employees << "\n";
  out << "months = " << config.n_months << "\n";
  for (std::size_t k = 0; k < 5; ++k)
    out << manifest_key(kAllActivityKinds[k]) << " = " << truth.event_counts[k] << "\n";
  auto counts = truth.class_counts();
  for (std::size_t c = 0; c < kNumClasses; ++c)
    out << "class." << label_name(static_cast<ClassLabel>(c)) << " = " << counts[c] << "\n";
  out << "narrative_events = " << truth.narrative_events << "\n";
  for (const auto &n : truth.narratives) {
    out << "narrative = " << n.user << "," << label_name(n.cls) << "," << n.first_active << ","
        << n.last_active << ",";
    if (n.departure_month)
      out << *n.departure_month;
    out << "," << (n.post_departure_activity ? 1 : 0) << "\n";
  }
}

ManifestSummary read_manifest(std::istream &in) {
  ManifestSummary s;
  std::string line;
  std::size_t lineno = 0;
  auto to_size = [&](std::string_view v) {
    auto n = parse_number(v);
    if (!n || *n < 0)
      throw Error(Errc::malformed_row, "bad manifest value", lineno);
    return static_cast<std::size_t>(*n);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#')
      continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::malformed_row, "expected key = value", lineno);
    auto key = trim(l.substr(0, eq));
    auto value = trim(l.substr(eq + 1));
    bool known = false;
    for (std::size_t k = 0; k < 5; ++k)
      if (key == manifest_key(kAllActivityKinds[k])) {
        s.event_counts[k] = to_size(value);
        known = true;
      }
    for (std::size_t c = 0; c < kNumClasses; ++c)
      if (key == "class." + std::string(label_name(static_cast<ClassLabel>(c)))) {
        s.class_counts[c] = to_size(value);
        known = true;
      }
    if (key == "seed") {
      try {
        s.seed = std::stoull(std::string(value));
      } catch (const std::exception &) {
        throw Error(Errc::malformed_row, "bad manifest seed", lineno);
      }
    } else if (key == "employees") {
      s.employees = to_size(value);
    } else if (key == "months") {
      s.months = static_cast<int>(to_size(value));
    } else if (key == "narrative_events") {
      s.narrative_events = to_size(value);
    } else if (key == "narrative") {
      auto parts = split(value, ',');
      if (parts.size() != 6)
        throw Error(Errc::malformed_row, "narrative needs 6 fields", lineno);
      Narrative n;
      n.user = std::string(parts[0]);
      auto cls = parse_label(parts[1]);
      if (!cls)
        throw Error(Errc::malformed_row, "bad narrative class", lineno);
      n.cls = *cls;
      n.first_active = static_cast<int>(to_size(parts[2]));
      n.last_active = static_cast<int>(to_size(parts[3]));
      if (!parts[4].empty())
        n.departure_month = static_cast<int>(to_size(parts[4]));
      n.post_departure_activity = parts[5] == "1";
      s.narratives.push_back(std::move(n));
    } else if (!known) {
      throw Error(Errc::malformed_row, "unknown manifest key '" + std::string(key) + "'", lineno);
    }
  }
  return s;
}

namespace {

std::ifstream open_in(const std::filesystem::path &p) {
  std::ifstream f(p, std::ios::binary);
  if (!f)
    throw Error(Errc::io_failure, "cannot open " + p.string());
  return f;
}

} // namespace

ManifestSummary verify_truth(const std::filesystem::path &dir) {
  auto mf = open_in(dir / "manifest.txt");
  auto manifest = read_manifest(mf);
  auto tf = open_in(dir / "truth.csv");
  GroundTruth truth;
  truth.labels = read_truth(tf);
  for (std::size_t k = 0; k < 5; ++k) {
    auto kind = kAllActivityKinds[k];
    auto f = open_in(dir / activity_file_name(kind));
    std::size_t n = 0;
    for_each_event(f, kind, RowPolicy::fail_fast, [&](LogEvent &&) { ++n; });
    if (n != manifest.event_counts[k])
      throw Error(Errc::truth_mismatch, std::string(activity_name(kind)) + ": manifest lists " +
                                            std::to_string(manifest.event_counts[k]) +
                                            " events, file has " + std::to_string(n));
  }
  auto counts = truth.class_counts();
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (counts[c] != manifest.class_counts[c])
      throw Error(Errc::truth_mismatch,
                  std::string(label_name(static_cast<ClassLabel>(c))) + ": manifest lists " +
                      std::to_string(manifest.class_counts[c]) + " employees, truth has " +
                      std::to_string(counts[c]));
  return manifest;
}

GroundTruth load_truth(const std::filesystem::path &dir) {
  GroundTruth truth;
  auto tf = open_in(dir / "truth.csv");
  truth.labels = read_truth(tf);
  std::ifstream mf(dir / "manifest.txt", std::ios::binary);
  if (mf) {
    auto m = read_manifest(mf);
    truth.event_counts = m.event_counts;
    truth.narrative_events = m.narrative_events;
    truth.narratives = std::move(m.narratives);
  }
  return truth;
}

} // namespace itd
