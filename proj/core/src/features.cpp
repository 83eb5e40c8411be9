#include "itd/features.hpp"

#include "itd/errors.hpp"

#include <fstream>

namespace itd {

namespace {

constexpr std::size_t idx(Feature f) { return static_cast<std::size_t>(f); }

bool ends_with_exe(std::string_view name) {
  if (name.size() < 4)
    return false;
  auto tail = name.substr(name.size() - 4);
  return tail[0] == '.' && (tail[1] | 0x20) == 'e' && (tail[2] | 0x20) == 'x' &&
         (tail[3] | 0x20) == 'e';
}

struct DomainFlags {
  bool leak = false;
  bool thief = false;
  bool sabotage = false;
  bool competitor = false;
};

void absorb(DomainFlags &f, CategorySet cats) {
  f.leak |= cats.contains(DomainCategory::file_sharing);
  f.thief |= cats.contains(DomainCategory::job_search) ||
             cats.contains(DomainCategory::competitor);
  f.sabotage |= cats.contains(DomainCategory::malware) ||
                cats.contains(DomainCategory::keylogger);
  f.competitor |= cats.contains(DomainCategory::competitor);
}

DomainFlags flags_of(const LogEvent &event, const DomainCategoryTable &domains,
                     std::string &buf) {
  DomainFlags f;
  if (auto *w = std::get_if<WebEvent>(&event)) {
    if (try_registrable_domain(w->url, buf))
      absorb(f, domains.lookup(buf));
  } else if (auto *e = std::get_if<EmailEvent>(&event)) {
    for (const auto *list : {&e->to, &e->cc, &e->bcc})
      for (const auto &r : *list)
        if (try_registrable_domain(r, buf))
          absorb(f, domains.lookup(buf));
    f.sabotage = false;
  }
  return f;
}

} // namespace

bool is_weekend(Timestamp t) {
  auto d = t.day_of_week();
  return d == Weekday::saturday || d == Weekday::sunday;
}

bool is_off_hours(Timestamp t) {
  int h = t.hour();
  return h < 8 || h >= 17;
}

RiskSet event_risk_categories(const LogEvent &event, const DomainCategoryTable &domains) {
  std::string buf;
  auto f = flags_of(event, domains, buf);
  RiskSet out;
  if (f.leak)
    out.insert(RiskCategory::leak);
  if (f.thief)
    out.insert(RiskCategory::thief);
  if (f.sabotage)
    out.insert(RiskCategory::sabotage);
  return out;
}

FeatureExtractor::FeatureExtractor(const Roster &roster, const DomainCategoryTable &domains,
                                   const SentimentLexicon &lexicon,
                                   const NameGenderTable &genders, ExtractOptions options)
    : roster_(roster), domains_(domains), lexicon_(lexicon), genders_(genders),
      options_(options) {
  if (options_.months.size() <= 0)
    throw Error(Errc::invalid_config, "empty month range");
  cells_.resize(roster_.size() * static_cast<std::size_t>(options_.months.size()));
}

FeatureExtractor::Cell *FeatureExtractor::cell_for(const EventHeader &h,
                                                   const EmployeeRecord *&employee) {
  employee = roster_.find(h.user);
  if (!employee) {
    if (options_.unknown_users == RowPolicy::fail_fast)
      throw Error(Errc::unknown_user, "event " + h.id + " names unknown user '" + h.user + "'");
    ++stats_.unknown_user_events;
    return nullptr;
  }
  int m = h.date.month_index();
  if (!options_.months.contains(m) || m < employee->start_month) {
    ++stats_.unplaced_events;
    return nullptr;
  }
  auto u = static_cast<std::size_t>(employee - roster_.records().data());
  return &cells_[u * static_cast<std::size_t>(options_.months.size()) +
                 static_cast<std::size_t>(m - options_.months.first)];
}

void FeatureExtractor::add(const LogEvent &event) {
  ++stats_.events;
  const auto &h = header_of(event);
  const EmployeeRecord *employee = nullptr;
  Cell *cell = cell_for(h, employee);
  if (!cell)
    return;
  auto &v = cell->values;
  const bool after_end = employee->end_month && h.date.month_index() > *employee->end_month;

  switch (kind_of(event)) {
  case ActivityKind::web:
  case ActivityKind::email: {
    auto f = flags_of(event, domains_, domain_buf_);
    const bool weekend = is_weekend(h.date);
    const bool off = is_off_hours(h.date);
    auto bump = [&](bool hit, Feature risk, Feature dow, Feature hr) {
      if (!hit)
        return;
      v[idx(risk)] += 1;
      v[idx(dow)] += weekend;
      v[idx(hr)] += off;
    };
    bump(f.leak, Feature::risk_leak, Feature::dow_leak, Feature::hr_leak);
    bump(f.thief, Feature::risk_thief, Feature::dow_thief, Feature::hr_thief);
    bump(f.sabotage, Feature::risk_sabotage, Feature::dow_sabotage, Feature::hr_sabotage);
    normalize_into(content_of(event), tokens_);
    double s = static_cast<double>(score(tokens_, lexicon_));
    if (auto *e = std::get_if<EmailEvent>(&event)) {
      v[idx(Feature::email_sentiment)] += s;
      if (f.competitor) {
        v[idx(Feature::email_compete)] += 1;
        if (e->attachments >= 1)
          cell->compete_attachments += 1;
      }
    } else {
      v[idx(Feature::web_sentiment)] += s;
    }
    break;
  }
  case ActivityKind::logon:
    if (after_end && std::get<LogonEvent>(event).activity == LogonActivity::logon)
      v[idx(Feature::unauthorized_log)] += 1;
    break;
  case ActivityKind::file:
    v[idx(Feature::file_freq)] += 1;
    if (ends_with_exe(std::get<FileEvent>(event).filename))
      v[idx(Feature::executables)] += 1;
    break;
  case ActivityKind::device:
    if (std::get<DeviceEvent>(event).activity == DeviceActivity::connect) {
      v[idx(Feature::device_freq)] += 1;
      if (after_end)
        v[idx(Feature::unauthorized_log)] += 1;
    }
    break;
  }
}

DatasetTable FeatureExtractor::table() const {
  auto out = DatasetTable::with_feature_columns();
  const auto months = static_cast<std::size_t>(options_.months.size());
  out.reserve(cells_.size());
  const auto &records = roster_.records();
  for (std::size_t u = 0; u < records.size(); ++u) {
    const auto &r = records[u];
    double gender = gender_code(genders_.lookup(r.first_name));
    for (std::size_t k = 0; k < months; ++k) {
      int m = options_.months.first + static_cast<int>(k);
      if (m < r.start_month)
        continue;
      auto values = cells_[u * months + k].values;
      values[idx(Feature::gender)] = gender;
      out.add_row(RowKey{r.user_id, m}, values);
    }
  }
  return out;
}

std::vector<double> FeatureExtractor::competitor_attachment_counts() const {
  std::vector<double> out;
  const auto months = static_cast<std::size_t>(options_.months.size());
  const auto &records = roster_.records();
  for (std::size_t u = 0; u < records.size(); ++u)
    for (std::size_t k = 0; k < months; ++k)
      if (options_.months.first + static_cast<int>(k) >= records[u].start_month)
        out.push_back(cells_[u * months + k].compete_attachments);
  return out;
}

DatasetTable extract(std::span<const LogEvent> events, const Roster &roster,
                     const DomainCategoryTable &domains, const SentimentLexicon &lexicon,
                     const NameGenderTable &genders, ExtractOptions options) {
  FeatureExtractor fx(roster, domains, lexicon, genders, options);
  for (const auto &e : events)
    fx.add(e);
  return fx.table();
}

CorpusExtraction extract_directory(const std::filesystem::path &dir, const Roster &roster,
                                   const DomainCategoryTable &domains,
                                   const SentimentLexicon &lexicon,
                                   const NameGenderTable &genders, ExtractOptions options,
                                   RowPolicy rows) {
  FeatureExtractor fx(roster, domains, lexicon, genders, options);
  CorpusExtraction out;
  for (std::size_t k = 0; k < kAllActivityKinds.size(); ++k) {
    auto kind = kAllActivityKinds[k];
    auto path = dir / activity_file_name(kind);
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error(Errc::io_failure, "cannot open " + path.string());
    out.parse[k] = for_each_event(in, kind, rows, [&](LogEvent &&e) { fx.add(e); });
  }
  out.table = fx.table();
  out.competitor_attachments = fx.competitor_attachment_counts();
  out.stats = fx.stats();
  return out;
}

} // namespace itd
