#include "itd/lookup.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

#include <charconv>
#include <ostream>

namespace itd {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    if (c >= 'A' && c <= 'Z')
      c = static_cast<char>(c - 'A' + 'a');
  return out;
}

namespace {

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

bool getline_counted(std::istream &in, std::string &line, std::size_t &lineno) {
  if (!std::getline(in, line))
    return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  return true;
}

} // namespace

// ---------------------------------------------------------------- roster

Roster::Roster(std::vector<EmployeeRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto &r = records_[i];
    if (r.user_id.empty())
      throw Error(Errc::malformed_row, "empty user_id", i + 2);
    if (!index_.emplace(r.user_id, i).second)
      throw Error(Errc::duplicate_user, "user '" + r.user_id + "' listed twice");
    if (r.end_month && *r.end_month < r.start_month)
      throw Error(Errc::malformed_row,
                  "empty employment interval for '" + r.user_id + "'", i + 2);
  }
  for (const auto &r : records_) {
    if (!r.supervisor)
      continue;
    if (*r.supervisor == r.user_id)
      throw Error(Errc::dangling_supervisor,
                  "'" + r.user_id + "' is listed as their own supervisor");
    if (!index_.contains(*r.supervisor))
      throw Error(Errc::dangling_supervisor, "supervisor '" + *r.supervisor +
                                                 "' of '" + r.user_id +
                                                 "' is not in the roster");
  }
}

const EmployeeRecord *Roster::find(std::string_view user_id) const {
  auto it = index_.find(user_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::pair<std::string, std::string>> Roster::supervisor_pairs() const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto &r : records_)
    if (r.supervisor)
      pairs.emplace_back(r.user_id, *r.supervisor);
  return pairs;
}

Roster parse_roster(std::istream &in) {
  static constexpr std::string_view kColumns[] = {
      "user_id", "first_name", "last_name", "role",
      "supervisor_id", "start_month", "end_month"};
  CsvReader reader(in);
  if (!reader.next())
    throw Error(Errc::schema_mismatch, "roster is empty");
  bool ok = reader.size() == std::size(kColumns);
  for (std::size_t i = 0; ok && i < reader.size(); ++i)
    ok = trim(reader.field(i)) == kColumns[i];
  if (!ok)
    throw Error(Errc::schema_mismatch, "unexpected roster header");

  std::vector<EmployeeRecord> records;
  while (reader.next()) {
    if (reader.size() != std::size(kColumns))
      throw Error(Errc::malformed_row, "roster row has wrong field count",
                  reader.line());
    EmployeeRecord r;
    r.user_id = trim(reader.field(0));
    r.first_name = trim(reader.field(1));
    r.last_name = trim(reader.field(2));
    r.role = trim(reader.field(3));
    if (auto s = trim(reader.field(4)); !s.empty())
      r.supervisor = std::string(s);
    auto start = parse_int(reader.field(5));
    if (!start)
      throw Error(Errc::malformed_row, "bad start_month", reader.line());
    r.start_month = *start;
    if (auto e = trim(reader.field(6)); !e.empty()) {
      auto end = parse_int(e);
      if (!end)
        throw Error(Errc::malformed_row, "bad end_month", reader.line());
      r.end_month = *end;
    }
    records.push_back(std::move(r));
  }
  return Roster(std::move(records));
}

void write_roster(std::ostream &out, const Roster &roster) {
  std::string buf = "user_id,first_name,last_name,role,supervisor_id,start_month,end_month\n";
  for (const auto &r : roster.records()) {
    append_csv_field(buf, r.user_id);
    buf.push_back(',');
    append_csv_field(buf, r.first_name);
    buf.push_back(',');
    append_csv_field(buf, r.last_name);
    buf.push_back(',');
    append_csv_field(buf, r.role);
    buf.push_back(',');
    if (r.supervisor)
      append_csv_field(buf, *r.supervisor);
    buf.push_back(',');
    buf += std::to_string(r.start_month);
    buf.push_back(',');
    if (r.end_month)
      buf += std::to_string(*r.end_month);
    buf.push_back('\n');
  }
  out << buf;
}

// ------------------------------------------------------ domain categories

std::string_view category_name(DomainCategory c) {
  switch (c) {
  case DomainCategory::file_sharing: return "FileSharing";
  case DomainCategory::job_search: return "JobSearch";
  case DomainCategory::competitor: return "Competitor";
  case DomainCategory::malware: return "Malware";
  case DomainCategory::keylogger: return "Keylogger";
  case DomainCategory::webmail: return "Webmail";
  case DomainCategory::other: return "Other";
  }
  return "";
}

std::optional<DomainCategory> parse_category(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(DomainCategory::other); ++i) {
    auto c = static_cast<DomainCategory>(i);
    if (category_name(c) == name)
      return c;
  }
  return std::nullopt;
}

void DomainCategoryTable::add(std::string_view domain, DomainCategory category) {
  std::string key = to_lower(trim(domain));
  table_[key].insert(category);
}

CategorySet DomainCategoryTable::lookup(std::string_view domain) const {
  CategorySet out;
  if (table_.empty() || domain.empty())
    return out;
  std::string key;
  std::string_view probe = domain;
  bool has_upper = false;
  for (char c : domain)
    has_upper |= (c >= 'A' && c <= 'Z');
  if (has_upper) {
    key = to_lower(domain);
    probe = key;
  }
  for (;;) {
    if (auto it = table_.find(probe); it != table_.end())
      out |= it->second;
    auto dot = probe.find('.');
    if (dot == std::string_view::npos)
      break;
    probe.remove_prefix(dot + 1);
  }
  return out;
}

DomainCategoryTable load_domain_categories(std::istream &in) {
  DomainCategoryTable table;
  std::string line;
  std::size_t lineno = 0;
  while (getline_counted(in, line, lineno)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    auto comma = t.rfind(',');
    if (comma == std::string_view::npos)
      throw Error(Errc::malformed_row, "expected domain,category", lineno);
    auto domain = trim(t.substr(0, comma));
    auto category = trim(t.substr(comma + 1));
    if (lineno == 1 && domain == "domain" && category == "category")
      continue;
    auto c = parse_category(category);
    if (!c)
      throw Error(Errc::unknown_category,
                  "unknown category '" + std::string(category) + "'", lineno);
    table.add(domain, *c);
  }
  return table;
}

// -------------------------------------------------------------- lexicon

void SentimentLexicon::add(std::string_view term, int valence) {
  if (valence == 0 || valence < -5 || valence > 5)
    throw Error(Errc::valence_out_of_range, "valence " + std::to_string(valence) +
                                                " for '" + std::string(term) + "'");
  std::string key = to_lower(trim(term));
  std::size_t words = 1;
  for (char c : key)
    words += (c == ' ');
  max_words_ = std::max(max_words_, words);
  terms_[std::move(key)] = valence;
}

SentimentLexicon load_lexicon(std::istream &in) {
  SentimentLexicon lexicon;
  std::string line;
  std::size_t lineno = 0;
  while (getline_counted(in, line, lineno)) {
    if (trim(line).empty())
      continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw Error(Errc::malformed_row, "expected term<TAB>valence", lineno);
    auto v = parse_int(std::string_view(line).substr(tab + 1));
    if (!v)
      throw Error(Errc::malformed_row, "bad valence", lineno);
    try {
      lexicon.add(std::string_view(line).substr(0, tab), *v);
    } catch (const Error &e) {
      throw Error(e.code(), "valence out of range", lineno);
    }
  }
  return lexicon;
}

// ----------------------------------------------------------- name gender

double gender_code(Gender g) {
  switch (g) {
  case Gender::male: return 0.0;
  case Gender::female: return 1.0;
  case Gender::unknown: return 0.5;
  }
  return 0.5;
}

void NameGenderTable::add(std::string_view first_name, Gender g) {
  names_[to_lower(trim(first_name))] = g;
}

Gender NameGenderTable::lookup(std::string_view first_name) const {
  auto it = names_.find(to_lower(trim(first_name)));
  return it == names_.end() ? Gender::unknown : it->second;
}

NameGenderTable load_name_genders(std::istream &in) {
  NameGenderTable table;
  std::string line;
  std::size_t lineno = 0;
  while (getline_counted(in, line, lineno)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    auto comma = t.find(',');
    if (comma == std::string_view::npos)
      throw Error(Errc::malformed_row, "expected name,gender", lineno);
    auto name = trim(t.substr(0, comma));
    auto g = trim(t.substr(comma + 1));
    if (lineno == 1 && name == "name")
      continue;
    if (g == "F" || g == "f")
      table.add(name, Gender::female);
    else if (g == "M" || g == "m")
      table.add(name, Gender::male);
    else
      throw Error(Errc::malformed_row, "gender must be F or M", lineno);
  }
  return table;
}

// -------------------------------------------------------------- domains

bool try_registrable_domain(std::string_view s, std::string &out) {
  s = trim(s);
  std::string_view host;
  if (auto scheme = s.find("://"); scheme != std::string_view::npos) {
    host = s.substr(scheme + 3);
    host = host.substr(0, host.find_first_of("/?#"));
    if (auto at = host.rfind('@'); at != std::string_view::npos)
      host.remove_prefix(at + 1);
    host = host.substr(0, host.find(':'));
  } else if (auto at = s.rfind('@'); at != std::string_view::npos) {
    if (at == 0)
      return false;
    host = s.substr(at + 1);
  } else {
    host = s.substr(0, s.find_first_of("/?#"));
    host = host.substr(0, host.find(':'));
  }
  if (host.empty() || host.front() == '.' || host.back() == '.')
    return false;
  out.clear();
  out.reserve(host.size());
  for (char c : host) {
    if (c >= 'A' && c <= 'Z')
      c = static_cast<char>(c - 'A' + 'a');
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
              c == '.' || c == '_';
    if (!ok)
      return false;
    out.push_back(c);
  }
  return true;
}

std::string registrable_domain(std::string_view address_or_url) {
  std::string out;
  if (!try_registrable_domain(address_or_url, out))
    throw Error(Errc::unparseable,
                "no host in '" + std::string(address_or_url) + "'");
  return out;
}

} // namespace itd
