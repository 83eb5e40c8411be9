#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace itd {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

std::string to_lower(std::string_view s);

// ---------------------------------------------------------------- roster

struct EmployeeRecord {
  std::string user_id;
  std::string first_name;
  std::string last_name;
  std::string role;
  std::optional<std::string> supervisor;
  int start_month = 1;
  /// Last employed month, inclusive; nullopt while still employed.
  std::optional<int> end_month;

  bool employed_in(int month) const {
    return month >= start_month && (!end_month || month <= *end_month);
  }
  bool operator==(const EmployeeRecord &) const = default;
};

class Roster {
public:
  Roster() = default;
  /// Validates uniqueness, supervisor references and employment intervals.
  explicit Roster(std::vector<EmployeeRecord> records);

  const std::vector<EmployeeRecord> &records() const { return records_; }
  const EmployeeRecord *find(std::string_view user_id) const;
  std::size_t size() const { return records_.size(); }

  /// (employee, supervisor) pairs in roster order.
  std::vector<std::pair<std::string, std::string>> supervisor_pairs() const;

private:
  std::vector<EmployeeRecord> records_;
  StringMap<std::size_t> index_;
};

Roster parse_roster(std::istream &in);
void write_roster(std::ostream &out, const Roster &roster);

// ------------------------------------------------------ domain categories

enum class DomainCategory : std::uint8_t {
  file_sharing,
  job_search,
  competitor,
  malware,
  keylogger,
  webmail,
  other,
};

std::string_view category_name(DomainCategory c);
std::optional<DomainCategory> parse_category(std::string_view name);

class CategorySet {
public:
  constexpr CategorySet() = default;
  constexpr CategorySet(std::initializer_list<DomainCategory> cs) {
    for (auto c : cs)
      insert(c);
  }
  constexpr void insert(DomainCategory c) { bits_ |= bit(c); }
  constexpr bool contains(DomainCategory c) const { return bits_ & bit(c); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr CategorySet &operator|=(CategorySet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr bool operator==(CategorySet, CategorySet) = default;

private:
  static constexpr std::uint8_t bit(DomainCategory c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

class DomainCategoryTable {
public:
  void add(std::string_view domain, DomainCategory category);
  /// Union of the categories of the domain and all of its parent domains;
  /// never fails, unlisted domains yield the empty set.
  CategorySet lookup(std::string_view domain) const;
  std::size_t size() const { return table_.size(); }

private:
  StringMap<CategorySet> table_;
};

/// Lines of `domain,category`; blank lines and `#` comments ignored, an
/// optional `domain,category` header is skipped.
DomainCategoryTable load_domain_categories(std::istream &in);

// -------------------------------------------------------------- lexicon

class SentimentLexicon {
public:
  /// Throws ValenceOutOfRange unless 1 <= |valence| <= 5.
  void add(std::string_view term, int valence);
  std::optional<int> valence(std::string_view term) const {
    auto it = terms_.find(term);
    if (it == terms_.end())
      return std::nullopt;
    return it->second;
  }
  /// Longest phrase length, in words.
  std::size_t max_phrase_words() const { return max_words_; }
  std::size_t size() const { return terms_.size(); }

private:
  StringMap<int> terms_;
  std::size_t max_words_ = 0;
};

/// Tab-separated `term<TAB>valence`; terms may contain spaces.
SentimentLexicon load_lexicon(std::istream &in);

// ----------------------------------------------------------- name gender

enum class Gender { male, female, unknown };

/// Numeric encoding used in feature tables: M = 0, F = 1, unknown = 0.5.
double gender_code(Gender g);

class NameGenderTable {
public:
  void add(std::string_view first_name, Gender g);
  Gender lookup(std::string_view first_name) const;
  std::size_t size() const { return names_.size(); }

private:
  StringMap<Gender> names_;
};

/// Lines of `name,gender` with gender `F` or `M`; optional header.
NameGenderTable load_name_genders(std::istream &in);

// -------------------------------------------------------------- domains

/// Lower-case host of a URL or the domain part of an email address.
/// Throws Unparseable when no host can be extracted.
std::string registrable_domain(std::string_view address_or_url);

/// Non-throwing variant for hot paths; returns false when unparseable.
bool try_registrable_domain(std::string_view address_or_url, std::string &out);

} // namespace itd
