#pragma once

#include "itd/corpus.hpp"
#include "itd/dataset.hpp"
#include "itd/lookup.hpp"
#include "itd/sentiment.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace itd {

bool is_weekend(Timestamp t);
/// Outside the [08:00, 17:00) working window.
bool is_off_hours(Timestamp t);

enum class RiskCategory : std::uint8_t { leak, thief, sabotage };

class RiskSet {
public:
  constexpr RiskSet() = default;
  constexpr RiskSet(std::initializer_list<RiskCategory> cs) {
    for (auto c : cs)
      insert(c);
  }
  constexpr void insert(RiskCategory c) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)); }
  constexpr bool contains(RiskCategory c) const {
    return bits_ & static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  constexpr bool empty() const { return bits_ == 0; }
  friend constexpr bool operator==(RiskSet, RiskSet) = default;

private:
  std::uint8_t bits_ = 0;
};

/// Leak: file-sharing url or recipient domain. Thief: job-search or
/// competitor. Sabotage: malware or keylogger, web events only.
RiskSet event_risk_categories(const LogEvent &event, const DomainCategoryTable &domains);

struct MonthRange {
  int first = 1;
  int last = 1;
  int size() const { return last - first + 1; }
  bool contains(int m) const { return m >= first && m <= last; }
};

struct ExtractOptions {
  MonthRange months;
  /// fail_fast throws UnknownUser; skip_and_count drops the event.
  RowPolicy unknown_users = RowPolicy::fail_fast;
};

struct ExtractStats {
  std::size_t events = 0;
  std::size_t unknown_user_events = 0;
  /// Events dated outside the month range or before the user's hire.
  std::size_t unplaced_events = 0;
};

/// Streaming per-(employee, month) aggregation. One row per roster user and
/// month in range from the hire month on, including months after departure.
class FeatureExtractor {
public:
  FeatureExtractor(const Roster &roster, const DomainCategoryTable &domains,
                   const SentimentLexicon &lexicon, const NameGenderTable &genders,
                   ExtractOptions options);

  void add(const LogEvent &event);

  /// Unlabeled table, rows ordered by roster order then month.
  DatasetTable table() const;
  /// Competitor emails carrying at least one attachment, aligned with the
  /// rows of table().
  std::vector<double> competitor_attachment_counts() const;
  const ExtractStats &stats() const { return stats_; }

private:
  struct Cell {
    std::array<double, kNumFeatures> values{};
    double compete_attachments = 0.0;
  };
  Cell *cell_for(const EventHeader &h, const EmployeeRecord *&employee);

  const Roster &roster_;
  const DomainCategoryTable &domains_;
  const SentimentLexicon &lexicon_;
  const NameGenderTable &genders_;
  ExtractOptions options_;
  std::vector<Cell> cells_;
  ExtractStats stats_;
  TokenStream tokens_;
  std::string domain_buf_;
};

DatasetTable extract(std::span<const LogEvent> events, const Roster &roster,
                     const DomainCategoryTable &domains, const SentimentLexicon &lexicon,
                     const NameGenderTable &genders, ExtractOptions options);

struct CorpusExtraction {
  DatasetTable table;
  std::vector<double> competitor_attachments;
  ExtractStats stats;
  std::array<ParseStats, 5> parse;
};

/// Streams the five activity files of a corpus directory through a
/// FeatureExtractor. Missing files are IoFailure.
CorpusExtraction extract_directory(const std::filesystem::path &dir, const Roster &roster,
                                   const DomainCategoryTable &domains,
                                   const SentimentLexicon &lexicon,
                                   const NameGenderTable &genders, ExtractOptions options,
                                   RowPolicy rows = RowPolicy::fail_fast);

} // namespace itd
