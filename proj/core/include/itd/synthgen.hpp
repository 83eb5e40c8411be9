#pragma once

#include "itd/corpus.hpp"
#include "itd/dataset.hpp"
#include "itd/lookup.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace itd {

/// Mean events per employee per working day.
struct ActivityRates {
  double web = 1.6;
  double email = 0.8;
  /// Logon sessions; each session emits a Logon and a Logoff.
  double logon = 1.0;
  double file = 0.4;
  double device = 0.1;
};

/// Scales the daily rate of narrative-injected events per threat class.
struct ThreatIntensity {
  double leak = 1.0;
  double thief = 1.0;
  double sabotage = 1.0;
};

struct GenConfig {
  std::size_t n_employees = 1000;
  int n_months = 18;
  /// Benign, Departed, Leaker, Thief, Saboteur.
  std::array<double, kNumClasses> class_fractions = {0.80, 0.13, 0.03, 0.03, 0.01};
  ActivityRates rates;
  ThreatIntensity intensity;
  /// Share of departed employees that keep logging on after departure.
  double post_departure_fraction = 0.3;
  std::uint64_t seed = 7;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Employee counts per class by largest-remainder rounding of the fractions.
std::array<std::size_t, kNumClasses> class_employee_counts(const GenConfig &config);

struct Narrative {
  std::string user;
  ClassLabel cls = ClassLabel::benign;
  /// Threat-active months, inclusive; zero for departed-only narratives.
  int first_active = 0;
  int last_active = 0;
  /// Last employed month when the employee leaves.
  std::optional<int> departure_month;
  bool post_departure_activity = false;
  bool operator==(const Narrative &) const = default;
};

struct GroundTruth {
  LabelMap labels;
  std::vector<Narrative> narratives;
  std::array<std::size_t, 5> event_counts{};
  /// Events injected by threat narratives (subset of event_counts).
  std::size_t narrative_events = 0;

  /// Employee class: highest-precedence label over the employee's months.
  std::map<std::string, ClassLabel> employee_classes() const;
  std::array<std::size_t, kNumClasses> class_counts() const;
};

struct GeneratedCorpus {
  Roster roster;
  GroundTruth truth;
};

/// Streams the corpus into a sink in timestamp order without touching disk.
GeneratedCorpus generate_events(const GenConfig &config, const EventSink &sink);

/// Writes the five activity CSVs, roster.csv, truth.csv and manifest.txt.
GeneratedCorpus generate(const GenConfig &config, const std::filesystem::path &out);

void write_truth(std::ostream &out, const LabelMap &labels);
LabelMap read_truth(std::istream &in);
void write_manifest(std::ostream &out, const GenConfig &config, const GroundTruth &truth);

struct ManifestSummary {
  std::uint64_t seed = 0;
  std::size_t employees = 0;
  int months = 0;
  std::array<std::size_t, 5> event_counts{};
  std::array<std::size_t, kNumClasses> class_counts{};
  std::size_t narrative_events = 0;
  std::vector<Narrative> narratives;
};

ManifestSummary read_manifest(std::istream &in);

/// Recounts events per kind and employees per class and compares them with
/// manifest.txt. Throws TruthMismatch naming the first disagreeing item, or
/// IoFailure when files are missing.
ManifestSummary verify_truth(const std::filesystem::path &dir);

/// Labels and narratives of a generated corpus directory.
GroundTruth load_truth(const std::filesystem::path &dir);

} // namespace itd
