#pragma once

// Small lookup tables bundled with the library so the full pipeline runs
// offline. The synthetic generator draws its domains, names and words from
// the same tables, so a generated corpus is always fully categorizable.

#include "itd/lookup.hpp"

#include <span>
#include <string>
#include <string_view>

namespace itd::fixtures {

struct LexiconEntry {
  std::string_view term;
  int valence;
};

struct DomainEntry {
  std::string_view domain;
  DomainCategory category;
};

std::span<const LexiconEntry> lexicon_entries();
std::span<const DomainEntry> domain_entries();
std::span<const std::string_view> male_names();
std::span<const std::string_view> female_names();
/// First names deliberately absent from the name table (gender unknown).
std::span<const std::string_view> unlisted_names();
std::span<const std::string_view> last_names();
/// Words that carry no lexicon valence.
std::span<const std::string_view> neutral_words();
/// Single-word lexicon terms with positive / negative valence.
std::span<const std::string_view> positive_words();
std::span<const std::string_view> negative_words();
/// Domains the generator uses for one category (single-category entries).
std::span<const std::string_view> domains_for(DomainCategory category);
/// Uncategorized sites used for ordinary browsing.
std::span<const std::string_view> uncategorized_sites();

std::string lexicon_tsv();
std::string domains_csv();
std::string names_csv();

SentimentLexicon lexicon();
DomainCategoryTable domains();
NameGenderTable names();

} // namespace itd::fixtures
