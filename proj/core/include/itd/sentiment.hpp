#pragma once

#include "itd/corpus.hpp"
#include "itd/lookup.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itd {

/// Lower-case tokens stored contiguously, separated by single spaces, so a
/// run of consecutive tokens is itself a view into the joined text.
class TokenStream {
public:
  std::size_t size() const { return starts_.size(); }
  bool empty() const { return starts_.empty(); }
  std::string_view operator[](std::size_t i) const { return span(i, 1); }
  /// Tokens [first, first + count) joined by single spaces.
  std::string_view span(std::size_t first, std::size_t count) const {
    std::size_t b = starts_[first];
    std::size_t last = first + count - 1;
    return std::string_view(text_).substr(b, starts_[last] + lengths_[last] - b);
  }
  const std::string &joined() const { return text_; }
  std::vector<std::string> to_vector() const;

  void push(std::string_view token);
  void clear() {
    text_.clear();
    starts_.clear();
    lengths_.clear();
  }

private:
  std::string text_;
  std::vector<std::uint32_t> starts_;
  std::vector<std::uint32_t> lengths_;
};

/// Splits on whitespace and hyphens, drops tokens containing a digit, strips
/// remaining punctuation and lower-cases ASCII letters. Bytes outside ASCII
/// are kept as word characters.
TokenStream normalize(std::string_view text);
/// Reuses the output buffers of `out`.
void normalize_into(std::string_view text, TokenStream &out);

/// Greedy longest-phrase lexicon match, left to right; sum of valences.
std::int64_t score(const TokenStream &tokens, const SentimentLexicon &lexicon);

class MonthlySentiment {
public:
  void add(std::string_view user, int month, std::int64_t value);
  /// Zero for absent (user, month) pairs.
  std::int64_t at(std::string_view user, int month) const;
  const std::map<std::pair<std::string, int>, std::int64_t> &totals() const {
    return totals_;
  }

private:
  std::map<std::pair<std::string, int>, std::int64_t> totals_;
};

/// Cumulative monthly sentiment of the content of events of one kind.
MonthlySentiment monthly_sentiment(std::span<const LogEvent> events,
                                   ActivityKind kind,
                                   const SentimentLexicon &lexicon);

/// Content text of web, email and file events; empty for the others.
std::string_view content_of(const LogEvent &event);

} // namespace itd
