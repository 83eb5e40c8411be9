#include "itd/sentiment.hpp"

namespace itd {

namespace {

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

} // namespace

void TokenStream::push(std::string_view token) {
  if (!text_.empty())
    text_.push_back(' ');
  starts_.push_back(static_cast<std::uint32_t>(text_.size()));
  lengths_.push_back(static_cast<std::uint32_t>(token.size()));
  text_.append(token);
}

std::vector<std::string> TokenStream::to_vector() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    out.emplace_back((*this)[i]);
  return out;
}

void normalize_into(std::string_view text, TokenStream &out) {
  out.clear();
  std::string token;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && (is_space(static_cast<unsigned char>(text[i])) || text[i] == '-'))
      ++i;
    std::size_t b = i;
    bool has_digit = false;
    while (i < n && !is_space(static_cast<unsigned char>(text[i])) && text[i] != '-') {
      has_digit |= (text[i] >= '0' && text[i] <= '9');
      ++i;
    }
    if (b == i || has_digit)
      continue;
    token.clear();
    for (std::size_t k = b; k < i; ++k) {
      auto c = static_cast<unsigned char>(text[k]);
      if (c >= 'A' && c <= 'Z')
        token.push_back(static_cast<char>(c - 'A' + 'a'));
      else if ((c >= 'a' && c <= 'z') || c >= 0x80)
        token.push_back(static_cast<char>(c));
    }
    if (!token.empty())
      out.push(token);
  }
}

TokenStream normalize(std::string_view text) {
  TokenStream out;
  normalize_into(text, out);
  return out;
}

std::int64_t score(const TokenStream &tokens, const SentimentLexicon &lexicon) {
  std::int64_t total = 0;
  const std::size_t n = tokens.size();
  const std::size_t max_words = std::max<std::size_t>(lexicon.max_phrase_words(), 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t advance = 1;
    for (std::size_t len = std::min(max_words, n - i); len >= 1; --len) {
      if (auto v = lexicon.valence(tokens.span(i, len))) {
        total += *v;
        advance = len;
        break;
      }
    }
    i += advance;
  }
  return total;
}

void MonthlySentiment::add(std::string_view user, int month, std::int64_t value) {
  totals_[{std::string(user), month}] += value;
}

std::int64_t MonthlySentiment::at(std::string_view user, int month) const {
  auto it = totals_.find({std::string(user), month});
  return it == totals_.end() ? 0 : it->second;
}

std::string_view content_of(const LogEvent &event) {
  if (auto *w = std::get_if<WebEvent>(&event))
    return w->content;
  if (auto *e = std::get_if<EmailEvent>(&event))
    return e->content;
  if (auto *f = std::get_if<FileEvent>(&event))
    return f->content;
  return {};
}

MonthlySentiment monthly_sentiment(std::span<const LogEvent> events,
                                   ActivityKind kind,
                                   const SentimentLexicon &lexicon) {
  MonthlySentiment out;
  TokenStream tokens;
  for (const auto &e : events) {
    if (kind_of(e) != kind)
      continue;
    normalize_into(content_of(e), tokens);
    const auto &h = header_of(e);
    out.add(h.user, h.date.month_index(), score(tokens, lexicon));
  }
  return out;
}

} // namespace itd
