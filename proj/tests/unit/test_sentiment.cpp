#include "itd/fixtures.hpp"
#include "itd/sentiment.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace itd;

namespace {

using Words = std::vector<std::string>;

SentimentLexicon toy(std::initializer_list<std::pair<const char *, int>> terms) {
  SentimentLexicon lex;
  for (auto [t, v] : terms)
    lex.add(t, v);
  return lex;
}

TokenStream tokens(const Words &w) {
  TokenStream t;
  for (const auto &s : w)
    t.push(s);
  return t;
}

EmailEvent email(const char *user, int month, const char *content) {
  EmailEvent e;
  e.user = user;
  e.date = Timestamp::from_civil(2010, month, 10, 12);
  e.content = content;
  return e;
}

} // namespace

TEST_SUITE("sentiment") {

TEST_CASE("normalize") {
  CHECK(normalize("Outstanding!! Work.").to_vector() == Words{"outstanding", "work"});
  CHECK(normalize("").empty());
  CHECK(normalize("v2 rocket abc123 fine").to_vector() == Words{"rocket", "fine"});
  CHECK(normalize("well-known  tabs\there").to_vector() == Words{"well", "known", "tabs", "here"});
  CHECK(normalize("it's ... ok").to_vector() == Words{"its", "ok"});
}

TEST_CASE("normalize output is clean and idempotent") {
  testgen::Gen g(12);
  const std::string alphabet = "aZ9 !-.,'\t\nqQx7";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (int i = g.integer(0, 40); i > 0; --i)
      s += alphabet[g.index(alphabet.size())];
    auto t = normalize(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK_FALSE(t[i].empty());
      for (char c : t[i])
        CHECK(((c >= 'a' && c <= 'z')));
    }
    CHECK(normalize(t.joined()).to_vector() == t.to_vector());
  }
}

TEST_CASE("score") {
  auto lex = toy({{"good", 3}, {"bad", -3}});
  CHECK(score(tokens({}), lex) == 0);
  CHECK(score(tokens({"good", "good", "bad"}), lex) == 3);
  auto phrase = toy({{"not good", -2}, {"good", 3}});
  CHECK(score(tokens({"not", "good"}), phrase) == -2);
  CHECK(score(tokens({"good", "not", "good", "good"}), phrase) == 4);
}

TEST_CASE("score is additive and bounded for single words") {
  auto lex = fixtures::lexicon();
  auto pos = fixtures::positive_words();
  auto neg = fixtures::negative_words();
  auto neutral = fixtures::neutral_words();
  testgen::Gen g(13);
  auto draw = [&](int n) {
    Words w;
    for (int i = 0; i < n; ++i) {
      auto pool = g.index(3);
      auto src = pool == 0 ? pos : pool == 1 ? neg : neutral;
      w.emplace_back(src[g.index(src.size())]);
    }
    return w;
  };
  for (int trial = 0; trial < 300; ++trial) {
    auto a = draw(g.integer(0, 12));
    auto b = draw(g.integer(0, 12));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    auto sa = score(tokens(a), lex), sb = score(tokens(b), lex), sab = score(tokens(ab), lex);
    CHECK(sab == sa + sb);
    CHECK(std::llabs(sab) <= 5 * std::int64_t(ab.size()));
  }
}

TEST_CASE("monthly totals") {
  auto lex = fixtures::lexicon();
  std::vector<LogEvent> events = {email("u", 3, "Outstanding"), email("v", 4, "outstanding"),
                                  email("v", 4, "tortures")};
  auto m = monthly_sentiment(events, ActivityKind::email, lex);
  CHECK(m.at("u", 3) == 5);
  CHECK(m.at("v", 4) == 1);
  CHECK(m.at("w", 4) == 0);
  CHECK(m.totals().size() == 2);
  CHECK(monthly_sentiment(events, ActivityKind::web, lex).totals().empty());
}

}
