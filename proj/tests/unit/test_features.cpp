#include "itd/errors.hpp"
#include "itd/features.hpp"
#include "itd/fixtures.hpp"
#include "itd/synthgen.hpp"

#include "../support/feature_fixture.hpp"
#include "../support/generators.hpp"

#include <doctest.h>

#include <sstream>

using namespace itd;

using namespace itd::testfix;

namespace {

void check_row(const DatasetTable &t, std::size_t i, const Row &want) {
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    CAPTURE(t.key(i).user);
    CAPTURE(t.key(i).month);
    CAPTURE(feature_names()[j]);
    CHECK(t.at(i, j) == want[j]);
  }
}

DatasetTable run(const Toy &toy, std::span<const LogEvent> events) {
  return extract(events, toy.roster, toy.domains, toy.lexicon, toy.names, toy.options());
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("calendar predicates") {
  CHECK(is_weekend(at(1, 2, 10)));
  CHECK_FALSE(is_weekend(at(1, 4, 10)));
  CHECK(is_weekend(at(1, 3, 23, 59)));
  CHECK_FALSE(is_off_hours(at(1, 4, 8)));
  CHECK(is_off_hours(at(1, 4, 17)));
  CHECK(is_off_hours(at(1, 4, 3, 30)));
  CHECK_FALSE(is_off_hours(at(1, 4, 16, 59, 59)));
}

TEST_CASE("risk categories") {
  Toy toy;
  using R = RiskCategory;
  CHECK(event_risk_categories(web("A", at(1, 4, 9), "http://both.example/"), toy.domains) ==
        RiskSet{R::leak, R::thief});
  CHECK(event_risk_categories(mail("A", at(1, 4, 9), {"x@rival.example"}, {}, {}, 0, ""),
                              toy.domains) == RiskSet{R::thief});
  CHECK(event_risk_categories(mail("A", at(1, 4, 9), {"x@bad.example"}, {}, {}, 0, ""),
                              toy.domains)
            .empty());
  CHECK(event_risk_categories(web("A", at(1, 4, 9), "http://spy.example/"), toy.domains) ==
        RiskSet{R::sabotage});
  CHECK(event_risk_categories(file("A", at(1, 4, 9), "x.exe"), toy.domains).empty());
}

TEST_CASE("thirty-event fixture matches hand-traced counts") {
  Toy toy;
  auto events = thirty_events();
  REQUIRE(events.size() == 30);
  FeatureExtractor fx(toy.roster, toy.domains, toy.lexicon, toy.names, toy.options());
  for (const auto &e : events)
    fx.add(e);
  auto t = fx.table();
  REQUIRE(t.rows() == 5);
  CHECK(t.key(0) == RowKey{"A", 1});
  CHECK(t.key(4) == RowKey{"C", 2});
  CHECK_FALSE(t.labeled());
  check_row(t, 0, kA1);
  check_row(t, 1, kA2);
  check_row(t, 2, kB1);
  check_row(t, 3, kB2);
  check_row(t, 4, kC2);
  CHECK(fx.competitor_attachment_counts() == std::vector<double>{1, 1, 0, 0, 0});
  CHECK(fx.stats().events == 30);
  CHECK(fx.stats().unplaced_events == 0);
}

TEST_CASE("extraction ignores event order") {
  Toy toy;
  auto events = thirty_events();
  auto base = run(toy, events);
  testgen::Gen g(17);
  for (int trial = 0; trial < 25; ++trial) {
    for (std::size_t i = events.size(); i > 1; --i)
      std::swap(events[i - 1], events[g.index(i)]);
    CHECK(run(toy, events) == base);
  }
}

TEST_CASE("extraction is additive over disjoint event sets") {
  Toy toy;
  auto events = thirty_events();
  auto whole = run(toy, events);
  testgen::Gen g(18);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<LogEvent> left, right;
    for (const auto &e : events)
      (g.coin() ? left : right).push_back(e);
    auto a = run(toy, left);
    auto b = run(toy, right);
    for (std::size_t i = 0; i < whole.rows(); ++i)
      for (std::size_t j = 0; j + 1 < kNumFeatures; ++j)
        CHECK(a.at(i, j) + b.at(i, j) == whole.at(i, j));
  }
}

TEST_CASE("unknown users and unplaced events") {
  Toy toy;
  std::vector<LogEvent> events = {logon("Q", at(1, 4, 9), true), logon("C", at(1, 4, 9), true),
                                  logon("A", at(3, 1, 9), true)};
  try {
    run(toy, events);
    FAIL("expected UnknownUser");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::unknown_user);
  }
  auto opts = toy.options();
  opts.unknown_users = RowPolicy::skip_and_count;
  FeatureExtractor fx(toy.roster, toy.domains, toy.lexicon, toy.names, opts);
  for (const auto &e : events)
    fx.add(e);
  CHECK(fx.stats().unknown_user_events == 1);
  CHECK(fx.stats().unplaced_events == 2);
}

TEST_CASE("employees with no events still get zero rows") {
  Toy toy;
  auto t = run(toy, {});
  CHECK(t.rows() == 5);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j + 1 < kNumFeatures; ++j)
      CHECK(t.at(i, j) == 0.0);
}

TEST_CASE("a full-tenure roster of 1000 over 18 months gives 18000 rows") {
  std::vector<EmployeeRecord> records;
  for (int i = 0; i < 1000; ++i)
    records.push_back({"U" + std::to_string(i), "Ann", "Ames", "Analyst", std::nullopt, 1, {}});
  Roster roster(std::move(records));
  auto t = extract({}, roster, fixtures::domains(), fixtures::lexicon(), fixtures::names(),
                   {{1, 18}, RowPolicy::fail_fast});
  CHECK(t.rows() == 18000);
}

TEST_CASE("subset inequalities hold on synthetic corpora") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GenConfig cfg;
    cfg.n_employees = 60;
    cfg.n_months = 4;
    cfg.class_fractions = {0.4, 0.2, 0.15, 0.15, 0.1};
    cfg.seed = seed;
    auto domains = fixtures::domains();
    auto lexicon = fixtures::lexicon();
    auto names = fixtures::names();
    std::vector<LogEvent> events;
    auto corpus = generate_events(cfg, [&](LogEvent &&e) { events.push_back(std::move(e)); });
    auto t = extract(events, corpus.roster, domains, lexicon, names,
                     {{1, cfg.n_months}, RowPolicy::fail_fast});
    std::size_t expected = 0;
    for (const auto &r : corpus.roster.records())
      expected += std::size_t(cfg.n_months - std::min(r.start_month, cfg.n_months + 1) + 1);
    CHECK(t.rows() == expected);
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(t.at(i, 3 * k + 1) <= t.at(i, 3 * k));
        CHECK(t.at(i, 3 * k + 2) <= t.at(i, 3 * k));
      }
    auto labeled = attach_labels(t, corpus.truth.labels);
    std::size_t unauth = feature_index(Feature::unauthorized_log);
    for (std::size_t i = 0; i < labeled.rows(); ++i) {
      if (labeled.at(i, unauth) == 0)
        continue;
      const auto *r = corpus.roster.find(labeled.key(i).user);
      REQUIRE(r->end_month);
      CHECK(labeled.key(i).month > *r->end_month);
    }
  }
}

}
