#include "itd/bench.hpp"
#include "itd/errors.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace itd;

namespace {

ConfusionMatrix matrix(std::size_t n, std::vector<double> counts) {
  return ConfusionMatrix::from_counts(n, std::move(counts));
}

// Row-level oracles: expand a matrix into (actual, predicted) pairs.
std::vector<std::pair<std::size_t, std::size_t>> expand(const ConfusionMatrix &cm) {
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (std::size_t a = 0; a < cm.size(); ++a)
    for (std::size_t p = 0; p < cm.size(); ++p)
      for (int k = 0; k < static_cast<int>(cm.at(a, p)); ++k)
        rows.emplace_back(a, p);
  return rows;
}

double direct_accuracy(const std::vector<std::pair<std::size_t, std::size_t>> &rows) {
  std::size_t hit = 0;
  for (auto [a, p] : rows)
    hit += a == p;
  return double(hit) / double(rows.size());
}

double direct_kappa(const std::vector<std::pair<std::size_t, std::size_t>> &rows, std::size_t n) {
  double po = direct_accuracy(rows);
  double pe = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double actual = 0, predicted = 0;
    for (auto [a, p] : rows) {
      actual += a == c;
      predicted += p == c;
    }
    pe += (actual / double(rows.size())) * (predicted / double(rows.size()));
  }
  return pe == 1.0 ? 0.0 : (po - pe) / (1.0 - pe);
}

} // namespace

TEST_SUITE("bench") {

TEST_CASE("accuracy and kappa on hand-computed matrices") {
  auto m = matrix(2, {40, 10, 5, 45});
  CHECK(accuracy(m) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(cohen_kappa(m) == doctest::Approx(0.7).epsilon(1e-12));

  auto diag = matrix(3, {4, 0, 0, 0, 7, 0, 0, 0, 9});
  CHECK(accuracy(diag) == 1.0);
  CHECK(cohen_kappa(diag) == 1.0);

  auto off = matrix(2, {0, 5, 5, 0});
  CHECK(accuracy(off) == 0.0);
  // po = 0, pe = 0.5 -> -1
  CHECK(cohen_kappa(off) == doctest::Approx(-1.0).epsilon(1e-12));

  // everything predicted as class 0: pe = po
  auto constant = matrix(2, {30, 0, 10, 0});
  CHECK(accuracy(constant) == doctest::Approx(0.75));
  CHECK(cohen_kappa(constant) == doctest::Approx(0.0).epsilon(1e-12));

  // single-class, all correct: pe = 1 -> 0 by convention
  auto single = matrix(2, {8, 0, 0, 0});
  CHECK(cohen_kappa(single) == 0.0);
}

TEST_CASE("empty matrix is rejected") {
  ConfusionMatrix cm(3);
  CHECK_THROWS_AS(accuracy(cm), Error);
  try {
    cohen_kappa(cm);
  } catch (const Error &e) {
    CHECK(e.code() == Errc::empty_matrix);
  }
}

TEST_CASE("metrics agree with per-row computation on random matrices") {
  testgen::Gen g(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = static_cast<std::size_t>(g.integer(2, 5));
    std::vector<double> counts(n * n);
    for (auto &c : counts)
      c = g.integer(0, 12);
    counts[0] += 1;
    auto cm = matrix(n, counts);
    auto rows = expand(cm);
    CHECK(accuracy(cm) == doctest::Approx(direct_accuracy(rows)).epsilon(1e-12));
    CHECK(cohen_kappa(cm) == doctest::Approx(direct_kappa(rows, n)).epsilon(1e-9));

    // kappa invariant under simultaneous permutation of class order
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
      perm[i] = i;
    for (std::size_t i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[g.index(i)]);
    std::vector<double> permuted(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t p = 0; p < n; ++p)
        permuted[perm[a] * n + perm[p]] = cm.at(a, p);
    CHECK(cohen_kappa(matrix(n, permuted)) == doctest::Approx(cohen_kappa(cm)).epsilon(1e-12));

    bool diagonal = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t p = 0; p < n; ++p)
        if (a != p && cm.at(a, p) > 0)
          diagonal = false;
    bool several = 0 < std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) - 1;
    if (diagonal && several)
      CHECK(cohen_kappa(cm) == doctest::Approx(1.0));
  }
}

TEST_CASE("time_score") {
  std::vector<double> t = {1.0, 1000.0};
  auto s = time_score(t);
  CHECK(s[1] == 1.0);
  CHECK(s[0] == doctest::Approx(std::log(1001.0) / std::log(1000001.0)).epsilon(1e-12));
  CHECK(s[0] == doctest::Approx(0.5).epsilon(0.01));

  std::vector<double> same = {2.5, 2.5};
  auto e = time_score(same);
  CHECK(e[0] == e[1]);
  CHECK(e[0] == 1.0);

  std::vector<double> bad = {1.0, 0.0};
  CHECK_THROWS_AS(time_score(bad), Error);
  CHECK_THROWS_AS(time_score(std::vector<double>{}), Error);
}

TEST_CASE("time_score is rank-preserving") {
  testgen::Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(static_cast<std::size_t>(g.integer(1, 12)));
    for (auto &v : t)
      v = std::exp(g.real(-8.0, 8.0));
    auto s = time_score(t);
    CHECK(*std::max_element(s.begin(), s.end()) == 1.0);
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j)
        if (t[i] < t[j])
          CHECK(s[i] < s[j]);
  }
}

TEST_CASE("one-vs-benign matrix") {
  std::vector<ClassLabel> truth = {ClassLabel::benign, ClassLabel::benign, ClassLabel::benign,
                                   ClassLabel::thief,  ClassLabel::leaker};
  SUBCASE("perfect") {
    auto m = one_vs_benign_matrix(truth, truth, ClassLabel::thief);
    CHECK(m.false_assignment == 0.0);
    CHECK(m.percent[0][1] == 0.0);
    CHECK(m.percent[1][0] == 0.0);
    CHECK(m.percent[1][1] == 100.0);
  }
  SUBCASE("all-benign predictor gives the threat fraction") {
    std::vector<ClassLabel> pred(truth.size(), ClassLabel::benign);
    auto m = one_vs_benign_matrix(pred, truth, ClassLabel::thief);
    CHECK(m.false_assignment == doctest::Approx(1.0 / 4.0));
    CHECK(m.counts[1][0] == 1.0);
  }
  SUBCASE("class absent") {
    CHECK_THROWS_AS(one_vs_benign_matrix(truth, truth, ClassLabel::saboteur), Error);
  }
}

TEST_CASE("pri ranking") {
  std::vector<ClassLabel> labels = {ClassLabel::benign, ClassLabel::thief, ClassLabel::benign,
                                    ClassLabel::departed, ClassLabel::leaker, ClassLabel::benign};
  SUBCASE("threats on top") {
    std::vector<double> scores = {0, 9, 1, 2, 8, 3};
    auto r = pri_rank(scores, labels, 2, false);
    CHECK(r.false_accusation == 0.0);
    CHECK(r.eludes_detection == 0.0);
  }
  SUBCASE("all flagged benign") {
    std::vector<double> scores = {9, 0, 8, 7, 0, 1};
    auto r = pri_rank(scores, labels, 3, false);
    CHECK(r.false_accusation == 1.0);
    CHECK(r.eludes_detection == 1.0);
  }
  SUBCASE("ascending ranks the most negative first") {
    std::vector<double> scores = {5, -9, 2, 3, -1, 4};
    auto r = pri_rank(scores, labels, 2, true);
    CHECK(r.false_accusation == 0.0);
  }
  SUBCASE("ties go to the lower row") {
    std::vector<double> scores = {1, 1, 1, 1, 1, 1};
    auto r = pri_rank(scores, labels, 2, false);
    CHECK(r.false_accusation == 0.5);
    CHECK(r.eludes_detection == 0.5);
  }
  SUBCASE("errors") {
    std::vector<double> scores(6, 0.0);
    CHECK_THROWS_AS(pri_rank(scores, labels, 7, false), Error);
    std::vector<ClassLabel> benign(6, ClassLabel::benign);
    try {
      pri_rank(scores, benign, 2, false);
      FAIL("expected NoThreats");
    } catch (const Error &e) {
      CHECK(e.code() == Errc::no_threats);
    }
  }
}

TEST_CASE("lowering the budget never lowers eludes-detection") {
  testgen::Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = static_cast<std::size_t>(g.integer(5, 60));
    std::vector<double> scores(n);
    std::vector<ClassLabel> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = g.integer(0, 6);
      labels[i] = kAllClasses[g.index(kNumClasses)];
    }
    labels[0] = ClassLabel::saboteur;
    double prev = -1.0;
    for (std::size_t k = n; k >= 1; --k) {
      auto r = pri_rank(scores, labels, k, false);
      CHECK(r.eludes_detection >= prev);
      prev = r.eludes_detection;
    }
  }
}

TEST_CASE("pri_baseline uses the indicator column") {
  auto t = DatasetTable::with_feature_columns();
  std::vector<double> row(kNumFeatures, 0.0);
  for (int i = 0; i < 10; ++i) {
    row[feature_index(Feature::file_freq)] = i;
    row[feature_index(Feature::web_sentiment)] = -i;
    t.add_row({"U" + std::to_string(i), 1}, row, i >= 8 ? ClassLabel::leaker : ClassLabel::benign);
  }
  auto r = pri_baseline(t, PriIndicator::file_freq, 2);
  CHECK(r.false_accusation == 0.0);
  CHECK(r.metric == "file_freq");
  auto w = pri_baseline(t, PriIndicator::web_sentiment, 2);
  CHECK(w.false_accusation == 0.0);
  std::vector<double> override_scores(10, 0.0);
  override_scores[0] = 5;
  auto o = pri_baseline(t, PriIndicator::email_compete, 1, override_scores);
  CHECK(o.false_accusation == 1.0);
  CHECK(o.eludes_detection == 1.0);
  CHECK_THROWS_AS(pri_baseline(t, PriIndicator::file_freq, 11), Error);
}

TEST_CASE("benchmark ranking, timeout and reports") {
  testgen::Gen g(3);
  auto t = g.table(30, 4, 3);
  while (t.class_counts()[0] < 10 || t.class_counts()[2] < 10)
    t = g.table(30, 4, 3);
  std::vector<ClassifierSpec> specs = {{Algorithm::cart, {}, 1}, {Algorithm::gaussian_nb, {}, 1},
                                       {Algorithm::knn, {}, 1}};
  SplitPlan plan{3, 1, 9, true};
  auto run = run_benchmark(specs, t, plan);
  REQUIRE(run.results.size() == 3);
  for (std::size_t i = 1; i < run.results.size(); ++i)
    CHECK(run.results[i - 1].accuracy >= run.results[i].accuracy);
  double top = 0.0;
  for (const auto &r : run.results)
    top = std::max(top, r.time_score);
  CHECK(top == 1.0);

  auto one = run_benchmark(std::span(specs).first(1), t, plan);
  REQUIRE(one.results.size() == 1);
  CHECK(one.results[0].time_score == 1.0);

  BenchOptions opt;
  opt.timeout_seconds = 0.0;
  auto timed = run_benchmark(std::span(specs).first(1), t, plan, opt);
  CHECK(timed.results.empty());
  REQUIRE(timed.exclusions.size() == 1);
  CHECK(timed.exclusions[0].method == "cart");

  auto dir = std::filesystem::temp_directory_path() / "itd_bench_reports";
  std::filesystem::remove_all(dir);
  ReportInput in;
  in.run = &run;
  emit_reports(in, dir);
  std::ifstream ranking(dir / "ranking.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(ranking, line))
    ++lines;
  CHECK(lines == 4);
  std::ifstream scatter(dir / "scatter.csv");
  std::getline(scatter, line);
  CHECK(line == "method,family,accuracy,time_score");
  CHECK(std::filesystem::exists(dir / "report.md"));

  ReportInput tin;
  tin.run = &timed;
  emit_reports(tin, dir);
  std::stringstream md;
  md << std::ifstream(dir / "report.md").rdbuf();
  CHECK(md.str().find("## Exclusions") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("jobs do not change results") {
  testgen::Gen g(8);
  auto t = g.table(25, 3, 4);
  while (t.class_counts()[0] < 6 || t.class_counts()[1] < 6)
    t = g.table(25, 3, 4);
  std::vector<ClassifierSpec> specs = {{Algorithm::random_forest, {{"trees", 10}}, 1}};
  SplitPlan plan{3, 2, 4, true};
  BenchOptions serial, parallel;
  parallel.jobs = 3;
  auto a = run_benchmark(specs, t, plan, serial);
  auto b = run_benchmark(specs, t, plan, parallel);
  REQUIRE(a.results.size() == 1);
  REQUIRE(b.results.size() == 1);
  CHECK(a.results[0].accuracy == b.results[0].accuracy);
  CHECK(a.matrices[0] == b.matrices[0]);
}

}
