#include "itd/classifiers/classifier.hpp"
#include "itd/classifiers/model_io.hpp"
#include "itd/classifiers/rules.hpp"
#include "itd/errors.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace itd;

namespace {

DatasetTable one_feature(std::vector<std::pair<double, ClassLabel>> rows) {
  DatasetTable t({"x"});
  int i = 0;
  for (auto [x, c] : rows)
    t.add_row({"U", i++}, std::span<const double>(&x, 1), c);
  t.set_labeled(true);
  return t;
}

DatasetTable blobs(std::uint64_t seed, std::size_t per_class, std::size_t d, double spread) {
  testgen::Gen g(seed);
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < d; ++j)
    cols.push_back("f" + std::to_string(j));
  DatasetTable t(cols);
  std::vector<double> row(d);
  int id = 0;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t j = 0; j < d; ++j)
        row[j] = (j == c ? 4.0 : 0.0) + g.real(-spread, spread);
      t.add_row({"U", id++}, row, kAllClasses[c]);
    }
  t.set_labeled(true);
  return t;
}

double training_accuracy(const TrainedModel &m, const DatasetTable &t) {
  auto p = predict(m, t);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    hit += p.labels[i] == t.label(i);
  return double(hit) / double(t.rows());
}

} // namespace

TEST_SUITE("classifiers") {

TEST_CASE("gini") {
  std::vector<double> pure = {10, 0, 0, 0, 0};
  std::vector<double> even = {5, 5};
  std::vector<double> five = {1, 1, 1, 1, 1};
  CHECK(gini(pure) == 0.0);
  CHECK(gini(even) == doctest::Approx(0.5));
  CHECK(gini(five) == doctest::Approx(1.0 - 5 * 0.04));
  std::vector<double> zero = {0, 0};
  CHECK_THROWS_AS(gini(zero), Error);
}

TEST_CASE("algorithm ids and defaults") {
  CHECK(all_algorithms().size() == 9);
  for (auto a : all_algorithms()) {
    CHECK(parse_algorithm(algorithm_name(a)) == a);
    ClassifierSpec s{a, {}, 1};
    CHECK_NOTHROW(s.resolved());
  }
  CHECK_FALSE(parse_algorithm("svm"));
  CHECK(family_name(Algorithm::random_forest) == "Bagging");
  CHECK(family_name(Algorithm::cart) == "Decision Tree");
  ClassifierSpec bad{Algorithm::knn, {{"depth", 3}}, 1};
  CHECK_THROWS_AS(bad.resolved(), Error);
  CHECK(default_params(Algorithm::random_forest).at("trees") == 100);
}

TEST_CASE("cart finds a single separating threshold") {
  auto t = one_feature({{1, ClassLabel::benign}, {2, ClassLabel::benign},
                        {7, ClassLabel::thief}, {8, ClassLabel::thief}});
  auto m = fit({Algorithm::cart, {}, 1}, t);
  const auto &tree = std::get<EnsembleModel>(m.state).trees.at(0);
  CHECK(tree.depth() == 1);
  CHECK(tree.nodes()[0].threshold == 4.5);
  CHECK(training_accuracy(m, t) == 1.0);
  auto imp = feature_importance(m);
  CHECK(imp[0] == 1.0);
}

TEST_CASE("importance concentrates on the split feature") {
  DatasetTable t({"a", "b", "c", "d"});
  for (int i = 0; i < 20; ++i) {
    double row[] = {1.0, 2.0, 3.0, i < 10 ? 0.0 : 1.0};
    t.add_row({"U", i}, row, i < 10 ? ClassLabel::benign : ClassLabel::leaker);
  }
  auto m = fit({Algorithm::cart, {}, 1}, t);
  auto imp = feature_importance(m);
  CHECK(imp[3] == 1.0);
  CHECK(imp[0] == 0.0);
  auto f = fit({Algorithm::random_forest, {{"trees", 20}}, 1}, blobs(3, 30, 5, 2.0));
  auto fi = feature_importance(f);
  CHECK(std::accumulate(fi.begin(), fi.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(feature_importance(fit({Algorithm::knn, {}, 1}, t)), Error);
}

TEST_CASE("degenerate and empty inputs") {
  auto single = one_feature({{1, ClassLabel::thief}, {2, ClassLabel::thief}});
  auto m = fit({Algorithm::random_forest, {}, 1}, single);
  CHECK(m.degenerate);
  double probe = 100.0;
  CHECK(m.predict_one(std::span<const double>(&probe, 1)) == ClassLabel::thief);
  DatasetTable empty({"x"});
  CHECK_THROWS_AS(fit({Algorithm::cart, {}, 1}, empty), Error);
}

TEST_CASE("predict rejects a different schema") {
  auto t = blobs(1, 10, 3, 1.0);
  auto m = fit({Algorithm::gaussian_nb, {}, 1}, t);
  auto other = t.project(std::vector<std::size_t>{0, 1});
  try {
    predict(m, other);
    FAIL("expected SchemaMismatch");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::schema_mismatch);
  }
}

TEST_CASE("every algorithm learns separated blobs and scores sum to one") {
  auto train = blobs(5, 40, 4, 1.0);
  auto test = blobs(6, 20, 4, 1.0);
  for (auto a : all_algorithms()) {
    CAPTURE(algorithm_name(a));
    auto m = fit({a, {}, 3}, train);
    auto p = predict(m, test);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < test.rows(); ++i) {
      hit += p.labels[i] == test.label(i);
      double s = 0.0;
      for (double v : p.scores[i]) {
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(double(hit) / double(test.rows()) >= 0.9);
  }
}

TEST_CASE("fit is deterministic in the seed") {
  auto train = blobs(9, 30, 4, 3.0);
  auto probe = blobs(10, 30, 4, 3.0);
  for (auto a : all_algorithms()) {
    CAPTURE(algorithm_name(a));
    auto p1 = predict(fit({a, {}, 42}, train), probe);
    auto p2 = predict(fit({a, {}, 42}, train), probe);
    CHECK(p1.labels == p2.labels);
    CHECK(p1.scores == p2.scores);
  }
}

TEST_CASE("knn nearest self and affine invariance") {
  auto t = one_feature({{0, ClassLabel::benign}, {10, ClassLabel::thief}, {20, ClassLabel::leaker}});
  auto m = fit({Algorithm::knn, {{"k", 1}}, 1}, t);
  double x = 10.0;
  CHECK(m.predict_one(std::span<const double>(&x, 1)) == ClassLabel::thief);

  auto train = blobs(12, 25, 3, 3.0);
  auto probe = blobs(13, 25, 3, 3.0);
  auto rescale = [](DatasetTable t) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      t.at(i, 0) = 1000.0 * t.at(i, 0) + 7.0;
      t.at(i, 2) = 0.01 * t.at(i, 2) - 3.0;
    }
    return t;
  };
  auto a = predict(fit({Algorithm::knn, {}, 1}, train), probe);
  auto b = predict(fit({Algorithm::knn, {}, 1}, rescale(train)), rescale(probe));
  CHECK(a.labels == b.labels);
}

TEST_CASE("gaussian naive bayes picks the nearer mean") {
  testgen::Gen g(4);
  std::vector<std::pair<double, ClassLabel>> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({g.real(-1, 1), ClassLabel::benign});
    rows.push_back({10 + g.real(-1, 1), ClassLabel::saboteur});
  }
  auto m = fit({Algorithm::gaussian_nb, {}, 1}, one_feature(rows));
  double at_benign = 0.0, at_sab = 10.0;
  CHECK(m.predict_one(std::span<const double>(&at_benign, 1)) == ClassLabel::benign);
  CHECK(m.predict_one(std::span<const double>(&at_sab, 1)) == ClassLabel::saboteur);
}

TEST_CASE("tree leaves contain the training row's class") {
  testgen::Gen g(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = g.table(20, 3, 3);
    auto m = fit({Algorithm::random_forest, {{"trees", 5}}, g.seed()}, t);
    if (m.degenerate)
      continue;
    const auto &e = std::get<EnsembleModel>(m.state);
    for (const auto &tree : e.trees)
      for (std::size_t i = 0; i < t.rows(); ++i) {
        const auto &leaf = tree.leaf(t.row(i));
        double sum = std::accumulate(leaf.dist.begin(), leaf.dist.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0));
      }
    auto single = fit({Algorithm::cart, {}, g.seed()}, t);
    const auto &tree = std::get<EnsembleModel>(single.state).trees[0];
    for (std::size_t i = 0; i < t.rows(); ++i)
      CHECK(tree.leaf(t.row(i)).dist[class_index(t.label(i))] > 0.0);
  }
}

TEST_CASE("unscaled inputs hurt the mlp") {
  testgen::Gen g(31);
  DatasetTable train({"a", "b", "c"}), test({"a", "b", "c"});
  auto add = [&](DatasetTable &t, int n) {
    for (int i = 0; i < n; ++i) {
      std::size_t c = g.index(3);
      double row[] = {g.real(0, 1000) + 300.0 * double(c), g.real(0, 1000),
                      g.real(0, 5) + 2.0 * double(c)};
      t.add_row({"U", i}, row, kAllClasses[c]);
    }
  };
  add(train, 600);
  add(test, 600);
  auto raw = fit({Algorithm::shallow_mlp, {}, 5}, train);
  auto scaled = fit({Algorithm::shallow_mlp, {{"standardize", 1}}, 5}, train);
  CHECK(training_accuracy(scaled, test) > training_accuracy(raw, test));
}

TEST_CASE("rules reproduce forest predictions") {
  auto train = blobs(21, 30, 4, 3.0);
  auto probe = blobs(22, 50, 4, 4.0);
  for (auto a : {Algorithm::cart, Algorithm::random_forest, Algorithm::extra_trees,
                 Algorithm::bagged_cart, Algorithm::adaboost}) {
    CAPTURE(algorithm_name(a));
    Hyperparams small;
    if (a == Algorithm::random_forest || a == Algorithm::extra_trees || a == Algorithm::bagged_cart)
      small["trees"] = 15;
    auto m = fit({a, small, 2}, train);
    auto rules = extract_rules(m);
    const auto &e = std::get<EnsembleModel>(m.state);
    std::size_t leaves = 0;
    for (const auto &t : e.trees)
      leaves += t.leaf_count();
    CHECK(rules.size() == leaves);
    auto p = predict(m, probe);
    for (std::size_t i = 0; i < probe.rows(); ++i)
      CHECK(classify_by_rules(rules, probe.row(i)) == p.labels[i]);
    for (const auto &r : rules) {
      CHECK(r.confidence >= 0.0);
      CHECK(r.confidence <= 1.0);
    }
  }
}

TEST_CASE("rule shapes and text") {
  auto t = one_feature({{1, ClassLabel::benign}, {2, ClassLabel::benign},
                        {7, ClassLabel::thief}, {8, ClassLabel::thief}});
  auto m = fit({Algorithm::cart, {}, 1}, t);
  auto rules = extract_rules(m);
  REQUIRE(rules.size() == 2);
  CHECK(rule_text(rules[0], m.columns) == "IF x <= 4.5 THEN Benign");
  CHECK(rule_text(rules[1], m.columns) == "IF x > 4.5 THEN Thief");
  CHECK(rules[0].support == 2.0);
  std::ostringstream csv;
  write_rules_csv(csv, rules, m.columns);
  CHECK(csv.str() == "rule_id,conditions,label,support,confidence\n"
                     "1,x <= 4.5,Benign,2,1\n"
                     "2,x > 4.5,Thief,2,1\n");
  CHECK_THROWS_AS(extract_rules(fit({Algorithm::knn, {}, 1}, t)), Error);
}

TEST_CASE("model save and load round-trip") {
  auto train = blobs(41, 20, 3, 3.0);
  auto probe = blobs(42, 20, 3, 4.0);
  for (auto a : all_algorithms()) {
    CAPTURE(algorithm_name(a));
    auto m = fit({a, {}, 8}, train);
    std::stringstream buf;
    save_model(buf, m);
    auto back = load_model(buf);
    CHECK(back.spec == m.spec);
    CHECK(back.columns == m.columns);
    auto p1 = predict(m, probe);
    auto p2 = predict(back, probe);
    CHECK(p1.labels == p2.labels);
    CHECK(p1.scores == p2.scores);
    std::stringstream again;
    save_model(again, back);
    std::stringstream first;
    save_model(first, m);
    CHECK(again.str() == first.str());
  }
  std::stringstream junk("itd-model 2\n");
  CHECK_THROWS_AS(load_model(junk), Error);
  std::stringstream truncated("itd-model 1\nalgorithm cart\nseed 1\n");
  CHECK_THROWS_AS(load_model(truncated), Error);
}

}
