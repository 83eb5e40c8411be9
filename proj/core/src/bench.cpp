#include "itd/bench.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

namespace itd {

ConfusionMatrix ConfusionMatrix::from_counts(std::size_t n, std::vector<double> counts) {
  if (counts.size() != n * n)
    throw Error(Errc::schema_mismatch, "confusion counts are not square");
  for (double c : counts)
    if (!(c >= 0.0))
      throw Error(Errc::invalid_config, "confusion counts must be non-negative");
  ConfusionMatrix cm(n);
  cm.counts_ = std::move(counts);
  return cm;
}

double ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

double ConfusionMatrix::row_sum(std::size_t actual) const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    s += at(actual, j);
  return s;
}

double ConfusionMatrix::col_sum(std::size_t predicted) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    s += at(i, predicted);
  return s;
}

ConfusionMatrix &ConfusionMatrix::operator+=(const ConfusionMatrix &o) {
  if (o.n_ != n_)
    throw Error(Errc::schema_mismatch, "confusion matrix sizes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i)
    counts_[i] += o.counts_[i];
  return *this;
}

double accuracy(const ConfusionMatrix &cm) {
  double total = cm.total();
  if (total <= 0.0)
    throw Error(Errc::empty_matrix, "confusion matrix is empty");
  double trace = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i)
    trace += cm.at(i, i);
  return trace / total;
}

double cohen_kappa(const ConfusionMatrix &cm) {
  double total = cm.total();
  if (total <= 0.0)
    throw Error(Errc::empty_matrix, "confusion matrix is empty");
  double po = accuracy(cm);
  double pe = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i)
    pe += cm.row_sum(i) * cm.col_sum(i);
  pe /= total * total;
  if (pe >= 1.0)
    return 0.0;
  return (po - pe) / (1.0 - pe);
}

std::vector<double> time_score(std::span<const double> seconds) {
  if (seconds.empty())
    throw Error(Errc::non_positive_time, "no timings");
  std::vector<double> out;
  out.reserve(seconds.size());
  double max = 0.0;
  for (double t : seconds) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw Error(Errc::non_positive_time, "timing must be positive");
    out.push_back(std::log1p(t * 1000.0));
    max = std::max(max, out.back());
  }
  for (auto &v : out)
    v /= max;
  return out;
}

std::string_view sampling_name(SamplingMode m) {
  switch (m) {
  case SamplingMode::none:
    return "none";
  case SamplingMode::over:
    return "over";
  case SamplingMode::under:
    return "under";
  }
  return "none";
}

std::optional<SamplingMode> parse_sampling(std::string_view name) {
  for (auto m : {SamplingMode::none, SamplingMode::over, SamplingMode::under})
    if (sampling_name(m) == name)
      return m;
  return std::nullopt;
}

DatasetTable balance(const DatasetTable &train, SamplingMode mode, std::size_t n_per_class,
                     std::uint64_t seed) {
  switch (mode) {
  case SamplingMode::none:
    return train;
  case SamplingMode::over:
    return oversample(train, seed);
  case SamplingMode::under: {
    std::size_t smallest = n_per_class;
    for (auto c : train.class_counts())
      if (c > 0)
        smallest = std::min(smallest, c);
    return undersample(train, smallest, seed);
  }
  }
  return train;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ConfusionMatrix confusion(const Predictions &p, const DatasetTable &test) {
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < test.rows(); ++i)
    cm.add(test.label(i), p.labels[i]);
  return cm;
}

struct FoldOutcome {
  double seconds = 0.0;
  bool non_convergence = false;
  bool done = false;
  ConfusionMatrix cm;
  std::string error;
};

} // namespace

ConfusionMatrix evaluate_holdout(const ClassifierSpec &spec, const DatasetTable &train,
                                 const DatasetTable &test) {
  auto model = fit(spec, train);
  return confusion(predict(model, test), test);
}

BenchmarkRun run_benchmark(std::span<const ClassifierSpec> specs, const DatasetTable &table,
                           const SplitPlan &plan, const BenchOptions &options) {
  auto folds = kfold(table, plan);
  std::vector<DatasetTable> trains, tests;
  trains.reserve(folds.size());
  tests.reserve(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    trains.push_back(balance(table.select(folds[f].train), options.sampling, options.n_per_class,
                             derive_seed(plan.seed, {6, f})));
    tests.push_back(table.select(folds[f].test));
  }

  BenchmarkRun run;
  std::vector<ConfusionMatrix> matrices;
  for (const auto &spec : specs) {
    BenchmarkResult res;
    res.method = std::string(algorithm_name(spec.algorithm));
    res.family = std::string(spec.family());
    std::vector<FoldOutcome> outcomes(folds.size());
    auto eval = [&](std::size_t f) {
      auto &o = outcomes[f];
      try {
        auto start = std::chrono::steady_clock::now();
        auto model = fit(spec, trains[f]);
        auto pred = predict(model, tests[f]);
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.non_convergence = model.non_convergence;
        o.cm = confusion(pred, tests[f]);
        o.done = true;
      } catch (const std::exception &e) {
        o.error = e.what();
      }
    };
    std::optional<std::string> failure;
    if (options.jobs <= 1) {
      double spent = 0.0;
      for (std::size_t f = 0; f < folds.size() && !failure; ++f) {
        eval(f);
        spent += outcomes[f].seconds;
        if (!outcomes[f].error.empty())
          failure = "failed: " + outcomes[f].error;
        else if (spent > options.timeout_seconds)
          failure = "timeout after " + std::to_string(f + 1) + " folds";
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < std::min(options.jobs, folds.size()); ++w)
        pool.emplace_back([&] {
          for (std::size_t f; (f = next++) < folds.size();)
            eval(f);
        });
      for (auto &t : pool)
        t.join();
      double spent = 0.0;
      for (const auto &o : outcomes) {
        spent += o.seconds;
        if (!failure && !o.error.empty())
          failure = "failed: " + o.error;
      }
      if (!failure && spent > options.timeout_seconds)
        failure = "timeout";
    }
    if (failure) {
      run.exclusions.push_back({res.method, *failure});
      continue;
    }
    ConfusionMatrix pooled;
    std::vector<double> accs, kappas;
    for (const auto &o : outcomes) {
      res.seconds += o.seconds;
      res.non_convergence |= o.non_convergence;
      accs.push_back(accuracy(o.cm));
      kappas.push_back(cohen_kappa(o.cm));
      pooled += o.cm;
    }
    res.folds = folds.size();
    res.accuracy = median(accs);
    res.kappa = median(kappas);
    res.seconds = std::max(res.seconds, 1e-9);
    run.results.push_back(std::move(res));
    matrices.push_back(std::move(pooled));
  }

  if (!run.results.empty()) {
    std::vector<double> secs;
    for (const auto &r : run.results)
      secs.push_back(r.seconds);
    auto scores = time_score(secs);
    for (std::size_t i = 0; i < scores.size(); ++i)
      run.results[i].time_score = scores[i];
  }
  std::vector<std::size_t> order(run.results.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &x = run.results[a];
    const auto &y = run.results[b];
    if (x.accuracy != y.accuracy)
      return x.accuracy > y.accuracy;
    return x.method < y.method;
  });
  std::vector<BenchmarkResult> sorted;
  for (auto i : order) {
    sorted.push_back(run.results[i]);
    run.matrices.push_back(matrices[i]);
  }
  run.results = std::move(sorted);
  return run;
}

OneVsBenign one_vs_benign_matrix(const ConfusionMatrix &cm, ClassLabel threat) {
  if (!is_threat(threat) && threat != ClassLabel::departed)
    throw Error(Errc::invalid_config, "one-vs-benign needs a non-benign class");
  const std::size_t b = class_index(ClassLabel::benign);
  const std::size_t c = class_index(threat);
  if (cm.row_sum(c) <= 0.0)
    throw Error(Errc::no_rows_for_class,
                "no " + std::string(label_name(threat)) + " rows to evaluate");
  OneVsBenign out;
  out.threat = threat;
  for (std::size_t a = 0; a < 2; ++a) {
    std::size_t actual = a == 0 ? b : c;
    double positive = cm.at(actual, c);
    out.counts[a][1] = positive;
    out.counts[a][0] = cm.row_sum(actual) - positive;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    double row = out.counts[a][0] + out.counts[a][1];
    total += row;
    for (std::size_t p = 0; p < 2; ++p)
      out.percent[a][p] = row > 0.0 ? 100.0 * out.counts[a][p] / row : 0.0;
  }
  out.false_assignment = (out.counts[0][1] + out.counts[1][0]) / total;
  return out;
}

OneVsBenign one_vs_benign_matrix(std::span<const ClassLabel> predicted,
                                 std::span<const ClassLabel> truth, ClassLabel threat) {
  if (predicted.size() != truth.size())
    throw Error(Errc::schema_mismatch, "prediction and truth lengths differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i)
    cm.add(truth[i], predicted[i]);
  return one_vs_benign_matrix(cm, threat);
}

namespace {

constexpr std::array<PriIndicator, 6> kPri = {
    PriIndicator::file_freq,     PriIndicator::risk_sabotage, PriIndicator::unauthorized_log,
    PriIndicator::email_compete, PriIndicator::device_freq,   PriIndicator::web_sentiment};

} // namespace

std::span<const PriIndicator> all_pri_indicators() { return kPri; }

std::string_view pri_name(PriIndicator p) { return feature_name(pri_feature(p)); }

std::string_view pri_description(PriIndicator p) {
  switch (p) {
  case PriIndicator::file_freq:
    return "Collection of large quantities of files";
  case PriIndicator::risk_sabotage:
    return "Antivirus/malware alerts";
  case PriIndicator::unauthorized_log:
    return "Access request denials";
  case PriIndicator::email_compete:
    return "Emails with attachments sent to suspicious recipients";
  case PriIndicator::device_freq:
    return "Removable media alerts and anomalies";
  case PriIndicator::web_sentiment:
    return "Social media anomalies";
  }
  return "";
}

Feature pri_feature(PriIndicator p) {
  switch (p) {
  case PriIndicator::file_freq:
    return Feature::file_freq;
  case PriIndicator::risk_sabotage:
    return Feature::risk_sabotage;
  case PriIndicator::unauthorized_log:
    return Feature::unauthorized_log;
  case PriIndicator::email_compete:
    return Feature::email_compete;
  case PriIndicator::device_freq:
    return Feature::device_freq;
  case PriIndicator::web_sentiment:
    return Feature::web_sentiment;
  }
  return Feature::file_freq;
}

std::optional<PriIndicator> parse_pri(std::string_view name) {
  for (auto p : kPri)
    if (pri_name(p) == name)
      return p;
  return std::nullopt;
}

PriResult pri_rank(std::span<const double> scores, std::span<const ClassLabel> labels,
                   std::size_t k, bool ascending) {
  if (scores.size() != labels.size())
    throw Error(Errc::schema_mismatch, "score and label lengths differ");
  if (k == 0 || k > scores.size())
    throw Error(Errc::budget_exceeds_rows, "budget " + std::to_string(k) + " for " +
                                               std::to_string(scores.size()) + " rows");
  std::size_t threats = 0;
  for (auto l : labels)
    threats += is_threat(l);
  if (threats == 0)
    throw Error(Errc::no_threats, "no threat rows to detect");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b])
                        return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
                      return a < b;
                    });
  std::size_t false_flags = 0, caught = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (is_threat(labels[order[i]]))
      ++caught;
    else
      ++false_flags;
  }
  PriResult r;
  r.k = k;
  r.false_accusation = static_cast<double>(false_flags) / static_cast<double>(k);
  r.eludes_detection = static_cast<double>(threats - caught) / static_cast<double>(threats);
  return r;
}

PriResult pri_baseline(const DatasetTable &table, PriIndicator indicator, std::size_t k,
                       std::span<const double> override_scores) {
  std::vector<double> column;
  std::string metric;
  if (!override_scores.empty()) {
    if (override_scores.size() != table.rows())
      throw Error(Errc::schema_mismatch, "override scores do not match the table rows");
    column.assign(override_scores.begin(), override_scores.end());
    metric = std::string(pri_name(indicator)) + "_attachments";
  } else {
    auto j = table.column_index(feature_name(pri_feature(indicator)));
    if (!j)
      throw Error(Errc::schema_mismatch,
                  "table lacks column " + std::string(pri_name(indicator)));
    column = table.column(*j);
    metric = std::string(pri_name(indicator));
  }
  auto r = pri_rank(column, table.labels(), k, indicator == PriIndicator::web_sentiment);
  r.indicator = std::string(pri_description(indicator));
  r.metric = std::move(metric);
  return r;
}

namespace {

std::string fmt(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_failure, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out)
    throw Error(Errc::io_failure, "write failed for " + path.string());
}

std::string csv_text(std::string_view s) {
  std::string out;
  append_csv_field(out, s);
  return out;
}

} // namespace

void emit_reports(const ReportInput &input, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(Errc::io_failure, "cannot create " + dir.string() + ": " + ec.message());
  static const BenchmarkRun empty_run;
  const BenchmarkRun &run = input.run ? *input.run : empty_run;

  std::string ranking = "rank,method,family,accuracy,kappa,folds,time_seconds,time_score\n";
  std::string scatter = "method,family,accuracy,time_score\n";
  for (std::size_t i = 0; i < run.results.size(); ++i) {
    const auto &r = run.results[i];
    ranking += std::to_string(i + 1) + ',' + r.method + ',' + csv_text(r.family) + ',' +
               fmt(r.accuracy) + ',' + fmt(r.kappa) + ',' + std::to_string(r.folds) + ',' +
               fmt(r.seconds) + ',' + fmt(r.time_score) + '\n';
    scatter += r.method + ',' + csv_text(r.family) + ',' + fmt(r.accuracy) + ',' +
               fmt(r.time_score) + '\n';
  }
  write_file(dir / "ranking.csv", ranking);
  write_file(dir / "scatter.csv", scatter);

  std::string exclusions = "method,reason\n";
  for (const auto &e : run.exclusions)
    exclusions += e.method + ',' + csv_text(e.reason) + '\n';
  write_file(dir / "exclusions.csv", exclusions);

  const ConfusionMatrix *cm = nullptr;
  for (std::size_t i = 0; i < run.results.size(); ++i)
    if (run.results[i].method == input.confusion_method)
      cm = &run.matrices[i];
  if (!cm && !run.results.empty())
    cm = &run.matrices.front();
  if (cm) {
    for (auto c : kAllClasses) {
      if (c == ClassLabel::benign || cm->row_sum(class_index(c)) <= 0.0)
        continue;
      auto m = one_vs_benign_matrix(*cm, c);
      std::string text = "actual,predicted,count,percent\n";
      std::array<std::string_view, 2> names = {label_name(ClassLabel::benign), label_name(c)};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t p = 0; p < 2; ++p)
          text += std::string(names[a]) + ',' + std::string(names[p]) + ',' +
                  fmt(m.counts[a][p]) + ',' + fmt(m.percent[a][p]) + '\n';
      write_file(dir / ("confusion_" + std::string(label_name(c)) + ".csv"), text);
    }
  }

  if (!input.pri.empty())
    write_pri_csv(dir / "pri.csv", input.pri);
  render_report(dir, input.title);
}

void write_pri_csv(const std::filesystem::path &path, std::span<const PriResult> pri) {
  std::string text = "indicator,metric,k,false_accusation,eludes_detection\n";
  for (const auto &p : pri)
    text += csv_text(p.indicator) + ',' + p.metric + ',' + std::to_string(p.k) + ',' +
            fmt(p.false_accusation) + ',' + fmt(p.eludes_detection) + '\n';
  write_file(path, text);
}

namespace {

using CsvTable = std::vector<std::vector<std::string>>;

std::optional<CsvTable> read_csv_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  CsvTable out;
  CsvReader r(in);
  while (r.next()) {
    std::vector<std::string> row;
    for (std::size_t i = 0; i < r.size(); ++i)
      row.emplace_back(r.field(i));
    out.push_back(std::move(row));
  }
  if (out.empty())
    return std::nullopt;
  return out;
}

std::string cell(const std::string &v, bool percent = false) {
  auto n = parse_number(v);
  if (!n)
    return v;
  if (percent)
    return fixed(100.0 * *n, 1) + "%";
  if (*n == std::floor(*n) && std::abs(*n) < 1e15)
    return fixed(*n, 0);
  return fixed(*n, 4);
}

std::string md_row(const std::vector<std::string> &cells) {
  std::string s = "|";
  for (const auto &c : cells)
    s += " " + c + " |";
  return s + "\n";
}

std::string md_rule(std::size_t n) {
  std::string s = "|";
  for (std::size_t i = 0; i < n; ++i)
    s += "---|";
  return s + "\n";
}

std::string md_table(const CsvTable &t, const std::vector<std::size_t> &percent_cols = {}) {
  std::string s = md_row(t.front()) + md_rule(t.front().size());
  for (std::size_t r = 1; r < t.size(); ++r) {
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < t[r].size(); ++c) {
      bool pct = std::find(percent_cols.begin(), percent_cols.end(), c) != percent_cols.end();
      cells.push_back(cell(t[r][c], pct));
    }
    s += md_row(cells);
  }
  return s;
}

} // namespace

void render_report(const std::filesystem::path &dir, const std::string &title) {
  std::string md = "# " + title + "\n";
  if (auto t = read_csv_file(dir / "ranking.csv")) {
    md += "\n## Ranking\n\n" + md_table(*t);
  }
  if (auto t = read_csv_file(dir / "exclusions.csv"); t && t->size() > 1) {
    md += "\n## Exclusions\n\n" + md_table(*t);
  }
  std::string confusion;
  for (auto c : kAllClasses) {
    if (c == ClassLabel::benign)
      continue;
    auto t = read_csv_file(dir / ("confusion_" + std::string(label_name(c)) + ".csv"));
    if (!t || t->size() != 5)
      continue;
    std::array<double, 4> counts{};
    for (std::size_t r = 0; r < 4; ++r)
      counts[r] = (*t)[r + 1].size() > 2 ? parse_number((*t)[r + 1][2]).value_or(0.0) : 0.0;
    double benign = counts[0] + counts[1];
    double threat = counts[2] + counts[3];
    double total = benign + threat;
    auto pct = [](double a, double b) { return b > 0.0 ? fixed(100.0 * a / b, 2) : "0.00"; };
    confusion += md_row({std::string(label_name(c)), pct(counts[0], benign), pct(counts[1], benign),
                         pct(counts[2], threat), pct(counts[3], threat),
                         fixed(total > 0.0 ? (counts[1] + counts[2]) / total : 0.0, 4)});
  }
  if (!confusion.empty()) {
    md += "\n## One-vs-benign confusion\n\n";
    md += md_row({"class", "benign kept %", "benign flagged %", "class missed %", "class caught %",
                  "false assignment"}) +
          md_rule(6) + confusion;
  }
  if (auto t = read_csv_file(dir / "pri.csv")) {
    md += "\n## Single-indicator triage\n\n" + md_table(*t, {3, 4});
  }
  if (auto t = read_csv_file(dir / "boruta_report.csv")) {
    auto rows = *t;
    std::sort(rows.begin() + 1, rows.end(), [](const auto &a, const auto &b) {
      return parse_number(a.back()).value_or(0) < parse_number(b.back()).value_or(0);
    });
    md += "\n## Feature selection\n\n" + md_table(rows);
  }
  if (auto t = read_csv_file(dir / "rules.csv")) {
    md += "\n## Rules\n\n" + std::to_string(t->size() - 1) + " rules extracted.\n";
    std::ifstream in(dir / "rules.txt");
    std::string line;
    std::string sample;
    for (int i = 0; i < 10 && std::getline(in, line); ++i)
      sample += "    " + line + "\n";
    if (!sample.empty())
      md += "\n" + sample;
  }
  write_file(dir / "report.md", md);
}

} // namespace itd
