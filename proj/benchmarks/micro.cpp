#include "itd/classifiers/classifier.hpp"
#include "itd/corpus.hpp"
#include "itd/features.hpp"
#include "itd/fixtures.hpp"
#include "itd/sampling.hpp"
#include "itd/synthgen.hpp"

#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

using namespace itd;

namespace {

struct Small {
  GenConfig cfg;
  Roster roster;
  std::vector<LogEvent> events;
  DatasetTable table;

  Small() {
    cfg.n_employees = 100;
    cfg.n_months = 6;
    cfg.seed = 7;
    auto g = generate_events(cfg, [&](LogEvent &&e) { events.push_back(std::move(e)); });
    roster = g.roster;
    table = attach_labels(extract(events, roster, fixtures::domains(), fixtures::lexicon(),
                                  fixtures::names(), {{1, cfg.n_months}, RowPolicy::fail_fast}),
                          g.truth.labels);
  }
};

const Small &small() {
  static const Small s;
  return s;
}

std::string serialized(ActivityKind kind) {
  std::string text;
  append_header(text, kind);
  for (const auto &e : small().events)
    if (kind_of(e) == kind)
      append_event(text, e);
  return text;
}

void BM_ParseWeb(benchmark::State &state) {
  const auto text = serialized(ActivityKind::web);
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_log_stream(in, ActivityKind::web));
  }
  state.SetBytesProcessed(std::int64_t(state.iterations()) * std::int64_t(text.size()));
}
BENCHMARK(BM_ParseWeb)->Unit(benchmark::kMillisecond);

void BM_ParseEmail(benchmark::State &state) {
  const auto text = serialized(ActivityKind::email);
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_log_stream(in, ActivityKind::email));
  }
  state.SetBytesProcessed(std::int64_t(state.iterations()) * std::int64_t(text.size()));
}
BENCHMARK(BM_ParseEmail)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State &state) {
  const auto &s = small();
  const auto domains = fixtures::domains();
  const auto lexicon = fixtures::lexicon();
  const auto names = fixtures::names();
  for (auto _ : state)
    benchmark::DoNotOptimize(extract(s.events, s.roster, domains, lexicon, names,
                                     {{1, s.cfg.n_months}, RowPolicy::fail_fast}));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(s.events.size()));
}
BENCHMARK(BM_Extract)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State &state, Algorithm a) {
  const auto train = oversample(small().table, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(fit({a, {}, 7}, train));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(train.rows()));
}
BENCHMARK_CAPTURE(BM_Fit, cart, Algorithm::cart)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, random_forest, Algorithm::random_forest)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, gaussian_nb, Algorithm::gaussian_nb)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State &state) {
  const auto &t = small().table;
  const auto model = fit({Algorithm::random_forest, {}, 7}, oversample(t, 7));
  for (auto _ : state)
    benchmark::DoNotOptimize(predict(model, t));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(t.rows()));
}
BENCHMARK(BM_PredictForest)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
