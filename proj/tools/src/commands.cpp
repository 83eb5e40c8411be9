#include "itd/cli/commands.hpp"

#include "itd/classifiers/model_io.hpp"
#include "itd/classifiers/rules.hpp"
#include "itd/csv.hpp"
#include "itd/errors.hpp"
#include "itd/features.hpp"
#include "itd/fixtures.hpp"
#include "itd/sampling.hpp"
#include "itd/synthgen.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

namespace itd::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSubcommands = {"gen",  "extract", "balance", "boruta", "bench",
                                               "pri",  "rules",   "report",  "all"};

const std::map<std::string, std::vector<std::string>> kCommandKeys = {
    {"gen", {"out", "seed", "employees", "months", "fractions", "post_departure"}},
    {"extract", {"corpus", "out", "months", "lexicon", "domains", "names"}},
    {"balance", {"features", "out", "sample", "n_per_class", "seed"}},
    {"boruta",
     {"features", "out", "seed", "iterations", "alpha", "trees", "boruta_cap", "importance"}},
    {"bench",
     {"features", "out", "sample", "n_per_class", "k", "repeats", "suite", "seed", "timeout",
      "jobs"}},
    {"pri", {"features", "attachments", "out", "budget"}},
    {"rules", {"features", "model", "out", "sample", "n_per_class", "trees", "seed"}},
    {"report", {"out"}},
    {"all",
     {"out", "seed", "employees", "months", "fractions", "post_departure", "lexicon", "domains",
      "names", "sample", "n_per_class", "k", "repeats", "suite", "budget", "timeout",
      "iterations", "alpha", "trees", "boruta_cap", "importance", "jobs"}},
};

const std::map<std::string, std::string> kDescriptions = {
    {"gen", "Generate a synthetic activity corpus with ground truth"},
    {"extract", "Aggregate a corpus into employee-month feature rows"},
    {"balance", "Over- or under-sample a labeled feature table"},
    {"boruta", "Shadow-feature relevance test and importance ranking"},
    {"bench", "Cross-validated classifier suite benchmark"},
    {"pri", "Single-indicator triage baseline"},
    {"rules", "Train a forest and export its decision rules"},
    {"report", "Render report.md from the CSVs in a run directory"},
    {"all", "Run the whole pipeline on one seed"},
};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

fs::path or_default(const fs::path &p, const fs::path &fallback) {
  return p.empty() ? fallback : p;
}

void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(Errc::io_failure, "cannot create " + dir.string() + ": " + ec.message());
}

std::ifstream open_in(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Error(Errc::io_failure, "cannot read " + p.string());
  return in;
}

fs::path attachments_path(const fs::path &features) {
  auto p = features;
  p.replace_extension();
  p += ".attachments.csv";
  return p;
}

DatasetTable load_labeled(const fs::path &path) {
  if (path.empty())
    throw Error(Errc::invalid_config, "--features is required");
  auto t = read_table(path.string());
  if (!t.labeled())
    throw Error(Errc::missing_truth, path.string() + " carries no labels");
  return t;
}

struct Lookups {
  SentimentLexicon lexicon;
  DomainCategoryTable domains;
  NameGenderTable names;
};

Lookups load_lookups(const RunConfig &c) {
  Lookups l;
  if (c.lexicon.empty()) {
    l.lexicon = fixtures::lexicon();
  } else {
    auto in = open_in(c.lexicon);
    l.lexicon = load_lexicon(in);
  }
  if (c.domains.empty()) {
    l.domains = fixtures::domains();
  } else {
    auto in = open_in(c.domains);
    l.domains = load_domain_categories(in);
  }
  if (c.names.empty()) {
    l.names = fixtures::names();
  } else {
    auto in = open_in(c.names);
    l.names = load_name_genders(in);
  }
  return l;
}

// ------------------------------------------------------------ subcommands

void cmd_gen(const RunConfig &c, std::ostream &log) {
  GenConfig g;
  g.n_employees = c.employees;
  g.n_months = c.months;
  g.class_fractions = c.fractions;
  g.post_departure_fraction = c.post_departure;
  g.seed = c.seed;
  g.validate();
  auto out = or_default(c.out, "corpus");
  auto t = Clock::now();
  auto corpus = generate(g, out);
  std::size_t events = 0;
  for (auto n : corpus.truth.event_counts)
    events += n;
  log << "gen: " << events << " events for " << g.n_employees << " employees over "
      << g.n_months << " months in " << since(t) << " s -> " << out.string() << "\n";
}

fs::path cmd_extract(const RunConfig &c, std::ostream &log) {
  if (c.corpus.empty())
    throw Error(Errc::invalid_config, "--corpus is required");
  if (!fs::is_directory(c.corpus))
    throw Error(Errc::io_failure, "corpus directory " + c.corpus.string() + " not found");
  auto out = or_default(c.out, c.corpus / "features.csv");
  auto lookups = load_lookups(c);
  auto roster_in = open_in(c.corpus / "roster.csv");
  auto roster = parse_roster(roster_in);
  int months = c.months;
  if (fs::exists(c.corpus / "manifest.txt")) {
    auto in = open_in(c.corpus / "manifest.txt");
    auto m = read_manifest(in);
    if (m.months > 0)
      months = m.months;
  }
  ExtractOptions opt;
  opt.months = {1, months};
  auto t = Clock::now();
  auto ex = extract_directory(c.corpus, roster, lookups.domains, lookups.lexicon, lookups.names,
                              opt);
  auto table = std::move(ex.table);
  if (fs::exists(c.corpus / "truth.csv")) {
    auto in = open_in(c.corpus / "truth.csv");
    table = attach_labels(std::move(table), read_truth(in));
  }
  if (out.has_parent_path())
    ensure_dir(out.parent_path());
  write_table(out.string(), table);

  std::ofstream side(attachments_path(out), std::ios::binary);
  if (!side)
    throw Error(Errc::io_failure, "cannot write " + attachments_path(out).string());
  std::string buf = "user,month,competitor_attachments\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    append_csv_field(buf, table.key(i).user);
    buf += ',' + std::to_string(table.key(i).month) + ',';
    append_number(buf, ex.competitor_attachments[i]);
    buf += '\n';
  }
  side << buf;
  log << "extract: " << ex.stats.events << " events -> " << table.rows() << " rows in "
      << since(t) << " s -> " << out.string() << "\n";
  return out;
}

void cmd_balance(const RunConfig &c, std::ostream &log) {
  auto table = load_labeled(c.features);
  auto out = or_default(c.out, "balanced.csv");
  DatasetTable balanced;
  switch (c.sample) {
  case SamplingMode::none:
    balanced = table;
    break;
  case SamplingMode::over:
    balanced = oversample(table, c.seed);
    break;
  case SamplingMode::under:
    balanced = undersample(table, c.n_per_class, c.seed);
    break;
  }
  if (out.has_parent_path())
    ensure_dir(out.parent_path());
  write_table(out.string(), balanced);
  log << "balance: " << table.rows() << " -> " << balanced.rows() << " rows ("
      << sampling_name(c.sample) << ") -> " << out.string() << "\n";
}

void cmd_boruta(const RunConfig &c, const DatasetTable &table, const fs::path &out,
                std::ostream &log) {
  BorutaConfig b;
  b.iterations = c.iterations;
  b.alpha = c.alpha;
  b.forest = {Algorithm::random_forest, {{"trees", double(c.trees)}}, c.seed};
  b.importance = c.importance;
  b.seed = c.seed;
  b.validate();
  auto input = c.boruta_cap > 0 ? oversample(cap_classes(table, c.boruta_cap, c.seed), c.seed)
                                : table;
  auto t = Clock::now();
  auto verdict = boruta(input, b);
  ensure_dir(out);
  std::ofstream f(out / "boruta_report.csv", std::ios::binary);
  if (!f)
    throw Error(Errc::io_failure, "cannot write " + (out / "boruta_report.csv").string());
  write_boruta_report(f, verdict);
  std::size_t confirmed = 0;
  for (auto s : verdict.status)
    confirmed += s == FeatureStatus::confirmed;
  log << "boruta: " << confirmed << "/" << verdict.features.size() << " confirmed over "
      << input.rows() << " rows in " << since(t) << " s\n";
}

std::vector<ClassifierSpec> suite_specs(const RunConfig &c) {
  std::vector<ClassifierSpec> specs;
  for (auto a : c.suite)
    specs.push_back({a, {}, c.seed});
  return specs;
}

BenchmarkRun cmd_bench(const RunConfig &c, const DatasetTable &table, const fs::path &out,
                       std::ostream &log) {
  SplitPlan plan{c.k, c.repeats, c.seed, true};
  BenchOptions opt;
  opt.sampling = c.sample;
  opt.n_per_class = c.n_per_class;
  opt.timeout_seconds = c.timeout;
  opt.jobs = c.jobs;
  auto specs = suite_specs(c);
  auto t = Clock::now();
  auto run = run_benchmark(specs, table, plan, opt);
  ReportInput in;
  in.run = &run;
  in.confusion_method = "random_forest";
  emit_reports(in, out);
  log << "bench: " << run.results.size() << " methods ranked, " << run.exclusions.size()
      << " excluded in " << since(t) << " s\n";
  for (const auto &r : run.results)
    log << "  " << r.method << " accuracy " << r.accuracy << " kappa " << r.kappa << "\n";
  for (const auto &e : run.exclusions)
    log << "  excluded " << e.method << ": " << e.reason << "\n";
  return run;
}

std::vector<double> load_attachments(const fs::path &path, const DatasetTable &table) {
  auto in = open_in(path);
  std::map<RowKey, double> by_key;
  CsvReader r(in);
  bool header = true;
  while (r.next()) {
    if (header) {
      header = false;
      continue;
    }
    if (r.size() != 3)
      throw Error(Errc::malformed_row, "expected user,month,competitor_attachments", r.line());
    auto month = parse_number(r.field(1));
    auto value = parse_number(r.field(2));
    if (!month || !value)
      throw Error(Errc::malformed_row, "bad attachment row", r.line());
    by_key[RowKey{std::string(r.field(0)), static_cast<int>(*month)}] = *value;
  }
  std::vector<double> out;
  out.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    auto it = by_key.find(table.key(i));
    if (it == by_key.end())
      throw Error(Errc::schema_mismatch,
                  "attachment sidecar lacks " + table.key(i).user + " month " +
                      std::to_string(table.key(i).month));
    out.push_back(it->second);
  }
  return out;
}

std::vector<PriResult> cmd_pri(const RunConfig &c, const DatasetTable &table,
                               const fs::path &features, const fs::path &out, std::ostream &log) {
  auto side = c.attachments.empty() ? attachments_path(features) : c.attachments;
  std::vector<double> attachments;
  if (!c.attachments.empty() || fs::exists(side))
    attachments = load_attachments(side, table);
  else
    log << "pri: no attachment sidecar, email_compete ranks all competitor emails\n";
  std::vector<PriResult> results;
  for (auto p : all_pri_indicators()) {
    std::span<const double> override_scores;
    if (p == PriIndicator::email_compete)
      override_scores = attachments;
    results.push_back(pri_baseline(table, p, c.budget, override_scores));
  }
  ensure_dir(out);
  write_pri_csv(out / "pri.csv", results);
  for (const auto &r : results)
    log << "pri: " << r.metric << " false accusation " << r.false_accusation
        << " eludes detection " << r.eludes_detection << "\n";
  return results;
}

void write_rules(const TrainedModel &model, const fs::path &out, std::ostream &log) {
  auto rules = extract_rules(model);
  ensure_dir(out);
  std::ofstream csv(out / "rules.csv", std::ios::binary);
  std::ofstream txt(out / "rules.txt", std::ios::binary);
  if (!csv || !txt)
    throw Error(Errc::io_failure, "cannot write rules to " + out.string());
  write_rules_csv(csv, rules, model.columns);
  write_rules_text(txt, rules, model.columns);
  log << "rules: " << rules.size() << " rules -> " << (out / "rules.csv").string() << "\n";
}

void cmd_rules(const RunConfig &c, const DatasetTable *table, const fs::path &out,
               std::ostream &log) {
  TrainedModel model;
  if (!c.model.empty() && !table) {
    model = load_model(c.model);
  } else {
    if (!table)
      throw Error(Errc::invalid_config, "--features or --model is required");
    auto train = balance(*table, c.sample, c.n_per_class, c.seed);
    auto t = Clock::now();
    model = fit({Algorithm::random_forest, {{"trees", double(c.trees)}}, c.seed}, train);
    log << "rules: forest fitted on " << train.rows() << " rows in " << since(t) << " s\n";
    ensure_dir(out);
    save_model(out / "model.txt", model);
  }
  write_rules(model, out, log);
}

void cmd_all(const RunConfig &c, std::ostream &log) {
  auto out = or_default(c.out, "run");
  ensure_dir(out);
  RunConfig step = c;
  step.out = out / "corpus";
  cmd_gen(step, log);
  step.corpus = out / "corpus";
  step.out = out / "features.csv";
  auto features = cmd_extract(step, log);
  auto table = load_labeled(features);
  step.features = features;
  step.out = out / "balanced.csv";
  cmd_balance(step, log);
  cmd_boruta(c, table, out, log);
  cmd_bench(c, table, out, log);
  cmd_pri(c, table, features, out, log);
  cmd_rules(c, &table, out, log);
  render_report(out, "Pipeline report (seed " + std::to_string(c.seed) + ")");
  log << "all: report -> " << (out / "report.md").string() << "\n";
}

} // namespace

void run_command(const RunConfig &c, std::ostream &log) {
  const auto &s = c.subcommand;
  if (s == "gen") {
    cmd_gen(c, log);
  } else if (s == "extract") {
    cmd_extract(c, log);
  } else if (s == "balance") {
    cmd_balance(c, log);
  } else if (s == "boruta") {
    cmd_boruta(c, load_labeled(c.features), or_default(c.out, "run"), log);
  } else if (s == "bench") {
    cmd_bench(c, load_labeled(c.features), or_default(c.out, "run"), log);
  } else if (s == "pri") {
    auto out = or_default(c.out, "run");
    cmd_pri(c, load_labeled(c.features), c.features, out, log);
  } else if (s == "rules") {
    auto out = or_default(c.out, "run");
    if (c.features.empty()) {
      cmd_rules(c, nullptr, out, log);
    } else {
      auto table = load_labeled(c.features);
      cmd_rules(c, &table, out, log);
    }
  } else if (s == "report") {
    auto out = or_default(c.out, "run");
    if (!fs::is_directory(out))
      throw Error(Errc::io_failure, "run directory " + out.string() + " not found");
    render_report(out);
  } else if (s == "all") {
    cmd_all(c, log);
  } else {
    throw Error(Errc::invalid_config, "unknown subcommand '" + s + "'");
  }
}

int run_cli(int argc, const char *const *argv, std::ostream &err) {
  CLI::App app{"Insider threat detection pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::map<std::string, std::string>> given;
  std::map<std::string, CLI::App *> subs;
  for (const auto &name : kSubcommands) {
    auto *sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--config", config_path, "key = value configuration file");
    for (const auto &key : kCommandKeys.at(name))
      sub->add_option("--" + dashed(key), given[name][key]);
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    err << app.help();
    return ok;
  } catch (const CLI::ParseError &e) {
    std::ostringstream help;
    if (e.get_exit_code() == 0) {
      app.exit(e, help, help);
      err << help.str();
      return ok;
    }
    err << "error: " << e.what() << "\n";
    auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return usage_error;
  }
  auto *chosen = app.get_subcommands().front();
  std::map<std::string, std::string> flags;
  for (const auto &key : kCommandKeys.at(chosen->get_name()))
    if (chosen->count("--" + dashed(key)) > 0)
      flags[key] = given[chosen->get_name()][key];
  try {
    auto config = load_config(config_path.empty() ? std::nullopt
                                                  : std::optional<fs::path>(config_path),
                              flags);
    config.subcommand = chosen->get_name();
    run_command(config, err);
  } catch (const Error &e) {
    err << "error: " << e.what();
    if (e.line())
      err << " (line " << *e.line() << ")";
    err << "\n";
    switch (e.code()) {
    case Errc::invalid_config:
    case Errc::unknown_key:
    case Errc::type_error:
      return usage_error;
    default:
      return is_data_error(e.code()) ? data_error : internal_error;
    }
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return internal_error;
  }
  return ok;
}

} // namespace itd::cli
