#include "itd/cli/config.hpp"

#include "itd/csv.hpp"
#include "itd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

namespace itd::cli {

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

[[noreturn]] void type_error(const std::string &key, const std::string &value, const char *want) {
  throw Error(Errc::type_error, "'" + key + "' expects " + want + ", got '" + value + "'");
}

double to_real(const std::string &key, const std::string &value) {
  if (value == "inf" || value == "none")
    return std::numeric_limits<double>::infinity();
  auto v = parse_number(trim(value));
  if (!v || std::isnan(*v))
    type_error(key, value, "a number");
  return *v;
}

std::uint64_t to_uint(const std::string &key, const std::string &value) {
  auto t = trim(value);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
    type_error(key, value, "a non-negative integer");
  try {
    return std::stoull(std::string(t));
  } catch (const std::exception &) {
    type_error(key, value, "a non-negative integer");
  }
}

std::size_t to_positive(const std::string &key, const std::string &value) {
  auto v = to_uint(key, value);
  if (v == 0)
    type_error(key, value, "a positive integer");
  return static_cast<std::size_t>(v);
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"corpus", [](RunConfig &c, auto &, auto &v) { c.corpus = v; }},
      {"out", [](RunConfig &c, auto &, auto &v) { c.out = v; }},
      {"features", [](RunConfig &c, auto &, auto &v) { c.features = v; }},
      {"attachments", [](RunConfig &c, auto &, auto &v) { c.attachments = v; }},
      {"model", [](RunConfig &c, auto &, auto &v) { c.model = v; }},
      {"lexicon", [](RunConfig &c, auto &, auto &v) { c.lexicon = v; }},
      {"domains", [](RunConfig &c, auto &, auto &v) { c.domains = v; }},
      {"names", [](RunConfig &c, auto &, auto &v) { c.names = v; }},
      {"seed", [](RunConfig &c, auto &k, auto &v) { c.seed = to_uint(k, v); }},
      {"employees", [](RunConfig &c, auto &k, auto &v) { c.employees = to_positive(k, v); }},
      {"months",
       [](RunConfig &c, auto &k, auto &v) {
         auto m = to_positive(k, v);
         if (m > 1200)
           type_error(k, v, "at most 1200 months");
         c.months = static_cast<int>(m);
       }},
      {"fractions",
       [](RunConfig &c, auto &k, auto &v) {
         auto parts = split(v, ',');
         if (parts.size() != kNumClasses)
           type_error(k, v, "five comma-separated fractions");
         for (std::size_t i = 0; i < kNumClasses; ++i)
           c.fractions[i] = to_real(k, std::string(parts[i]));
       }},
      {"post_departure", [](RunConfig &c, auto &k, auto &v) { c.post_departure = to_real(k, v); }},
      {"sample",
       [](RunConfig &c, auto &k, auto &v) {
         auto m = parse_sampling(trim(v));
         if (!m)
           type_error(k, v, "one of over, under, none");
         c.sample = *m;
       }},
      {"n_per_class", [](RunConfig &c, auto &k, auto &v) { c.n_per_class = to_positive(k, v); }},
      {"k", [](RunConfig &c, auto &k, auto &v) { c.k = to_positive(k, v); }},
      {"repeats", [](RunConfig &c, auto &k, auto &v) { c.repeats = to_positive(k, v); }},
      {"suite",
       [](RunConfig &c, auto &k, auto &v) {
         c.suite.clear();
         if (trim(v) == "all") {
           auto all = all_algorithms();
           c.suite.assign(all.begin(), all.end());
           return;
         }
         for (auto part : split(v, ',')) {
           auto a = parse_algorithm(trim(part));
           if (!a)
             type_error(k, v, "'all' or a list of algorithm ids");
           c.suite.push_back(*a);
         }
         if (c.suite.empty())
           type_error(k, v, "at least one algorithm");
       }},
      {"budget", [](RunConfig &c, auto &k, auto &v) { c.budget = to_positive(k, v); }},
      {"timeout",
       [](RunConfig &c, auto &k, auto &v) {
         c.timeout = to_real(k, v);
         if (c.timeout < 0)
           type_error(k, v, "a non-negative number of seconds");
       }},
      {"iterations", [](RunConfig &c, auto &k, auto &v) { c.iterations = to_positive(k, v); }},
      {"alpha", [](RunConfig &c, auto &k, auto &v) { c.alpha = to_real(k, v); }},
      {"trees", [](RunConfig &c, auto &k, auto &v) { c.trees = to_positive(k, v); }},
      {"boruta_cap",
       [](RunConfig &c, auto &k, auto &v) { c.boruta_cap = static_cast<std::size_t>(to_uint(k, v)); }},
      {"importance",
       [](RunConfig &c, auto &k, auto &v) {
         auto t = trim(v);
         if (t == "gini")
           c.importance = ImportanceKind::gini;
         else if (t == "permutation")
           c.importance = ImportanceKind::permutation;
         else
           type_error(k, v, "gini or permutation");
       }},
      {"jobs", [](RunConfig &c, auto &k, auto &v) { c.jobs = to_positive(k, v); }},
  };
  return table;
}

} // namespace

RunConfig::RunConfig() {
  auto all = all_algorithms();
  suite.assign(all.begin(), all.end());
}

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto &[name, _] : setters())
      k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig &config, const std::string &key, const std::string &value) {
  auto k = normalize_key(std::string(trim(key)));
  auto it = setters().find(k);
  if (it == setters().end())
    throw Error(Errc::unknown_key, "unknown configuration key '" + key + "'");
  it->second(config, k, std::string(trim(value)));
}

std::map<std::string, std::string> parse_config_text(std::istream &in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto l = trim(line);
    if (l.empty() || l.front() == '#')
      continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::invalid_config, "expected key = value", lineno);
    auto key = normalize_key(std::string(trim(l.substr(0, eq))));
    if (key.empty())
      throw Error(Errc::invalid_config, "empty key", lineno);
    out[key] = std::string(trim(l.substr(eq + 1)));
  }
  return out;
}

RunConfig load_config(const std::optional<std::filesystem::path> &path,
                      const std::map<std::string, std::string> &flags) {
  RunConfig config;
  if (path) {
    std::ifstream in(*path);
    if (!in)
      throw Error(Errc::io_failure, "cannot read config " + path->string());
    for (const auto &[k, v] : parse_config_text(in))
      apply_setting(config, k, v);
  }
  for (const auto &[k, v] : flags)
    apply_setting(config, k, v);
  return config;
}

} // namespace itd::cli
