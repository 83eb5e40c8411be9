#include "itd/cli/commands.hpp"
#include "itd/cli/config.hpp"
#include "itd/dataset.hpp"
#include "itd/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace itd;
using namespace itd::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  auto p = fs::temp_directory_path() / ("itd_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(std::vector<std::string> args, std::string *log = nullptr) {
  args.insert(args.begin(), "itd");
  std::vector<const char *> argv;
  for (auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream err;
  int code = run_cli(int(argv.size()), argv.data(), err);
  if (log)
    *log = err.str();
  return code;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults") {
  RunConfig c;
  CHECK(c.seed == 7);
  CHECK(c.k == 5);
  CHECK(c.repeats == 3);
  CHECK(c.suite.size() == 9);
  CHECK(c.sample == SamplingMode::over);
  CHECK(c.fractions[0] == 0.80);
  CHECK(c.budget == 100);
  CHECK(c.iterations == 100);
}

TEST_CASE("flags override the file which overrides defaults") {
  auto dir = scratch("precedence");
  auto path = dir / "run.conf";
  std::ofstream(path) << "# comment\nseed = 11\nk = 4\n\nn-per-class = 3\n";
  auto c = load_config(path, {{"k", "6"}});
  CHECK(c.seed == 11);
  CHECK(c.k == 6);
  CHECK(c.n_per_class == 3);
  CHECK(c.repeats == 3);
  CHECK_THROWS_AS(load_config(dir / "absent.conf", {}), Error);
}

TEST_CASE("bad values name the key") {
  RunConfig c;
  try {
    apply_setting(c, "k", "banana");
    FAIL("expected TypeError");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::type_error);
    CHECK(std::string(e.what()).find("k") != std::string::npos);
  }
  try {
    apply_setting(c, "colour", "blue");
    FAIL("expected UnknownKey");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::unknown_key);
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_setting(c, "suite", "cart,svm"), Error);
  CHECK_THROWS_AS(apply_setting(c, "fractions", "0.5,0.5"), Error);
  CHECK_THROWS_AS(apply_setting(c, "sample", "sideways"), Error);
  apply_setting(c, "suite", "cart, knn");
  CHECK(c.suite == std::vector<Algorithm>{Algorithm::cart, Algorithm::knn});
  apply_setting(c, "post-departure", "0.5");
  CHECK(c.post_departure == 0.5);
}

TEST_CASE("config text parsing") {
  std::istringstream ok("a = 1\n  b-c=two words \n# x = 3\n");
  auto m = parse_config_text(ok);
  CHECK(m.size() == 2);
  CHECK(m.at("b_c") == "two words");
  std::istringstream bad("a = 1\nnonsense\n");
  CHECK_THROWS_AS(parse_config_text(bad), Error);
}

TEST_CASE("exit codes") {
  CHECK(run({}) == ExitCode::usage_error);
  CHECK(run({"frobnicate"}) == ExitCode::usage_error);
  std::string log;
  CHECK(run({"bench", "--k", "banana"}, &log) == ExitCode::usage_error);
  CHECK(log.find("k") != std::string::npos);
  auto dir = scratch("codes");
  CHECK(run({"extract", "--corpus", (dir / "missing").string(), "--out",
             (dir / "f.csv").string()}) == ExitCode::data_error);
  CHECK(run({"bench"}) == ExitCode::usage_error);
}

TEST_CASE("gen, extract and bench end to end") {
  auto dir = scratch("e2e");
  auto corpus = dir / "corpus";
  REQUIRE(run({"gen", "--employees", "60", "--months", "3", "--seed", "7", "--fractions",
               "0.5,0.2,0.1,0.1,0.1", "--out", corpus.string()}) == ExitCode::ok);
  for (auto f : {"roster.csv", "logon.csv", "device.csv", "file.csv", "email.csv",
                 "http.csv", "truth.csv"})
    CHECK(fs::exists(corpus / f));
  auto features = dir / "features.csv";
  REQUIRE(run({"extract", "--corpus", corpus.string(), "--out", features.string()}) ==
          ExitCode::ok);
  auto t = read_table(features.string());
  CHECK(t.rows() == 180);
  CHECK(t.cols() == kNumFeatures);
  auto out = dir / "bench";
  REQUIRE(run({"bench", "--features", features.string(), "--suite", "cart,gaussian_nb",
               "--repeats", "1", "--k", "3", "--out", out.string()}) == ExitCode::ok);
  std::ifstream ranking(out / "ranking.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(ranking, line))
    ++lines;
  CHECK(lines == 3);
}

}
