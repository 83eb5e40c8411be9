#include "itd/errors.hpp"
#include "itd/fixtures.hpp"
#include "itd/lookup.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace itd;

namespace {

const char *kHeader = "user_id,first_name,last_name,role,supervisor_id,start_month,end_month\n";

Errc code_of(const std::string &csv) {
  std::istringstream in(csv);
  try {
    parse_roster(in);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io_failure;
}

} // namespace

TEST_SUITE("lookup") {

TEST_CASE("roster supervisor pairs and open employment") {
  std::istringstream in(std::string(kHeader) + "A,Ann,Lee,Manager,,1,\n"
                                               "B,Bob,Ray,Engineer,A,1,9\n"
                                               "C,Cy,Ito,Engineer,A,3,\n");
  auto r = parse_roster(in);
  CHECK(r.size() == 3);
  using P = std::pair<std::string, std::string>;
  CHECK(r.supervisor_pairs() == std::vector<P>{{"B", "A"}, {"C", "A"}});
  CHECK_FALSE(r.find("A")->end_month);
  CHECK(r.find("A")->employed_in(40));
  CHECK(*r.find("B")->end_month == 9);
  CHECK_FALSE(r.find("B")->employed_in(10));
  CHECK_FALSE(r.find("C")->employed_in(2));
  CHECK(r.find("Z") == nullptr);
  std::ostringstream out;
  write_roster(out, r);
  std::istringstream back(out.str());
  CHECK(parse_roster(back).records() == r.records());
}

TEST_CASE("roster errors") {
  CHECK(code_of(std::string(kHeader) + "A,Ann,Lee,M,A,1,\n") == Errc::dangling_supervisor);
  CHECK(code_of(std::string(kHeader) + "A,Ann,Lee,M,Q,1,\n") == Errc::dangling_supervisor);
  CHECK(code_of(std::string(kHeader) + "A,Ann,Lee,M,,1,\nA,Al,Li,M,,1,\n") ==
        Errc::duplicate_user);
  CHECK(code_of("user,first\n") == Errc::schema_mismatch);
}

TEST_CASE("domain categories") {
  std::istringstream in("domain,category\n"
                        "dropbox.example,FileSharing\n"
                        "bad.example,Malware\n"
                        "bad.example,Keylogger\n");
  auto t = load_domain_categories(in);
  CHECK(t.lookup("DROPBOX.EXAMPLE") == CategorySet{DomainCategory::file_sharing});
  CHECK(t.lookup("bad.example") == CategorySet{DomainCategory::keylogger, DomainCategory::malware});
  CHECK(t.lookup("dtaa.com").empty());
  CHECK(t.lookup("files.dropbox.example") == CategorySet{DomainCategory::file_sharing});
  CHECK(t.lookup("").empty());
  std::istringstream bad("x.example,Gambling\n");
  try {
    load_domain_categories(bad);
    FAIL("expected UnknownCategory");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::unknown_category);
  }
}

TEST_CASE("category sets do not depend on load order") {
  testgen::Gen g(8);
  auto entries = fixtures::domain_entries();
  std::vector<fixtures::DomainEntry> shuffled(entries.begin(), entries.end());
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[g.index(i)]);
    DomainCategoryTable a;
    for (auto &e : shuffled)
      a.add(e.domain, e.category);
    auto b = fixtures::domains();
    for (auto &e : entries)
      CHECK(a.lookup(e.domain) == b.lookup(e.domain));
  }
}

TEST_CASE("lexicon") {
  std::istringstream in("outstanding\t5\ntortures\t-4\nnot good\t-2\n");
  auto lex = load_lexicon(in);
  CHECK(*lex.valence("outstanding") == 5);
  CHECK(*lex.valence("tortures") < 0);
  CHECK(*lex.valence("not good") == -2);
  CHECK(lex.max_phrase_words() == 2);
  CHECK_FALSE(lex.valence("meh"));
  for (const char *bad : {"meh\t0\n", "awful\t-6\n", "great\t6\n"}) {
    std::istringstream b(bad);
    try {
      load_lexicon(b);
      FAIL("expected ValenceOutOfRange");
    } catch (const Error &e) {
      CHECK(e.code() == Errc::valence_out_of_range);
    }
  }
  auto bundled = fixtures::lexicon();
  CHECK(*bundled.valence("outstanding") == 5);
  CHECK(*bundled.valence("tortures") == -4);
}

TEST_CASE("registrable domains") {
  CHECK(registrable_domain("http://Files.Dropbox.example/x?y") == "files.dropbox.example");
  CHECK(registrable_domain("alice@Competitor.example") == "competitor.example");
  CHECK(registrable_domain("https://user@host.example:8080/p") == "host.example");
  CHECK(registrable_domain("monster.com/jobs") == "monster.com");
  for (const char *bad : {"not a url", "", "http://", "bob@"}) {
    CAPTURE(bad);
    try {
      registrable_domain(bad);
      FAIL("expected Unparseable");
    } catch (const Error &e) {
      CHECK(e.code() == Errc::unparseable);
    }
    std::string out;
    CHECK_FALSE(try_registrable_domain(bad, out));
  }
}

TEST_CASE("name genders") {
  std::istringstream in("name,gender\nAlice,F\nBob,M\n");
  auto t = load_name_genders(in);
  CHECK(t.lookup("alice") == Gender::female);
  CHECK(t.lookup("BOB") == Gender::male);
  CHECK(t.lookup("Zed") == Gender::unknown);
  CHECK(gender_code(Gender::male) == 0.0);
  CHECK(gender_code(Gender::female) == 1.0);
  CHECK(gender_code(Gender::unknown) == 0.5);
}

}
