#include "itd/fixtures.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace itd::fixtures {

namespace {

using enum DomainCategory;

// Valences follow the AFINN-111 word list.
constexpr LexiconEntry kLexicon[] = {
    {"outstanding", 5}, {"breathtaking", 5}, {"superb", 5}, {"thrilled", 5},
    {"hurrah", 5}, {"stunning", 4}, {"awesome", 4}, {"brilliant", 4},
    {"fantastic", 4}, {"fabulous", 4}, {"wonderful", 4}, {"amazing", 4},
    {"win", 4}, {"winner", 4}, {"triumph", 4}, {"fun", 4},
    {"breakthrough", 3}, {"excellent", 3}, {"good", 3}, {"great", 3},
    {"happy", 3}, {"love", 3}, {"nice", 3}, {"perfect", 3},
    {"glad", 3}, {"successful", 3}, {"best", 3}, {"celebrate", 3},
    {"impressed", 3}, {"delighted", 3}, {"beautiful", 3}, {"exciting", 3},
    {"excited", 3}, {"pleased", 3}, {"grateful", 3}, {"success", 2},
    {"like", 2}, {"thank", 2}, {"thanks", 2}, {"help", 2},
    {"hope", 2}, {"better", 2}, {"proud", 2}, {"support", 2},
    {"welcome", 2}, {"congrats", 2}, {"enjoy", 2}, {"fine", 2},
    {"kind", 2}, {"interesting", 2}, {"appreciate", 2}, {"recommend", 2},
    {"reward", 2}, {"strong", 2}, {"agree", 1}, {"cool", 1},
    {"yes", 1}, {"smart", 1}, {"easy", 1}, {"safe", 1},
    {"tortures", -4}, {"torture", -4}, {"tortured", -4}, {"fraud", -4},
    {"hell", -4}, {"terrible", -3}, {"bad", -3}, {"hate", -3},
    {"angry", -3}, {"awful", -3}, {"horrible", -3}, {"worst", -3},
    {"furious", -3}, {"outrage", -3}, {"miserable", -3}, {"disgusted", -3},
    {"betrayed", -3}, {"cheat", -3}, {"cheated", -3}, {"liar", -3},
    {"kill", -3}, {"destroy", -3}, {"crisis", -3}, {"worried", -3},
    {"boring", -3}, {"lost", -3}, {"lose", -3}, {"loser", -3},
    {"stupid", -2}, {"sad", -2}, {"fail", -2}, {"failure", -2},
    {"problem", -2}, {"wrong", -2}, {"unfair", -2}, {"upset", -2},
    {"annoyed", -2}, {"frustrated", -2}, {"disappointed", -2}, {"fear", -2},
    {"afraid", -2}, {"steal", -2}, {"stolen", -2}, {"revenge", -2},
    {"fired", -2}, {"sue", -2}, {"lawsuit", -2}, {"disaster", -2},
    {"blame", -2}, {"complain", -2}, {"hostile", -2}, {"hopeless", -2},
    {"ignored", -2}, {"useless", -2}, {"tired", -2}, {"jealous", -2},
    {"greedy", -2}, {"hurt", -2}, {"pain", -2}, {"shame", -2},
    {"enemy", -2}, {"waste", -1}, {"quit", -1},
    {"does not work", -3}, {"not working", -3}, {"no fun", -3},
    {"cool stuff", 3}, {"screwed up", -3}, {"dont like", -2},
    {"right direction", 3}, {"fed up", -3},
};

constexpr DomainEntry kDomains[] = {
    {"dropbox.com", file_sharing}, {"wikileaks.org", file_sharing},
    {"mediafire.com", file_sharing}, {"4shared.com", file_sharing},
    {"sendspace.com", file_sharing}, {"filedropper.com", file_sharing},
    {"monster.com", job_search}, {"indeed.com", job_search},
    {"careerbuilder.com", job_search}, {"simplyhired.com", job_search},
    {"hotjobs.com", job_search}, {"jobhuntersbible.com", job_search},
    {"aerovance.com", competitor}, {"northstar-defense.com", competitor},
    {"helixdynamics.com", competitor}, {"cobaltsystems.com", competitor},
    {"meridian-aero.com", competitor},
    {"malwaredrop.net", malware}, {"exploitkit.biz", malware},
    {"freescreensavers.cc", malware},
    {"keyloggerpro.com", keylogger}, {"spyrecorder.net", keylogger},
    {"trojandepot.ru", malware}, {"trojandepot.ru", keylogger},
    {"jobfiles.net", file_sharing}, {"jobfiles.net", job_search},
    {"gmail.com", webmail}, {"yahoo.com", webmail}, {"hotmail.com", webmail},
    {"aol.com", webmail},
    {"google.com", other}, {"cnn.com", other}, {"espn.com", other},
    {"nytimes.com", other}, {"wikipedia.org", other}, {"weather.com", other},
    {"amazon.com", other}, {"facebook.com", other}, {"youtube.com", other},
    {"bbc.co.uk", other}, {"reddit.com", other}, {"craigslist.org", other},
};

constexpr std::string_view kMaleNames[] = {
    "James", "John", "Robert", "Michael", "William", "David", "Richard",
    "Joseph", "Thomas", "Charles", "Christopher", "Daniel", "Matthew",
    "Anthony", "Mark", "Donald", "Steven", "Paul", "Andrew", "Joshua",
    "Kenneth", "Kevin", "Brian", "George", "Edward", "Ronald", "Timothy",
    "Jason", "Jeffrey", "Ryan", "Jacob", "Gary", "Nicholas", "Eric",
    "Jonathan", "Stephen", "Larry", "Justin", "Scott", "Brandon",
    "Benjamin", "Samuel", "Gregory", "Frank", "Alexander", "Raymond",
    "Patrick", "Jack", "Dennis", "Jerry"};

constexpr std::string_view kFemaleNames[] = {
    "Mary", "Patricia", "Jennifer", "Linda", "Elizabeth", "Barbara", "Susan",
    "Jessica", "Sarah", "Karen", "Nancy", "Lisa", "Betty", "Margaret",
    "Sandra", "Ashley", "Kimberly", "Emily", "Donna", "Michelle", "Dorothy",
    "Carol", "Amanda", "Melissa", "Deborah", "Stephanie", "Rebecca",
    "Sharon", "Laura", "Cynthia", "Kathleen", "Amy", "Shirley", "Angela",
    "Helen", "Anna", "Brenda", "Pamela", "Nicole", "Emma", "Samantha",
    "Katherine", "Christine", "Debra", "Rachel", "Catherine", "Carolyn",
    "Janet", "Ruth", "Maria"};

constexpr std::string_view kUnlistedNames[] = {
    "Quinlan", "Sacha", "Kendall", "Rowan", "Ellis", "Marlowe", "Tatum", "Arden"};

constexpr std::string_view kLastNames[] = {
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller",
    "Davis", "Rodriguez", "Martinez", "Hernandez", "Lopez", "Gonzalez",
    "Wilson", "Anderson", "Thomas", "Taylor", "Moore", "Jackson", "Martin",
    "Lee", "Perez", "Thompson", "White", "Harris", "Sanchez", "Clark",
    "Ramirez", "Lewis", "Robinson", "Walker", "Young", "Allen", "King",
    "Wright", "Scott", "Torres", "Nguyen", "Hill", "Flores", "Green",
    "Adams", "Nelson", "Baker", "Hall", "Rivera", "Campbell", "Mitchell",
    "Carter", "Roberts"};

constexpr std::string_view kNeutralWords[] = {
    "meeting", "project", "report", "schedule", "budget", "team", "client",
    "review", "update", "design", "system", "data", "network", "server",
    "office", "deadline", "plan", "quarter", "sales", "product", "customer",
    "code", "release", "document", "week", "today", "tomorrow", "policy",
    "training", "agenda", "summary", "invoice", "contract", "proposal",
    "analysis", "status", "request", "config", "module", "version", "draft",
    "memo", "call", "lunch", "travel", "hotel", "flight", "conference",
    "presentation", "slide", "figure", "table", "chart", "estimate", "vendor",
    "order", "shipment", "inventory", "account", "department", "manager",
    "engineer", "test", "build", "deploy", "branch", "ticket", "the", "and",
    "of", "to", "for", "with", "on", "at", "from", "by", "about", "our",
    "your", "this", "that", "will", "can", "we", "you", "it", "is", "are",
    "was", "be", "next", "new", "first", "last", "morning", "afternoon"};

constexpr std::string_view kUncategorizedSites[] = {
    "dtaa.com", "intranet.dtaa.com", "stackoverflow.com", "github.com",
    "microsoft.com", "apple.com", "ebay.com", "imdb.com", "yelp.com",
    "nasa.gov", "noaa.gov", "linkedin.com", "twitter.com", "bing.com"};

template <class Pred>
std::vector<std::string_view> lexicon_words(Pred pred) {
  std::vector<std::string_view> out;
  for (const auto &e : kLexicon)
    if (e.term.find(' ') == std::string_view::npos && pred(e.valence))
      out.push_back(e.term);
  return out;
}

} // namespace

std::span<const LexiconEntry> lexicon_entries() { return kLexicon; }
std::span<const DomainEntry> domain_entries() { return kDomains; }
std::span<const std::string_view> male_names() { return kMaleNames; }
std::span<const std::string_view> female_names() { return kFemaleNames; }
std::span<const std::string_view> unlisted_names() { return kUnlistedNames; }
std::span<const std::string_view> last_names() { return kLastNames; }
std::span<const std::string_view> neutral_words() { return kNeutralWords; }
std::span<const std::string_view> uncategorized_sites() { return kUncategorizedSites; }

std::span<const std::string_view> positive_words() {
  static const auto words = lexicon_words([](int v) { return v > 0; });
  return words;
}

std::span<const std::string_view> negative_words() {
  static const auto words = lexicon_words([](int v) { return v < 0; });
  return words;
}

std::span<const std::string_view> domains_for(DomainCategory category) {
  static const auto pools = [] {
    std::map<std::string_view, int> multiplicity;
    for (const auto &d : kDomains)
      ++multiplicity[d.domain];
    std::vector<std::vector<std::string_view>> out(7);
    for (const auto &d : kDomains)
      if (multiplicity[d.domain] == 1)
        out[static_cast<std::size_t>(d.category)].push_back(d.domain);
    return out;
  }();
  return pools[static_cast<std::size_t>(category)];
}

std::string lexicon_tsv() {
  std::string out;
  for (const auto &e : kLexicon) {
    out += e.term;
    out += '\t';
    out += std::to_string(e.valence);
    out += '\n';
  }
  return out;
}

std::string domains_csv() {
  std::string out = "domain,category\n";
  for (const auto &d : kDomains) {
    out += d.domain;
    out += ',';
    out += category_name(d.category);
    out += '\n';
  }
  return out;
}

std::string names_csv() {
  std::string out = "name,gender\n";
  for (auto n : kMaleNames)
    out += std::string(n) + ",M\n";
  for (auto n : kFemaleNames)
    out += std::string(n) + ",F\n";
  return out;
}

SentimentLexicon lexicon() {
  SentimentLexicon lex;
  for (const auto &e : kLexicon)
    lex.add(e.term, e.valence);
  return lex;
}

DomainCategoryTable domains() {
  DomainCategoryTable t;
  for (const auto &d : kDomains)
    t.add(d.domain, d.category);
  return t;
}

NameGenderTable names() {
  NameGenderTable t;
  for (auto n : kMaleNames)
    t.add(n, Gender::male);
  for (auto n : kFemaleNames)
    t.add(n, Gender::female);
  return t;
}

} // namespace itd::fixtures
