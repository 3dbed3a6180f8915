#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "geoharvest/compliance/robots.hpp"
#include "../support/robots_oracle.hpp"
#include "geoharvest/util/rng.hpp"
#include "geoharvest/util/strings.hpp"

using namespace geoharvest;
using namespace geoharvest::compliance;



TEST_SUITE("robots") {

TEST_CASE("single group with one disallow") {
  auto p = parse_robots("User-agent: *\nDisallow: /private/", "h");
  REQUIRE(p.groups.size() == 1);
  CHECK(p.groups[0].agent == "*");
  REQUIRE(p.groups[0].rules.size() == 1);
  CHECK(!p.groups[0].rules[0].allow);
  CHECK(p.groups[0].rules[0].pattern == "/private/");
  CHECK(!is_allowed(p, "/private/page", "*"));
}

TEST_CASE("empty file is permissive") {
  auto p = parse_robots("", "h");
  CHECK(p.groups.empty());
  CHECK(!p.crawl_delay_s);
  CHECK(is_allowed(p, "/anything", "bot"));
}

TEST_CASE("crawl delay with empty disallow keeps everything allowed") {
  auto p = parse_robots("User-agent: *\nCrawl-delay: 15\nDisallow:", "h");
  REQUIRE(p.crawl_delay_s);
  CHECK(*p.crawl_delay_s == 15.0);
  CHECK(p.groups[0].rules.empty());  // empty pattern = no rule
  CHECK(is_allowed(p, "/deep/path", "bot"));
}

TEST_CASE("longest match wins, allow beats disallow on tie") {
  auto p = parse_robots("User-agent: *\nAllow: /p/a\nDisallow: /p", "h");
  CHECK(is_allowed(p, "/p/a/x", "bot"));
  CHECK(!is_allowed(p, "/p/b", "bot"));
}

TEST_CASE("no matching rule means allowed") {
  auto p = parse_robots("User-agent: *\nDisallow: /private/", "h");
  CHECK(is_allowed(p, "/public", "bot"));
}

TEST_CASE("consecutive user-agent lines share rules") {
  auto p = parse_robots("User-agent: a\nUser-agent: b\nDisallow: /x\n", "h");
  REQUIRE(p.groups.size() == 2);
  CHECK(p.groups[0].rules.size() == 1);
  CHECK(p.groups[1].rules.size() == 1);
  CHECK(!is_allowed(p, "/x/1", "a"));
  CHECK(!is_allowed(p, "/x/1", "b"));
}

TEST_CASE("specific agent group beats wildcard") {
  auto p = parse_robots(
      "User-agent: *\nDisallow: /\n\nUser-agent: geoharvest\nAllow: /listing/\nDisallow: /", "h");
  CHECK(is_allowed(p, "/listing/1.html", "geoharvest"));
  CHECK(!is_allowed(p, "/listing/1.html", "otherbot"));
}

TEST_CASE("malformed lines are skipped and counted") {
  auto p = parse_robots("garbage line\nDisallow: /pre-group\nUser-agent: *\nNoKey value\n"
                        "Disallow: relative-no-slash\nDisallow: /ok\n",
                        "h");
  CHECK(p.skipped_lines == 4);
  REQUIRE(p.groups.size() == 1);
  CHECK(p.groups[0].rules.size() == 1);
}

TEST_CASE("wildcard and anchor matching") {
  CHECK(pattern_matches("/a/b/c", "/a/*/c"));
  CHECK(pattern_matches("/abc", "/a"));
  CHECK(pattern_matches("/abc", "/abc$"));
  CHECK(!pattern_matches("/abcd", "/abc$"));
  CHECK(pattern_matches("/x/deep/page.html", "*.html$"));
  CHECK(!pattern_matches("/x/page.html2", "*.html$"));
}

TEST_CASE("parse-serialize-parse is a fixed point") {
  // p0 = parse(text) for arbitrary well-formed text; from there the
  // round trip must be stable: parse(serialize(p0)) == p0
  rng::Xoshiro256pp r(77);
  for (int trial = 0; trial < 50; ++trial) {
    RobotsPolicy seed = robots_oracle::random_policy(r);
    if (trial % 3 == 0 && !seed.groups.empty()) seed.groups[0].crawl_delay_s = 7.5;

    RobotsPolicy p0 = parse_robots(serialize_robots(seed), seed.host);
    RobotsPolicy p1 = parse_robots(serialize_robots(p0), seed.host);

    REQUIRE(p1.groups.size() == p0.groups.size());
    for (size_t g = 0; g < p0.groups.size(); ++g) {
      CHECK(p1.groups[g].agent == p0.groups[g].agent);
      CHECK(p1.groups[g].crawl_delay_s == p0.groups[g].crawl_delay_s);
      REQUIRE(p1.groups[g].rules.size() == p0.groups[g].rules.size());
      for (size_t k = 0; k < p0.groups[g].rules.size(); ++k) {
        CHECK(p1.groups[g].rules[k].allow == p0.groups[g].rules[k].allow);
        CHECK(p1.groups[g].rules[k].pattern == p0.groups[g].rules[k].pattern);
      }
    }
    CHECK(serialize_robots(p1) == serialize_robots(p0));
  }
}

TEST_CASE("is_allowed agrees with the brute-force oracle") {
  rng::Xoshiro256pp r(424242);
  static const std::vector<std::string> kAgentsUnderTest = {"geoharvest", "somecrawler",
                                                            "botling", "unrelated"};
  int cases = 0;
  for (int trial = 0; trial < 150; ++trial) {
    RobotsPolicy p = robots_oracle::random_policy(r);
    for (int k = 0; k < 10; ++k) {
      std::string path = robots_oracle::random_path(r);
      const std::string& agent = kAgentsUnderTest[r.below(kAgentsUnderTest.size())];
      bool got = is_allowed(p, path, agent);
      bool want = robots_oracle::oracle_is_allowed(p, path, agent);
      if (got != want) {
        CAPTURE(serialize_robots(p));
        CAPTURE(path);
        CAPTURE(agent);
      }
      REQUIRE(got == want);
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

}  // TEST_SUITE
