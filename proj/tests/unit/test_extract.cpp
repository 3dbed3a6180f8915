#include <doctest.h>

#include <filesystem>

#include "geoharvest/extract/extractor.hpp"
#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/strings.hpp"
#include "helpers.hpp"

using namespace geoharvest;
using namespace geoharvest::extract;

namespace {

ExtractionRuleSet sitegen_rules() {
  return ExtractionRuleSet::from_json(
      nlohmann::json::parse(fsio::read_file("configs/rules.sitegen.json")));
}

sitegen::SyntheticSiteSpec clean_spec(int n) {
  sitegen::SyntheticSiteSpec spec;
  spec.n_listings = n;
  spec.seed = 7;
  return spec;  // no anomalies
}

}  // namespace

TEST_SUITE("extract") {

TEST_CASE("clean fixture page extracts fully with zero issues") {
  TempDir dir("extract_clean");
  auto manifest = sitegen::generate_site(clean_spec(5), dir.str());
  auto rules = sitegen_rules();

  for (const auto& truth : manifest.listings) {
    std::string html = fsio::read_file(dir.str() + truth.url_path);
    auto result = extract_record(html, rules, "http://t" + truth.url_path, "2021-06-15T03:30:00Z");

    CHECK(result.issues.empty());
    CHECK(result.record.id == truth.id);
    REQUIRE(result.record.rent_net_eur);
    CHECK(result.record.rent_net_eur->value == truth.rent_net_eur);
    CHECK(result.record.rent_net_eur->unit == Unit::eur);
    REQUIRE(result.record.size_sqm);
    CHECK(result.record.size_sqm->value == truth.size_sqm);
    REQUIRE(result.record.rooms);
    CHECK(result.record.rooms->value == truth.rooms);
    REQUIRE(result.record.year_built);
    CHECK(*result.record.year_built == truth.year_built);
    REQUIRE(result.record.running_costs_eur);
    CHECK(result.record.running_costs_eur->value == truth.running_costs_eur);
    CHECK(result.record.energy_class == truth.energy_class);
    CHECK(result.record.postal_code == truth.postal_code);
    CHECK(result.record.raw_address == truth.address_rendered);
    CHECK(result.record.amenities == truth.amenities);
    REQUIRE(result.record.coords);
    CHECK(result.record.coords->lat == truth.true_point.lat);
    CHECK(result.record.coords->lon == truth.true_point.lon);
    CHECK(result.record.coords->quality == geo::CoordQuality::embedded);
  }
}

TEST_CASE("missing year element yields a missing issue, field absent") {
  TempDir dir("extract_missing");
  auto spec = clean_spec(30);
  spec.anomalies.missing["year_built"] = 1.0;
  auto manifest = sitegen::generate_site(spec, dir.str());
  auto rules = sitegen_rules();

  std::string html = fsio::read_file(dir.str() + manifest.listings[0].url_path);
  auto result = extract_record(html, rules, "http://t" + manifest.listings[0].url_path, "t");
  CHECK(!result.record.year_built);
  bool found = false;
  for (const auto& i : result.issues)
    if (i.field == "year_built" && i.kind == FieldIssue::Kind::missing) found = true;
  CHECK(found);
}

TEST_CASE("locale rent parses to cents") {
  auto rules = sitegen_rules();
  std::string page =
      "<html><body><dl class=\"hardfacts\"><dd class=\"rent\">1.234,56 €</dd>"
      "<dd class=\"size\">50 m²</dd></dl></body></html>";
  auto result = extract_record(page, rules, "http://t/listing/000009.html", "t");
  REQUIRE(result.record.rent_net_eur);
  CHECK(result.record.rent_net_eur->value == 1234.56);
  CHECK(result.record.rent_net_eur->unit == Unit::eur);
}

TEST_CASE("fatal issue on non-html bytes") {
  auto rules = sitegen_rules();
  auto result = extract_record("just some text, no tags", rules, "http://t/listing/000001.html",
                               "t");
  REQUIRE(!result.issues.empty());
  bool fatal = false;
  for (const auto& i : result.issues)
    if (i.kind == FieldIssue::Kind::fatal) fatal = true;
  CHECK(fatal);
  CHECK(result.record.id == "000001");  // id still recovered from the url
}

TEST_CASE("field-level isolation under targeted corruption") {
  TempDir dir("extract_mutate");
  auto manifest = sitegen::generate_site(clean_spec(1), dir.str());
  auto rules = sitegen_rules();
  std::string url = "http://t" + manifest.listings[0].url_path;
  std::string html = fsio::read_file(dir.str() + manifest.listings[0].url_path);

  auto base = extract_record(html, rules, url, "t");
  REQUIRE(base.issues.empty());

  // corrupt only the year value text
  std::string mutated = str::replace_all(
      html, "class=\"year-built\">" + std::to_string(manifest.listings[0].year_built),
      "class=\"year-built\">unbekannt");
  auto after = extract_record(mutated, rules, url, "t");

  CHECK(!after.record.year_built);
  REQUIRE(after.issues.size() == 1);
  CHECK(after.issues[0].field == "year_built");
  CHECK(after.issues[0].kind == FieldIssue::Kind::unparseable);
  // every other field unchanged
  CHECK(after.record.rent_net_eur->value == base.record.rent_net_eur->value);
  CHECK(after.record.size_sqm->value == base.record.size_sqm->value);
  CHECK(after.record.amenities == base.record.amenities);
  CHECK(after.record.coords->lat == base.record.coords->lat);
}

TEST_CASE("extraction is pure") {
  TempDir dir("extract_pure");
  auto manifest = sitegen::generate_site(clean_spec(1), dir.str());
  auto rules = sitegen_rules();
  std::string url = "http://t" + manifest.listings[0].url_path;
  std::string html = fsio::read_file(dir.str() + manifest.listings[0].url_path);
  auto a = extract_record(html, rules, url, "t");
  auto b = extract_record(html, rules, url, "t");
  CHECK(record_to_json(a.record) == record_to_json(b.record));
  CHECK(a.issues.size() == b.issues.size());
}

TEST_CASE("extract_links resolves, strips fragments, de-duplicates") {
  std::string page = R"(<html><body>
    <a class="l" href="/a">1</a>
    <a class="l" href="/a#x">2</a>
    <a class="l" href="http://h/b">3</a>
    <a class="l" href="rel.html">4</a>
  </body></html>)";
  auto links = extract_links(page, "a.l", "http://h/");
  REQUIRE(links.size() == 3);
  CHECK(links[0] == "http://h/a");
  CHECK(links[1] == "http://h/b");
  CHECK(links[2] == "http://h/rel.html");
}

TEST_CASE("extract_links with no matches is empty") {
  CHECK(extract_links("<html><body></body></html>", "a.none", "http://h/").empty());
}

TEST_CASE("pagination chain over the fixture site") {
  TempDir dir("extract_pages");
  auto spec = clean_spec(25);  // 3 pages at 10/page
  auto manifest = sitegen::generate_site(spec, dir.str());
  auto rules = sitegen_rules();

  int hops = 0;
  std::string page_path = "/search/rent/neustadt/price_asc/page1.html";
  while (true) {
    std::string html = fsio::read_file(dir.str() + page_path);
    auto next = extract_links(html, rules.links.next_selector, "http://t" + page_path);
    if (next.empty()) break;
    page_path = next.front().substr(std::string("http://t").size());
    ++hops;
    REQUIRE(hops < 10);
  }
  CHECK(hops == 2);  // 3 pages -> chain of length 2
}

TEST_CASE("embedded coordinates with range rejection") {
  std::string rule = "\"lat\"\\s*:\\s*(-?[0-9.]+)\\s*,\\s*\"lng\"\\s*:\\s*(-?[0-9.]+)";
  std::vector<FieldIssue> issues;

  auto p = extract_embedded_coords(
      "<script>var cfg = {\"lat\":51.34,\"lng\":12.37};</script>", rule, &issues);
  REQUIRE(p);
  CHECK(p->lat == 51.34);
  CHECK(p->lon == 12.37);
  CHECK(p->quality == geo::CoordQuality::embedded);

  issues.clear();
  auto bad = extract_embedded_coords(
      "<script>var cfg = {\"lat\":99.0,\"lng\":12.0};</script>", rule, &issues);
  CHECK(!bad);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == FieldIssue::Kind::implausible_format);

  auto none = extract_embedded_coords("<p>no coords here</p>", rule, nullptr);
  CHECK(!none);
}

TEST_CASE("jittered fixture coords stay within the configured ring") {
  TempDir dir("extract_jitter");
  auto spec = clean_spec(40);
  spec.anomalies.coord_jitter_pct = 1.0;
  auto manifest = sitegen::generate_site(spec, dir.str());
  auto rules = sitegen_rules();

  for (const auto& truth : manifest.listings) {
    std::string html = fsio::read_file(dir.str() + truth.url_path);
    auto result = extract_record(html, rules, "http://t" + truth.url_path, "t");
    REQUIRE(result.record.coords);
    double d = geo::distance_to_center(*result.record.coords, truth.true_point);
    CHECK(d >= 150.0);
    CHECK(d <= 200.0);
  }
}

}  // TEST_SUITE
