#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <httplib.h>

#include "geoharvest/extract/extractor.hpp"
#include "geoharvest/quality/quality.hpp"
#include "geoharvest/sitegen/server.hpp"
#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/hash.hpp"
#include "helpers.hpp"

using namespace geoharvest;
using namespace geoharvest::sitegen;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> tree_hashes(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out[fs::relative(entry.path(), root).string()] = hash::sha256_file(entry.path().string());
  }
  return out;
}

}  // namespace

TEST_SUITE("sitegen") {

TEST_CASE("same seed produces byte-identical site trees") {
  TempDir a("site_a"), b("site_b");
  SyntheticSiteSpec spec;
  spec.n_listings = 30;
  spec.seed = 42;
  spec.n_private = 1;
  spec.anomalies.missing["year_built"] = 0.3;
  spec.anomalies.coord_jitter_pct = 0.2;
  generate_site(spec, a.str());
  generate_site(spec, b.str());
  CHECK(tree_hashes(a.str()) == tree_hashes(b.str()));

  SyntheticSiteSpec other = spec;
  other.seed = 43;
  TempDir c("site_c");
  generate_site(other, c.str());
  CHECK(tree_hashes(a.str()) != tree_hashes(c.str()));
}

TEST_CASE("full jitter keeps every embedded point in the ring") {
  SyntheticSiteSpec spec;
  spec.n_listings = 200;
  spec.seed = 5;
  spec.anomalies.coord_jitter_pct = 1.0;
  auto listings = draw_listings(spec);
  for (const auto& t : listings) {
    REQUIRE(t.embedded_point);
    double d = geo::distance_to_center(*t.embedded_point, t.true_point);
    CHECK(d >= 150.0);
    CHECK(d <= 200.0);
  }
}

TEST_CASE("missing-field injection lands in the binomial 99 percent interval") {
  SyntheticSiteSpec spec;
  spec.n_listings = 10000;
  spec.seed = 77;
  spec.anomalies.missing["year_built"] = 0.33;
  auto listings = draw_listings(spec);
  int missing = 0;
  for (const auto& t : listings)
    if (t.has_anomaly("missing:year_built")) ++missing;
  // n=10000, p=0.33: sd = sqrt(np(1-p)) ~ 47; 99% band = 3300 +- 2.576 sd
  double sd = std::sqrt(10000 * 0.33 * 0.67);
  CHECK(missing > 3300 - 2.576 * sd);
  CHECK(missing < 3300 + 2.576 * sd);
}

TEST_CASE("quality detects exactly the injected anomalies") {
  TempDir dir("site_quality");
  SyntheticSiteSpec spec;
  spec.n_listings = 400;
  spec.seed = 9;
  spec.anomalies.missing["year_built"] = 0.25;
  spec.anomalies.missing["energy_class"] = 0.5;
  spec.anomalies.missing["coords"] = 0.05;
  spec.anomalies.out_of_bbox_pct = 0.02;
  spec.anomalies.qualifier_pct = 0.1;
  auto manifest = generate_site(spec, dir.str());

  auto rules = extract::ExtractionRuleSet::from_json(
      nlohmann::json::parse(fsio::read_file("configs/rules.sitegen.json")));
  std::vector<extract::ListingRecord> corpus;
  for (const auto& t : manifest.listings) {
    auto result = extract::extract_record(fsio::read_file(dir.str() + t.url_path), rules,
                                          "http://t" + t.url_path, "2021-06-15T00:00:00Z");
    corpus.push_back(std::move(result.record));
  }

  auto report = quality::quality_report(corpus, quality::default_rules(2021, manifest.bbox));
  CHECK(report.stats("year_built")->missing == manifest.count_anomaly("missing:year_built"));
  CHECK(report.stats("energy_class")->missing == manifest.count_anomaly("missing:energy_class"));
  CHECK(report.stats("coords")->missing == manifest.count_anomaly("missing:coords"));
  CHECK(report.rule_hits.at("coords_bbox") == manifest.count_anomaly("out_of_bbox"));
  CHECK(report.stats("size_sqm")->qualified == manifest.count_anomaly("qualifier:size_sqm"));
}

TEST_CASE("manifest json round trip") {
  SyntheticSiteSpec spec;
  spec.n_listings = 12;
  spec.seed = 3;
  spec.anomalies.reverted_address_pct = 0.5;
  TempDir dir("site_manifest");
  auto manifest = generate_site(spec, dir.str());
  auto back = SiteManifest::from_json(manifest.to_json());
  REQUIRE(back.listings.size() == manifest.listings.size());
  for (size_t i = 0; i < back.listings.size(); ++i) {
    CHECK(back.listings[i].id == manifest.listings[i].id);
    CHECK(back.listings[i].target_eur_sqm == manifest.listings[i].target_eur_sqm);
    CHECK(back.listings[i].anomalies == manifest.listings[i].anomalies);
  }
  // the manifest on disk parses to the same structure
  auto from_disk = SiteManifest::from_json(
      nlohmann::json::parse(fsio::read_file(dir / "manifest.json")));
  CHECK(from_disk.listings.size() == manifest.listings.size());
}

TEST_CASE("rate validation") {
  SyntheticSiteSpec spec;
  spec.anomalies.out_of_bbox_pct = 0.8;
  spec.anomalies.coord_jitter_pct = 0.5;  // group sums past 1
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.anomalies.coord_jitter_pct = 0.1;
  spec.anomalies.missing["no_such_field"] = 0.1;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("fixture server serves pages and scripts failures") {
  TempDir dir("site_server");
  SyntheticSiteSpec spec;
  spec.n_listings = 3;
  spec.seed = 14;
  auto manifest = generate_site(spec, dir.str());

  FailureScript script;
  script.sequences["/listing/000002.html"] = {503, 503, 200};
  FixtureServer server(dir.str(), 0, script);

  httplib::Client client("127.0.0.1", server.port());

  auto ok = client.Get("/listing/000001.html");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(ok->body.find("Kaltmiete") != std::string::npos);

  auto r1 = client.Get("/listing/000002.html");
  auto r2 = client.Get("/listing/000002.html");
  auto r3 = client.Get("/listing/000002.html");
  CHECK(r1->status == 503);
  CHECK(r2->status == 503);
  CHECK(r3->status == 200);

  auto missing = client.Get("/listing/999999.html");
  CHECK(missing->status == 404);

  auto robots = client.Get("/robots.txt");
  CHECK(robots->status == 200);
  CHECK(robots->get_header_value("Content-Type").find("text/plain") != std::string::npos);

  auto log = server.requests();
  REQUIRE(log.size() == 6);
  for (size_t i = 1; i < log.size(); ++i) CHECK(log[i].t_mono_ms >= log[i - 1].t_mono_ms);
  server.stop();
}

}  // TEST_SUITE
