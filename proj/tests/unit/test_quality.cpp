#include <doctest.h>

#include <cmath>

#include "geoharvest/quality/quality.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;
using namespace geoharvest::quality;
using extract::ListingRecord;
using extract::ParsedNumber;

namespace {

ListingRecord full_record(const std::string& id) {
  ListingRecord r;
  r.id = id;
  r.url = "http://t/listing/" + id + ".html";
  r.rent_net_eur = ParsedNumber{550.0, extract::Unit::eur, extract::Qualifier::exact};
  r.size_sqm = ParsedNumber{55.0, extract::Unit::sqm, extract::Qualifier::exact};
  r.rooms = ParsedNumber{2.0, extract::Unit::none, extract::Qualifier::exact};
  r.year_built = 1995;
  r.running_costs_eur = ParsedNumber{120.0, extract::Unit::eur, extract::Qualifier::exact};
  r.energy_class = "C";
  r.postal_code = "04001";
  r.raw_address = "Ahornweg 5, 04001 Neustadt";
  r.coords = geo::GeoPoint{51.34, 12.37, geo::CoordQuality::embedded, std::nullopt};
  r.scraped_at = "2021-06-15T03:30:00Z";
  return r;
}

}  // namespace

TEST_SUITE("quality") {

TEST_CASE("missing percentage arithmetic") {
  std::vector<ListingRecord> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back(full_record(std::to_string(i)));
  corpus[1].year_built.reset();
  corpus[4].year_built.reset();
  corpus[7].year_built.reset();

  auto rep = quality_report(corpus, default_rules(2021));
  const auto* year = rep.stats("year_built");
  REQUIRE(year);
  CHECK(year->missing == 3);
  CHECK(QualityReport::pct(year->missing, rep.corpus_size) == 30.00);
}

TEST_CASE("implausible year is flagged, not missing") {
  std::vector<ListingRecord> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(full_record(std::to_string(i)));
  corpus[2].year_built = 2087;

  auto rep = quality_report(corpus, default_rules(2021));
  const auto* year = rep.stats("year_built");
  CHECK(year->missing == 0);
  CHECK(year->implausible == 1);
  CHECK(rep.rule_hits.at("year_range") == 1);
}

TEST_CASE("missing and implausible stay disjoint, percentages sum to 100") {
  std::vector<ListingRecord> corpus;
  rng::Xoshiro256pp r(8);
  for (int i = 0; i < 37; ++i) {
    auto rec = full_record(std::to_string(i));
    if (r.bernoulli(0.3)) rec.year_built.reset();
    else if (r.bernoulli(0.2)) rec.year_built = 1111;  // implausible
    corpus.push_back(rec);
  }
  auto rep = quality_report(corpus, default_rules(2021));
  for (const auto& [attr, st] : rep.attributes) {
    double total = QualityReport::pct(st.missing, rep.corpus_size) +
                   QualityReport::pct(st.implausible, rep.corpus_size) +
                   QualityReport::pct(rep.corpus_size - st.missing - st.implausible,
                                      rep.corpus_size);
    CHECK(std::abs(total - 100.0) <= 0.011);
  }
}

TEST_CASE("price per square meter rule uses the exclusive band") {
  std::vector<ListingRecord> corpus{full_record("a"), full_record("b"), full_record("c")};
  corpus[1].rent_net_eur->value = 30.0;   // 30/55 < 1 EUR/m2
  corpus[2].rent_net_eur->value = 6000.0; // > 100 EUR/m2
  auto rep = quality_report(corpus, default_rules(2021));
  CHECK(rep.rule_hits.at("price_per_sqm") == 2);
  CHECK(rep.stats("price_per_sqm")->implausible == 2);
}

TEST_CASE("renovated cross-check counts hits without implausibility") {
  std::vector<ListingRecord> corpus{full_record("a")};
  corpus[0].amenities.insert("renovated");
  corpus[0].year_built = 2015;
  auto rep = quality_report(corpus, default_rules(2021));
  CHECK(rep.rule_hits.at("renovated_recent_year") == 1);
  CHECK(rep.stats("year_built")->implausible == 0);
}

TEST_CASE("bbox rule flags out-of-area coordinates") {
  geo::BBox bbox{51.0, 51.7, 12.0, 12.8};
  std::vector<ListingRecord> corpus{full_record("a"), full_record("b")};
  corpus[1].coords->lat = 56.3;  // clearly outside
  auto rep = quality_report(corpus, default_rules(2021, bbox));
  CHECK(rep.stats("coords")->implausible == 1);
  CHECK(rep.rule_hits.at("coords_bbox") == 1);
}

TEST_CASE("gap days over the scraped date span") {
  std::vector<ListingRecord> corpus;
  for (int i = 0; i < 3; ++i) corpus.push_back(full_record(std::to_string(i)));
  corpus[0].scraped_at = "2021-06-01T10:00:00Z";
  corpus[1].scraped_at = "2021-06-02T10:00:00Z";
  corpus[2].scraped_at = "2021-06-05T10:00:00Z";  // 3rd/4th empty
  auto rep = quality_report(corpus, default_rules(2021));
  REQUIRE(rep.gap_days.size() == 2);
  CHECK(rep.gap_days[0] == "2021-06-03");
  CHECK(rep.gap_days[1] == "2021-06-04");
}

TEST_CASE("empty corpus violates the precondition") {
  CHECK_THROWS_AS(quality_report({}, default_rules(2021)), ValidationError);
}

TEST_CASE("rule validation") {
  std::vector<PlausibilityRule> bad{{"r1", "year_built", PlausibilityRule::Kind::range, 10.0, 5.0,
                                     {0, 0, 0, 0}, PlausibilityRule::Action::flag, true}};
  CHECK_THROWS_AS(validate_rules(bad), ValidationError);
  std::vector<PlausibilityRule> dup{
      {"r1", "a", PlausibilityRule::Kind::range, 0, 1, {0, 0, 0, 0},
       PlausibilityRule::Action::flag, true},
      {"r1", "b", PlausibilityRule::Kind::range, 0, 1, {0, 0, 0, 0},
       PlausibilityRule::Action::flag, true}};
  CHECK_THROWS_AS(validate_rules(dup), ValidationError);
}

TEST_CASE("exclusions: complete corpus passes untouched") {
  std::vector<ListingRecord> corpus{full_record("a"), full_record("b")};
  ExclusionCriteria crit;
  crit.require_fields = {"rent_net_eur", "size_sqm"};
  auto [retained, ledger] = apply_exclusions(corpus, crit);
  CHECK(retained.size() == 2);
  CHECK(ledger.total_excluded() == 0);
}

TEST_CASE("exclusions: first failing criterion claims the record") {
  std::vector<ListingRecord> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(full_record(std::to_string(i)));
  corpus[2].rent_net_eur.reset();
  corpus[3].rent_net_eur.reset();
  corpus[3].size_sqm.reset();  // would also fail size, but rent claims it first

  ExclusionCriteria crit;
  crit.require_fields = {"rent_net_eur", "size_sqm"};
  auto [retained, ledger] = apply_exclusions(corpus, crit);
  CHECK(retained.size() == 3);
  CHECK(ledger.counts[0].second == 2);  // require:rent_net_eur
  CHECK(ledger.counts[1].second == 0);
  CHECK(ledger.total_excluded() ==
        static_cast<int>(corpus.size()) - static_cast<int>(retained.size()));
}

TEST_CASE("exclusions: building-level geolocation") {
  std::vector<ListingRecord> corpus{full_record("a"), full_record("b"), full_record("c")};
  corpus[1].coords->quality = geo::CoordQuality::imputed;
  corpus[2].coords.reset();
  ExclusionCriteria crit;
  crit.geo = ExclusionCriteria::GeoRequirement::building;
  auto [retained, ledger] = apply_exclusions(corpus, crit);
  CHECK(retained.size() == 1);

  crit.geo = ExclusionCriteria::GeoRequirement::any;
  auto [retained2, ledger2] = apply_exclusions(corpus, crit);
  CHECK(retained2.size() == 2);  // imputed counts as located
}

TEST_CASE("imputation fills only coordinate-less records") {
  std::vector<ListingRecord> corpus{full_record("a"), full_record("b"), full_record("c")};
  corpus[1].coords.reset();                    // gets the centroid
  corpus[2].coords.reset();
  corpus[2].postal_code.reset();               // stays unimputed

  std::map<std::string, geo::GeoPoint> centroids{
      {"04001", {51.36, 12.39, geo::CoordQuality::imputed, std::nullopt}}};
  geo::GeoPoint before = *corpus[0].coords;

  auto summary = impute_distance_by_postal(corpus, centroids, 600.0);
  CHECK(summary.imputed == 1);
  REQUIRE(summary.unimputed_ids.size() == 1);
  CHECK(summary.unimputed_ids[0] == "c");

  CHECK(corpus[0].coords->lat == before.lat);  // untouched
  REQUIRE(corpus[1].coords);
  CHECK(corpus[1].coords->quality == geo::CoordQuality::imputed);
  REQUIRE(corpus[1].coords->positional_error_m);
  CHECK(*corpus[1].coords->positional_error_m == 600.0);

  // distance via the geo oracle: centroid distance to any reference point
  geo::GeoPoint center{51.34, 12.37, geo::CoordQuality::embedded, std::nullopt};
  CHECK(geo::distance_to_center(*corpus[1].coords, center) ==
        geo::distance_to_center(centroids.at("04001"), center));
}

TEST_CASE("obfuscation check: zero jitter means zero errors") {
  std::vector<geo::GeoPoint> pts;
  rng::Xoshiro256pp r(5);
  for (int i = 0; i < 100; ++i)
    pts.push_back({r.uniform(51.3, 51.4), r.uniform(12.3, 12.4), geo::CoordQuality::embedded,
                   std::nullopt});
  auto check = obfuscation_aggregation_check(pts, pts, 500.0);
  CHECK(check.mean_point_error_m == 0.0);
  CHECK(check.mean_cell_centroid_error_m == 0.0);
}

TEST_CASE("obfuscation check: ring jitter lands in range, aggregation helps") {
  rng::Xoshiro256pp r(6);
  geo::GeoPoint center{51.34, 12.37, geo::CoordQuality::embedded, std::nullopt};
  std::vector<geo::GeoPoint> true_pts, jittered;
  for (int i = 0; i < 8000; ++i) {
    geo::GeoPoint p{center.lat + r.uniform(-0.013, 0.013), center.lon + r.uniform(-0.02, 0.02),
                    geo::CoordQuality::embedded, std::nullopt};
    true_pts.push_back(p);
    jittered.push_back(geo::offset_point(p, r.uniform(150.0, 200.0), r.uniform(0, 2 * M_PI)));
  }
  auto check = obfuscation_aggregation_check(true_pts, jittered, 500.0, 20);
  CHECK(check.mean_point_error_m >= 150.0);
  CHECK(check.mean_point_error_m <= 200.0);
  CHECK(check.dense_cells >= 20);
  CHECK(check.mean_cell_centroid_error_m < check.mean_point_error_m);
}

TEST_CASE("obfuscation check validates inputs") {
  std::vector<geo::GeoPoint> a(3), b(2);
  CHECK_THROWS_AS(obfuscation_aggregation_check(a, b, 500.0), ValidationError);
  CHECK_THROWS_AS(obfuscation_aggregation_check(a, a, 0.0), ValidationError);
}

TEST_CASE("report renders text and json") {
  std::vector<ListingRecord> corpus{full_record("a")};
  auto rep = quality_report(corpus, default_rules(2021));
  std::string text = report_to_text(rep);
  for (const char* attr : {"rent_net_eur", "energy_class", "coords", "price_per_sqm"})
    CHECK(text.find(attr) != std::string::npos);
  auto j = report_to_json(rep);
  CHECK(j["corpus_size"] == 1);
  CHECK(j["attributes"].size() == 9);
}

TEST_CASE("centroids csv loader") {
  auto map = centroids_from_csv("plz,lat,lon\n04001,51.36,12.39\n04002,51.30,12.35\n");
  REQUIRE(map.size() == 2);
  CHECK(map.at("04001").lat == 51.36);
  CHECK_THROWS_AS(centroids_from_csv("a,b\n1,2\n"), ValidationError);
}

}  // TEST_SUITE
