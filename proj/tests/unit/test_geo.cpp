#include <doctest.h>

#include <cmath>

#include "geoharvest/geo/address.hpp"
#include "geoharvest/geo/gazetteer.hpp"
#include "geoharvest/geo/point.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;
using namespace geoharvest::geo;

TEST_SUITE("geo") {

TEST_CASE("reversed address order is normalized") {
  Address a = normalize_address("04109 Leipzig, Musterstr. 5", "");
  CHECK(a.street == "Musterstr.");
  CHECK(a.house_number == "5");
  CHECK(a.postal_code == "04109");
  CHECK(a.city == "Leipzig");
  CHECK(a.canonical() == "Musterstr. 5, 04109 Leipzig");
}

TEST_CASE("parenthetical noise is stripped") {
  Address a = normalize_address("Musterstr. 5 (Gebäude B), 04109 Leipzig", "");
  CHECK(a.street == "Musterstr.");
  CHECK(a.house_number == "5");
  CHECK(a.postal_code == "04109");
}

TEST_CASE("missing house number is flagged") {
  Address a = normalize_address("Musterstr., 04109 Leipzig", "");
  CHECK(a.street == "Musterstr.");
  CHECK(!a.house_number);
  CHECK(a.house_number_missing);
}

TEST_CASE("no street token falls back to hint") {
  Address a = normalize_address("04109", "Leipzig");
  CHECK(a.unresolvable);
  CHECK(a.city == "Leipzig");
  CHECK(a.postal_code == "04109");
  CHECK(a.raw == "04109");
}

TEST_CASE("normalization is idempotent on canonical forms") {
  rng::Xoshiro256pp r(11);
  const std::vector<std::string> streets = {"Ahornweg", "Lindenallee", "Straße des Friedens"};
  for (int i = 0; i < 50; ++i) {
    std::string addr = streets[r.below(streets.size())] + " " +
                       std::to_string(1 + r.below(200)) + ", 0" +
                       std::to_string(4000 + r.below(999)) + " Neustadt";
    Address a = normalize_address(addr, "");
    Address b = normalize_address(a.canonical(), "");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.street == b.street);
    CHECK(a.house_number == b.house_number);
  }
}

TEST_CASE("distance identity and scale") {
  GeoPoint center{51.34, 12.37, CoordQuality::embedded, std::nullopt};
  CHECK(distance_to_center(center, center) == 0.0);

  GeoPoint north = center;
  north.lat += 0.01;
  double d = distance_to_center(north, center);
  CHECK(d == doctest::Approx(1112.0).epsilon(0.001));
}

TEST_CASE("distance symmetry") {
  rng::Xoshiro256pp r(3);
  for (int i = 0; i < 100; ++i) {
    GeoPoint a{r.uniform(51.0, 51.5), r.uniform(12.0, 12.8), CoordQuality::embedded, std::nullopt};
    GeoPoint b{r.uniform(51.0, 51.5), r.uniform(12.0, 12.8), CoordQuality::embedded, std::nullopt};
    CHECK(distance_to_center(a, b) == doctest::Approx(distance_to_center(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("equirectangular agrees with haversine at city scale") {
  rng::Xoshiro256pp r(17);
  GeoPoint center{51.34, 12.37, CoordQuality::embedded, std::nullopt};
  for (int i = 0; i < 500; ++i) {
    double theta = r.uniform(0, 2 * M_PI);
    double dist = r.uniform(10.0, 29000.0);
    GeoPoint p = offset_point(center, dist, theta);
    double eq = distance_to_center(p, center);
    double hv = haversine_m(p, center);
    CHECK(std::abs(eq - hv) / hv < 0.001);
  }
}

TEST_CASE("bbox containment is closed") {
  BBox box{51.0, 52.0, 12.0, 13.0};
  CHECK(box.contains({51.0, 12.0, CoordQuality::embedded, std::nullopt}));  // corner
  CHECK(box.contains({52.0, 13.0, CoordQuality::embedded, std::nullopt}));
  CHECK(box.contains({51.5, 12.5, CoordQuality::embedded, std::nullopt}));
  CHECK(!box.contains({53.0, 12.5, CoordQuality::embedded, std::nullopt}));  // 1 deg north
  CHECK(!box.contains({51.5, 13.5, CoordQuality::embedded, std::nullopt}));
}

TEST_CASE("geoparse finds toponyms with spans") {
  Gazetteer gaz;
  gaz.add({"Gohlis", {51.37, 12.36, CoordQuality::geocoded, std::nullopt}, ToponymKind::district});
  gaz.add({"Rosental", {51.35, 12.35, CoordQuality::geocoded, std::nullopt}, ToponymKind::district});

  std::string text = "nice flat in Gohlis near Rosental";
  auto matches = geoparse(text, gaz);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].toponym == "Gohlis");
  CHECK(text.substr(matches[0].begin, matches[0].end - matches[0].begin) == "Gohlis");
  CHECK(matches[1].toponym == "Rosental");
  CHECK(matches[0].end <= matches[1].begin);  // non-overlapping, sorted
}

TEST_CASE("geoparse with empty gazetteer") {
  CHECK(geoparse("anything at all", Gazetteer{}).empty());
}

TEST_CASE("geoparse longest match wins") {
  Gazetteer gaz;
  gaz.add({"Leipzig", {51.34, 12.37, CoordQuality::geocoded, std::nullopt}, ToponymKind::city});
  gaz.add({"Leipzig Gohlis", {51.37, 12.36, CoordQuality::geocoded, std::nullopt},
           ToponymKind::district});
  auto matches = geoparse("wohnen in Leipzig Gohlis", gaz);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].toponym == "Leipzig Gohlis");
}

TEST_CASE("geoparse respects word boundaries and case") {
  Gazetteer gaz;
  gaz.add({"Gohlis", {51.37, 12.36, CoordQuality::geocoded, std::nullopt}, ToponymKind::district});
  CHECK(geoparse("GOHLIS", gaz).size() == 1);       // case-insensitive
  CHECK(geoparse("Mygohlisberg", gaz).empty());     // inside a word
}

TEST_CASE("gazetteer rejects duplicates and empty toponyms") {
  Gazetteer gaz;
  gaz.add({"X", {1, 1, CoordQuality::geocoded, std::nullopt}, ToponymKind::city});
  CHECK_THROWS_AS(gaz.add({"x", {2, 2, CoordQuality::geocoded, std::nullopt}, ToponymKind::city}),
                  ValidationError);
  CHECK_THROWS_AS(gaz.add({"", {1, 1, CoordQuality::geocoded, std::nullopt}, ToponymKind::city}),
                  ValidationError);
}

TEST_CASE("gazetteer csv round trip") {
  Gazetteer gaz;
  gaz.add({"Neustadt", {51.34, 12.37, CoordQuality::geocoded, std::nullopt}, ToponymKind::city});
  gaz.add({"Ahornweg 5", {51.35, 12.38, CoordQuality::geocoded, std::nullopt},
           ToponymKind::street});
  Gazetteer back = Gazetteer::load_csv(gaz.to_csv());
  REQUIRE(back.entries().size() == 2);
  CHECK(back.find("neustadt", ToponymKind::city));
  CHECK(back.find("Ahornweg 5", ToponymKind::street));
}

}  // TEST_SUITE
