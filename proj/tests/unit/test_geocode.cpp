#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "geoharvest/geo/geocode.hpp"
#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "helpers.hpp"

using namespace geoharvest;
using namespace geoharvest::geo;

namespace {

sitegen::SiteManifest small_site(TempDir& dir) {
  sitegen::SyntheticSiteSpec spec;
  spec.n_listings = 8;
  spec.seed = 21;
  return sitegen::generate_site(spec, dir.str());
}

}  // namespace

TEST_SUITE("geocode") {

TEST_CASE("stub resolves fixture addresses to their true points") {
  TempDir dir("geocode_stub");
  auto manifest = small_site(dir);
  StubGeocodeBackend backend(sitegen::site_gazetteer(manifest));
  Geocoder geocoder(backend);

  for (const auto& truth : manifest.listings) {
    Address addr = normalize_address(truth.address_rendered, "");
    auto result = geocoder.geocode(addr);
    REQUIRE(std::holds_alternative<GeoPoint>(result));
    const auto& p = std::get<GeoPoint>(result);
    CHECK(p.lat == truth.true_point.lat);
    CHECK(p.lon == truth.true_point.lon);
    CHECK(p.quality == CoordQuality::geocoded);
  }
}

TEST_CASE("empty address violates the precondition") {
  StubGeocodeBackend backend{Gazetteer{}};
  Geocoder geocoder(backend);
  CHECK_THROWS_AS(geocoder.geocode(Address{}), ValidationError);
}

TEST_CASE("corrupted street yields no_match") {
  TempDir dir("geocode_corrupt");
  sitegen::SyntheticSiteSpec spec;
  spec.n_listings = 20;
  spec.seed = 22;
  spec.anomalies.address_corruption_pct = 1.0;
  auto manifest = sitegen::generate_site(spec, dir.str());

  StubGeocodeBackend backend(sitegen::site_gazetteer(manifest));
  Geocoder geocoder(backend);
  for (const auto& truth : manifest.listings) {
    REQUIRE(truth.has_anomaly("address_corruption"));
    Address addr = normalize_address(truth.address_rendered, "");
    auto result = geocoder.geocode(addr);
    REQUIRE(std::holds_alternative<GeocodeFailure>(result));
    CHECK(std::get<GeocodeFailure>(result).reason == GeocodeFailure::Reason::no_match);
  }
}

TEST_CASE("cache transparency and persistence") {
  TempDir dir("geocode_cache");
  auto manifest = small_site(dir);
  std::string cache_path = dir / "cache.json";
  Address addr = normalize_address(manifest.listings[0].address_rendered, "");

  GeoPoint first{};
  {
    StubGeocodeBackend backend(sitegen::site_gazetteer(manifest));
    Geocoder geocoder(backend, cache_path);
    auto r1 = geocoder.geocode(addr);
    auto r2 = geocoder.geocode(addr);  // served from cache
    REQUIRE(std::holds_alternative<GeoPoint>(r1));
    REQUIRE(std::holds_alternative<GeoPoint>(r2));
    first = std::get<GeoPoint>(r1);
    CHECK(first.lat == std::get<GeoPoint>(r2).lat);
    CHECK(first.lon == std::get<GeoPoint>(r2).lon);
    CHECK(geocoder.cache_size() == 1);
    geocoder.flush_cache();
  }
  {
    // an empty backend: only the persisted cache can answer
    StubGeocodeBackend backend{Gazetteer{}};
    Geocoder geocoder(backend, cache_path);
    auto r = geocoder.geocode(addr);
    REQUIRE(std::holds_alternative<GeoPoint>(r));
    CHECK(std::get<GeoPoint>(r).lat == first.lat);
    CHECK(std::get<GeoPoint>(r).lon == first.lon);
  }
}

TEST_CASE("http backend speaks the wire contract") {
  httplib::Server server;
  std::string seen_path;
  server.Get("/search", [&](const httplib::Request& req, httplib::Response& res) {
    seen_path = req.path;
    if (req.get_param_value("street") == "Ahornweg 5") {
      res.set_content(
          R"([{"lat":"51.350000","lon":"12.380000","display_name":"Ahornweg 5, Neustadt"},)"
          R"({"lat":"51.0","lon":"12.0","display_name":"second"}])",
          "application/json");
    } else {
      res.set_content("[]", "application/json");
    }
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(2));

  HttpGeocodeBackend backend("http://127.0.0.1:" + std::to_string(port), "geoharvest-test",
                             /*min_interval_s=*/0.0);
  Geocoder geocoder(backend);

  Address addr;
  addr.street = "Ahornweg";
  addr.house_number = "5";
  addr.postal_code = "04001";
  addr.city = "Neustadt";
  addr.raw = "Ahornweg 5, 04001 Neustadt";

  auto result = geocoder.geocode(addr);
  REQUIRE(std::holds_alternative<GeoPoint>(result));
  CHECK(std::get<GeoPoint>(result).lat == 51.35);       // first-ranked candidate
  CHECK(std::get<GeoPoint>(result).lon == 12.38);

  Address miss;
  miss.street = "Nirgendwo";
  miss.city = "Neustadt";
  miss.raw = "Nirgendwo, Neustadt";
  auto fail = geocoder.geocode(miss);
  REQUIRE(std::holds_alternative<GeocodeFailure>(fail));
  CHECK(std::get<GeocodeFailure>(fail).reason == GeocodeFailure::Reason::no_match);

  server.stop();
  th.join();
}

TEST_CASE("http backend retries transient errors then reports backend_error") {
  httplib::Server server;
  int hits = 0;
  server.Get("/search", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(2));

  HttpGeocodeBackend backend("http://127.0.0.1:" + std::to_string(port), "geoharvest-test",
                             /*min_interval_s=*/0.0, /*max_retries=*/2);
  Geocoder geocoder(backend);
  Address addr;
  addr.city = "Neustadt";
  addr.raw = "Neustadt";
  auto result = geocoder.geocode(addr);
  REQUIRE(std::holds_alternative<GeocodeFailure>(result));
  CHECK(std::get<GeocodeFailure>(result).reason == GeocodeFailure::Reason::backend_error);
  CHECK(hits == 3);  // initial attempt + 2 retries

  server.stop();
  th.join();
}

}  // TEST_SUITE
