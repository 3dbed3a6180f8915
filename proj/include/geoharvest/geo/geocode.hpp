#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geoharvest/geo/address.hpp"
#include "geoharvest/geo/gazetteer.hpp"
#include "geoharvest/geo/point.hpp"

namespace geoharvest::geo {

struct GeocodeQuery {
  std::string free;  // free-form address string
  std::optional<std::string> street;  // "Street Nr"
  std::optional<std::string> city;
  std::optional<std::string> postalcode;
};

struct GeocodeCandidate {
  double lat = 0.0;
  double lon = 0.0;
  std::string display_name;
};

// Backend contract mirrors the common geocoding web API: ranked candidate
// list for a structured-or-free-form query. Errors surface as exceptions;
// "no result" is an empty list.
class GeocodeBackend {
 public:
  virtual ~GeocodeBackend() = default;
  virtual std::vector<GeocodeCandidate> search(const GeocodeQuery& q) = 0;
  virtual std::string name() const = 0;
};

struct BackendError : std::runtime_error {
  explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

// Offline stub: resolves against a local gazetteer with the same ranking
// contract (street+number, then street, then city). Used by all tests.
class StubGeocodeBackend final : public GeocodeBackend {
 public:
  explicit StubGeocodeBackend(Gazetteer gaz) : gaz_(std::move(gaz)) {}
  std::vector<GeocodeCandidate> search(const GeocodeQuery& q) override;
  std::string name() const override { return "stub"; }

 private:
  Gazetteer gaz_;
};

// Live HTTP backend (free-form + structured query parameters, JSON response
// array of {lat, lon, display_name}). Enforces its own politeness interval
// independent of the fetcher.
class HttpGeocodeBackend final : public GeocodeBackend {
 public:
  HttpGeocodeBackend(std::string base_url, std::string user_agent,
                     double min_interval_s = 1.0, int max_retries = 2);
  ~HttpGeocodeBackend() override;
  std::vector<GeocodeCandidate> search(const GeocodeQuery& q) override;  // throws BackendError
  std::string name() const override { return "http"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct GeocodeFailure {
  enum class Reason { no_match, backend_error };
  Reason reason = Reason::no_match;
  std::string detail;
};

using GeocodeResult = std::variant<GeoPoint, GeocodeFailure>;

// Caching front end. Cached and uncached calls return identical results;
// the cache persists across runs when a path is given.
class Geocoder {
 public:
  explicit Geocoder(GeocodeBackend& backend, std::string cache_path = "");
  ~Geocoder();

  // Throws ValidationError when addr has neither city nor postal_code.
  GeocodeResult geocode(const Address& addr);

  void flush_cache() const;
  size_t cache_size() const;
  static std::string cache_key(const Address& addr);

 private:
  GeocodeBackend& backend_;
  std::string cache_path_;
  mutable std::mutex mu_;
  struct CacheEntry {
    bool ok = false;
    double lat = 0.0, lon = 0.0;
    std::string reason, detail;
  };
  std::map<std::string, CacheEntry> cache_;

  GeocodeResult from_entry(const CacheEntry& e) const;
};

}  // namespace geoharvest::geo
