#include "geoharvest/geo/geocode.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <thread>

#include "geoharvest/net/http.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::geo {

std::vector<GeocodeCandidate> StubGeocodeBackend::search(const GeocodeQuery& q) {
  std::vector<GeocodeCandidate> out;
  auto push = [&](const GazetteerEntry* e) {
    if (!e) return;
    for (const auto& c : out)
      if (c.display_name == e->toponym) return;
    out.push_back({e->point.lat, e->point.lon, e->toponym});
  };

  if (q.street) {
    // structured street queries are strict: an unknown street never falls
    // back to a city-level hit
    std::string key = *q.street;
    push(gaz_.find(key, ToponymKind::street));
    auto sp = key.rfind(' ');
    if (sp != std::string::npos &&
        key.find_first_of("0123456789", sp) != std::string::npos) {
      push(gaz_.find(key.substr(0, sp), ToponymKind::street));
    }
    return out;
  }
  if (q.city) {
    push(gaz_.find(*q.city, ToponymKind::district));
    push(gaz_.find(*q.city, ToponymKind::city));
  }
  if (out.empty() && !q.free.empty()) {
    push(gaz_.find(q.free, ToponymKind::street));
  }
  return out;
}

struct HttpGeocodeBackend::Impl {
  net::HttpSession session;
  std::string base_path;
  double min_interval_s;
  int max_retries;
  std::chrono::steady_clock::time_point last_request{};

  Impl(const std::string& base_url, const std::string& ua, double interval, int retries)
      : session(base_url, ua), min_interval_s(interval), max_retries(retries) {}
};

HttpGeocodeBackend::HttpGeocodeBackend(std::string base_url, std::string user_agent,
                                       double min_interval_s, int max_retries)
    : impl_(std::make_unique<Impl>(base_url, user_agent, min_interval_s, max_retries)) {}

HttpGeocodeBackend::~HttpGeocodeBackend() = default;

std::vector<GeocodeCandidate> HttpGeocodeBackend::search(const GeocodeQuery& q) {
  std::string path = "/search?format=json&q=" + net::url_encode(q.free);
  if (q.street) path += "&street=" + net::url_encode(*q.street);
  if (q.city) path += "&city=" + net::url_encode(*q.city);
  if (q.postalcode) path += "&postalcode=" + net::url_encode(*q.postalcode);

  std::string last_error;
  for (int attempt = 0; attempt <= impl_->max_retries; ++attempt) {
    // self-imposed rate limit, independent of the fetcher's politeness clock
    auto now = std::chrono::steady_clock::now();
    if (impl_->last_request.time_since_epoch().count() != 0) {
      auto next =
          impl_->last_request + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(impl_->min_interval_s));
      if (next > now) std::this_thread::sleep_until(next);
    }
    impl_->last_request = std::chrono::steady_clock::now();

    net::HttpResponse res = impl_->session.get(path);
    if (res.network_error) {
      last_error = "network error: " + res.error;
      continue;
    }
    if (res.status >= 500) {
      last_error = "server error " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) throw BackendError("geocode backend returned " + std::to_string(res.status));

    try {
      auto j = nlohmann::json::parse(res.body);
      std::vector<GeocodeCandidate> out;
      for (const auto& item : j) {
        GeocodeCandidate c;
        // lat/lon arrive as strings in the common wire format; accept numbers too
        c.lat = item.at("lat").is_string() ? std::stod(item.at("lat").get<std::string>())
                                           : item.at("lat").get<double>();
        c.lon = item.at("lon").is_string() ? std::stod(item.at("lon").get<std::string>())
                                           : item.at("lon").get<double>();
        c.display_name = item.value("display_name", "");
        out.push_back(std::move(c));
      }
      return out;
    } catch (const std::exception& e) {
      throw BackendError(std::string("geocode backend: unparseable response: ") + e.what());
    }
  }
  throw BackendError("geocode backend unreachable: " + last_error);
}

Geocoder::Geocoder(GeocodeBackend& backend, std::string cache_path)
    : backend_(backend), cache_path_(std::move(cache_path)) {
  if (cache_path_.empty() || !std::filesystem::exists(cache_path_)) return;
  auto j = nlohmann::json::parse(fsio::read_file(cache_path_));
  for (auto it = j.begin(); it != j.end(); ++it) {
    CacheEntry e;
    e.ok = it.value().at("ok").get<bool>();
    if (e.ok) {
      e.lat = it.value().at("lat").get<double>();
      e.lon = it.value().at("lon").get<double>();
    } else {
      e.reason = it.value().value("reason", "no_match");
      e.detail = it.value().value("detail", "");
    }
    cache_[it.key()] = e;
  }
}

Geocoder::~Geocoder() {
  try {
    flush_cache();
  } catch (...) {
    // best effort on teardown
  }
}

std::string Geocoder::cache_key(const Address& addr) {
  return str::to_lower(addr.canonical());
}

GeocodeResult Geocoder::from_entry(const CacheEntry& e) const {
  if (e.ok) {
    GeoPoint p;
    p.lat = e.lat;
    p.lon = e.lon;
    p.quality = CoordQuality::geocoded;
    return p;
  }
  GeocodeFailure f;
  f.reason = e.reason == "backend_error" ? GeocodeFailure::Reason::backend_error
                                         : GeocodeFailure::Reason::no_match;
  f.detail = e.detail;
  return f;
}

GeocodeResult Geocoder::geocode(const Address& addr) {
  if (!addr.city && !addr.postal_code)
    throw ValidationError("geocode: address needs at least a city or a postal code");

  const std::string key = cache_key(addr);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return from_entry(it->second);
  }

  GeocodeQuery q;
  q.free = addr.canonical();
  if (addr.street) {
    q.street = *addr.street;
    if (addr.house_number) *q.street += " " + *addr.house_number;
  }
  q.city = addr.city;
  q.postalcode = addr.postal_code;

  CacheEntry e;
  try {
    auto candidates = backend_.search(q);
    if (candidates.empty()) {
      e.ok = false;
      e.reason = "no_match";
    } else {
      e.ok = true;
      e.lat = candidates.front().lat;  // first-ranked candidate wins
      e.lon = candidates.front().lon;
    }
  } catch (const BackendError& err) {
    e.ok = false;
    e.reason = "backend_error";
    e.detail = err.what();
  }

  {
    std::lock_guard<std::mutex> lock(mu_);
    cache_[key] = e;
  }
  return from_entry(e);
}

void Geocoder::flush_cache() const {
  if (cache_path_.empty()) return;
  nlohmann::json j = nlohmann::json::object();
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [key, e] : cache_) {
    nlohmann::json entry{{"ok", e.ok}};
    if (e.ok) {
      entry["lat"] = e.lat;
      entry["lon"] = e.lon;
    } else {
      entry["reason"] = e.reason;
      if (!e.detail.empty()) entry["detail"] = e.detail;
    }
    j[key] = entry;
  }
  fsio::write_file(cache_path_, j.dump(2) + "\n");
}

size_t Geocoder::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

}  // namespace geoharvest::geo
