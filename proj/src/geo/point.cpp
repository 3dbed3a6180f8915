#include "geoharvest/geo/point.hpp"

#include <cmath>

#include "geoharvest/kernels/kernels.hpp"

namespace geoharvest::geo {

std::string quality_name(CoordQuality q) {
  switch (q) {
    case CoordQuality::embedded: return "embedded";
    case CoordQuality::geocoded: return "geocoded";
    case CoordQuality::imputed: return "imputed";
    default: return "obfuscated";
  }
}

std::optional<CoordQuality> quality_from_name(std::string_view s) {
  if (s == "embedded") return CoordQuality::embedded;
  if (s == "geocoded") return CoordQuality::geocoded;
  if (s == "imputed") return CoordQuality::imputed;
  if (s == "obfuscated") return CoordQuality::obfuscated;
  return std::nullopt;
}

double distance_to_center(const GeoPoint& p, const GeoPoint& center) {
  double out = 0.0;
  kernels::equirect_distance_batch({&p.lat, 1}, {&p.lon, 1}, center.lat, center.lon,
                                   kEarthRadiusM, {&out, 1});
  return out;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double d2r = M_PI / 180.0;
  const double phi1 = a.lat * d2r, phi2 = b.lat * d2r;
  const double dphi = (b.lat - a.lat) * d2r;
  const double dlmb = (b.lon - a.lon) * d2r;
  const double s = std::sin(dphi / 2), t = std::sin(dlmb / 2);
  const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

void distances_to_center(std::span<const double> lat, std::span<const double> lon,
                         const GeoPoint& center, std::span<double> out_m) {
  kernels::equirect_distance_batch(lat, lon, center.lat, center.lon, kEarthRadiusM, out_m);
}

GeoPoint offset_point(const GeoPoint& p, double dist_m, double theta_rad) {
  constexpr double r2d = 180.0 / M_PI;
  GeoPoint out = p;
  const double dy = dist_m * std::cos(theta_rad);
  const double dx = dist_m * std::sin(theta_rad);
  out.lat = p.lat + (dy / kEarthRadiusM) * r2d;
  out.lon = p.lon + (dx / (kEarthRadiusM * std::cos(p.lat * M_PI / 180.0))) * r2d;
  return out;
}

}  // namespace geoharvest::geo
