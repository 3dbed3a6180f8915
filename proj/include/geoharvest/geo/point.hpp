#pragma once

#include <optional>
#include <span>
#include <string>

namespace geoharvest::geo {

inline constexpr double kEarthRadiusM = 6371000.0;

enum class CoordQuality { embedded, geocoded, imputed, obfuscated };

std::string quality_name(CoordQuality q);
std::optional<CoordQuality> quality_from_name(std::string_view s);

// WGS84 latitude/longitude in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  CoordQuality quality = CoordQuality::embedded;
  std::optional<double> positional_error_m;

  bool valid() const { return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0; }
};

struct BBox {
  double lat_min, lat_max, lon_min, lon_max;

  bool well_ordered() const { return lat_min <= lat_max && lon_min <= lon_max; }
  // Closed bounds: boundary points count as inside.
  bool contains(const GeoPoint& p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
  }
};

// "Euclidean" distance in meters on a local equirectangular projection
// centered at `center`; faithful at city scale (<30 km).
double distance_to_center(const GeoPoint& p, const GeoPoint& center);

// Great-circle distance; used as the independent oracle in tests and for
// sanity checks at larger scales.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

// Batch variant over parallel lat/lon arrays (kernel-dispatched).
void distances_to_center(std::span<const double> lat, std::span<const double> lon,
                         const GeoPoint& center, std::span<double> out_m);

// Displaces `p` by `dist_m` meters along bearing `theta_rad` in the local
// projection centered at p.
GeoPoint offset_point(const GeoPoint& p, double dist_m, double theta_rad);

}  // namespace geoharvest::geo
