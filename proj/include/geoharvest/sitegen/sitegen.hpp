#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/geo/gazetteer.hpp"
#include "geoharvest/geo/point.hpp"
#include "geoharvest/model/features.hpp"

namespace geoharvest::sitegen {

// The known generating surface for rent per square meter: smooth distance
// and size effects, decade-step year effect, per-amenity premiums and a
// sharp renovated-near-center interaction, plus gaussian noise.
struct HedonicGenerator {
  double base = 9.0;
  double noise_sd = 0.8;
  double dist_amplitude = 3.0;
  double dist_tau_m = 1200.0;
  double size_amplitude = 2.5;
  double size_tau_sqm = 40.0;
  std::map<std::string, double> amenity_effects = {
      {"balcony", 0.35}, {"parking", 0.5},          {"basement", 0.1},
      {"kitchen", 0.45}, {"senior_friendly", 0.0}, {"renovated", 0.7}};
  double interaction_bonus = 1.0;  // renovated and within center_cut_m
  double center_cut_m = 1500.0;

  // noise-free surface value
  double surface(double dist_m, double size_sqm, int year_built,
                 const std::set<std::string>& amenities) const;
  double year_effect(int year_built) const;

  static HedonicGenerator from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct AnomalyRates {
  std::map<std::string, double> missing;  // year_built, energy_class, rooms,
                                          // running_costs_eur, coords, house_number
  double qualifier_pct = 0.0;
  double coord_jitter_pct = 0.0;
  double jitter_min_m = 150.0, jitter_max_m = 200.0;
  double out_of_bbox_pct = 0.0;
  double reverted_address_pct = 0.0;
  double address_corruption_pct = 0.0;

  static AnomalyRates from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // rates in [0,1], jitter range ordered, groups sum <= 1
};

struct SyntheticSiteSpec {
  int n_listings = 100;
  int per_page = 10;
  uint64_t seed = 42;
  std::string city = "Neustadt";
  std::string object_type = "rent";
  geo::GeoPoint center{51.34, 12.37, geo::CoordQuality::embedded, std::nullopt};
  double city_radius_m = 3000.0;
  std::vector<std::string> sorts = {"price_asc", "date_desc"};
  std::vector<std::string> robots_disallow = {"/private/"};
  std::optional<double> robots_crawl_delay_s;
  int n_private = 0;  // robots-blocked promo links mixed into the results
  AnomalyRates anomalies;
  HedonicGenerator generator;

  geo::BBox bbox() const;
  std::string place_slug() const;  // lowercase city for search URLs

  static SyntheticSiteSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

// Ground truth for one rendered listing. All numeric values are quantized to
// their rendered precision, so a perfect extraction pipeline reproduces them
// bit-exactly.
struct ListingTruth {
  std::string id;
  std::string url_path;
  geo::GeoPoint true_point;
  std::optional<geo::GeoPoint> embedded_point;  // post-jitter; absent if coords missing
  double dist_center_m = 0.0;
  double target_eur_sqm = 0.0;  // rent / size after quantization
  double rent_net_eur = 0.0;
  double size_sqm = 0.0;
  double rooms = 0.0;
  int year_built = 0;
  double running_costs_eur = 0.0;
  std::string energy_class;
  std::string postal_code;
  std::string district;
  std::string street;
  std::string house_number;
  std::string address_rendered;
  std::set<std::string> amenities;
  int nfeatures = 0;
  std::vector<std::string> anomalies;

  bool has_anomaly(const std::string& tag) const;
};

struct SiteManifest {
  SyntheticSiteSpec spec;
  geo::BBox bbox{0, 0, 0, 0};
  std::vector<ListingTruth> listings;
  std::vector<std::string> index_pages;  // url paths
  std::vector<std::string> private_urls;
  std::string robots_txt;

  nlohmann::json to_json() const;
  static SiteManifest from_json(const nlohmann::json& j);

  int count_anomaly(const std::string& tag) const;
};

// Deterministic w.r.t. spec.seed: a second run produces a byte-identical
// tree. Writes pages, robots.txt, gazetteer.csv, postal_centroids.csv and
// manifest.json under out_dir.
SiteManifest generate_site(const SyntheticSiteSpec& spec, const std::string& out_dir);

// Truth drawing without rendering; used by model-level experiments that do
// not need HTML. Same stream discipline as generate_site.
std::vector<ListingTruth> draw_listings(const SyntheticSiteSpec& spec);

// FeatureMatrix as a perfect pipeline would build it (rows ordered by id).
model::FeatureMatrix manifest_features(const SiteManifest& m, bool per_amenity,
                                       bool plz_onehot);
model::FeatureMatrix truths_to_features(const std::vector<ListingTruth>& listings,
                                        const std::vector<std::string>& amenity_vocab,
                                        bool per_amenity, bool plz_onehot);

const std::vector<std::string>& default_amenity_vocab();

// Gazetteer with city, district, street and per-address entries; the
// per-address rows carry each listing's true point so the offline geocode
// stub resolves to building level.
geo::Gazetteer site_gazetteer(const SiteManifest& m);

std::string postal_centroids_csv(const SyntheticSiteSpec& spec);

// Quantizes to the decimal rendering used on the pages (value == parsed
// rendering, making extraction closure exact).
double quantize(double v, int decimals);

}  // namespace geoharvest::sitegen
