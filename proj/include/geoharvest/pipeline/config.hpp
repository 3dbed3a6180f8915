#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "geoharvest/fetch/fetcher.hpp"
#include "geoharvest/geo/point.hpp"
#include "geoharvest/model/grid.hpp"
#include "geoharvest/quality/quality.hpp"

namespace geoharvest::pipeline {

// One config file wires the whole workflow; every stage reads the parts it
// needs. All randomness funnels through the single seed.
struct PipelineConfig {
  // target: exactly one of the two
  std::optional<std::string> base_url;     // live host
  std::optional<std::string> fixture_dir;  // generated site tree, served embedded

  std::string rules_path;  // extraction rule set (JSON)

  struct Politeness {
    double min_delay_s = 10.0;
    std::optional<fetch::TimeWindow> window;
    int max_retries = 3;
    std::string user_agent = "geoharvest/0.1 (research crawler)";
    bool respect_robots = true;
  } politeness;

  fetch::SearchQuery search;

  struct GeocoderConfig {
    std::string backend = "stub";  // stub | http
    std::string gazetteer_path;    // stub; defaults to <fixture_dir>/gazetteer.csv
    std::string base_url;          // http backend
    double min_interval_s = 1.0;
  } geocoder;

  struct QualityConfig {
    std::string rules_path;  // optional; defaults shipped in code
    quality::ExclusionCriteria exclusions;
    std::string postal_centroids_path;  // defaults to <fixture_dir>/postal_centroids.csv
    double centroid_radius_m = 600.0;
  } quality_cfg;

  struct ModelConfig {
    std::string spec_path;  // optional GAM spec override
    int train_n = 1000;
    int forest_trees = 500;
    bool plz_onehot = false;
  } model_cfg;

  struct GridConfig {
    double cell_m = 500.0;
    model::GridProfile profile;
  } grid_cfg;

  geo::GeoPoint center;
  std::optional<geo::BBox> bbox;
  std::vector<std::string> amenity_vocab;  // defaults to the shipped vocabulary

  uint64_t seed = 42;
  std::optional<std::string> fixed_time;  // ISO-8601; deterministic scraped_at stamps
  std::string out_dir = "out";

  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;  // throws ValidationError
};

}  // namespace geoharvest::pipeline
