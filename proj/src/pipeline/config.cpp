#include "geoharvest/pipeline/config.hpp"

#include <filesystem>

#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/timeutil.hpp"

namespace geoharvest::pipeline {

using nlohmann::json;

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  const json& target = j.at("target");
  if (target.contains("base_url")) c.base_url = target["base_url"].get<std::string>();
  if (target.contains("fixture_dir")) c.fixture_dir = target["fixture_dir"].get<std::string>();

  c.rules_path = j.at("rules").get<std::string>();

  if (j.contains("politeness")) {
    const json& p = j["politeness"];
    c.politeness.min_delay_s = p.value("min_delay_s", c.politeness.min_delay_s);
    c.politeness.max_retries = p.value("max_retries", c.politeness.max_retries);
    c.politeness.user_agent = p.value("user_agent", c.politeness.user_agent);
    c.politeness.respect_robots = p.value("respect_robots", true);
    if (p.contains("window") && !p["window"].is_null()) {
      c.politeness.window = fetch::TimeWindow{p["window"].at("start_hour").get<int>(),
                                              p["window"].at("end_hour").get<int>()};
    }
  }

  if (j.contains("search")) {
    const json& s = j["search"];
    c.search.place = s.value("place", "");
    c.search.object_type = s.value("object_type", "rent");
    for (const auto& v : s.value("sorts", json::array()))
      c.search.sorts.push_back(v.get<std::string>());
  }

  if (j.contains("geocoder")) {
    const json& g = j["geocoder"];
    c.geocoder.backend = g.value("backend", "stub");
    c.geocoder.gazetteer_path = g.value("gazetteer", "");
    c.geocoder.base_url = g.value("base_url", "");
    c.geocoder.min_interval_s = g.value("min_interval_s", 1.0);
  }

  if (j.contains("quality")) {
    const json& q = j["quality"];
    c.quality_cfg.rules_path = q.value("rules", "");
    c.quality_cfg.postal_centroids_path = q.value("postal_centroids", "");
    c.quality_cfg.centroid_radius_m = q.value("centroid_radius_m", 600.0);
    if (q.contains("exclusions")) {
      for (const auto& f : q["exclusions"].value("require_fields", json::array()))
        c.quality_cfg.exclusions.require_fields.push_back(f.get<std::string>());
      std::string geo_req = q["exclusions"].value("geolocation", "none");
      c.quality_cfg.exclusions.geo =
          geo_req == "building" ? quality::ExclusionCriteria::GeoRequirement::building
          : geo_req == "any"   ? quality::ExclusionCriteria::GeoRequirement::any
                               : quality::ExclusionCriteria::GeoRequirement::none;
    }
  }

  if (j.contains("model")) {
    const json& mj = j["model"];
    c.model_cfg.spec_path = mj.value("spec", "");
    c.model_cfg.train_n = mj.value("train_n", 1000);
    c.model_cfg.forest_trees = mj.value("forest_trees", 500);
    c.model_cfg.plz_onehot = mj.value("plz_onehot", false);
  }

  if (j.contains("grid")) {
    c.grid_cfg.cell_m = j["grid"].value("cell_m", 500.0);
    if (j["grid"].contains("profile"))
      c.grid_cfg.profile = model::GridProfile::from_json(j["grid"]["profile"]);
  }

  if (j.contains("center")) {
    c.center.lat = j["center"].at("lat").get<double>();
    c.center.lon = j["center"].at("lon").get<double>();
  }
  if (j.contains("bbox")) {
    c.bbox = geo::BBox{j["bbox"].at("lat_min").get<double>(),
                       j["bbox"].at("lat_max").get<double>(),
                       j["bbox"].at("lon_min").get<double>(),
                       j["bbox"].at("lon_max").get<double>()};
  }
  for (const auto& a : j.value("amenity_vocab", json::array()))
    c.amenity_vocab.push_back(a.get<std::string>());
  if (c.amenity_vocab.empty()) c.amenity_vocab = sitegen::default_amenity_vocab();

  c.seed = j.value("seed", 42ULL);
  if (j.contains("fixed_time")) c.fixed_time = j["fixed_time"].get<std::string>();
  c.out_dir = j.value("out", "out");
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  json j;
  try {
    j = json::parse(fsio::read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("pipeline config " + path + ": " + e.what());
  }
  PipelineConfig c = from_json(j);
  c.validate();
  return c;
}

json PipelineConfig::to_json() const {
  json target;
  if (base_url) target["base_url"] = *base_url;
  if (fixture_dir) target["fixture_dir"] = *fixture_dir;

  json pol{{"min_delay_s", politeness.min_delay_s},
           {"max_retries", politeness.max_retries},
           {"user_agent", politeness.user_agent},
           {"respect_robots", politeness.respect_robots}};
  if (politeness.window)
    pol["window"] = json{{"start_hour", politeness.window->start_hour},
                         {"end_hour", politeness.window->end_hour}};

  json j{{"target", target},
         {"rules", rules_path},
         {"politeness", pol},
         {"search", json{{"place", search.place},
                         {"object_type", search.object_type},
                         {"sorts", search.sorts}}},
         {"geocoder", json{{"backend", geocoder.backend},
                           {"gazetteer", geocoder.gazetteer_path},
                           {"base_url", geocoder.base_url},
                           {"min_interval_s", geocoder.min_interval_s}}},
         {"quality",
          json{{"rules", quality_cfg.rules_path},
               {"postal_centroids", quality_cfg.postal_centroids_path},
               {"centroid_radius_m", quality_cfg.centroid_radius_m},
               {"exclusions",
                json{{"require_fields", quality_cfg.exclusions.require_fields},
                     {"geolocation",
                      quality_cfg.exclusions.geo ==
                              quality::ExclusionCriteria::GeoRequirement::building
                          ? "building"
                          : quality_cfg.exclusions.geo ==
                                    quality::ExclusionCriteria::GeoRequirement::any
                                ? "any"
                                : "none"}}}}},
         {"model", json{{"spec", model_cfg.spec_path},
                        {"train_n", model_cfg.train_n},
                        {"forest_trees", model_cfg.forest_trees},
                        {"plz_onehot", model_cfg.plz_onehot}}},
         {"grid", json{{"cell_m", grid_cfg.cell_m}, {"profile", grid_cfg.profile.to_json()}}},
         {"center", json{{"lat", center.lat}, {"lon", center.lon}}},
         {"amenity_vocab", amenity_vocab},
         {"seed", seed},
         {"out", out_dir}};
  if (bbox)
    j["bbox"] = json{{"lat_min", bbox->lat_min},
                     {"lat_max", bbox->lat_max},
                     {"lon_min", bbox->lon_min},
                     {"lon_max", bbox->lon_max}};
  if (fixed_time) j["fixed_time"] = *fixed_time;
  return j;
}

void PipelineConfig::validate() const {
  if (!base_url && !fixture_dir)
    throw ValidationError("config: target needs base_url or fixture_dir");
  if (base_url && fixture_dir)
    throw ValidationError("config: target must be either base_url or fixture_dir, not both");
  if (rules_path.empty()) throw ValidationError("config: rules path is required");
  if (!std::filesystem::exists(rules_path))
    throw ValidationError("config: rules file does not exist: " + rules_path);
  if (fixture_dir && !std::filesystem::exists(*fixture_dir))
    throw ValidationError("config: fixture dir does not exist: " + *fixture_dir);
  if (politeness.min_delay_s < 0) throw ValidationError("config: min_delay_s must be >= 0");
  if (fixed_time && !timeutil::parse_iso8601(*fixed_time))
    throw ValidationError("config: fixed_time is not ISO-8601: " + *fixed_time);
  if (geocoder.backend != "stub" && geocoder.backend != "http")
    throw ValidationError("config: geocoder backend must be stub or http");
  if (out_dir.empty()) throw ValidationError("config: out dir must be non-empty");
}

}  // namespace geoharvest::pipeline
