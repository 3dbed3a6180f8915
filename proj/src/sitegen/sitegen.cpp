#include "geoharvest/sitegen/sitegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geoharvest/extract/numbers.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/rng.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::sitegen {

using extract::Qualifier;
using extract::render_numeric_de;
using extract::Unit;
using nlohmann::json;

namespace {

const std::vector<std::string> kDistricts = {
    "Altstadt",    "Hafenviertel", "Gartenstadt", "Nordend",   "Suedstadt",  "Weststadt",
    "Ostheim",     "Lindenhof",    "Neuwerk",     "Birkenau",  "Eichkamp",   "Muehlenfeld",
    "Rosenthal",   "Sandberg",     "Wiesengrund", "Zollhafen"};

const std::vector<std::string> kStreets = {
    "Ahornweg",        "Birkenstrasse",   "Lindenallee",    "Eichendamm",     "Kastanienweg",
    "Ulmenring",       "Buchenpfad",      "Erlenhof",       "Tannenweg",      "Fliedergasse",
    "Rosenweg",        "Tulpenstrasse",   "Nelkenpfad",     "Dahlienweg",     "Asternplatz",
    "Mohnblumenweg",   "Kornblumenring", "Lavendelgasse",  "Holunderweg",    "Wacholderpfad",
    "Schleusenstrasse", "Kranichweg",     "Reiherdamm",     "Falkenhorst",    "Milanring",
    "Habichtweg",      "Sperbergasse",    "Bussardplatz"};

const std::vector<std::string> kEnergyClasses = {"A+", "A", "B", "C", "D", "E", "F", "G", "H"};

const std::vector<std::string> kAmenityVocab = {"balcony",        "parking",  "basement",
                                                "kitchen",        "senior_friendly",
                                                "renovated"};

const std::map<std::string, std::string> kAmenityDe = {
    {"balcony", "Balkon"},           {"parking", "Stellplatz"}, {"basement", "Keller"},
    {"kitchen", "Einbaukueche"},     {"senior_friendly", "Seniorengerecht"},
    {"renovated", "Saniert"}};

const std::vector<std::string> kMissingFields = {"year_built", "energy_class", "rooms",
                                                 "running_costs_eur", "coords", "house_number"};

std::string zero_pad(int v, int width) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*d", width, v);
  return buf;
}

std::string corrupt_street(const std::string& s) {
  // vowels to 'x': never collides with a real pool name
  std::string out = s;
  for (char& c : out) {
    if (std::string("aeiouAEIOU").find(c) != std::string::npos) c = 'x';
  }
  return out;
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

const std::vector<std::string>& default_amenity_vocab() { return kAmenityVocab; }

double quantize(double v, int decimals) {
  return std::stod(fmt_fixed(v, decimals));
}

double HedonicGenerator::year_effect(int year_built) const {
  // step function over decades since 1880; recent decades surge
  static const double kSteps[] = {0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0, -0.1,
                                  0.0, 0.2, 0.4, 0.7, 1.2, 1.9, 2.5};
  int idx = (year_built - 1880) / 10;
  idx = std::clamp(idx, 0, static_cast<int>(std::size(kSteps)) - 1);
  return kSteps[idx];
}

double HedonicGenerator::surface(double dist_m, double size_sqm, int year_built,
                                 const std::set<std::string>& amenities) const {
  double v = base;
  v += dist_amplitude * std::exp(-dist_m / dist_tau_m);
  v += size_amplitude * std::exp(-(size_sqm - 18.0) / size_tau_sqm);
  v += year_effect(year_built);
  for (const auto& [tag, effect] : amenity_effects)
    if (amenities.count(tag)) v += effect;
  if (amenities.count("renovated") && dist_m < center_cut_m) v += interaction_bonus;
  return v;
}

HedonicGenerator HedonicGenerator::from_json(const json& j) {
  HedonicGenerator g;
  g.base = j.value("base", g.base);
  g.noise_sd = j.value("noise_sd", g.noise_sd);
  g.dist_amplitude = j.value("dist_amplitude", g.dist_amplitude);
  g.dist_tau_m = j.value("dist_tau_m", g.dist_tau_m);
  g.size_amplitude = j.value("size_amplitude", g.size_amplitude);
  g.size_tau_sqm = j.value("size_tau_sqm", g.size_tau_sqm);
  if (j.contains("amenity_effects")) {
    g.amenity_effects.clear();
    for (auto it = j["amenity_effects"].begin(); it != j["amenity_effects"].end(); ++it)
      g.amenity_effects[it.key()] = it.value().get<double>();
  }
  g.interaction_bonus = j.value("interaction_bonus", g.interaction_bonus);
  g.center_cut_m = j.value("center_cut_m", g.center_cut_m);
  return g;
}

json HedonicGenerator::to_json() const {
  return json{{"base", base},
              {"noise_sd", noise_sd},
              {"dist_amplitude", dist_amplitude},
              {"dist_tau_m", dist_tau_m},
              {"size_amplitude", size_amplitude},
              {"size_tau_sqm", size_tau_sqm},
              {"amenity_effects", amenity_effects},
              {"interaction_bonus", interaction_bonus},
              {"center_cut_m", center_cut_m}};
}

AnomalyRates AnomalyRates::from_json(const json& j) {
  AnomalyRates a;
  if (j.contains("missing")) {
    for (auto it = j["missing"].begin(); it != j["missing"].end(); ++it)
      a.missing[it.key()] = it.value().get<double>();
  }
  a.qualifier_pct = j.value("qualifier_pct", 0.0);
  if (j.contains("coord_jitter")) {
    a.coord_jitter_pct = j["coord_jitter"].value("pct", 0.0);
    a.jitter_min_m = j["coord_jitter"].value("min_m", 150.0);
    a.jitter_max_m = j["coord_jitter"].value("max_m", 200.0);
  }
  a.out_of_bbox_pct = j.value("out_of_bbox_pct", 0.0);
  a.reverted_address_pct = j.value("reverted_address_pct", 0.0);
  a.address_corruption_pct = j.value("address_corruption_pct", 0.0);
  a.validate();
  return a;
}

json AnomalyRates::to_json() const {
  return json{{"missing", missing},
              {"qualifier_pct", qualifier_pct},
              {"coord_jitter",
               json{{"pct", coord_jitter_pct}, {"min_m", jitter_min_m}, {"max_m", jitter_max_m}}},
              {"out_of_bbox_pct", out_of_bbox_pct},
              {"reverted_address_pct", reverted_address_pct},
              {"address_corruption_pct", address_corruption_pct}};
}

void AnomalyRates::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (const auto& [field, rate] : missing) {
    if (!in01(rate)) throw ValidationError("anomaly rate out of [0,1] for missing " + field);
    if (std::find(kMissingFields.begin(), kMissingFields.end(), field) == kMissingFields.end())
      throw ValidationError("unknown missing-field anomaly '" + field + "'");
  }
  if (!in01(qualifier_pct) || !in01(coord_jitter_pct) || !in01(out_of_bbox_pct) ||
      !in01(reverted_address_pct) || !in01(address_corruption_pct))
    throw ValidationError("anomaly rates must lie in [0,1]");
  if (jitter_min_m > jitter_max_m) throw ValidationError("jitter min_m must be <= max_m");
  double coords_missing = missing.count("coords") ? missing.at("coords") : 0.0;
  if (coords_missing + out_of_bbox_pct + coord_jitter_pct > 1.0)
    throw ValidationError("coordinate anomaly rates sum to more than 1");
  double hn_missing = missing.count("house_number") ? missing.at("house_number") : 0.0;
  if (address_corruption_pct + reverted_address_pct + hn_missing > 1.0)
    throw ValidationError("address anomaly rates sum to more than 1");
}

geo::BBox SyntheticSiteSpec::bbox() const {
  const double d2r = M_PI / 180.0;
  double dlat = city_radius_m / (geo::kEarthRadiusM * d2r);
  double dlon = city_radius_m / (geo::kEarthRadiusM * d2r * std::cos(center.lat * d2r));
  return {center.lat - dlat, center.lat + dlat, center.lon - dlon, center.lon + dlon};
}

std::string SyntheticSiteSpec::place_slug() const { return str::to_lower(city); }

void SyntheticSiteSpec::validate() const {
  if (n_listings < 1) throw ValidationError("site spec: n_listings must be >= 1");
  if (per_page < 1) throw ValidationError("site spec: per_page must be >= 1");
  if (city.empty()) throw ValidationError("site spec: city must be non-empty");
  if (!(city_radius_m > 0)) throw ValidationError("site spec: city_radius_m must be > 0");
  if (sorts.empty()) throw ValidationError("site spec: at least one sort order");
  anomalies.validate();
}

SyntheticSiteSpec SyntheticSiteSpec::from_json(const json& j) {
  SyntheticSiteSpec s;
  s.n_listings = j.value("n_listings", s.n_listings);
  s.per_page = j.value("per_page", s.per_page);
  s.seed = j.value("seed", s.seed);
  s.city = j.value("city", s.city);
  s.object_type = j.value("object_type", s.object_type);
  if (j.contains("center")) {
    s.center.lat = j["center"].at("lat").get<double>();
    s.center.lon = j["center"].at("lon").get<double>();
  }
  s.city_radius_m = j.value("city_radius_m", s.city_radius_m);
  if (j.contains("sorts")) {
    s.sorts.clear();
    for (const auto& v : j["sorts"]) s.sorts.push_back(v.get<std::string>());
  }
  if (j.contains("robots")) {
    s.robots_disallow.clear();
    for (const auto& v : j["robots"].value("disallow", json::array()))
      s.robots_disallow.push_back(v.get<std::string>());
    if (j["robots"].contains("crawl_delay_s"))
      s.robots_crawl_delay_s = j["robots"]["crawl_delay_s"].get<double>();
  }
  s.n_private = j.value("n_private", 0);
  if (j.contains("anomalies")) s.anomalies = AnomalyRates::from_json(j["anomalies"]);
  if (j.contains("generator")) s.generator = HedonicGenerator::from_json(j["generator"]);
  s.validate();
  return s;
}

json SyntheticSiteSpec::to_json() const {
  json robots{{"disallow", robots_disallow}};
  if (robots_crawl_delay_s) robots["crawl_delay_s"] = *robots_crawl_delay_s;
  return json{{"n_listings", n_listings},
              {"per_page", per_page},
              {"seed", seed},
              {"city", city},
              {"object_type", object_type},
              {"center", json{{"lat", center.lat}, {"lon", center.lon}}},
              {"city_radius_m", city_radius_m},
              {"sorts", sorts},
              {"robots", robots},
              {"n_private", n_private},
              {"anomalies", anomalies.to_json()},
              {"generator", generator.to_json()}};
}

bool ListingTruth::has_anomaly(const std::string& tag) const {
  return std::find(anomalies.begin(), anomalies.end(), tag) != anomalies.end();
}

int SiteManifest::count_anomaly(const std::string& tag) const {
  int n = 0;
  for (const auto& l : listings)
    if (l.has_anomaly(tag)) ++n;
  return n;
}

namespace {

struct ZoneInfo {
  std::string plz;
  std::string district;
  geo::GeoPoint centroid;
};

constexpr int kZoneGrid = 4;  // 4x4 postal zones

ZoneInfo zone_of(const SyntheticSiteSpec& spec, const geo::GeoPoint& p) {
  geo::BBox bb = spec.bbox();
  double fx = (p.lon - bb.lon_min) / (bb.lon_max - bb.lon_min);
  double fy = (p.lat - bb.lat_min) / (bb.lat_max - bb.lat_min);
  int ix = std::clamp(static_cast<int>(fx * kZoneGrid), 0, kZoneGrid - 1);
  int iy = std::clamp(static_cast<int>(fy * kZoneGrid), 0, kZoneGrid - 1);
  int z = iy * kZoneGrid + ix;
  ZoneInfo info;
  info.plz = zero_pad(4000 + z + 1, 5);
  info.district = kDistricts[static_cast<size_t>(z)];
  info.centroid.lat =
      quantize(bb.lat_min + (iy + 0.5) * (bb.lat_max - bb.lat_min) / kZoneGrid, 6);
  info.centroid.lon =
      quantize(bb.lon_min + (ix + 0.5) * (bb.lon_max - bb.lon_min) / kZoneGrid, 6);
  return info;
}

}  // namespace

std::string postal_centroids_csv(const SyntheticSiteSpec& spec) {
  std::string out = "plz,lat,lon\n";
  geo::BBox bb = spec.bbox();
  for (int iy = 0; iy < kZoneGrid; ++iy) {
    for (int ix = 0; ix < kZoneGrid; ++ix) {
      int z = iy * kZoneGrid + ix;
      double lat = quantize(bb.lat_min + (iy + 0.5) * (bb.lat_max - bb.lat_min) / kZoneGrid, 6);
      double lon = quantize(bb.lon_min + (ix + 0.5) * (bb.lon_max - bb.lon_min) / kZoneGrid, 6);
      out += zero_pad(4000 + z + 1, 5) + "," + fmt_fixed(lat, 6) + "," + fmt_fixed(lon, 6) + "\n";
    }
  }
  return out;
}

std::vector<ListingTruth> draw_listings(const SyntheticSiteSpec& spec) {
  spec.validate();
  rng::Xoshiro256pp rng(spec.seed);
  geo::BBox bb = spec.bbox();

  auto missing_rate = [&](const std::string& field) {
    auto it = spec.anomalies.missing.find(field);
    return it == spec.anomalies.missing.end() ? 0.0 : it->second;
  };

  std::map<size_t, int> house_counter;
  std::vector<ListingTruth> out;
  out.reserve(static_cast<size_t>(spec.n_listings));

  for (int i = 0; i < spec.n_listings; ++i) {
    ListingTruth t;
    t.id = zero_pad(i + 1, 6);
    t.url_path = "/listing/" + t.id + ".html";

    // --- true values; every draw happens unconditionally so the stream
    // position is independent of rates ---
    t.true_point.lat = quantize(bb.lat_min + rng.uniform() * (bb.lat_max - bb.lat_min), 6);
    t.true_point.lon = quantize(bb.lon_min + rng.uniform() * (bb.lon_max - bb.lon_min), 6);
    t.true_point.quality = geo::CoordQuality::embedded;

    double size_raw = std::clamp(std::exp(rng.normal(std::log(55.0), 0.35)), 18.0, 160.0);
    t.size_sqm = quantize(size_raw, 1);

    double uy = rng.uniform();
    t.year_built = std::min(1880 + static_cast<int>(std::pow(uy, 0.75) * 142.0), 2021);

    double rooms_raw = t.size_sqm / 30.0 + 0.6 + rng.normal(0.0, 0.25);
    t.rooms = std::clamp(std::round(rooms_raw * 2.0) / 2.0, 1.0, 6.0);

    for (const auto& tag : kAmenityVocab) {
      double pr = tag == "balcony"           ? 0.55
                  : tag == "parking"         ? 0.35
                  : tag == "basement"        ? 0.50
                  : tag == "kitchen"         ? 0.40
                  : tag == "senior_friendly" ? 0.12
                                             : 0.30;  // renovated
      if (rng.bernoulli(pr)) t.amenities.insert(tag);
    }
    t.nfeatures = static_cast<int>(t.amenities.size());

    t.energy_class = kEnergyClasses[rng.below(kEnergyClasses.size())];
    t.running_costs_eur = quantize((1.7 + 1.2 * rng.uniform()) * t.size_sqm, 2);

    size_t street_idx = rng.below(kStreets.size());
    t.street = kStreets[street_idx];
    t.house_number = std::to_string(++house_counter[street_idx]);

    t.dist_center_m = geo::distance_to_center(t.true_point, spec.center);
    ZoneInfo zone = zone_of(spec, t.true_point);
    t.postal_code = zone.plz;
    t.district = zone.district;

    double noise = rng.normal(0.0, spec.generator.noise_sd);
    double target_surface =
        spec.generator.surface(t.dist_center_m, t.size_sqm, t.year_built, t.amenities);
    t.rent_net_eur = quantize((target_surface + noise) * t.size_sqm, 2);
    if (t.rent_net_eur < 1.0) t.rent_net_eur = 1.0;
    t.target_eur_sqm = t.rent_net_eur / t.size_sqm;

    // --- anomaly draws (again unconditional) ---
    double u_my = rng.uniform(), u_me = rng.uniform(), u_mr = rng.uniform(),
           u_mrc = rng.uniform();
    double u_q = rng.uniform();
    double u_coord = rng.uniform();
    double jitter_theta = rng.uniform() * 2.0 * M_PI;
    // half-meter inset absorbs the 1e-6 deg coordinate quantization
    double jitter_r = spec.anomalies.jitter_min_m + 0.5 +
                      rng.uniform() * std::max(spec.anomalies.jitter_max_m -
                                                   spec.anomalies.jitter_min_m - 1.0,
                                               0.0);
    double u_addr = rng.uniform();

    if (u_my < missing_rate("year_built")) t.anomalies.push_back("missing:year_built");
    if (u_me < missing_rate("energy_class")) t.anomalies.push_back("missing:energy_class");
    if (u_mr < missing_rate("rooms")) t.anomalies.push_back("missing:rooms");
    if (u_mrc < missing_rate("running_costs_eur"))
      t.anomalies.push_back("missing:running_costs_eur");
    if (u_q < spec.anomalies.qualifier_pct) t.anomalies.push_back("qualifier:size_sqm");

    double p_cm = missing_rate("coords");
    double p_oob = spec.anomalies.out_of_bbox_pct;
    double p_jit = spec.anomalies.coord_jitter_pct;
    if (u_coord < p_cm) {
      t.anomalies.push_back("missing:coords");
      t.embedded_point = std::nullopt;
    } else if (u_coord < p_cm + p_oob) {
      t.anomalies.push_back("out_of_bbox");
      geo::GeoPoint p = t.true_point;
      p.lat = quantize(std::min(p.lat + 5.0, 89.0), 6);  // clearly outside the city
      t.embedded_point = p;
    } else if (u_coord < p_cm + p_oob + p_jit) {
      t.anomalies.push_back("coord_jitter");
      geo::GeoPoint p = geo::offset_point(t.true_point, jitter_r, jitter_theta);
      p.lat = quantize(p.lat, 6);
      p.lon = quantize(p.lon, 6);
      p.quality = geo::CoordQuality::obfuscated;
      t.embedded_point = p;
    } else {
      t.embedded_point = t.true_point;
    }

    double p_corrupt = spec.anomalies.address_corruption_pct;
    double p_rev = spec.anomalies.reverted_address_pct;
    double p_mhn = missing_rate("house_number");
    std::string street_out = t.street;
    bool with_number = true;
    bool reverted = false;
    if (u_addr < p_corrupt) {
      t.anomalies.push_back("address_corruption");
      street_out = corrupt_street(t.street);
    } else if (u_addr < p_corrupt + p_rev) {
      t.anomalies.push_back("reverted_address");
      reverted = true;
    } else if (u_addr < p_corrupt + p_rev + p_mhn) {
      t.anomalies.push_back("missing:house_number");
      with_number = false;
    }

    std::string street_part = street_out;
    if (with_number) street_part += " " + t.house_number;
    if (reverted) {
      // reversed order plus a redundant qualifier, the two classic address
      // degradations
      t.address_rendered =
          t.postal_code + " " + spec.city + ", " + street_part + " (Gebäude B)";
    } else {
      t.address_rendered = street_part + ", " + t.postal_code + " " + spec.city;
    }

    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string listing_html(const SyntheticSiteSpec& spec, const ListingTruth& t) {
  const bool miss_year = t.has_anomaly("missing:year_built");
  const bool miss_energy = t.has_anomaly("missing:energy_class");
  const bool miss_rooms = t.has_anomaly("missing:rooms");
  const bool miss_rc = t.has_anomaly("missing:running_costs_eur");
  const bool qual_size = t.has_anomaly("qualifier:size_sqm");

  std::string rooms_str = render_numeric_de(t.rooms, t.rooms == std::floor(t.rooms) ? 0 : 1,
                                            Unit::none, Qualifier::exact);

  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"de\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>" + rooms_str + "-Zimmer-Wohnung in " + spec.city + "</title>\n</head>\n<body>\n";
  html += "<header><h1 class=\"listing-title\">" + rooms_str + "-Zimmer-Wohnung in " +
          t.district + "</h1></header>\n<main>\n";
  html += "<section class=\"facts\">\n<dl class=\"hardfacts\">\n";
  html += "  <dt>Kaltmiete</dt><dd class=\"rent\">" +
          render_numeric_de(t.rent_net_eur, 2, Unit::eur, Qualifier::exact) + "</dd>\n";
  html += "  <dt>Wohnfläche</dt><dd class=\"size\">" +
          render_numeric_de(t.size_sqm, 1, Unit::sqm,
                            qual_size ? Qualifier::approx : Qualifier::exact) +
          "</dd>\n";
  if (!miss_rooms) html += "  <dt>Zimmer</dt><dd class=\"rooms\">" + rooms_str + "</dd>\n";
  html += "</dl>\n<dl class=\"details\">\n";
  if (!miss_year)
    html += "  <dt>Baujahr</dt><dd class=\"year-built\">" + std::to_string(t.year_built) +
            "</dd>\n";
  if (!miss_rc)
    html += "  <dt>Nebenkosten</dt><dd class=\"running-costs\">" +
            render_numeric_de(t.running_costs_eur, 2, Unit::eur, Qualifier::exact) + "</dd>\n";
  if (!miss_energy)
    html += "  <dt>Energieeffizienzklasse</dt><dd class=\"energy-class\">" + t.energy_class +
            "</dd>\n";
  html += "</dl>\n</section>\n";

  html += "<ul class=\"amenities\">\n";
  for (const auto& tag : kAmenityVocab) {
    if (!t.amenities.count(tag)) continue;
    html += "  <li class=\"" + tag + "\">" + kAmenityDe.at(tag) + "</li>\n";
  }
  html += "</ul>\n";

  html += "<address class=\"location\">" + t.address_rendered + "</address>\n";
  html += "<div class=\"description\">Helle Wohnung im Stadtteil " + t.district + ", gelegen in " +
          spec.city + ". Objekt-Nr. " + t.id + ".</div>\n";

  if (t.embedded_point) {
    html += "<script type=\"text/javascript\">var mapConfig = {\"lat\":" +
            fmt_fixed(t.embedded_point->lat, 6) + ",\"lng\":" +
            fmt_fixed(t.embedded_point->lon, 6) + ",\"zoom\":15};</script>\n";
  }
  html += "</main>\n</body>\n</html>\n";
  return html;
}

std::vector<size_t> sorted_order(const std::vector<ListingTruth>& listings,
                                 const std::string& sort) {
  std::vector<size_t> order(listings.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (sort == "price_asc") {
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (listings[a].rent_net_eur != listings[b].rent_net_eur)
        return listings[a].rent_net_eur < listings[b].rent_net_eur;
      return listings[a].id < listings[b].id;
    });
  } else if (sort == "date_desc") {
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return listings[a].id > listings[b].id; });
  } else if (sort == "size_desc") {
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (listings[a].size_sqm != listings[b].size_sqm)
        return listings[a].size_sqm > listings[b].size_sqm;
      return listings[a].id < listings[b].id;
    });
  }
  return order;
}

std::string index_html(const SyntheticSiteSpec& spec, const std::vector<ListingTruth>& listings,
                       const std::vector<size_t>& page_items, const std::string& sort, int page,
                       int pages, bool with_private) {
  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"de\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Mietwohnungen in " + spec.city + " – Seite " + std::to_string(page) +
          "</title>\n</head>\n<body>\n";
  html += "<header><h1>Mietwohnungen in " + spec.city + "</h1></header>\n<main>\n";
  html += "<ol class=\"results\">\n";
  if (with_private) {
    for (int k = 0; k < spec.n_private; ++k) {
      html += "  <li class=\"result promoted\"><a class=\"listing-link\" href=\"/private/promo" +
              std::to_string(k + 1) + ".html\">Premium-Angebot ansehen</a></li>\n";
    }
  }
  for (size_t idx : page_items) {
    const auto& t = listings[idx];
    std::string rooms_str = render_numeric_de(t.rooms, t.rooms == std::floor(t.rooms) ? 0 : 1,
                                              Unit::none, Qualifier::exact);
    html += "  <li class=\"result\"><a class=\"listing-link\" href=\"" + t.url_path + "\">" +
            rooms_str + "-Zimmer-Wohnung, " +
            render_numeric_de(t.size_sqm, 1, Unit::sqm, Qualifier::exact) + ", " +
            render_numeric_de(t.rent_net_eur, 2, Unit::eur, Qualifier::exact) + "</a></li>\n";
  }
  html += "</ol>\n<nav class=\"pagination\">\n";
  std::string base = "/search/" + spec.object_type + "/" + spec.place_slug() + "/" + sort + "/page";
  if (page > 1)
    html += "  <a class=\"page-link prev\" href=\"" + base + std::to_string(page - 1) +
            ".html\">Zurück</a>\n";
  if (page < pages)
    html += "  <a class=\"page-link next\" href=\"" + base + std::to_string(page + 1) +
            ".html\">Weiter</a>\n";
  html += "</nav>\n</main>\n</body>\n</html>\n";
  return html;
}

std::string private_html(int k) {
  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"de\">\n<head><meta charset=\"utf-8\">";
  html += "<title>Premium-Angebot</title></head>\n<body>\n";
  html += "<h1>Premium-Angebot " + std::to_string(k) + "</h1>\n";
  html += "<p>Dieser Bereich ist nur für angemeldete Nutzer bestimmt.</p>\n";
  html += "</body>\n</html>\n";
  return html;
}

std::string robots_txt_body(const SyntheticSiteSpec& spec) {
  std::string out = "User-agent: *\n";
  if (spec.robots_crawl_delay_s) {
    double d = *spec.robots_crawl_delay_s;
    char buf[32];
    if (d == static_cast<long long>(d))
      std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(d));
    else
      std::snprintf(buf, sizeof(buf), "%g", d);
    out += std::string("Crawl-delay: ") + buf + "\n";
  }
  for (const auto& p : spec.robots_disallow) out += "Disallow: " + p + "\n";
  return out;
}

}  // namespace

SiteManifest generate_site(const SyntheticSiteSpec& spec, const std::string& out_dir) {
  SiteManifest m;
  m.spec = spec;
  m.bbox = spec.bbox();
  m.listings = draw_listings(spec);
  m.robots_txt = robots_txt_body(spec);

  fsio::ensure_dir(out_dir);
  fsio::write_file(out_dir + "/robots.txt", m.robots_txt);

  for (const auto& t : m.listings) {
    fsio::write_file(out_dir + t.url_path, listing_html(spec, t));
  }

  for (const auto& sort : spec.sorts) {
    auto order = sorted_order(m.listings, sort);
    int pages = static_cast<int>((order.size() + spec.per_page - 1) /
                                 static_cast<size_t>(spec.per_page));
    if (pages == 0) pages = 1;
    for (int page = 1; page <= pages; ++page) {
      std::vector<size_t> items;
      for (size_t k = static_cast<size_t>((page - 1) * spec.per_page);
           k < std::min(order.size(), static_cast<size_t>(page * spec.per_page)); ++k)
        items.push_back(order[k]);
      std::string path = "/search/" + spec.object_type + "/" + spec.place_slug() + "/" + sort +
                         "/page" + std::to_string(page) + ".html";
      fsio::write_file(out_dir + path,
                       index_html(spec, m.listings, items, sort, page, pages, page == 1));
      m.index_pages.push_back(path);
    }
  }

  for (int k = 0; k < spec.n_private; ++k) {
    std::string path = "/private/promo" + std::to_string(k + 1) + ".html";
    fsio::write_file(out_dir + path, private_html(k + 1));
    m.private_urls.push_back(path);
  }

  fsio::write_file(out_dir + "/gazetteer.csv", site_gazetteer(m).to_csv());
  fsio::write_file(out_dir + "/postal_centroids.csv", postal_centroids_csv(spec));
  fsio::write_file(out_dir + "/manifest.json", m.to_json().dump(2) + "\n");
  return m;
}

json SiteManifest::to_json() const {
  json listings_json = json::array();
  for (const auto& t : listings) {
    json lj{{"id", t.id},
            {"url_path", t.url_path},
            {"true",
             json{{"lat", t.true_point.lat},
                  {"lon", t.true_point.lon},
                  {"dist_center_m", t.dist_center_m},
                  {"target_eur_sqm", t.target_eur_sqm},
                  {"rent_net_eur", t.rent_net_eur},
                  {"size_sqm", t.size_sqm},
                  {"rooms", t.rooms},
                  {"year_built", t.year_built},
                  {"running_costs_eur", t.running_costs_eur},
                  {"energy_class", t.energy_class},
                  {"postal_code", t.postal_code},
                  {"district", t.district},
                  {"street", t.street},
                  {"house_number", t.house_number},
                  {"address", t.address_rendered},
                  {"amenities", t.amenities},
                  {"nfeatures", t.nfeatures}}},
            {"anomalies", t.anomalies}};
    if (t.embedded_point)
      lj["embedded"] = json{{"lat", t.embedded_point->lat}, {"lon", t.embedded_point->lon}};
    listings_json.push_back(std::move(lj));
  }
  return json{{"spec", spec.to_json()},
              {"bbox",
               json{{"lat_min", bbox.lat_min},
                    {"lat_max", bbox.lat_max},
                    {"lon_min", bbox.lon_min},
                    {"lon_max", bbox.lon_max}}},
              {"index_pages", index_pages},
              {"private_urls", private_urls},
              {"robots_txt", robots_txt},
              {"listings", listings_json}};
}

SiteManifest SiteManifest::from_json(const json& j) {
  SiteManifest m;
  m.spec = SyntheticSiteSpec::from_json(j.at("spec"));
  m.bbox = {j.at("bbox").at("lat_min").get<double>(), j.at("bbox").at("lat_max").get<double>(),
            j.at("bbox").at("lon_min").get<double>(), j.at("bbox").at("lon_max").get<double>()};
  for (const auto& p : j.value("index_pages", json::array()))
    m.index_pages.push_back(p.get<std::string>());
  for (const auto& p : j.value("private_urls", json::array()))
    m.private_urls.push_back(p.get<std::string>());
  m.robots_txt = j.value("robots_txt", "");
  for (const auto& lj : j.at("listings")) {
    ListingTruth t;
    t.id = lj.at("id").get<std::string>();
    t.url_path = lj.at("url_path").get<std::string>();
    const json& tr = lj.at("true");
    t.true_point = {tr.at("lat").get<double>(), tr.at("lon").get<double>(),
                    geo::CoordQuality::embedded, std::nullopt};
    t.dist_center_m = tr.at("dist_center_m").get<double>();
    t.target_eur_sqm = tr.at("target_eur_sqm").get<double>();
    t.rent_net_eur = tr.at("rent_net_eur").get<double>();
    t.size_sqm = tr.at("size_sqm").get<double>();
    t.rooms = tr.at("rooms").get<double>();
    t.year_built = tr.at("year_built").get<int>();
    t.running_costs_eur = tr.at("running_costs_eur").get<double>();
    t.energy_class = tr.at("energy_class").get<std::string>();
    t.postal_code = tr.at("postal_code").get<std::string>();
    t.district = tr.at("district").get<std::string>();
    t.street = tr.at("street").get<std::string>();
    t.house_number = tr.at("house_number").get<std::string>();
    t.address_rendered = tr.at("address").get<std::string>();
    for (const auto& a : tr.at("amenities")) t.amenities.insert(a.get<std::string>());
    t.nfeatures = tr.at("nfeatures").get<int>();
    for (const auto& a : lj.value("anomalies", json::array()))
      t.anomalies.push_back(a.get<std::string>());
    if (lj.contains("embedded")) {
      t.embedded_point = geo::GeoPoint{lj["embedded"].at("lat").get<double>(),
                                       lj["embedded"].at("lon").get<double>(),
                                       geo::CoordQuality::embedded, std::nullopt};
    }
    m.listings.push_back(std::move(t));
  }
  return m;
}

model::FeatureMatrix truths_to_features(const std::vector<ListingTruth>& listings,
                                        const std::vector<std::string>& amenity_vocab,
                                        bool per_amenity, bool plz_onehot) {
  model::FeatureMatrix fm;
  if (per_amenity)
    for (const auto& tag : amenity_vocab) fm.extended_names.push_back("amenity_" + tag);
  std::map<std::string, size_t> plz_cols;
  if (plz_onehot) {
    std::set<std::string> codes;
    for (const auto& t : listings) codes.insert(t.postal_code);
    for (const auto& c : codes) {
      plz_cols[c] = fm.extended_names.size();
      fm.extended_names.push_back("plz_" + c);
    }
  }

  std::vector<size_t> order(listings.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return listings[a].id < listings[b].id; });

  for (size_t idx : order) {
    const auto& t = listings[idx];
    model::FeatureRow r;
    r.id = t.id;
    r.target = t.target_eur_sqm;
    r.dist_center_m = t.dist_center_m;
    r.size_sqm = t.size_sqm;
    r.year_built = static_cast<double>(t.year_built);
    int nf = 0;
    for (const auto& tag : amenity_vocab)
      if (t.amenities.count(tag)) ++nf;
    r.nfeatures = static_cast<double>(nf);
    r.extended.assign(fm.extended_names.size(), 0.0);
    if (per_amenity) {
      for (size_t i = 0; i < amenity_vocab.size(); ++i)
        if (t.amenities.count(amenity_vocab[i])) r.extended[i] = 1.0;
    }
    if (plz_onehot) {
      auto it = plz_cols.find(t.postal_code);
      if (it != plz_cols.end()) r.extended[it->second] = 1.0;
    }
    fm.rows.push_back(std::move(r));
  }
  return fm;
}

model::FeatureMatrix manifest_features(const SiteManifest& m, bool per_amenity, bool plz_onehot) {
  return truths_to_features(m.listings, kAmenityVocab, per_amenity, plz_onehot);
}

geo::Gazetteer site_gazetteer(const SiteManifest& m) {
  geo::Gazetteer gaz;
  geo::GeoPoint center = m.spec.center;
  center.quality = geo::CoordQuality::geocoded;
  gaz.add({m.spec.city, center, geo::ToponymKind::city});

  geo::BBox bb = m.bbox;
  for (int iy = 0; iy < kZoneGrid; ++iy) {
    for (int ix = 0; ix < kZoneGrid; ++ix) {
      int z = iy * kZoneGrid + ix;
      geo::GeoPoint p;
      p.lat = quantize(bb.lat_min + (iy + 0.5) * (bb.lat_max - bb.lat_min) / kZoneGrid, 6);
      p.lon = quantize(bb.lon_min + (ix + 0.5) * (bb.lon_max - bb.lon_min) / kZoneGrid, 6);
      p.quality = geo::CoordQuality::geocoded;
      gaz.add({kDistricts[static_cast<size_t>(z)], p, geo::ToponymKind::district});
    }
  }

  // street base point: first listing on the street
  std::map<std::string, geo::GeoPoint> street_points;
  for (const auto& t : m.listings) {
    if (!street_points.count(t.street)) street_points[t.street] = t.true_point;
  }
  for (const auto& [street, p] : street_points) {
    geo::GeoPoint q = p;
    q.quality = geo::CoordQuality::geocoded;
    gaz.add({street, q, geo::ToponymKind::street});
  }
  for (const auto& t : m.listings) {
    geo::GeoPoint q = t.true_point;
    q.quality = geo::CoordQuality::geocoded;
    gaz.add({t.street + " " + t.house_number, q, geo::ToponymKind::street});
  }
  return gaz;
}

}  // namespace geoharvest::sitegen
