#include "geoharvest/model/features.hpp"

#include <algorithm>
#include <map>

#include "geoharvest/util/csv.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/num.hpp"

namespace geoharvest::model {

const std::vector<std::string>& FeatureMatrix::core_names() {
  static const std::vector<std::string> kCore = {"dist_center_m", "size_sqm", "year_built",
                                                 "nfeatures"};
  return kCore;
}

double feature_value(const FeatureRow& r, size_t feature_index) {
  switch (feature_index) {
    case 0: return r.dist_center_m;
    case 1: return r.size_sqm;
    case 2: return r.year_built;
    case 3: return r.nfeatures;
    default: return r.extended[feature_index - 4];
  }
}

double FeatureMatrix::value(const FeatureRow& r, size_t feature_index) const {
  return feature_value(r, feature_index);
}

std::string FeatureMatrix::feature_name(size_t index) const {
  if (index < 4) return core_names()[index];
  return extended_names[index - 4];
}

int FeatureMatrix::feature_index(const std::string& name) const {
  for (size_t i = 0; i < feature_count(); ++i)
    if (feature_name(i) == name) return static_cast<int>(i);
  return -1;
}

FeatureMatrix build_features(const std::vector<extract::ListingRecord>& corpus,
                             const geo::GeoPoint& center, const BuildOptions& opts,
                             BuildSummary* summary) {
  FeatureMatrix m;
  if (opts.per_amenity_features) {
    for (const auto& tag : opts.amenity_vocab) m.extended_names.push_back("amenity_" + tag);
  }
  std::map<std::string, size_t> plz_cols;
  if (opts.plz_onehot) {
    std::set<std::string> codes;
    for (const auto& r : corpus)
      if (r.postal_code) codes.insert(*r.postal_code);
    for (const auto& c : codes) {
      plz_cols[c] = m.extended_names.size();
      m.extended_names.push_back("plz_" + c);
    }
  }

  BuildSummary local;
  for (const auto& r : corpus) {
    if (!r.rent_net_eur || !r.size_sqm || !r.year_built || !r.coords) {
      ++local.dropped_missing_core;
      continue;
    }
    FeatureRow row;
    row.id = r.id;
    row.target = r.rent_net_eur->value / r.size_sqm->value;
    row.dist_center_m = geo::distance_to_center(*r.coords, center);
    row.size_sqm = r.size_sqm->value;
    row.year_built = static_cast<double>(*r.year_built);
    int nf = 0;
    for (const auto& tag : opts.amenity_vocab)
      if (r.amenities.count(tag)) ++nf;
    row.nfeatures = static_cast<double>(nf);

    row.extended.assign(m.extended_names.size(), 0.0);
    if (opts.per_amenity_features) {
      for (size_t i = 0; i < opts.amenity_vocab.size(); ++i)
        if (r.amenities.count(opts.amenity_vocab[i])) row.extended[i] = 1.0;
    }
    if (opts.plz_onehot && r.postal_code) {
      auto it = plz_cols.find(*r.postal_code);
      if (it != plz_cols.end()) row.extended[it->second] = 1.0;
    }
    m.rows.push_back(std::move(row));
    ++local.rows_built;
  }
  if (summary) *summary = local;
  return m;
}

std::string features_to_csv(const FeatureMatrix& m) {
  std::vector<std::string> header = {"id", "target_eur_sqm", "dist_center_m", "size_sqm",
                                     "year_built", "nfeatures"};
  for (const auto& n : m.extended_names) header.push_back(n);
  std::string out = csv::join_row(header);
  for (const auto& r : m.rows) {
    std::vector<std::string> row = {r.id,
                                    num::fmt_double(r.target),
                                    num::fmt_double(r.dist_center_m),
                                    num::fmt_double(r.size_sqm),
                                    num::fmt_double(r.year_built),
                                    num::fmt_double(r.nfeatures)};
    for (double v : r.extended) row.push_back(num::fmt_double(v));
    out += csv::join_row(row);
  }
  return out;
}

FeatureMatrix features_from_csv(std::string_view text) {
  auto table = csv::parse_table(text);
  FeatureMatrix m;
  const std::vector<std::string> fixed = {"id",         "target_eur_sqm", "dist_center_m",
                                          "size_sqm",   "year_built",     "nfeatures"};
  if (table.header.size() < fixed.size())
    throw ValidationError("feature csv: missing columns");
  for (size_t i = 0; i < fixed.size(); ++i) {
    if (table.header[i] != fixed[i])
      throw ValidationError("feature csv: expected column '" + fixed[i] + "' at position " +
                            std::to_string(i));
  }
  for (size_t i = fixed.size(); i < table.header.size(); ++i)
    m.extended_names.push_back(table.header[i]);

  for (const auto& row : table.rows) {
    FeatureRow r;
    r.id = row[0];
    r.target = std::stod(row[1]);
    r.dist_center_m = std::stod(row[2]);
    r.size_sqm = std::stod(row[3]);
    r.year_built = std::stod(row[4]);
    r.nfeatures = std::stod(row[5]);
    for (size_t i = fixed.size(); i < row.size(); ++i) r.extended.push_back(std::stod(row[i]));
    m.rows.push_back(std::move(r));
  }
  return m;
}

}  // namespace geoharvest::model
