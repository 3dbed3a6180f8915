#include "geoharvest/geo/gazetteer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "geoharvest/util/csv.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::geo {

std::string kind_name(ToponymKind k) {
  switch (k) {
    case ToponymKind::city: return "city";
    case ToponymKind::district: return "district";
    default: return "street";
  }
}

std::optional<ToponymKind> kind_from_name(std::string_view s) {
  if (s == "city") return ToponymKind::city;
  if (s == "district") return ToponymKind::district;
  if (s == "street") return ToponymKind::street;
  return std::nullopt;
}

void Gazetteer::add(GazetteerEntry e) {
  if (e.toponym.empty()) throw ValidationError("gazetteer: empty toponym");
  for (const auto& existing : entries_) {
    if (existing.kind == e.kind && str::iequals(existing.toponym, e.toponym))
      throw ValidationError("gazetteer: duplicate entry (" + e.toponym + ", " +
                            kind_name(e.kind) + ")");
  }
  entries_.push_back(std::move(e));
}

Gazetteer Gazetteer::load_csv(std::string_view csv_text) {
  Gazetteer g;
  auto table = csv::parse_table(csv_text);
  int c_top = table.column("toponym"), c_kind = table.column("kind");
  int c_lat = table.column("lat"), c_lon = table.column("lon");
  if (c_top < 0 || c_kind < 0 || c_lat < 0 || c_lon < 0)
    throw ValidationError("gazetteer csv: expected columns toponym,kind,lat,lon");
  for (const auto& row : table.rows) {
    GazetteerEntry e;
    e.toponym = row[c_top];
    auto kind = kind_from_name(row[c_kind]);
    if (!kind) throw ValidationError("gazetteer csv: unknown kind '" + row[c_kind] + "'");
    e.kind = *kind;
    e.point.lat = std::stod(row[c_lat]);
    e.point.lon = std::stod(row[c_lon]);
    e.point.quality = CoordQuality::geocoded;
    g.add(std::move(e));
  }
  return g;
}

std::string Gazetteer::to_csv() const {
  std::string out = "toponym,kind,lat,lon\n";
  char buf[64];
  for (const auto& e : entries_) {
    out += csv::escape(e.toponym) + "," + kind_name(e.kind) + ",";
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", e.point.lat, e.point.lon);
    out += buf;
  }
  return out;
}

const GazetteerEntry* Gazetteer::find(std::string_view name) const {
  for (const auto& e : entries_)
    if (str::iequals(e.toponym, name)) return &e;
  return nullptr;
}

const GazetteerEntry* Gazetteer::find(std::string_view name, ToponymKind kind) const {
  for (const auto& e : entries_)
    if (e.kind == kind && str::iequals(e.toponym, name)) return &e;
  return nullptr;
}

namespace {

bool is_word_char(unsigned char c) {
  // bytes >= 0x80 belong to multibyte letters (umlauts etc.)
  return std::isalnum(c) || c >= 0x80;
}

bool boundary_ok(std::string_view text, size_t begin, size_t end) {
  if (begin > 0 && is_word_char(text[begin - 1])) return false;
  if (end < text.size() && is_word_char(text[end])) return false;
  return true;
}

}  // namespace

std::vector<ToponymMatch> geoparse(std::string_view text, const Gazetteer& gaz) {
  // longest toponym first so that "Leipzig Gohlis" beats "Leipzig"
  std::vector<const GazetteerEntry*> order;
  order.reserve(gaz.entries().size());
  for (const auto& e : gaz.entries()) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->toponym.size() > b->toponym.size();
  });

  std::vector<bool> claimed(text.size(), false);
  std::vector<ToponymMatch> out;

  for (const auto* e : order) {
    const std::string& t = e->toponym;
    if (t.empty() || t.size() > text.size()) continue;
    for (size_t i = 0; i + t.size() <= text.size(); ++i) {
      if (!str::iequals(text.substr(i, t.size()), t)) continue;
      if (!boundary_ok(text, i, i + t.size())) continue;
      bool overlap = false;
      for (size_t k = i; k < i + t.size(); ++k)
        if (claimed[k]) { overlap = true; break; }
      if (overlap) continue;
      for (size_t k = i; k < i + t.size(); ++k) claimed[k] = true;
      out.push_back({t, e->point, i, i + t.size()});
    }
  }

  std::sort(out.begin(), out.end(),
            [](const ToponymMatch& a, const ToponymMatch& b) { return a.begin < b.begin; });
  return out;
}

}  // namespace geoharvest::geo
