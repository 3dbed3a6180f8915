#pragma once

#include <string>
#include <string_view>

namespace geoharvest::extract {

enum class Unit { none, eur, sqm, rooms };
enum class Qualifier { exact, approx, at_least, at_most };

struct ParsedNumber {
  double value = 0.0;
  Unit unit = Unit::none;
  Qualifier qualifier = Qualifier::exact;
};

enum class NumLocale { de, en };

std::string unit_name(Unit u);
std::string qualifier_name(Qualifier q);
Unit unit_from_name(std::string_view s);
Qualifier qualifier_from_name(std::string_view s);

// Locale-aware numeric parsing with unit and qualifier tokens:
// de: "." thousands separator, "," decimal; qualifiers like "ca.", "mind.",
// "bis zu". Throws ParseError when the text has no digits.
ParsedNumber parse_numeric(std::string_view text, NumLocale locale);

// German rendering used by the synthetic site generator; parse_numeric
// round-trips value and qualifier of everything this emits.
std::string render_numeric_de(double value, int decimals, Unit unit, Qualifier qualifier);

}  // namespace geoharvest::extract
