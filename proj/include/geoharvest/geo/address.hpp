#pragma once

#include <optional>
#include <string>
#include <vector>

namespace geoharvest::geo {

struct Address {
  std::optional<std::string> street;
  std::optional<std::string> house_number;
  std::optional<std::string> postal_code;  // national 5-digit pattern
  std::optional<std::string> city;
  std::string raw;  // preserved verbatim
  bool house_number_missing = false;
  bool unresolvable = false;

  bool empty() const { return !street && !postal_code && !city; }
  // "Street Nr, PLZ City" with whatever parts are present.
  std::string canonical() const;
};

struct AddressNormalizeConfig {
  // Regexes removed from the raw string before parsing (parentheticals,
  // building qualifiers and similar redundant tokens).
  std::vector<std::string> noise_patterns = {
      R"(\s*\([^)]*\))",                     // "(Gebäude B)", "(Nähe Park)"
      R"(\s*//.*$)",                          // trailing free-text after //
      R"((?:\s*,)?\s*(?:Geb(?:ä|ae?)ude|Haus|Aufgang|Eingang)\s+\w+)",
  };
};

// Handles the common degradations of listing addresses: reversed
// "PLZ City, Street Nr" order, redundant qualifiers, missing house numbers.
Address normalize_address(const std::string& raw, const std::string& city_hint,
                          const AddressNormalizeConfig& cfg = {});

}  // namespace geoharvest::geo
