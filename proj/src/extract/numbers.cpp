#include "geoharvest/extract/numbers.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::extract {

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::eur: return "eur";
    case Unit::sqm: return "sqm";
    case Unit::rooms: return "rooms";
    default: return "none";
  }
}

std::string qualifier_name(Qualifier q) {
  switch (q) {
    case Qualifier::approx: return "approx";
    case Qualifier::at_least: return "at_least";
    case Qualifier::at_most: return "at_most";
    default: return "exact";
  }
}

Unit unit_from_name(std::string_view s) {
  if (s == "eur") return Unit::eur;
  if (s == "sqm") return Unit::sqm;
  if (s == "rooms") return Unit::rooms;
  return Unit::none;
}

Qualifier qualifier_from_name(std::string_view s) {
  if (s == "approx") return Qualifier::approx;
  if (s == "at_least") return Qualifier::at_least;
  if (s == "at_most") return Qualifier::at_most;
  return Qualifier::exact;
}

namespace {

struct Token {
  const char* text;
  Qualifier qualifier;
};

// recognized qualifier tokens (case-insensitive)
constexpr Token kQualifiers[] = {
    {"ca.", Qualifier::approx},        {"approx.", Qualifier::approx},
    {"approx", Qualifier::approx},     {"ungefähr", Qualifier::approx},
    {"mind.", Qualifier::at_least},    {"mindestens", Qualifier::at_least},
    {"at least", Qualifier::at_least}, {"bis zu", Qualifier::at_most},
    {"at most", Qualifier::at_most},   {"max.", Qualifier::at_most},
};

struct UnitToken {
  const char* text;
  Unit unit;
};

constexpr UnitToken kUnits[] = {
    {"€", Unit::eur}, {"eur", Unit::eur},    {"euro", Unit::eur},
    {"m²", Unit::sqm}, {"qm", Unit::sqm},    {"sqm", Unit::sqm},
    {"m^2", Unit::sqm},     {"zimmer", Unit::rooms}, {"rooms", Unit::rooms},
    {"zi.", Unit::rooms},
};

// removes the first case-insensitive occurrence; returns true if found
bool remove_token(std::string& s, std::string_view token) {
  if (token.empty() || token.size() > s.size()) return false;
  for (size_t i = 0; i + token.size() <= s.size(); ++i) {
    if (str::iequals(std::string_view(s).substr(i, token.size()), token)) {
      s.erase(i, token.size());
      return true;
    }
  }
  return false;
}

}  // namespace

ParsedNumber parse_numeric(std::string_view text, NumLocale locale) {
  ParsedNumber out;
  std::string s = str::collapse_ws(text);

  for (const auto& t : kQualifiers) {
    if (remove_token(s, t.text)) {
      out.qualifier = t.qualifier;
      break;
    }
  }
  for (const auto& u : kUnits) {
    if (remove_token(s, u.text)) {
      out.unit = u.unit;
      break;
    }
  }

  // first run of digits with embedded separators
  size_t begin = s.find_first_of("0123456789");
  if (begin == std::string::npos)
    throw ParseError("no digits in numeric text '" + std::string(text) + "'");
  size_t end = begin;
  while (end < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == ','))
    ++end;
  std::string num = s.substr(begin, end - begin);
  while (!num.empty() && (num.back() == '.' || num.back() == ',')) num.pop_back();

  const char thousands = locale == NumLocale::de ? '.' : ',';
  const char decimal = locale == NumLocale::de ? ',' : '.';

  // a thousands separator must be followed by exactly three digits
  std::string cleaned;
  for (size_t i = 0; i < num.size(); ++i) {
    char c = num[i];
    if (c == thousands) {
      size_t digits = 0;
      size_t j = i + 1;
      while (j < num.size() && std::isdigit(static_cast<unsigned char>(num[j]))) {
        ++digits;
        ++j;
      }
      bool grouped = digits == 3 && (j == num.size() || num[j] == thousands || num[j] == decimal);
      if (grouped) continue;  // drop the separator
      cleaned += '.';         // stray separator: treat as decimal point
    } else if (c == decimal) {
      cleaned += '.';
    } else {
      cleaned += c;
    }
  }

  try {
    out.value = std::stod(cleaned);
  } catch (const std::exception&) {
    throw ParseError("unparseable numeric text '" + std::string(text) + "'");
  }
  if (!std::isfinite(out.value))
    throw ParseError("non-finite numeric value in '" + std::string(text) + "'");
  return out;
}

std::string render_numeric_de(double value, int decimals, Unit unit, Qualifier qualifier) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string digits(buf);

  std::string int_part = digits;
  std::string frac_part;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    int_part = digits.substr(0, dot);
    frac_part = digits.substr(dot + 1);
  }

  bool negative = !int_part.empty() && int_part.front() == '-';
  if (negative) int_part.erase(0, 1);
  std::string grouped;
  for (size_t i = 0; i < int_part.size(); ++i) {
    if (i > 0 && (int_part.size() - i) % 3 == 0) grouped += '.';
    grouped += int_part[i];
  }
  std::string num = (negative ? "-" : "") + grouped;
  if (!frac_part.empty()) num += "," + frac_part;

  std::string out;
  switch (qualifier) {
    case Qualifier::approx: out = "ca. "; break;
    case Qualifier::at_least: out = "mind. "; break;
    case Qualifier::at_most: out = "bis zu "; break;
    case Qualifier::exact: break;
  }
  out += num;
  switch (unit) {
    case Unit::eur: out += " €"; break;
    case Unit::sqm: out += " m²"; break;
    case Unit::rooms: out += " Zimmer"; break;
    case Unit::none: break;
  }
  return out;
}

}  // namespace geoharvest::extract
