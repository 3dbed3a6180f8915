#include <doctest.h>

#include "geoharvest/extract/numbers.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;
using namespace geoharvest::extract;

TEST_SUITE("numbers") {

TEST_CASE("german size with approx qualifier") {
  auto n = parse_numeric("ca. 56,5 m²", NumLocale::de);
  CHECK(n.value == 56.5);
  CHECK(n.unit == Unit::sqm);
  CHECK(n.qualifier == Qualifier::approx);
}

TEST_CASE("plain euro amount") {
  auto n = parse_numeric("500 €", NumLocale::de);
  CHECK(n.value == 500.0);
  CHECK(n.unit == Unit::eur);
  CHECK(n.qualifier == Qualifier::exact);
}

TEST_CASE("at-least with thousands separator") {
  auto n = parse_numeric("mind. 1.200 €", NumLocale::de);
  CHECK(n.value == 1200.0);
  CHECK(n.unit == Unit::eur);
  CHECK(n.qualifier == Qualifier::at_least);
}

TEST_CASE("full german decimal") {
  auto n = parse_numeric("1.234,56 €", NumLocale::de);
  CHECK(n.value == 1234.56);
  CHECK(n.unit == Unit::eur);
}

TEST_CASE("english locale") {
  auto n = parse_numeric("1,234.56 eur", NumLocale::en);
  CHECK(n.value == 1234.56);
  CHECK(n.unit == Unit::eur);
  auto m = parse_numeric("at least 42 sqm", NumLocale::en);
  CHECK(m.value == 42.0);
  CHECK(m.qualifier == Qualifier::at_least);
  CHECK(m.unit == Unit::sqm);
}

TEST_CASE("stray separator is treated as decimal point") {
  CHECK(parse_numeric("56.5", NumLocale::de).value == 56.5);  // not thousands-grouped
  CHECK(parse_numeric("2 Zimmer", NumLocale::de).unit == Unit::rooms);
}

TEST_CASE("bis zu maps to at_most") {
  auto n = parse_numeric("bis zu 80 m²", NumLocale::de);
  CHECK(n.qualifier == Qualifier::at_most);
  CHECK(n.value == 80.0);
}

TEST_CASE("no digits raises") {
  CHECK_THROWS_AS(parse_numeric("auf Anfrage", NumLocale::de), ParseError);
  CHECK_THROWS_AS(parse_numeric("", NumLocale::de), ParseError);
}

TEST_CASE("render/parse round trip over random values") {
  rng::Xoshiro256pp r(99);
  const Qualifier quals[] = {Qualifier::exact, Qualifier::approx, Qualifier::at_least,
                             Qualifier::at_most};
  const Unit units[] = {Unit::eur, Unit::sqm, Unit::rooms, Unit::none};
  for (int trial = 0; trial < 500; ++trial) {
    int decimals = static_cast<int>(r.below(3));
    double raw = r.uniform(0.0, 20000.0);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, raw);
    double v = std::stod(buf);  // representable at the rendered precision
    Qualifier q = quals[r.below(4)];
    Unit u = units[r.below(4)];
    std::string rendered = render_numeric_de(v, decimals, u, q);
    auto parsed = parse_numeric(rendered, NumLocale::de);
    CHECK(parsed.value == v);
    CHECK(parsed.qualifier == q);
    CHECK(parsed.unit == u);
  }
}

}  // TEST_SUITE
