#include <doctest.h>

#include <cmath>
#include <vector>

#include "geoharvest/geo/point.hpp"
#include "geoharvest/kernels/kernels.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;

namespace {

std::vector<double> random_vec(rng::Xoshiro256pp& r, size_t n, double lo = -1, double hi = 1) {
  std::vector<double> v(n);
  for (auto& x : v) x = r.uniform(lo, hi);
  return v;
}

struct IsaGuard {
  kernels::Isa saved;
  IsaGuard() : saved(kernels::active_isa()) {}
  ~IsaGuard() { kernels::force_isa(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar/simd equivalence on every operation") {
  if (!kernels::isa_supported(kernels::Isa::avx2)) {
    MESSAGE("avx2 unavailable on this CPU; dispatch stays scalar");
    return;
  }
  IsaGuard guard;
  rng::Xoshiro256pp r(2024);

  for (size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 64UL, 1001UL}) {
    auto a = random_vec(r, n), b = random_vec(r, n);
    auto lat = random_vec(r, n, 51.0, 51.6);
    auto lon = random_vec(r, n, 12.0, 12.8);

    kernels::force_isa(kernels::Isa::scalar);
    double dot_s = kernels::dot(a, b);
    double sum_s = kernels::sum(a);
    double ssd_s = kernels::sumsq_diff(a, b);
    std::vector<double> axpy_s = b;
    kernels::axpy(0.37, a, axpy_s);
    std::vector<double> eq_s(n);
    kernels::equirect_distance_batch(lat, lon, 51.3, 12.4, geo::kEarthRadiusM, eq_s);

    kernels::force_isa(kernels::Isa::avx2);
    double dot_v = kernels::dot(a, b);
    double sum_v = kernels::sum(a);
    double ssd_v = kernels::sumsq_diff(a, b);
    std::vector<double> axpy_v = b;
    kernels::axpy(0.37, a, axpy_v);
    std::vector<double> eq_v(n);
    kernels::equirect_distance_batch(lat, lon, 51.3, 12.4, geo::kEarthRadiusM, eq_v);

    CHECK(dot_s == doctest::Approx(dot_v).epsilon(1e-12));
    CHECK(sum_s == doctest::Approx(sum_v).epsilon(1e-12));
    CHECK(ssd_s == doctest::Approx(ssd_v).epsilon(1e-12));
    for (size_t i = 0; i < n; ++i) {
      CHECK(axpy_s[i] == doctest::Approx(axpy_v[i]).epsilon(1e-12));
      CHECK(eq_s[i] == doctest::Approx(eq_v[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("dot agrees with a plain loop") {
  rng::Xoshiro256pp r(5);
  auto a = random_vec(r, 513), b = random_vec(r, 513);
  double expect = 0;
  for (size_t i = 0; i < a.size(); ++i) expect += a[i] * b[i];
  CHECK(kernels::dot(a, b) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("force_isa rejects unsupported") {
  if (kernels::isa_supported(kernels::Isa::avx2)) return;
  CHECK_THROWS(kernels::force_isa(kernels::Isa::avx2));
}

TEST_CASE("isa introspection") {
  CHECK(kernels::isa_supported(kernels::Isa::scalar));
  CHECK((kernels::isa_name(kernels::active_isa()) == "scalar" ||
         kernels::isa_name(kernels::active_isa()) == "avx2"));
}

}  // TEST_SUITE
