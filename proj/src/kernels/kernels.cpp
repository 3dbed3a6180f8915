#include "geoharvest/kernels/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "geoharvest/util/errors.hpp"
#include "kernels_impl.hpp"

namespace geoharvest::kernels {

namespace detail {

namespace scalar_impl {

double dot(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sumsq_diff(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void equirect(const double* lat, const double* lon, size_t n, double clat_deg, double clon_deg,
              double radius_m, double* out) {
  constexpr double kDegToRad = M_PI / 180.0;
  // midpoint-latitude scaling keeps the distance symmetric in its endpoints
  for (size_t i = 0; i < n; ++i) {
    const double cos_mid = std::cos((lat[i] + clat_deg) * 0.5 * kDegToRad);
    const double dlat = (lat[i] - clat_deg) * kDegToRad;
    const double dlon = (lon[i] - clon_deg) * kDegToRad * cos_mid;
    out[i] = radius_m * std::sqrt(dlat * dlat + dlon * dlon);
  }
}

}  // namespace scalar_impl

const Vtable* scalar_vtable() {
  static const Vtable vt{scalar_impl::dot, scalar_impl::axpy, scalar_impl::sum,
                         scalar_impl::sumsq_diff, scalar_impl::equirect};
  return &vt;
}

}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && defined(GEOHARVEST_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

struct Dispatch {
  const detail::Vtable* table;
  Isa isa;
};

Dispatch pick_initial() {
  if (const char* env = std::getenv("GEOHARVEST_KERNEL_ISA")) {
    std::string v(env);
    if (v == "scalar") return {detail::scalar_vtable(), Isa::scalar};
#ifdef GEOHARVEST_HAVE_AVX2
    if (v == "avx2" && cpu_has_avx2()) return {detail::avx2_vtable(), Isa::avx2};
#endif
  }
#ifdef GEOHARVEST_HAVE_AVX2
  if (cpu_has_avx2()) return {detail::avx2_vtable(), Isa::avx2};
#endif
  return {detail::scalar_vtable(), Isa::scalar};
}

std::atomic<const detail::Vtable*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const detail::Vtable* table() {
  const detail::Vtable* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    Dispatch d = pick_initial();
    g_isa.store(d.isa, std::memory_order_relaxed);
    g_table.store(d.table, std::memory_order_release);
    t = d.table;
  }
  return t;
}

}  // namespace

Isa active_isa() {
  table();
  return g_isa.load(std::memory_order_relaxed);
}

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  return cpu_has_avx2();
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) throw ValidationError("kernel ISA not supported on this CPU: " + isa_name(isa));
  if (isa == Isa::scalar) {
    g_table.store(detail::scalar_vtable(), std::memory_order_release);
  } else {
#ifdef GEOHARVEST_HAVE_AVX2
    g_table.store(detail::avx2_vtable(), std::memory_order_release);
#endif
  }
  g_isa.store(isa, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::scalar ? "scalar" : "avx2"; }

double dot(std::span<const double> a, std::span<const double> b) {
  return table()->dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  table()->axpy(a, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

double sum(std::span<const double> x) { return table()->sum(x.data(), x.size()); }

double sumsq_diff(std::span<const double> a, std::span<const double> b) {
  return table()->sumsq_diff(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void equirect_distance_batch(std::span<const double> lat_deg, std::span<const double> lon_deg,
                             double center_lat_deg, double center_lon_deg, double radius_m,
                             std::span<double> out_m) {
  size_t n = lat_deg.size();
  if (lon_deg.size() < n) n = lon_deg.size();
  if (out_m.size() < n) n = out_m.size();
  table()->equirect(lat_deg.data(), lon_deg.data(), n, center_lat_deg, center_lon_deg, radius_m,
                    out_m.data());
}

}  // namespace geoharvest::kernels
