// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// it must only be entered through the dispatch table after a cpuid check.

#include "kernels_impl.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace geoharvest::kernels::detail {

namespace avx2_impl {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double sum(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sumsq_diff(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void equirect(const double* lat, const double* lon, size_t n, double clat_deg, double clon_deg,
              double radius_m, double* out) {
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const __m256d vclat = _mm256_set1_pd(clat_deg);
  const __m256d vclon = _mm256_set1_pd(clon_deg);
  const __m256d vd2r = _mm256_set1_pd(kDegToRad);
  const __m256d vr = _mm256_set1_pd(radius_m);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vlat = _mm256_loadu_pd(lat + i);
    // midpoint-latitude scale: cosine lanes via libm, the rest vectorized
    alignas(32) double mid[4];
    _mm256_store_pd(mid, _mm256_mul_pd(_mm256_mul_pd(_mm256_add_pd(vlat, vclat),
                                                     _mm256_set1_pd(0.5)),
                                       vd2r));
    alignas(32) double cmid[4] = {std::cos(mid[0]), std::cos(mid[1]), std::cos(mid[2]),
                                  std::cos(mid[3])};
    __m256d vcos = _mm256_load_pd(cmid);
    __m256d dlat = _mm256_mul_pd(_mm256_sub_pd(vlat, vclat), vd2r);
    __m256d dlon = _mm256_mul_pd(
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(lon + i), vclon), vd2r), vcos);
    __m256d ss = _mm256_fmadd_pd(dlat, dlat, _mm256_mul_pd(dlon, dlon));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vr, _mm256_sqrt_pd(ss)));
  }
  for (; i < n; ++i) {
    const double cos_mid = std::cos((lat[i] + clat_deg) * 0.5 * kDegToRad);
    const double dlat = (lat[i] - clat_deg) * kDegToRad;
    const double dlon = (lon[i] - clon_deg) * kDegToRad * cos_mid;
    out[i] = radius_m * std::sqrt(dlat * dlat + dlon * dlon);
  }
}

}  // namespace avx2_impl

const Vtable* avx2_vtable() {
  static const Vtable vt{avx2_impl::dot, avx2_impl::axpy, avx2_impl::sum, avx2_impl::sumsq_diff,
                         avx2_impl::equirect};
  return &vt;
}

}  // namespace geoharvest::kernels::detail

#endif  // __AVX2__
