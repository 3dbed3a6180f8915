#pragma once

#include <cstddef>

// Internal dispatch table. Each entry takes raw pointers; span handling and
// size checks live in the public wrappers.
namespace geoharvest::kernels::detail {

struct Vtable {
  double (*dot)(const double* a, const double* b, size_t n);
  void (*axpy)(double a, const double* x, double* y, size_t n);
  double (*sum)(const double* x, size_t n);
  double (*sumsq_diff)(const double* a, const double* b, size_t n);
  void (*equirect)(const double* lat, const double* lon, size_t n, double clat_deg,
                   double clon_deg, double radius_m, double* out);
};

const Vtable* scalar_vtable();

#ifdef GEOHARVEST_HAVE_AVX2
const Vtable* avx2_vtable();
#endif

}  // namespace geoharvest::kernels::detail
