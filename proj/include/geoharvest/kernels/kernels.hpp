#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops shared by the modeling and geospatial code.
// Every operation has a scalar reference implementation and, on x86-64,
// an AVX2 variant selected at runtime; the two are equivalence-tested.
namespace geoharvest::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_supported(Isa isa);

// Overrides dispatch (tests, or GEOHARVEST_KERNEL_ISA=scalar|avx2 at startup).
// Throws ValidationError if the requested ISA is not supported on this CPU.
void force_isa(Isa isa);

std::string isa_name(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

double sum(std::span<const double> x);

// sum_i (a_i - b_i)^2
double sumsq_diff(std::span<const double> a, std::span<const double> b);

// Equirectangular distances (meters) from (center_lat, center_lon) to each
// (lat[i], lon[i]); the projection is centered on the reference point.
void equirect_distance_batch(std::span<const double> lat_deg, std::span<const double> lon_deg,
                             double center_lat_deg, double center_lon_deg, double radius_m,
                             std::span<double> out_m);

}  // namespace geoharvest::kernels
