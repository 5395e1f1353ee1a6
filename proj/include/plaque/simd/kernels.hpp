#pragma once

// Inner loops of the finite-volume transport step.  Every kernel has a scalar
// reference implementation and an AVX2 variant; the variant is chosen once at
// runtime from the CPU feature set (override with PLAQUE_SIMD=scalar|avx2).
//
// Elementwise kernels round identically in both variants.  Reductions differ
// only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace plaque::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Parameters of one forward-Euler upwind stage:
///   out[i] = m[i] + (courant * (v_edge[i] * m[i-1] - v_edge[i+1] * m[i]) - decay * m[i])
/// with m[-1] = ghost (the boundary density) and courant = dt C / da.
struct UpwindStage {
  double ghost;
  double courant;
  double decay;  // dt * mu
};

struct KernelTable {
  Isa isa;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* w, std::size_t n);
  void (*upwind_euler)(const double* m, const double* v_edge, std::size_t n, UpwindStage stage, double* out);
  void (*average)(const double* a, const double* b, std::size_t n, double* out);
};

const KernelTable& scalar_kernels();
/// Only callable when avx2_supported() is true.
const KernelTable& avx2_kernels();

bool avx2_supported();
Isa detected_isa();

/// Table used by the solver.  Resolved on first use.
const KernelTable& active();
/// Test hook; throws if the requested ISA is unavailable.
void set_active(Isa isa);

// Convenience wrappers over active().
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> w) {
  return active().dot(x.data(), w.data(), x.size());
}

}  // namespace plaque::simd
