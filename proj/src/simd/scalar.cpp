#include "plaque/simd/kernels.hpp"

namespace plaque::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * w[i];
  return s;
}

void upwind_euler_scalar(const double* m, const double* v_edge, std::size_t n, UpwindStage st, double* out) {
  double prev = st.ghost;
  for (std::size_t i = 0; i < n; ++i) {
    const double cur = m[i];
    const double inflow = v_edge[i] * prev;
    const double outflow = v_edge[i + 1] * cur;
    out[i] = cur + (st.courant * (inflow - outflow) - st.decay * cur);
    prev = cur;
  }
}

void average_scalar(const double* a, const double* b, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, sum_scalar, dot_scalar, upwind_euler_scalar, average_scalar};
  return table;
}

}  // namespace plaque::simd
