#include "plaque/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PLAQUE_HAVE_X86 1
#include <immintrin.h>
#else
#define PLAQUE_HAVE_X86 0
#endif

#include <stdexcept>

namespace plaque::simd {

#if PLAQUE_HAVE_X86
namespace {

// No "fma" in the target list: the elementwise kernels must round exactly like
// the scalar reference.
#define PLAQUE_AVX2 __attribute__((target("avx2")))

PLAQUE_AVX2 double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PLAQUE_AVX2 double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

PLAQUE_AVX2 double dot_avx2(const double* x, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(w + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i)));
  }
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * w[i];
  return s;
}

PLAQUE_AVX2 void upwind_euler_avx2(const double* m, const double* v_edge, std::size_t n, UpwindStage st,
                                   double* out) {
  if (n == 0) return;
  {
    const double cur = m[0];
    out[0] = cur + (st.courant * (v_edge[0] * st.ghost - v_edge[1] * cur) - st.decay * cur);
  }
  const __m256d courant = _mm256_set1_pd(st.courant);
  const __m256d decay = _mm256_set1_pd(st.decay);
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256d cur = _mm256_loadu_pd(m + i);
    const __m256d prev = _mm256_loadu_pd(m + i - 1);
    const __m256d inflow = _mm256_mul_pd(_mm256_loadu_pd(v_edge + i), prev);
    const __m256d outflow = _mm256_mul_pd(_mm256_loadu_pd(v_edge + i + 1), cur);
    const __m256d transport = _mm256_mul_pd(courant, _mm256_sub_pd(inflow, outflow));
    const __m256d change = _mm256_sub_pd(transport, _mm256_mul_pd(decay, cur));
    _mm256_storeu_pd(out + i, _mm256_add_pd(cur, change));
  }
  for (; i < n; ++i) {
    const double cur = m[i];
    out[i] = cur + (st.courant * (v_edge[i] * m[i - 1] - v_edge[i + 1] * cur) - st.decay * cur);
  }
}

PLAQUE_AVX2 void average_avx2(const double* a, const double* b, std::size_t n, double* out) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  }
  for (; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]);
}

}  // namespace

bool avx2_supported() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return ok;
}

const KernelTable& avx2_kernels() {
  if (!avx2_supported()) throw std::runtime_error("AVX2 kernels requested on a CPU without AVX2");
  static const KernelTable table{Isa::Avx2, sum_avx2, dot_avx2, upwind_euler_avx2, average_avx2};
  return table;
}

#else

bool avx2_supported() { return false; }

const KernelTable& avx2_kernels() { throw std::runtime_error("AVX2 kernels are not built for this target"); }

#endif

}  // namespace plaque::simd
