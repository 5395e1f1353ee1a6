#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "plaque/simd/kernels.hpp"

namespace plaque::simd {
namespace {

const KernelTable& resolve() {
  if (const char* env = std::getenv("PLAQUE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2") return avx2_kernels();
    throw std::runtime_error("PLAQUE_SIMD must be 'scalar' or 'avx2', got '" + want + "'");
  }
  return avx2_supported() ? avx2_kernels() : scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{&resolve()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return avx2_supported() ? Isa::Avx2 : Isa::Scalar; }

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  slot().store(isa == Isa::Avx2 ? &avx2_kernels() : &scalar_kernels(), std::memory_order_release);
}

}  // namespace plaque::simd
