#include "locc/numerics/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernel_tables.hpp"

namespace locc::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(LOCC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  if (const char* env = std::getenv("LOCC_SIMD"); env && std::string_view(env) == "scalar") {
    return Backend::Scalar;
  }
  return avx2_table() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& backend_slot() noexcept {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#ifdef LOCC_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

Backend active_backend() noexcept {
  return static_cast<Backend>(backend_slot().load(std::memory_order_relaxed));
}

const KernelTable& active() noexcept {
  if (active_backend() == Backend::Avx2) {
    if (const KernelTable* t = avx2_table()) return *t;
  }
  return scalar_table();
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool select_backend(Backend b) noexcept {
  if (b == Backend::Avx2 && !avx2_table()) return false;
  backend_slot().store(static_cast<int>(b), std::memory_order_relaxed);
  return true;
}

}  // namespace locc::kernels
