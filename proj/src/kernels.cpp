#include "angmom/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

namespace angmom::kernels {

#ifdef ANGMOM_HAVE_AVX2
namespace detail {
const KernelTable &avx2_table_impl();
}
#endif

const KernelTable *avx2_table() {
#ifdef ANGMOM_HAVE_AVX2
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok ? &detail::avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable *initial_choice() {
  if (const char *env = std::getenv("PHOTON_ANGMOM_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table();
    if (std::strcmp(env, "avx2") == 0) {
      if (const KernelTable *t = avx2_table()) return t;
      warn("PHOTON_ANGMOM_SIMD=avx2 requested but unavailable; using scalar kernels");
      return &scalar_table();
    }
    warn(std::string("unknown PHOTON_ANGMOM_SIMD value '") + env + "', ignored");
  }
  if (const KernelTable *t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable *> &current() {
  static std::atomic<const KernelTable *> table{initial_choice()};
  return table;
}

} // namespace

const KernelTable &active() { return *current().load(std::memory_order_acquire); }

bool select(const char *name) {
  if (std::strcmp(name, "scalar") == 0) {
    current().store(&scalar_table(), std::memory_order_release);
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const KernelTable *t = avx2_table()) {
      current().store(t, std::memory_order_release);
      return true;
    }
  }
  return false;
}

} // namespace angmom::kernels
