#include <cstdlib>
#include <string>

#include "graylap/kernels.hpp"

namespace graylap::kernels {

#ifdef GRAYLAP_HAVE_AVX2_KERNELS
extern const Table kAvx2Table;
#endif

bool cpu_has_avx2() {
#if defined(GRAYLAP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* avx2_table() {
#ifdef GRAYLAP_HAVE_AVX2_KERNELS
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = [] () -> const Table& {
    const char* env = std::getenv("GRAYLAP_SIMD");
    if (env && std::string(env) == "scalar") return scalar_table();
    if (const Table* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

const Table& table_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const Table* t = avx2_table()) return *t;
  }
  return scalar_table();
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace graylap::kernels
