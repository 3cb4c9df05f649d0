#include <cstdlib>
#include <string>

#include "saddle/kernels.hpp"

namespace saddle::kernels {

#if defined(SADDLE_BUILD_AVX2)
const Table* avx2_table_impl();
#endif

const Table* avx2_table() {
#if defined(SADDLE_BUILD_AVX2)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = [&]() -> const Table& {
    const char* env = std::getenv("SADDLE_KERNELS");
    const std::string want = env ? env : "";
    if (want == "scalar") return scalar_table();
    if (const Table* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace saddle::kernels
