#include <cstdlib>
#include <cstring>

#include "heatctl/simd/kernels.hpp"

namespace heatctl::simd {

const KernelTable* avx2_table_if_compiled() noexcept;

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() noexcept {
  if (const char* env = std::getenv("HEATCTL_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return Isa::Scalar;
  return avx2_kernels() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  static const KernelTable* table = cpu_has_avx2_fma() ? avx2_table_if_compiled() : nullptr;
  return table;
}

Isa active_isa() noexcept {
  static const Isa isa = select_isa();
  return isa;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

const KernelTable& kernels() noexcept {
  static const KernelTable& table =
      active_isa() == Isa::Avx2 ? *avx2_kernels() : scalar_kernels();
  return table;
}

}  // namespace heatctl::simd
