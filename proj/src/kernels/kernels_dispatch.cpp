#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "netputsim/error.hpp"
#include "netputsim/kernels.hpp"

namespace netputsim::kernels {

namespace {

constexpr KernelTable kScalar{Isa::kScalar, &scalar::dot, &scalar::sum_sq_diff,
                              &scalar::axpy, &scalar::affine_rows,
                              &scalar::weighted_cross};

#if defined(NETPUTSIM_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::kAvx2, &avx2::dot, &avx2::sum_sq_diff, &avx2::axpy,
                            &avx2::affine_rows, &avx2::weighted_cross};
#endif

const KernelTable* select_default() {
  const char* env = std::getenv("NETPUTSIM_SIMD");
  if (env && std::string_view(env) == "scalar") return &kScalar;
  if (supported(Isa::kAvx2)) return &table(Isa::kAvx2);
  return &kScalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

bool supported(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(NETPUTSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::kScalar) return kScalar;
#if defined(NETPUTSIM_HAVE_AVX2)
  if (supported(Isa::kAvx2)) return kAvx2;
#endif
  throw Error(ErrorCode::kInvalidArgument, "AVX2 kernels are not available on this CPU");
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force(Isa isa) { slot().store(&table(isa), std::memory_order_release); }

}  // namespace netputsim::kernels
