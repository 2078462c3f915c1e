#include <atomic>
#include <cstdlib>
#include <string>

#include "qss/errors.hpp"
#include "qss/kernels.hpp"

namespace qss::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::cdot, &scalar::caxpy, &scalar::norm2};
#if defined(QSS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::cdot, &avx2::caxpy, &avx2::norm2};
#endif
#if defined(QSS_HAVE_NEON)
constexpr KernelTable kNeonTable{&neon::cdot, &neon::caxpy, &neon::norm2};
#endif

Isa detect() {
  if (const char* env = std::getenv("QSS_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&table(detect())};
  return slot;
}

std::atomic<Isa>& active_isa_slot() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(QSS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(QSS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel set " + std::string(isa_name(isa)) + " is not available on this CPU/build");
  }
  switch (isa) {
#if defined(QSS_HAVE_AVX2)
    case Isa::kAvx2: return kAvx2Table;
#endif
#if defined(QSS_HAVE_NEON)
    case Isa::kNeon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

Isa active_isa() { return active_isa_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  active_slot().store(&table(isa), std::memory_order_relaxed);
  active_isa_slot().store(isa, std::memory_order_relaxed);
}

cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "cdot length mismatch");
  return active_slot().load(std::memory_order_relaxed)->cdot(a.data(), b.data(), a.size());
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimensionMismatch, "caxpy length mismatch");
  active_slot().load(std::memory_order_relaxed)->caxpy(alpha, x.data(), y.data(), x.size());
}

double norm2(std::span<const cplx> x) {
  return active_slot().load(std::memory_order_relaxed)->norm2(x.data(), x.size());
}

void row_gram(std::span<const cplx> m, std::size_t rows, std::size_t cols, std::span<cplx> out) {
  if (m.size() != rows * cols || out.size() != rows * rows) {
    throw Error(ErrorCode::kDimensionMismatch, "row_gram buffer size mismatch");
  }
  const KernelTable& k = *active_slot().load(std::memory_order_relaxed);
  for (std::size_t a = 0; a < rows; ++a) {
    const cplx* ra = m.data() + a * cols;
    out[a * rows + a] = cplx(k.norm2(ra, cols), 0.0);
    for (std::size_t b = a + 1; b < rows; ++b) {
      // sum_c m[a,c] conj(m[b,c]) = cdot(row b, row a)
      const cplx v = k.cdot(m.data() + b * cols, ra, cols);
      out[a * rows + b] = v;
      out[b * rows + a] = std::conj(v);
    }
  }
}

}  // namespace qss::kernels
