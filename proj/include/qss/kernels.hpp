#pragma once
// Complex double inner loops used by the dense simulator.
//
// Every kernel has a scalar reference in qss::kernels::scalar. Vector variants
// (AVX2+FMA on x86-64, NEON on AArch64) are compiled into separate
// translation units and selected once at runtime; the public entry points
// below forward to whichever table is active. Setting the environment
// variable QSS_ISA=scalar before first use pins the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qss::kernels {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  // sum_i conj(a[i]) * b[i]
  cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // sum_i |x[i]|^2
  double (*norm2)(const cplx* x, std::size_t n);
};

/// Whether the running CPU (and this build) can execute `isa`.
bool isa_available(Isa isa);
/// Kernel table for `isa`; throws if unavailable.
const KernelTable& table(Isa isa);
Isa active_isa();
/// Switch the dispatched table. Intended for tests and benchmarking.
void set_active_isa(Isa isa);

namespace scalar {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2(const cplx* x, std::size_t n);
}  // namespace scalar

#if defined(QSS_HAVE_AVX2) || defined(QSS_KERNELS_DECLARE_ALL)
namespace avx2 {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2(const cplx* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(QSS_HAVE_NEON) || defined(QSS_KERNELS_DECLARE_ALL)
namespace neon {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2(const cplx* x, std::size_t n);
}  // namespace neon
#endif

cplx cdot(std::span<const cplx> a, std::span<const cplx> b);
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double norm2(std::span<const cplx> x);

/// Hermitian Gram of the rows of a row-major (rows x cols) buffer:
/// out[a * rows + b] = sum_c m[a, c] * conj(m[b, c]).
/// This is the reduced density matrix of a bipartite pure state whose first
/// factor indexes the rows.
void row_gram(std::span<const cplx> m, std::size_t rows, std::size_t cols, std::span<cplx> out);

}  // namespace qss::kernels
