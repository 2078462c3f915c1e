#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "qss/errors.hpp"
#include "qss/kernels.hpp"

namespace k = qss::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(gen), d(gen)};
  return v;
}

std::vector<k::Isa> available() {
  std::vector<k::Isa> out;
  for (k::Isa isa : {k::Isa::kScalar, k::Isa::kAvx2, k::Isa::kNeon}) {
    if (k::isa_available(isa)) out.push_back(isa);
  }
  return out;
}

class IsaRestore : public ::testing::Test {
 protected:
  void TearDown() override { k::set_active_isa(saved_); }
  k::Isa saved_ = k::active_isa();
};

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(k::isa_available(k::Isa::kScalar));
  EXPECT_EQ(k::isa_name(k::Isa::kScalar), "scalar");
}

TEST(Kernels, UnavailableTableThrows) {
  for (k::Isa isa : {k::Isa::kAvx2, k::Isa::kNeon}) {
    if (!k::isa_available(isa)) EXPECT_THROW(k::table(isa), qss::Error);
  }
}

TEST(Kernels, ScalarCdotMatchesDefinition) {
  const auto a = random_vec(13, 1);
  const auto b = random_vec(13, 2);
  cplx ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ref += std::conj(a[i]) * b[i];
  EXPECT_NEAR(std::abs(k::scalar::cdot(a.data(), b.data(), a.size()) - ref), 0.0, 1e-13);
}

// Every vector variant must agree with the scalar reference for every length,
// including the tails that do not fill a register.
TEST(Kernels, VariantsMatchScalarForAllLengths) {
  const k::KernelTable& ref = k::table(k::Isa::kScalar);
  for (k::Isa isa : available()) {
    const k::KernelTable& tab = k::table(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto a = random_vec(n, static_cast<unsigned>(100 + n));
      const auto b = random_vec(n, static_cast<unsigned>(200 + n));
      const double scale = 1.0 + static_cast<double>(n);

      EXPECT_NEAR(std::abs(tab.cdot(a.data(), b.data(), n) - ref.cdot(a.data(), b.data(), n)), 0.0, 1e-12 * scale)
          << k::isa_name(isa) << " n=" << n;
      EXPECT_NEAR(tab.norm2(a.data(), n), ref.norm2(a.data(), n), 1e-12 * scale) << k::isa_name(isa) << " n=" << n;

      auto y1 = b;
      auto y2 = b;
      const cplx alpha(0.3, -1.7);
      tab.caxpy(alpha, a.data(), y1.data(), n);
      ref.caxpy(alpha, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(y1[i] - y2[i]), 0.0, 1e-13) << k::isa_name(isa);
    }
  }
}

TEST(Kernels, CaxpyLeavesTailUntouchedBeyondN) {
  for (k::Isa isa : available()) {
    auto x = random_vec(9, 3);
    std::vector<cplx> y(10, cplx(5.0, 5.0));
    k::table(isa).caxpy(cplx(1.0, 0.0), x.data(), y.data(), 9);
    EXPECT_EQ(y[9], cplx(5.0, 5.0)) << k::isa_name(isa);
  }
}

TEST_F(IsaRestore, RowGramMatchesEigenUnderEveryIsa) {
  const std::size_t rows = 7, cols = 11;
  const auto m = random_vec(rows * cols, 9);
  Eigen::MatrixXcd em(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) em(r, c) = m[r * cols + c];
  }
  const Eigen::MatrixXcd ref = em * em.adjoint();
  for (k::Isa isa : available()) {
    k::set_active_isa(isa);
    EXPECT_EQ(k::active_isa(), isa);
    std::vector<cplx> out(rows * rows);
    k::row_gram(m, rows, cols, out);
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < rows; ++b) {
        EXPECT_NEAR(std::abs(out[a * rows + b] - ref(a, b)), 0.0, 1e-12) << k::isa_name(isa);
      }
    }
  }
}

TEST_F(IsaRestore, SpanEntryPointsCheckLengths) {
  std::vector<cplx> a(4), b(5);
  EXPECT_THROW(k::cdot(a, b), qss::Error);
}
