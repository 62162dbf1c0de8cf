#include <gtest/gtest.h>

#include <random>

#include "elscat/elastic_core.hpp"

using namespace elscat;

namespace {

std::mt19937_64 rng(12345);

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

}  // namespace

TEST(IsotropicTensor, HalfShearZeroLambdaIsIdentity) {
  EXPECT_EQ(max_abs_diff(make_isotropic_tensor(0.0, 0.5), Tensor4::identity()), 0.0);
}

TEST(IsotropicTensor, UnitLameComponents) {
  const Tensor4 c = make_isotropic_tensor(1.0, 1.0);
  EXPECT_DOUBLE_EQ(c(0, 0, 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(c(0, 0, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(c(0, 1, 0, 1), 1.0);
}

TEST(IsotropicTensor, AlwaysFullySymmetric) {
  for (int t = 0; t < 200; ++t) {
    const double mu = uniform(0.01, 10.0), lambda = uniform(-mu, 10.0);
    EXPECT_EQ(make_isotropic_tensor(lambda, mu).symmetry_defect(), 0.0);
  }
}

TEST(IsotropicTensor, RejectsNonPositiveShear) { EXPECT_THROW(make_isotropic_tensor(1.0, 0.0), std::invalid_argument); }

TEST(DoubleContract, IdentityMapsStrainToItself) {
  Mat2 e;
  e << 0.3, -1.2, -1.2, 2.5;
  EXPECT_TRUE(double_contract(Tensor4::identity(), e).isApprox(e, 0.0));
}

TEST(DoubleContract, UnitLameOnIdentity) {
  EXPECT_TRUE(double_contract(make_isotropic_tensor(1.0, 1.0), Mat2(Mat2::Identity())).isApprox(4.0 * Mat2::Identity()));
}

TEST(DoubleContract, ZeroTensor) {
  Mat2 e;
  e << 1.0, 2.0, 2.0, 3.0;
  EXPECT_TRUE(double_contract(Tensor4::zero(), e).isZero(0.0));
}

TEST(DoubleContract, ComplexStrainKeepsSymmetry) {
  CMat2 e;
  e << Complex(1, 2), Complex(0.5, -1), Complex(0.5, -1), Complex(-3, 0.25);
  const CMat2 s = double_contract(make_isotropic_tensor(2.0, 0.7), e);
  EXPECT_NEAR(std::abs(s(0, 1) - s(1, 0)), 0.0, 1e-15);
}

TEST(Strain, SymmetricInputUnchanged) {
  Mat2 g;
  g << 1.0, 4.0, 4.0, -2.0;
  EXPECT_TRUE(strain(g).isApprox(g, 0.0));
}

TEST(Strain, AntisymmetricInputVanishes) {
  Mat2 g;
  g << 0.0, 3.0, -3.0, 0.0;
  EXPECT_TRUE(strain(g).isZero(0.0));
}

TEST(Strain, HandComputed) {
  Mat2 g, want;
  g << 1.0, 2.0, 0.0, 3.0;
  want << 1.0, 1.0, 1.0, 3.0;
  EXPECT_TRUE(strain(g).isApprox(want, 0.0));
}

TEST(JKSplit, ProjectorAlgebra) {
  const Tensor4 J = Tensor4::J(), K = Tensor4::K();
  EXPECT_LE(max_abs_diff(double_contract(J, J), J), 1e-14);
  EXPECT_LE(max_abs_diff(double_contract(K, K), K), 1e-14);
  EXPECT_LE(double_contract(J, K).max_abs(), 1e-14);
}

TEST(JKSplit, PlaneStrainKappa) {
  const BulkShear b = jk_decompose(1.0, 1.0);
  EXPECT_NEAR(b.kappa, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(b.mu, 1.0);
}

// With kappa = mu / (1 - nu) the split 2 kappa J + 2 mu K does not rebuild
// the isotropic tensor; the 2D bulk modulus lambda + mu does.
TEST(JKSplit, RecomposeWithPlaneStrainKappa) {
  const Tensor4 c = jk_recompose(4.0 / 3.0, 1.0);
  EXPECT_NEAR(c(0, 0, 0, 0), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(c(0, 0, 1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c(0, 1, 0, 1), 1.0, 1e-15);
}

TEST(JKSplit, RecomposeWithBulkModulusRoundTrips) {
  for (int t = 0; t < 100; ++t) {
    const double mu = uniform(0.1, 5.0), lambda = uniform(-0.9 * mu, 5.0);
    EXPECT_LE(max_abs_diff(jk_recompose(lambda + mu, mu), make_isotropic_tensor(lambda, mu)), 1e-14);
  }
}

TEST(JKSplit, DegenerateModuli) { EXPECT_THROW(jk_decompose(-1.0, 1.0), DegenerateModuli); }

TEST(Mandel, UnitLame) {
  Mat3 want;
  want << 3, 1, 0, 1, 3, 0, 0, 0, 2;
  EXPECT_TRUE(mandel_matrix(make_isotropic_tensor(1.0, 1.0)).isApprox(want, 1e-15));
}

TEST(Mandel, IdentityAndJ) {
  EXPECT_TRUE(mandel_matrix(Tensor4::identity()).isApprox(Mat3::Identity(), 1e-15));
  Mat3 want;
  want << 0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 0;
  EXPECT_TRUE(mandel_matrix(Tensor4::J()).isApprox(want, 1e-15));
}

TEST(Mandel, RejectsAsymmetric) {
  Tensor4 t = Tensor4::identity();
  t(0, 1, 0, 0) = 1.0;
  EXPECT_THROW(mandel_matrix(t), AsymmetricInput);
}

TEST(Mandel, PositiveDefiniteForAdmissibleLame) {
  for (int t = 0; t < 200; ++t) {
    const double mu = uniform(0.01, 10.0), lambda = uniform(-mu + 1e-3, 10.0);
    const Mat3 m = mandel_matrix(make_isotropic_tensor(lambda, mu));
    EXPECT_TRUE(m.isApprox(m.transpose()));
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat3>(m).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Mandel, VectorRoundTrip) {
  Mat2 e;
  e << 0.4, -0.7, -0.7, 1.1;
  EXPECT_TRUE(from_mandel<double>(mandel_vector<double>(e)).isApprox(e, 1e-15));
}

TEST(Wavenumbers, UnitMaterial) {
  const auto k = wavenumbers({1.0, 1.0, 1.0}, 0.1);
  EXPECT_NEAR(k.kp, 0.057735026918962574, 1e-16);
  EXPECT_NEAR(k.ks, 0.1, 1e-16);
}

TEST(Wavenumbers, StaticLimit) {
  const auto k = wavenumbers({2.0, 1.0, 1.0}, 0.0);
  EXPECT_EQ(k.kp, 0.0);
  EXPECT_EQ(k.ks, 0.0);
}

TEST(Wavenumbers, RatioIdentity) {
  for (int t = 0; t < 50; ++t) {
    const IsotropicMaterial m{uniform(0.0, 5.0), uniform(0.1, 5.0), uniform(0.1, 5.0)};
    const auto k = wavenumbers(m, uniform(0.01, 3.0));
    EXPECT_NEAR(k.ks / k.kp, std::sqrt((m.lambda + 2 * m.mu) / m.mu), 1e-13);
  }
}

TEST(Material, Validation) {
  EXPECT_NO_THROW((IsotropicMaterial{2.0, 1.0, 1.0}.validate()));
  EXPECT_THROW((IsotropicMaterial{1.0, 0.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((IsotropicMaterial{-2.0, 1.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((IsotropicMaterial{1.0, 1.0, 0.0}.validate()), std::invalid_argument);
}

TEST(PlaneWave, PWaveAtOriginIsDirection) {
  const auto w = PlaneWave::make(WaveKind::P, 0.7, {1, 1, 1}, 0.1);
  EXPECT_TRUE(eval_plane_wave(w, Vec2::Zero()).isApprox(w.direction.cast<Complex>()));
}

TEST(PlaneWave, SWaveIsTransverse) {
  const auto w = PlaneWave::make(WaveKind::S, 1.3, {1, 1, 1}, 0.1);
  for (int t = 0; t < 20; ++t) {
    const Vec2 x(uniform(-1, 1), uniform(-1, 1));
    EXPECT_NEAR(std::abs(eval_plane_wave(w, x).dot(w.direction.cast<Complex>())), 0.0, 1e-15);
  }
}

TEST(PlaneWave, UnitModulus) {
  for (auto kind : {WaveKind::P, WaveKind::S}) {
    const auto w = PlaneWave::make(kind, 2.1, {2, 1, 1}, 0.4);
    EXPECT_NEAR(eval_plane_wave(w, Vec2(0.3, -0.8)).norm(), 1.0, 1e-15);
  }
}

TEST(PlaneWave, KnownValue) {
  const PlaneWave w{WaveKind::P, Vec2(1, 0), 0.057735};
  const CVec2 u = eval_plane_wave(w, Vec2(1, 0));
  EXPECT_NEAR(std::abs(u(0) - std::exp(Complex(0, 0.057735))), 0.0, 1e-15);
  EXPECT_EQ(u(1), Complex(0.0));
}
