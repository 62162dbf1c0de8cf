#include <gtest/gtest.h>

#include <random>

#include "elscat/greens.hpp"
#include "elscat/hankel.hpp"

using namespace elscat;

namespace {

std::mt19937_64 rng(2024);

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

Vec2 random_direction() {
  const double t = uniform(0.0, 2.0 * kPi);
  return {std::cos(t), std::sin(t)};
}

Mat2 rotation(double t) {
  Mat2 r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

double rel(const CMat2& a, const CMat2& b) { return (a - b).norm() / b.norm(); }

// Sixth-order central stencils.
constexpr double kD1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

// grad grad^T of f(|x|) = H0(ks |x|) - H0(kp |x|) by finite differences.
CMat2 fd_hessian_of_difference(const Vec2& x, double ks, double kp, double h) {
  auto f = [&](double a, double b) {
    const double r = std::hypot(a, b);
    return special::hankel1_0(ks * r) - special::hankel1_0(kp * r);
  };
  CMat2 H = CMat2::Zero();
  for (int s = 0; s < 7; ++s) {
    H(0, 0) += kD2[s] * f(x.x() + (s - 3) * h, x.y());
    H(1, 1) += kD2[s] * f(x.x(), x.y() + (s - 3) * h);
    for (int t = 0; t < 7; ++t)
      if (kD1[s] != 0.0 && kD1[t] != 0.0) H(0, 1) += kD1[s] * kD1[t] * f(x.x() + (s - 3) * h, x.y() + (t - 3) * h);
  }
  H(1, 0) = H(0, 1);
  return H / (h * h);
}

}  // namespace

TEST(StaticCoeffs, UnitLame) {
  const auto c = static_coeffs(1.0, 1.0);
  EXPECT_NEAR(c.lambda_prime, 1.0 / (3.0 * kPi), 1e-16);
  EXPECT_NEAR(c.mu_prime, 1.0 / (6.0 * kPi), 1e-16);
}

TEST(StaticCoeffs, DifferenceIdentity) {
  for (int t = 0; t < 1000; ++t) {
    const double mu = uniform(0.05, 10.0), lambda = uniform(-mu, 10.0);
    const auto c = static_coeffs(lambda, mu);
    EXPECT_NEAR(c.lambda_prime - c.mu_prime, 1.0 / (2.0 * kPi * (lambda + 2.0 * mu)), 1e-13);
    EXPECT_GT(c.lambda_prime, 0.0);
    EXPECT_GE(c.mu_prime, 0.0);
  }
}

TEST(StaticCoeffs, VanishingMuPrime) { EXPECT_EQ(static_coeffs(-1.0, 1.0).mu_prime, 0.0); }

TEST(StaticCoeffs, Preconditions) {
  EXPECT_THROW(static_coeffs(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(static_coeffs(-3.0, 1.0), std::invalid_argument);
}

TEST(PhiStatic, UnitDistanceDropsLog) {
  const auto c = static_coeffs(2.0, 0.7);
  for (int t = 0; t < 20; ++t) {
    const Vec2 d = random_direction();
    EXPECT_LE((phi_static(d, c) - c.mu_prime * d * d.transpose()).norm(), 1e-15);
  }
}

TEST(PhiStatic, Even) {
  const auto c = static_coeffs(1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Vec2 x(uniform(-2, 2), uniform(-2, 2));
    EXPECT_TRUE(phi_static(x, c).isApprox(phi_static(-x, c), 0.0));
  }
}

TEST(PhiStatic, KnownValue) {
  Mat2 want;
  want << 1.0 / (6.0 * kPi), 0.0, 0.0, 0.0;
  EXPECT_LE((phi_static(Vec2(1, 0), static_coeffs(1, 1)) - want).norm(), 1e-16);
}

TEST(PhiStatic, Singular) { EXPECT_THROW(phi_static(Vec2::Zero(), static_coeffs(1, 1)), SingularPoint); }

struct HankelCase {
  double z;
  Complex h0, h1;
};

TEST(Hankel, ReferenceValues) {
  // scipy.special.hankel1
  const HankelCase cases[] = {
      {0.01, {0.9999750001562496, -3.0054556370836463}, {0.004999937500264314, -63.67859628206066}},
      {0.5, {0.9384698072408126, -0.44451873350670656}, {0.24226845767487393, -1.4714723926702433}},
      {1.0, {0.7651976865579664, 0.088256964215677}, {0.44005058574493355, -0.7812128213002889}},
      {5.0, {-0.1775967713143384, -0.3085176252490338}, {-0.3275791375914653, 0.14786314339122694}},
      {11.9, {0.025049441699589642, -0.2298332139433751}, {-0.22898324966192415, -0.03471149833403063}},
      {12.1, {0.06966677360680734, -0.21843838055092551}, {-0.21574897337692484, -0.07873693145139578}},
      {20.0, {0.1670246643405832, 0.06264059680938386}, {0.06683312417585009, -0.16551161436252135}},
      {50.0, {0.05581232766925183, -0.0980649954700771}, {-0.09751182812517517, -0.05679566856201478}},
  };
  // Both branches lose a few digits next to the switch point.
  for (const auto& c : cases) {
    const double tol = std::abs(c.z - special::kHankelSwitch) < 2.0 ? 1e-11 : 1e-13;
    EXPECT_LE(std::abs(special::hankel1_0(c.z) - c.h0), tol * std::abs(c.h0)) << "z = " << c.z;
    EXPECT_LE(std::abs(special::hankel1_1(c.z) - c.h1), tol * std::abs(c.h1)) << "z = " << c.z;
  }
}

TEST(Hankel, ContinuousAcrossSwitch) {
  const double z = special::kHankelSwitch;
  EXPECT_LE(std::abs(special::hankel1_0(z * (1 - 1e-12)) - special::hankel1_0(z * (1 + 1e-12))), 1e-11);
  EXPECT_LE(std::abs(special::hankel1_1(z * (1 - 1e-12)) - special::hankel1_1(z * (1 + 1e-12))), 1e-11);
}

TEST(PhiDynamic, ReferenceValue) {
  // mpmath, 30 digits
  CMat2 want;
  want << Complex(0.31801485724527895, 0.16652087237509314), Complex(0.019333506921998447, 5.8302795029346276e-05),
      Complex(0.019333506921998447, 5.8302795029346276e-05), Complex(0.2811891297748057, 0.1664098194321801);
  EXPECT_LE(rel(phi_dynamic(Vec2(0.7, 0.3), {1, 1, 1}, 0.1), want), 1e-12);
}

TEST(PhiDynamic, EvenAndSymmetric) {
  const DynamicKernel k({2, 1, 1}, 0.1);
  for (int t = 0; t < 50; ++t) {
    const Vec2 x = uniform(0.01, 20.0) * random_direction();
    const CMat2 p = k(x);
    EXPECT_LE(rel(k(-x), p), 1e-15);
    EXPECT_LE(std::abs(p(0, 1) - p(1, 0)), 1e-15 * p.norm());
  }
}

TEST(PhiDynamic, FiniteDifferenceOracle) {
  for (const IsotropicMaterial mat : {IsotropicMaterial{1, 1, 1}, IsotropicMaterial{2, 1, 1}}) {
    const double omega = 0.1;
    const DynamicKernel k(mat, omega);
    const double ks = k.k().ks, kp = k.k().kp;
    for (int t = 0; t < 20; ++t) {
      const double r = std::exp(uniform(std::log(0.01), std::log(10.0))) / kp;
      const Vec2 x = r * random_direction();
      const CMat2 hess = fd_hessian_of_difference(x, ks, kp, 1e-2 * std::min(r, 1.0 / ks));
      const Complex i(0.0, 1.0);
      const CMat2 want =
          i / (4.0 * mat.mu) * special::hankel1_0(ks * r) * CMat2::Identity() + i / (4.0 * mat.rho * omega * omega) * hess;
      const CMat2 got_hess = (k(x) - i / (4.0 * mat.mu) * special::hankel1_0(ks * r) * CMat2::Identity()) *
                             (4.0 * mat.rho * omega * omega / i);
      EXPECT_LE(rel(got_hess, hess), 1e-6) << "r = " << r;
      EXPECT_LE(rel(k(x), want), 1e-6) << "r = " << r;
    }
  }
}

TEST(PhiDynamic, GradientMatchesFiniteDifferences) {
  const DynamicKernel k({2, 1, 1}, 0.1);
  for (int t = 0; t < 20; ++t) {
    const Vec2 x = uniform(0.05, 30.0) * random_direction();
    const double h = 1e-2 * std::min(x.norm(), 10.0);
    const auto g = k.gradient(x);
    for (int a = 0; a < 2; ++a) {
      CMat2 fd = CMat2::Zero();
      for (int s = 0; s < 7; ++s) fd += kD1[s] * k(x + (s - 3) * h * Vec2::Unit(a));
      fd /= h;
      EXPECT_LE(rel(g[static_cast<std::size_t>(a)], fd), 1e-7) << "|x| = " << x.norm();
    }
  }
}

TEST(PhiDynamic, LogFreePartBounded) {
  const DynamicKernel k({1, 1, 1}, 0.1);
  const CMat2 near = k.log_free_part(Vec2(1e-9, 0));
  const CMat2 nearer = k.log_free_part(Vec2(0, 1e-12));
  EXPECT_LT(near.norm(), 1.0);
  EXPECT_LE(std::abs(near.trace() - nearer.trace()), 1e-8);
}

TEST(PhiDynamic, Singular) {
  EXPECT_THROW(phi_dynamic(Vec2::Zero(), {1, 1, 1}, 0.1), SingularPoint);
  EXPECT_THROW(DynamicKernel({1, 1, 1}, 0.0), std::invalid_argument);
}

TEST(PhiHat, AxisValue) {
  const auto c = static_coeffs(1.0, 1.0);
  const Mat2 p = phi_hat(Vec2(1, 0), c);
  EXPECT_NEAR(p(0, 0), c.lambda_prime - c.mu_prime, 1e-16);
  EXPECT_NEAR(p(1, 1), c.lambda_prime + c.mu_prime, 1e-16);
  EXPECT_EQ(p(0, 1), 0.0);
}

TEST(PhiHat, Trace) {
  const auto c = static_coeffs(3.0, 0.4);
  for (int t = 0; t < 100; ++t) {
    const Vec2 k(uniform(-5, 5), uniform(-5, 5));
    EXPECT_NEAR(phi_hat(k, c).trace(), 2.0 * c.lambda_prime / k.squaredNorm(), 1e-13 / k.squaredNorm());
  }
}

TEST(PhiHat, RotationEquivariance) {
  const auto c = static_coeffs(1.5, 2.0);
  for (int t = 0; t < 100; ++t) {
    const Vec2 k(uniform(-5, 5), uniform(-5, 5));
    const Mat2 R = rotation(uniform(0, 2 * kPi));
    const Mat2 p = phi_hat(k, c);
    EXPECT_LE((phi_hat(R * k, c) - R * p * R.transpose()).norm(), 1e-14 * p.norm());
  }
}

TEST(PhiHat, Singular) { EXPECT_THROW(phi_hat(Vec2::Zero(), static_coeffs(1, 1)), SingularPoint); }

TEST(SymbolKernel, SymmetricEvenHomogeneous) {
  const auto c = static_coeffs(2.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Vec2 k(uniform(-5, 5), uniform(-5, 5));
    const Tensor4 s = symbol_kernel_hat(k, c);
    EXPECT_LE(s.symmetry_defect(), 1e-15);
    EXPECT_EQ(max_abs_diff(symbol_kernel_hat(-k, c), s), 0.0);
    const double scale = std::exp(uniform(-5, 5));
    EXPECT_LE(max_abs_diff(symbol_kernel_hat(scale * k, c), s), 1e-12 * s.max_abs());
  }
}

TEST(SymbolKernel, Singular) { EXPECT_THROW(symbol_kernel_hat(Vec2::Zero(), static_coeffs(1, 1)), SingularPoint); }

TEST(FarFieldCoeffs, PhaseQuarterPi) {
  const auto b = farfield_coeffs({2, 1, 1}, 0.1);
  EXPECT_NEAR(std::arg(b.beta_p), kPi / 4, 1e-15);
  EXPECT_NEAR(std::arg(b.beta_s), kPi / 4, 1e-15);
}

TEST(FarFieldCoeffs, UnitMaterialMagnitudes) {
  const auto b = farfield_coeffs({1, 1, 1}, 0.1);
  EXPECT_NEAR(std::abs(b.beta_p), 0.2767190952888346, 1e-15);
  EXPECT_NEAR(std::abs(b.beta_s), 0.6307831305050401, 1e-15);
}

TEST(FarFieldCoeffs, Ratio) {
  for (int t = 0; t < 50; ++t) {
    const IsotropicMaterial m{uniform(0, 4), uniform(0.2, 4), uniform(0.2, 4)};
    const auto b = farfield_coeffs(m, uniform(0.05, 2));
    const auto k = wavenumbers(m, 1.0);
    EXPECT_NEAR(std::abs(b.beta_p / b.beta_s - m.mu / (m.lambda + 2 * m.mu) * std::sqrt(k.ks / k.kp)), 0.0, 1e-14);
  }
}

TEST(FarFieldCoeffs, Projectors) {
  for (int t = 0; t < 50; ++t) {
    const Vec2 x = random_direction();
    const Mat2 p = FarFieldCoeffs::jp(x), s = FarFieldCoeffs::js(x);
    EXPECT_TRUE((p + s).isApprox(Mat2::Identity(), 1e-15));
    EXPECT_LE((p * s).norm(), 1e-15);
  }
}
