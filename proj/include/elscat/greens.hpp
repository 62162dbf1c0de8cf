/**
 * @brief Fundamental tensors of 2D elastostatics and elastodynamics.
 *
 * Fourier transforms use F{f}(k) = int f(x) exp(+i k.x) dx. Every
 * transformed quantity used here is even in k, so the sign of the exponent
 * never changes a result.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "elscat/elastic_core.hpp"
#include "elscat/hankel.hpp"

namespace elscat {

/// Coefficients of the static fundamental solution.
struct StaticCoeffs {
  double lambda_prime;
  double mu_prime;
};

inline StaticCoeffs static_coeffs(double lambda, double mu) {
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument("static_coeffs: need mu > 0 and lambda + 2 mu > 0");
  const double denom = 4.0 * kPi * mu * (lambda + 2.0 * mu);
  return {(lambda + 3.0 * mu) / denom, (lambda + mu) / denom};
}

/// Phi(x) = lambda' ln(1/|x|) I + mu' xhat xhat.
inline Mat2 phi_static(const Vec2& x, const StaticCoeffs& c) {
  const double r = x.norm();
  if (r == 0.0) throw SingularPoint("phi_static: x = 0");
  const Vec2 xh = x / r;
  return c.lambda_prime * -std::log(r) * Mat2::Identity() + c.mu_prime * xh * xh.transpose();
}

/// Time-harmonic fundamental tensor of the Navier operator in the plane.
///
/// Phi_w(x) = i/(4 mu) H0(ks r) I + i/(4 rho w^2) grad grad^T [H0(ks r) - H0(kp r)]
///
/// The Hessian of the radial difference f(r) is expanded as
/// f'' xhat xhat + (f'/r)(I - xhat xhat); both derivative terms are written
/// with the regular part of H1 so the 1/r and 1/r^2 poles cancel exactly.
class DynamicKernel {
 public:
  DynamicKernel(const IsotropicMaterial& mat, double omega)
      : mat_(mat), omega_(omega), k_(wavenumbers(mat, omega)), coeffs_(static_coeffs(mat.lambda, mat.mu)) {
    if (!(omega > 0.0)) throw std::invalid_argument("DynamicKernel: omega must be positive");
  }

  const IsotropicMaterial& material() const { return mat_; }
  double omega() const { return omega_; }
  const Wavenumbers& k() const { return k_; }
  const StaticCoeffs& static_part() const { return coeffs_; }

  CMat2 operator()(const Vec2& x) const {
    const double r = x.norm();
    if (r == 0.0) throw SingularPoint("phi_dynamic: x = 0");
    return eval(x / r, r);
  }

  /// Phi_w(x) - lambda' ln(1/|x|) I, which stays bounded as x -> 0.
  CMat2 log_free_part(const Vec2& x) const {
    const double r = x.norm();
    if (r == 0.0) throw SingularPoint("phi_dynamic: x = 0");
    CMat2 m = eval(x / r, r);
    m.diagonal().array() += coeffs_.lambda_prime * std::log(r);
    return m;
  }

  /// Gradient of Phi_w: result[k](i, j) = d Phi_ij / d x_k.
  ///
  /// With Phi = A(r) I + B(r) xhat xhat,
  /// d_k Phi_ij = A' xhat_k d_ij + B' xhat_i xhat_j xhat_k + (B/r)(d_ik xhat_j + d_jk xhat_i - 2 xhat_i xhat_j xhat_k).
  std::array<CMat2, 2> gradient(const Vec2& x) const {
    const double r = x.norm();
    if (r == 0.0) throw SingularPoint("phi_dynamic gradient: x = 0");
    const Vec2 xh = x / r;
    using special::hankel01;
    const auto hs = hankel01(k_.ks * r);
    const auto hp = hankel01(k_.kp * r);
    const double ks = k_.ks, kp = k_.kp;
    const Complex i_unit(0.0, 1.0);
    const Complex a = i_unit / (4.0 * mat_.mu);
    const Complex b = i_unit / (4.0 * mat_.rho * omega_ * omega_);
    const Complex gs = hs.h1_regular, gp = hp.h1_regular;
    const Complex h1s = gs - 2.0 * i_unit / (kPi * ks * r);
    // f = H0(ks r) - H0(kp r); poles of H1 cancel in f', f'' and partly in f'''
    const Complex f1 = -ks * gs + kp * gp;
    const Complex f2 = -ks * ks * hs.h0 + ks * gs / r + kp * kp * hp.h0 - kp * gp / r;
    const Complex f3 = ks * ks * ks * gs - kp * kp * kp * gp + (ks * ks * hs.h0 - kp * kp * hp.h0) / r -
                       2.0 * (ks * gs - kp * gp) / (r * r) - 2.0 * i_unit * (ks * ks - kp * kp) / (kPi * r);
    const Complex A1 = -a * ks * h1s + b * (f2 / r - f1 / (r * r));
    const Complex B = b * (f2 - f1 / r);
    const Complex B1 = b * (f3 - f2 / r + f1 / (r * r));
    std::array<CMat2, 2> g;
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double dik = i == k ? 1.0 : 0.0, djk = j == k ? 1.0 : 0.0, dij = i == j ? 1.0 : 0.0;
          g[static_cast<std::size_t>(k)](i, j) = A1 * xh(k) * dij + B1 * xh(i) * xh(j) * xh(k) +
                                                 B / r * (dik * xh(j) + djk * xh(i) - 2.0 * xh(i) * xh(j) * xh(k));
        }
    return g;
  }

 private:
  CMat2 eval(const Vec2& xh, double r) const {
    using special::hankel01;
    const auto hs = hankel01(k_.ks * r);
    const auto hp = hankel01(k_.kp * r);
    const double ks = k_.ks, kp = k_.kp;
    const Complex d1_over_r = (-ks * hs.h1_regular + kp * hp.h1_regular) / r;
    const Complex d2 = -ks * ks * hs.h0 + ks * hs.h1_regular / r + kp * kp * hp.h0 - kp * hp.h1_regular / r;
    const Complex i_unit(0.0, 1.0);
    const Complex a = i_unit / (4.0 * mat_.mu) * hs.h0;
    const Complex b = i_unit / (4.0 * mat_.rho * omega_ * omega_);
    const Mat2 jp = xh * xh.transpose();
    const Mat2 js = Mat2::Identity() - jp;
    return a * Mat2::Identity().cast<Complex>() + b * (d2 * jp.cast<Complex>() + d1_over_r * js.cast<Complex>());
  }

  IsotropicMaterial mat_;
  double omega_;
  Wavenumbers k_;
  StaticCoeffs coeffs_;
};

inline CMat2 phi_dynamic(const Vec2& x, const IsotropicMaterial& mat, double omega) {
  return DynamicKernel(mat, omega)(x);
}

/// Fourier transform of the static fundamental solution.
inline Mat2 phi_hat(const Vec2& k, const StaticCoeffs& c) {
  const double k2 = k.squaredNorm();
  if (k2 == 0.0) throw SingularPoint("phi_hat: k = 0");
  const double k4 = k2 * k2;
  Mat2 m;
  m(0, 0) = c.lambda_prime / k2 + c.mu_prime * (k.y() * k.y() - k.x() * k.x()) / k4;
  m(1, 1) = c.lambda_prime / k2 + c.mu_prime * (k.x() * k.x() - k.y() * k.y()) / k4;
  m(0, 1) = m(1, 0) = -2.0 * c.mu_prime * k.x() * k.y() / k4;
  return m;
}

/// Symmetrized kernel symbol
/// S_ijkl = -1/4 (k_j k_l Phi_ik + k_j k_k Phi_il + k_i k_l Phi_jk + k_i k_k Phi_jl).
inline Tensor4 symbol_kernel_hat(const Vec2& k, const StaticCoeffs& c) {
  const Mat2 ph = phi_hat(k, c);
  return Tensor4::from_fn([&](int i, int j, int m, int l) {
    return -0.25 * (k(j) * k(l) * ph(i, m) + k(j) * k(m) * ph(i, l) + k(i) * k(l) * ph(j, m) +
                    k(i) * k(m) * ph(j, l));
  });
}

/// Far-field coefficients beta_p, beta_s.
struct FarFieldCoeffs {
  Complex beta_p;
  Complex beta_s;

  /// J_p(xhat) = xhat xhat
  static Mat2 jp(const Vec2& xhat) { return xhat * xhat.transpose(); }
  /// J_s(xhat) = I - J_p(xhat)
  static Mat2 js(const Vec2& xhat) { return Mat2::Identity() - jp(xhat); }
};

inline FarFieldCoeffs farfield_coeffs(const IsotropicMaterial& mat, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("farfield_coeffs: omega must be positive");
  const auto k = wavenumbers(mat, omega);
  const Complex phase = std::polar(1.0, 0.25 * kPi);
  return {phase / ((mat.lambda + 2.0 * mat.mu) * std::sqrt(8.0 * kPi * k.kp)),
          phase / (mat.mu * std::sqrt(8.0 * kPi * k.ks))};
}

}  // namespace elscat
