/**
 * @brief Small 2D tensor algebra for isotropic plane-strain elasticity.
 *
 * Second-order tensors are plain Eigen 2x2 matrices. Fourth-order tensors
 * are stored densely (2^4 components) so that every index permutation can
 * be checked directly; conversion to the 3x3 Mandel form is explicit.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "elscat/errors.hpp"

namespace elscat {

using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2d;
using CMat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

/// Second-order symmetric tensor. Symmetry is an invariant enforced by the
/// producers (strain, double_contract), not by the type.
using Tensor2 = Mat2;

/// Background medium: Lame pair and mass density.
struct IsotropicMaterial {
  double lambda = 1.0;
  double mu = 1.0;
  double rho = 1.0;

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("material: mu must be positive");
    if (!(lambda + mu >= 0.0)) throw std::invalid_argument("material: lambda + mu must be non-negative");
    if (!(rho > 0.0)) throw std::invalid_argument("material: rho must be positive");
  }
};

inline constexpr double kronecker(int i, int j) { return i == j ? 1.0 : 0.0; }

/// Fourth-order tensor on R^2 with dense storage.
class Tensor4 {
 public:
  Tensor4() { c_.fill(0.0); }

  double& operator()(int i, int j, int k, int l) { return c_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }

  static Tensor4 zero() { return Tensor4{}; }

  /// Symmetric fourth-order identity: I_ijkl = (d_ik d_jl + d_il d_jk) / 2.
  static Tensor4 identity() {
    return from_fn([](int i, int j, int k, int l) {
      return 0.5 * (kronecker(i, k) * kronecker(j, l) + kronecker(i, l) * kronecker(j, k));
    });
  }

  /// Hydrostatic projector J_ijkl = d_ij d_kl / 2.
  static Tensor4 J() {
    return from_fn([](int i, int j, int k, int l) { return 0.5 * kronecker(i, j) * kronecker(k, l); });
  }

  /// Deviatoric projector K = I - J.
  static Tensor4 K() { return identity() - J(); }

  template <typename F>
  static Tensor4 from_fn(F&& f) {
    Tensor4 t;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) t(i, j, k, l) = f(i, j, k, l);
    return t;
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }
  friend Tensor4 operator*(Tensor4 a, double s) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Largest violation of C_ijkl = C_jikl = C_ijlk = C_lkij.
  double symmetry_defect() const {
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const double v = (*this)(i, j, k, l);
            d = std::max({d, std::abs(v - (*this)(j, i, k, l)), std::abs(v - (*this)(i, j, l, k)),
                          std::abs(v - (*this)(l, k, i, j))});
          }
    return d;
  }

  bool is_symmetric(double tol = 1e-12) const { return symmetry_defect() <= tol * std::max(1.0, max_abs()); }

 private:
  static constexpr std::size_t index(int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * 2 + j) * 2 + k) * 2 + l);
  }
  std::array<double, 16> c_{};
};

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) { return (a - b).max_abs(); }

/// C_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
inline Tensor4 make_isotropic_tensor(double lambda, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("make_isotropic_tensor: mu must be positive");
  return Tensor4::from_fn([&](int i, int j, int k, int l) {
    return lambda * kronecker(i, j) * kronecker(k, l) +
           mu * (kronecker(i, k) * kronecker(j, l) + kronecker(i, l) * kronecker(j, k));
  });
}

/// (T:e)_ij = sum_kl T_ijkl e_kl. Works for real and complex e.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> double_contract(const Tensor4& t, const Eigen::Matrix<Scalar, 2, 2>& e) {
  Eigen::Matrix<Scalar, 2, 2> out = Eigen::Matrix<Scalar, 2, 2>::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(i, j) += t(i, j, k, l) * e(k, l);
  return out;
}

/// (A:B)_ijkl = sum_mn A_ijmn B_mnkl.
inline Tensor4 double_contract(const Tensor4& a, const Tensor4& b) {
  return Tensor4::from_fn([&](int i, int j, int k, int l) {
    double s = 0.0;
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n) s += a(i, j, m, n) * b(m, n, k, l);
    return s;
  });
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> strain(const Eigen::Matrix<Scalar, 2, 2>& grad_u) {
  return Scalar(0.5) * (grad_u + grad_u.transpose());
}

/// Bulk/shear pair of the J/K split C = 2 kappa J + 2 mu K.
struct BulkShear {
  double kappa;
  double mu;
};

/// kappa = mu / (1 - nu) with the plane-strain Poisson ratio nu = lambda / (2 (lambda + mu)).
inline BulkShear jk_decompose(double lambda, double mu) {
  if (!(lambda + mu != 0.0)) throw DegenerateModuli("jk_decompose: Poisson ratio undefined for lambda + mu = 0");
  const double nu = lambda / (2.0 * (lambda + mu));
  const double denom = 1.0 - nu;
  if (std::abs(denom) < 1e-14) throw DegenerateModuli("jk_decompose: 1 - nu vanishes");
  return {mu / denom, mu};
}

inline Tensor4 jk_recompose(double kappa, double mu) { return 2.0 * kappa * Tensor4::J() + 2.0 * mu * Tensor4::K(); }

/// 3x3 Mandel matrix, rows/cols ordered (11, 22, 12).
inline Mat3 mandel_matrix(const Tensor4& t) {
  if (!t.is_symmetric(1e-12)) throw AsymmetricInput("mandel_matrix: tensor lacks minor/major symmetry");
  Mat3 m;
  m << t(0, 0, 0, 0), t(0, 0, 1, 1), kSqrt2 * t(0, 0, 0, 1),  //
      t(1, 1, 0, 0), t(1, 1, 1, 1), kSqrt2 * t(1, 1, 0, 1),   //
      kSqrt2 * t(0, 1, 0, 0), kSqrt2 * t(0, 1, 1, 1), 2.0 * t(0, 1, 0, 1);
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> mandel_vector(const Eigen::Matrix<Scalar, 2, 2>& e) {
  return {e(0, 0), e(1, 1), Scalar(kSqrt2) * e(0, 1)};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> from_mandel(const Eigen::Matrix<Scalar, 3, 1>& v) {
  Eigen::Matrix<Scalar, 2, 2> e;
  e << v(0), v(2) / Scalar(kSqrt2), v(2) / Scalar(kSqrt2), v(1);
  return e;
}

struct Wavenumbers {
  double kp;
  double ks;
};

/// k_p = omega sqrt(rho / (lambda + 2 mu)), k_s = omega sqrt(rho / mu).
inline Wavenumbers wavenumbers(const IsotropicMaterial& mat, double omega) {
  if (omega < 0.0) throw std::invalid_argument("wavenumbers: omega must be non-negative");
  return {omega * std::sqrt(mat.rho / (mat.lambda + 2.0 * mat.mu)), omega * std::sqrt(mat.rho / mat.mu)};
}

enum class WaveKind { P, S };

inline const char* to_string(WaveKind k) { return k == WaveKind::P ? "p" : "s"; }

struct PlaneWave {
  WaveKind kind = WaveKind::P;
  Vec2 direction = Vec2::UnitX();
  double wavenumber = 0.0;

  /// Incident wave travelling along (cos angle, sin angle) in the given medium.
  static PlaneWave make(WaveKind kind, double angle, const IsotropicMaterial& mat, double omega) {
    const auto k = wavenumbers(mat, omega);
    return {kind, Vec2(std::cos(angle), std::sin(angle)), kind == WaveKind::P ? k.kp : k.ks};
  }

  /// Unit polarization: d for P-waves, -Q d with Q = [[0, 1], [-1, 0]] for S-waves.
  Vec2 polarization() const {
    if (kind == WaveKind::P) return direction;
    return {-direction.y(), direction.x()};
  }
};

inline CVec2 eval_plane_wave(const PlaneWave& w, const Vec2& x) {
  const Complex phase = std::exp(Complex(0.0, w.wavenumber * w.direction.dot(x)));
  return w.polarization().cast<Complex>() * phase;
}

}  // namespace elscat
