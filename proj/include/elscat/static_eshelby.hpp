/**
 * @brief Plane-strain static Eshelby apparatus.
 *
 * The eigenstrain h of an inhomogeneity solves
 *
 *     (dC^{-1} + gamma) : h - A(h) = eps(u_inc)   on the inclusion,
 *
 * with A the strongly singular operator whose symbol is symbol_kernel_hat.
 * All isotropic fourth-order tensors involved live in span{J, K}, so the
 * constant part M = dC^{-1} + gamma = alpha J + beta K is inverted in
 * closed form.
 *
 * The periodic solver realizes A spectrally on an R x R torus of unit
 * side; cells are indexed p = i * R + j with x = ((i + 1/2)/R, (j + 1/2)/R).
 */
#pragma once

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "elscat/elastic_core.hpp"
#include "elscat/greens.hpp"

namespace elscat {

/// Bulk and shear contrasts (kappa* - kappa, mu* - mu).
struct ContrastModuli {
  double d_kappa;
  double d_mu;

  void validate() const {
    if (d_kappa == 0.0 || d_mu == 0.0) throw SingularContrast("contrast: kappa* = kappa or mu* = mu");
  }
};

struct AlphaBeta {
  double alpha;
  double beta;
};

enum class InvertibilityClass { FullRank, JDegenerate, KDegenerate, ZeroTensor };

inline const char* to_string(InvertibilityClass c) {
  switch (c) {
    case InvertibilityClass::FullRank: return "FullRank";
    case InvertibilityClass::JDegenerate: return "JDegenerate";
    case InvertibilityClass::KDegenerate: return "KDegenerate";
    case InvertibilityClass::ZeroTensor: return "ZeroTensor";
  }
  return "?";
}

/// Jump tensor of the second derivatives of the volume potential.
inline Tensor4 gamma_tensor(double lambda, double mu) {
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument("gamma_tensor: need mu > 0 and lambda + 2 mu > 0");
  const double denom = 8.0 * mu * (lambda + 2.0 * mu);
  const double a = (3.0 * lambda + 7.0 * mu) / denom;
  const double b = (lambda + mu) / denom;
  return Tensor4::from_fn([&](int i, int j, int k, int l) {
    return a * kronecker(i, j) * kronecker(k, l) - b * (kronecker(i, k) * kronecker(j, l) + kronecker(i, l) * kronecker(j, k));
  });
}

/// dC = 2 d_kappa J + 2 d_mu K
inline Tensor4 contrast_tensor(const ContrastModuli& c) {
  return 2.0 * c.d_kappa * Tensor4::J() + 2.0 * c.d_mu * Tensor4::K();
}

/// dC^{-1} = J / (2 d_kappa) + K / (2 d_mu)
inline Tensor4 contrast_inverse(const ContrastModuli& c) {
  c.validate();
  return (0.5 / c.d_kappa) * Tensor4::J() + (0.5 / c.d_mu) * Tensor4::K();
}

/// Coefficients of M = dC^{-1} + gamma = alpha J + beta K.
///
/// alpha = ((lambda + 3 mu) d_kappa + mu (lambda + 2 mu)) / (2 mu d_kappa (lambda + 2 mu))
/// beta  = (2 mu (lambda + 2 mu) - d_mu (lambda + mu)) / (4 mu d_mu (lambda + 2 mu))
inline AlphaBeta alpha_beta(double lambda, double mu, const ContrastModuli& c) {
  c.validate();
  if (!(lambda + 2.0 * mu > 0.0) || !(mu > 0.0)) throw std::invalid_argument("alpha_beta: need mu > 0, lambda + 2 mu > 0");
  const double l2m = lambda + 2.0 * mu;
  const double alpha = ((lambda + 3.0 * mu) * c.d_kappa + mu * l2m) / (2.0 * mu * c.d_kappa * l2m);
  const double beta = (2.0 * mu * l2m - c.d_mu * (lambda + mu)) / (4.0 * mu * c.d_mu * l2m);
  return {alpha, beta};
}

inline InvertibilityClass classify_invertibility(const AlphaBeta& ab, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_invertibility: tol must be positive");
  const bool a0 = std::abs(ab.alpha) <= tol;
  const bool b0 = std::abs(ab.beta) <= tol;
  if (a0 && b0) return InvertibilityClass::ZeroTensor;
  if (a0) return InvertibilityClass::JDegenerate;
  if (b0) return InvertibilityClass::KDegenerate;
  return InvertibilityClass::FullRank;
}

inline Tensor4 m_tensor(const AlphaBeta& ab) { return ab.alpha * Tensor4::J() + ab.beta * Tensor4::K(); }

inline Tensor4 m_tensor(double lambda, double mu, const ContrastModuli& c) { return m_tensor(alpha_beta(lambda, mu, c)); }

inline Tensor4 m_inverse(const AlphaBeta& ab, double tol = 1e-14) {
  if (classify_invertibility(ab, tol) != InvertibilityClass::FullRank)
    throw NotInvertible("m_inverse: alpha or beta vanishes");
  return (1.0 / ab.alpha) * Tensor4::J() + (1.0 / ab.beta) * Tensor4::K();
}

/// Mandel form of Psi(k) = M - S_hat(k).
inline Mat3 symbol_matrix(const Vec2& k, const AlphaBeta& ab, const StaticCoeffs& c) {
  const double a = 0.5 * (ab.alpha - ab.beta), b = 0.5 * ab.beta;
  const Tensor4 m = Tensor4::from_fn([&](int i, int j, int kk, int l) {
    return a * kronecker(i, j) * kronecker(kk, l) + b * (kronecker(i, kk) * kronecker(j, l) + kronecker(i, l) * kronecker(j, kk));
  });
  return mandel_matrix(m - symbol_kernel_hat(k, c));
}

/// Closed-form determinant of the Mandel symbol; independent of k.
inline double symbol_det_closed(const AlphaBeta& ab, const StaticCoeffs& c) {
  const double a = ab.alpha, b = ab.beta, lp = c.lambda_prime, mp = c.mu_prime;
  return a * b * b + a * b * lp + 0.5 * b * b * (lp - mp) + 0.25 * (a + b) * (lp - mp) * (lp + mp);
}

// ---------------------------------------------------------------------------
// Periodic-cell eigenstrain solver

enum class EshelbyMethod { Richardson, Direct };

struct PeriodicEshelbyProblem {
  double lambda = 1.0;
  double mu = 1.0;
  std::size_t R = 0;
  /// One entry per cell; std::nullopt marks the matrix (no inclusion).
  std::vector<std::optional<ContrastModuli>> contrast;
  Tensor2 eps_inc = Tensor2::Zero();
};

struct EshelbyOptions {
  int max_iter = 10000;
  double tol = 1e-8;
  EshelbyMethod method = EshelbyMethod::Richardson;
};

struct EshelbyResult {
  /// Mandel components (h11, h22, sqrt2 h12) per cell, zero off the support.
  Eigen::MatrixX3d h;
  int iterations = 0;
  /// Relative residual after each sweep; entry 0 is the initial residual.
  std::vector<double> residuals;

  Tensor2 at(std::size_t cell) const { return from_mandel<double>(h.row(static_cast<Eigen::Index>(cell)).transpose()); }
};

/// Disc-shaped inclusion of the given radius (fraction of the cell side)
/// centred in the periodic cell.
inline std::vector<std::optional<ContrastModuli>> disc_inclusion(std::size_t R, double radius, const ContrastModuli& c) {
  std::vector<std::optional<ContrastModuli>> out(R * R);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < R; ++j) {
      const double x = (i + 0.5) / R - 0.5, y = (j + 0.5) / R - 0.5;
      if (x * x + y * y <= radius * radius) out[i * R + j] = c;
    }
  return out;
}

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place 2D FFT of an R x R row-major array.
inline void fft2(Eigen::FFT<double>& fft, std::vector<Complex>& data, std::size_t R, bool inverse) {
  std::vector<Complex> line(R), out(R);
  auto run = [&] {
    if (inverse)
      fft.inv(out, line);
    else
      fft.fwd(out, line);
  };
  for (std::size_t i = 0; i < R; ++i) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(i * R), R, line.begin());
    run();
    std::copy_n(out.begin(), R, data.begin() + static_cast<std::ptrdiff_t>(i * R));
  }
  for (std::size_t j = 0; j < R; ++j) {
    for (std::size_t i = 0; i < R; ++i) line[i] = data[i * R + j];
    run();
    for (std::size_t i = 0; i < R; ++i) data[i * R + j] = out[i];
  }
}

/// Spectral realization of A on the periodic cell.
class PeriodicSymbolOperator {
 public:
  PeriodicSymbolOperator(std::size_t R, const StaticCoeffs& c) : R_(R), symbols_(R * R, Mat3::Zero()) {
    auto freq = [R](std::size_t i) {
      const auto m = static_cast<long>(i);
      const long half = static_cast<long>(R / 2);
      return 2.0 * kPi * static_cast<double>(m <= half ? m : m - static_cast<long>(R));
    };
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < R; ++j) {
        if (i == 0 && j == 0) continue;  // mean mode: S_hat(0) := 0
        symbols_[i * R + j] = mandel_matrix(symbol_kernel_hat(Vec2(freq(i), freq(j)), c));
      }
  }

  Eigen::MatrixX3d apply(const Eigen::MatrixX3d& h) {
    const std::size_t n = R_ * R_;
    std::array<std::vector<Complex>, 3> spec;
    for (int c = 0; c < 3; ++c) {
      spec[c].resize(n);
      for (std::size_t p = 0; p < n; ++p) spec[c][p] = h(static_cast<Eigen::Index>(p), c);
      fft2(fft_, spec[c], R_, false);
    }
    for (std::size_t p = 0; p < n; ++p) {
      const Eigen::Vector3cd v(spec[0][p], spec[1][p], spec[2][p]);
      const Eigen::Vector3cd w = symbols_[p].cast<Complex>() * v;
      for (int c = 0; c < 3; ++c) spec[c][p] = w(c);
    }
    Eigen::MatrixX3d out(static_cast<Eigen::Index>(n), 3);
    for (int c = 0; c < 3; ++c) {
      fft2(fft_, spec[c], R_, true);
      for (std::size_t p = 0; p < n; ++p) out(static_cast<Eigen::Index>(p), c) = spec[c][p].real();
    }
    return out;
  }

 private:
  std::size_t R_;
  std::vector<Mat3> symbols_;
  Eigen::FFT<double> fft_;
};

}  // namespace detail

/// Solves (M : h - A(h)) = eps_inc on the inclusion support, h = 0 elsewhere.
inline EshelbyResult solve_periodic_eshelby(const PeriodicEshelbyProblem& prob, const EshelbyOptions& opt = {}) {
  const std::size_t R = prob.R;
  if (!detail::is_power_of_two(R)) throw std::invalid_argument("solve_periodic_eshelby: R must be a power of two");
  if (prob.contrast.size() != R * R) throw std::invalid_argument("solve_periodic_eshelby: contrast field has wrong size");
  const auto n = static_cast<Eigen::Index>(R * R);

  std::vector<Eigen::Index> support;
  std::vector<Mat3> m_cell, m_inv_cell;
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto& c = prob.contrast[static_cast<std::size_t>(p)];
    if (!c) continue;
    const AlphaBeta ab = alpha_beta(prob.lambda, prob.mu, *c);
    const auto cls = classify_invertibility(ab, 1e-12);
    if (cls == InvertibilityClass::ZeroTensor) throw ZeroTensorContrast("solve_periodic_eshelby: M vanishes (alpha = beta = 0)");
    if (cls != InvertibilityClass::FullRank) throw NotInvertible("solve_periodic_eshelby: M is singular on the support");
    support.push_back(p);
    m_cell.push_back(mandel_matrix(m_tensor(ab)));
    m_inv_cell.push_back(mandel_matrix(m_inverse(ab)));
  }

  EshelbyResult res;
  res.h = Eigen::MatrixX3d::Zero(n, 3);
  if (support.empty()) {
    res.residuals.push_back(0.0);
    return res;
  }

  const Vec3 rhs = mandel_vector<double>(prob.eps_inc);
  const double rhs_norm = rhs.norm() * std::sqrt(static_cast<double>(support.size()));
  if (rhs_norm == 0.0) {
    res.residuals.push_back(0.0);
    return res;
  }

  detail::PeriodicSymbolOperator op(R, static_coeffs(prob.lambda, prob.mu));

  if (opt.method == EshelbyMethod::Direct) {
    if (R > 64) throw std::invalid_argument("solve_periodic_eshelby: direct solve limited to R <= 64");
    // Impulse responses of A for each Mandel component; A is translation invariant.
    std::array<Eigen::MatrixX3d, 3> impulse;
    for (int c = 0; c < 3; ++c) {
      Eigen::MatrixX3d e = Eigen::MatrixX3d::Zero(n, 3);
      e(0, c) = 1.0;
      impulse[c] = op.apply(e);
    }
    const auto ns = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(3 * ns, 3 * ns);
    for (Eigen::Index a = 0; a < ns; ++a) {
      const auto pa = static_cast<std::size_t>(support[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < ns; ++b) {
        const auto pb = static_cast<std::size_t>(support[static_cast<std::size_t>(b)]);
        const std::size_t di = (pa / R + R - pb / R) % R, dj = (pa % R + R - pb % R) % R;
        const auto shift = static_cast<Eigen::Index>(di * R + dj);
        for (int c = 0; c < 3; ++c)
          for (int r = 0; r < 3; ++r) sys(3 * a + r, 3 * b + c) = -impulse[c](shift, r);
      }
      sys.block<3, 3>(3 * a, 3 * a) += m_cell[static_cast<std::size_t>(a)];
    }
    const Eigen::VectorXd b = rhs.replicate(ns, 1);
    const Eigen::VectorXd x = sys.partialPivLu().solve(b);
    for (Eigen::Index a = 0; a < ns; ++a) res.h.row(support[static_cast<std::size_t>(a)]) = x.segment<3>(3 * a).transpose();
  }

  auto residual = [&](Eigen::MatrixX3d& r) {
    const Eigen::MatrixX3d ah = op.apply(res.h);
    double sq = 0.0;
    r.setZero(n, 3);
    for (std::size_t s = 0; s < support.size(); ++s) {
      const Eigen::Index p = support[s];
      const Vec3 rp = rhs - (m_cell[s] * res.h.row(p).transpose() - ah.row(p).transpose());
      r.row(p) = rp.transpose();
      sq += rp.squaredNorm();
    }
    return std::sqrt(sq) / rhs_norm;
  };

  Eigen::MatrixX3d r;
  double rel = residual(r);
  res.residuals.push_back(rel);
  if (opt.method == EshelbyMethod::Direct) return res;

  while (rel > opt.tol) {
    if (res.iterations >= opt.max_iter)
      throw NoConvergence("solve_periodic_eshelby: residual " + std::to_string(rel) + " after " +
                          std::to_string(res.iterations) + " iterations");
    for (std::size_t s = 0; s < support.size(); ++s) {
      const Eigen::Index p = support[s];
      res.h.row(p) += (m_inv_cell[s] * r.row(p).transpose()).transpose();
    }
    ++res.iterations;
    rel = residual(r);
    res.residuals.push_back(rel);
  }
  return res;
}

}  // namespace elscat
