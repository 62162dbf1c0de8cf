/**
 * @brief Hankel functions of the first kind, orders 0 and 1, for real
 * positive argument.
 *
 * Two evaluation regimes with a fixed switch at z = kHankelSwitch:
 *  - z <  12: ascending power series for J0, Y0, J1, Y1
 *  - z >= 12: Hankel asymptotic expansion, truncated at its smallest term
 * Both regimes are accurate to roughly 1e-11 relative near the switch and
 * better away from it.
 *
 * The "regular" order-one function H1(z) + 2i/(pi z) drops the 1/z pole,
 * which lets Green-tensor differences cancel their singular parts
 * analytically instead of numerically.
 */
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace elscat::special {

inline constexpr double kHankelSwitch = 12.0;
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct HankelValues {
  std::complex<double> h0;
  /// H1(z) + 2i/(pi z)
  std::complex<double> h1_regular;
};

namespace detail {

inline HankelValues series(double z) {
  constexpr double pi = 3.14159265358979323846;
  const double q = 0.25 * z * z;
  const double log_half = std::log(0.5 * z);

  // order 0: t_k = (-q)^k / (k!)^2, harmonic number weights for Y0
  double j0 = 1.0, y0_sum = 0.0;
  // order 1: s_k = (-q)^k / (k! (k+1)!), digamma weights for Y1
  double j1_sum = 1.0, y1_sum = 2.0 * (1.0 - kEulerGamma) - 1.0;  // psi(1) + psi(2) = -2 gamma + 1
  double t = 1.0, s = 1.0, harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    t *= -q / (static_cast<double>(k) * k);
    s *= -q / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    const double harmonic_next = harmonic + 1.0 / (k + 1);
    j0 += t;
    y0_sum += harmonic * t;
    j1_sum += s;
    y1_sum += (harmonic + harmonic_next - 2.0 * kEulerGamma) * s;
    if (k > q && std::abs(t) < 1e-18 && std::abs(s) < 1e-18) break;
  }
  const double y0 = (2.0 / pi) * (log_half + kEulerGamma) * j0 - (2.0 / pi) * y0_sum;
  const double j1 = 0.5 * z * j1_sum;
  const double y1_regular = (2.0 / pi) * log_half * j1 - (0.5 * z / pi) * y1_sum;
  return {{j0, y0}, {j1, y1_regular}};
}

inline std::complex<double> asymptotic(int order, double z) {
  constexpr double pi = 3.14159265358979323846;
  const double mu4 = 4.0 * order * order;
  std::complex<double> sum = 1.0, term = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= std::complex<double>(0.0, 1.0) * (mu4 - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < 1e-17) break;
  }
  const double phase = z - 0.5 * order * pi - 0.25 * pi;
  return std::sqrt(2.0 / (pi * z)) * std::exp(std::complex<double>(0.0, phase)) * sum;
}

}  // namespace detail

inline HankelValues hankel01(double z) {
  constexpr double pi = 3.14159265358979323846;
  if (!(z > 0.0)) throw std::domain_error("hankel01: argument must be positive");
  if (z < kHankelSwitch) return detail::series(z);
  return {detail::asymptotic(0, z), detail::asymptotic(1, z) + std::complex<double>(0.0, 2.0 / (pi * z))};
}

inline std::complex<double> hankel1_0(double z) { return hankel01(z).h0; }

inline std::complex<double> hankel1_1(double z) {
  constexpr double pi = 3.14159265358979323846;
  return hankel01(z).h1_regular - std::complex<double>(0.0, 2.0 / (pi * z));
}

}  // namespace elscat::special
