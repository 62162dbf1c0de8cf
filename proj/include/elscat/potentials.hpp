/**
 * @brief Volume and single-layer potentials of the time-harmonic kernel.
 *
 * Both are plain quadrature sums of Phi_w(x - y) against a density. When
 * the evaluation point coincides with a quadrature node, that node's
 * contribution is replaced by an analytic integral of the logarithmic part
 * of Phi_w over a small patch (a disc of the cell's area for the volume
 * rule, a straight segment of the node's arc weight for the boundary rule)
 * plus the bounded remainder sampled inside the patch.
 */
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "elscat/geometry.hpp"
#include "elscat/greens.hpp"

namespace elscat {

/// Points and weights of a 2D quadrature rule.
struct QuadratureNodes {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

/// Tensor Clenshaw-Curtis rule restricted to the nodes inside the scatterer.
inline QuadratureNodes interior_quadrature(const ScatterGrid& g) {
  QuadratureNodes q;
  for (auto p : g.inside_nodes) {
    q.points.push_back(g.point(p));
    q.weights.push_back(g.weight(p));
  }
  return q;
}

inline constexpr double kCoincidenceTol = 1e-12;

/// Integral of Phi_w over a disc of area `cell_weight` centred at the origin.
inline CMat2 self_cell_integral(const DynamicKernel& kernel, double cell_weight) {
  const double a = std::sqrt(cell_weight / kPi);
  // int_{|x|<a} ln(1/|x|) dx = pi a^2 (1/2 - ln a)
  const double log_part = kernel.static_part().lambda_prime * cell_weight * (0.5 - std::log(a));
  // the remainder is sampled at the rms radius; e1/e2 averaging reproduces
  // the disc mean of the xhat xhat term exactly
  const double rho = a / kSqrt2;
  const CMat2 rem = 0.5 * (kernel.log_free_part(Vec2(rho, 0.0)) + kernel.log_free_part(Vec2(0.0, rho)));
  return log_part * CMat2::Identity() + cell_weight * rem;
}

/// Integral of Phi_w along a straight segment of length `arc` through the
/// origin with unit direction `tangent`.
inline CMat2 boundary_self_integral(const DynamicKernel& kernel, double arc, const Vec2& tangent) {
  // int_{-l/2}^{l/2} ln(1/|s|) ds = l (1 - ln(l/2))
  const double log_part = kernel.static_part().lambda_prime * arc * (1.0 - std::log(0.5 * arc));
  const Vec2 off = 0.25 * arc * tangent;
  const CMat2 rem = 0.5 * (kernel.log_free_part(off) + kernel.log_free_part(-off));
  return log_part * CMat2::Identity() + arc * rem;
}

/// Quadrature weight matrix of node y for target x: w Phi_w(x - y) or the
/// singular-cell replacement when x == y.
inline CMat2 volume_weight(const DynamicKernel& kernel, const Vec2& x, const Vec2& y, double w) {
  const Vec2 d = x - y;
  if (d.norm() < kCoincidenceTol) return self_cell_integral(kernel, w);
  return w * kernel(d);
}

inline CMat2 layer_weight(const DynamicKernel& kernel, const BoundaryGeometry& bd, const Vec2& x, std::size_t j) {
  const Vec2 d = x - bd.points[j];
  const double arc = bd.weight(j);
  if (d.norm() < kCoincidenceTol) {
    const Vec2 tangent(-bd.normals[j].y(), bd.normals[j].x());
    return boundary_self_integral(kernel, arc, tangent);
  }
  return arc * kernel(d);
}

/// V_w(density)(x) = int Phi_w(x - y) density(y) dy over the quadrature rule.
inline CVec2 volume_potential(const QuadratureNodes& q, std::span<const CVec2> density, const Vec2& x_eval,
                              const DynamicKernel& kernel) {
  if (density.size() != q.points.size()) throw std::invalid_argument("volume_potential: density size mismatch");
  CVec2 out = CVec2::Zero();
  for (std::size_t s = 0; s < q.points.size(); ++s) {
    if (density[s].isZero(0.0)) continue;
    out += volume_weight(kernel, x_eval, q.points[s], q.weights[s]) * density[s];
  }
  return out;
}

/// S_w(density)(x) = int_{dOmega} Phi_w(x - y) density(y) ds(y), periodic trapezoid in t.
inline CVec2 single_layer(const BoundaryGeometry& bd, std::span<const CVec2> density, const Vec2& x_eval,
                          const DynamicKernel& kernel) {
  if (density.size() != bd.size()) throw std::invalid_argument("single_layer: density size mismatch");
  CVec2 out = CVec2::Zero();
  for (std::size_t j = 0; j < bd.size(); ++j) {
    if (density[j].isZero(0.0)) continue;
    out += layer_weight(kernel, bd, x_eval, j) * density[j];
  }
  return out;
}

}  // namespace elscat
