/**
 * @brief Scatterer geometry and the tensor Chebyshev grid on D = [-1, 1]^2.
 *
 * Grid nodes x_kj = (x(k), x(j)) with x(k) = -cos(k pi / (N - 1)),
 * k = 0..N-1 (ascending). Grid fields are flat vectors of length N^2 with
 * flat index p = k + N j, i.e. the column-major layout of an N x N matrix
 * whose row index runs along x1.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "elscat/elastic_core.hpp"

namespace elscat {

/// q(t) = (sin^10 t + cos^10 t)^(-1/10)
inline double radial_function(double t) {
  const double s = std::pow(std::sin(t), 10) + std::pow(std::cos(t), 10);
  return std::pow(s, -0.1);
}

inline double radial_derivative(double t) {
  const double sn = std::sin(t), cs = std::cos(t);
  const double s = std::pow(sn, 10) + std::pow(cs, 10);
  const double ds = 10.0 * std::pow(sn, 9) * cs - 10.0 * std::pow(cs, 9) * sn;
  return -0.1 * std::pow(s, -1.1) * ds;
}

/// Inside test r <= q(theta); points on the boundary count as inside.
inline bool inside_domain(const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) return true;
  return r <= radial_function(std::atan2(x.y(), x.x()));
}

/// Inside test that rejects points on the boundary (relative margin 1e-9).
/// Grid unknowns use this one: a boundary node carries no interior
/// neighbourhood and its self-interaction term is ill-defined.
inline bool strictly_inside(const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) return true;
  return r <= radial_function(std::atan2(x.y(), x.x())) * (1.0 - 1e-9);
}

/// 2n equispaced parameter nodes on the rounded-square boundary.
struct BoundaryGeometry {
  int n = 0;
  std::vector<double> params;
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  /// |x'(t_j)|
  std::vector<double> jacobians;

  std::size_t size() const { return points.size(); }
  double dt() const { return kPi / n; }
  /// Trapezoidal arc-length weight |x'(t_j)| pi / n.
  double weight(std::size_t j) const { return jacobians[j] * dt(); }
};

inline BoundaryGeometry boundary_geometry(int n) {
  if (n < 4) throw std::invalid_argument("boundary_geometry: n must be >= 4");
  BoundaryGeometry g;
  g.n = n;
  for (int j = 0; j < 2 * n; ++j) {
    const double t = j * kPi / n;
    const double q = radial_function(t), dq = radial_derivative(t);
    const Vec2 dir(std::cos(t), std::sin(t));
    const Vec2 tangent = dq * dir + q * Vec2(-dir.y(), dir.x());
    const double len = tangent.norm();
    g.params.push_back(t);
    g.points.push_back(q * dir);
    // counter-clockwise parametrization: tangent rotated by -90 degrees points outward
    g.normals.push_back(Vec2(tangent.y(), -tangent.x()) / len);
    g.jacobians.push_back(len);
  }
  return g;
}

// ---------------------------------------------------------------------------
// 1D Chebyshev-extrema machinery

inline Eigen::VectorXd chebyshev_nodes(int N) {
  if (N < 2) throw std::invalid_argument("chebyshev_nodes: N must be >= 2");
  Eigen::VectorXd x(N);
  const int n = N - 1;
  // sin form keeps the nodes exactly symmetric about 0
  for (int k = 0; k < N; ++k) x(k) = std::sin(kPi * (2.0 * k - n) / (2.0 * n));
  return x;
}

/// Clenshaw-Curtis weights on the Chebyshev extrema; they sum to 2.
inline Eigen::VectorXd clenshaw_curtis_weights(int N) {
  if (N < 2) throw std::invalid_argument("clenshaw_curtis_weights: N must be >= 2");
  const int n = N - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N);
  if (n == 1) return Eigen::VectorXd::Ones(2);
  const bool even = n % 2 == 0;
  const double end = even ? 1.0 / (n * n - 1.0) : 1.0 / (n * n);
  w(0) = w(n) = end;
  for (int k = 1; k < n; ++k) {
    const double theta = k * kPi / n;
    double v = 1.0;
    const int mmax = even ? n / 2 - 1 : (n - 1) / 2;
    for (int m = 1; m <= mmax; ++m) v -= 2.0 * std::cos(2.0 * m * theta) / (4.0 * m * m - 1.0);
    if (even) v -= std::cos(n * theta) / (n * n - 1.0);
    w(k) = 2.0 * v / n;
  }
  return w;
}

/// Barycentric weights (-1)^k delta_k, delta = 1/2 at the endpoints.
inline Eigen::VectorXd chebyshev_barycentric_weights(int N) {
  Eigen::VectorXd b(N);
  for (int k = 0; k < N; ++k) b(k) = ((k % 2) ? -1.0 : 1.0) * ((k == 0 || k == N - 1) ? 0.5 : 1.0);
  return b;
}

/// Differential-quadrature weight matrix (order 1 or 2) on a subset `ks` of
/// the N Chebyshev extrema, built from the Lagrange basis of that subset.
/// Node differences use a product-to-sum identity so that symmetric nodes
/// give exactly antisymmetric weights. Diagonals use the negative row sum so
/// constants are differentiated to exactly zero.
inline Eigen::MatrixXd dq_matrix(int N, std::span<const int> ks, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("dq_matrix: order must be 1 or 2");
  const int n = N - 1;
  const auto m = static_cast<int>(ks.size());
  auto diff = [n](int a, int b) {
    return 2.0 * std::cos(kPi * (a + b - n) / (2.0 * n)) * std::sin(kPi * (a - b) / (2.0 * n));
  };
  Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(m, m);
  if (m < 2) return d1;
  // log-magnitude barycentric weights to stay clear of under/overflow
  Eigen::VectorXd logw(m), sgn(m);
  for (int i = 0; i < m; ++i) {
    double l = 0.0, s = 1.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = diff(ks[i], ks[j]);
      l -= std::log(std::abs(d));
      if (d < 0) s = -s;
    }
    logw(i) = l;
    sgn(i) = s;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      if (i != j) d1(i, j) = sgn(i) * sgn(j) * std::exp(logw(j) - logw(i)) / diff(ks[i], ks[j]);
    d1(i, i) = -d1.row(i).sum();
  }
  if (order == 1) return d1;
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      if (i != j) d2(i, j) = 2.0 * d1(i, j) * (d1(i, i) - 1.0 / diff(ks[i], ks[j]));
    d2(i, i) = -d2.row(i).sum();
  }
  return d2;
}

/// DQ matrix on all N Chebyshev extrema.
inline Eigen::MatrixXd dq_matrix(int N, int order) {
  std::vector<int> ks(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) ks[static_cast<std::size_t>(k)] = k;
  return dq_matrix(N, ks, order);
}

/// Weighted-sum derivative of samples on the N Chebyshev extrema.
inline Eigen::VectorXd dq_derivative(std::span<const double> values, int order) {
  const int N = static_cast<int>(values.size());
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), N);
  return dq_matrix(N, order) * v;
}

/// Row of Lagrange basis values l_k(x) on the Chebyshev extrema.
inline Eigen::RowVectorXd lagrange_row(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary, double x) {
  const auto N = nodes.size();
  Eigen::RowVectorXd row(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    if (std::abs(x - nodes(k)) < 1e-14) {
      row.setZero();
      row(k) = 1.0;
      return row;
    }
    row(k) = bary(k) / (x - nodes(k));
  }
  return row / row.sum();
}

// ---------------------------------------------------------------------------
// Tensor grid

/// Derivative operators acting on fields sampled at the inside nodes only.
///
/// Along every grid line the inside nodes form one contiguous run (the
/// scatterer is convex); derivatives use the DQ weights of that run. Fields
/// are therefore never differentiated across the boundary, where the total
/// field is only continuous.
struct InsideOperators {
  Eigen::SparseMatrix<double, Eigen::RowMajor> d1, d2, d11, d22, d12;

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& first(int axis) const { return axis == 0 ? d1 : d2; }
};

struct ScatterGrid {
  int N = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd bary;
  Eigen::MatrixXd D1;
  Eigen::MatrixXd D2;
  /// 1 for nodes strictly inside the scatterer, 0 otherwise (nodes on the
  /// boundary are 0).
  std::vector<unsigned char> inside;
  /// Flat indices of inside nodes, ascending.
  std::vector<Eigen::Index> inside_nodes;
  /// Flat index -> position in inside_nodes, or -1.
  std::vector<Eigen::Index> inside_index;
  InsideOperators ops;

  Eigen::Index size() const { return static_cast<Eigen::Index>(N) * N; }
  Eigen::Index inside_count() const { return static_cast<Eigen::Index>(inside_nodes.size()); }
  Eigen::Index index(int k, int j) const { return k + static_cast<Eigen::Index>(N) * j; }
  int k_of(Eigen::Index p) const { return static_cast<int>(p % N); }
  int j_of(Eigen::Index p) const { return static_cast<int>(p / N); }
  Vec2 point(Eigen::Index p) const { return {nodes(k_of(p)), nodes(j_of(p))}; }
  double weight(Eigen::Index p) const { return weights(k_of(p)) * weights(j_of(p)); }
  bool is_inside(Eigen::Index p) const { return inside[static_cast<std::size_t>(p)] != 0; }
  /// Point and weight of the s-th inside node.
  Vec2 inside_point(Eigen::Index s) const { return point(inside_nodes[static_cast<std::size_t>(s)]); }
  double inside_weight(Eigen::Index s) const { return weight(inside_nodes[static_cast<std::size_t>(s)]); }

  /// Tensor Lagrange interpolation row (length N^2) for a point in D.
  Eigen::RowVectorXd interpolation_row(const Vec2& x) const {
    const Eigen::RowVectorXd a = lagrange_row(nodes, bary, x.x());
    const Eigen::RowVectorXd b = lagrange_row(nodes, bary, x.y());
    Eigen::RowVectorXd row(size());
    for (int j = 0; j < N; ++j) row.segment(static_cast<Eigen::Index>(j) * N, N) = a * b(j);
    return row;
  }

  /// Rows interpolating d/dx1 and d/dx2 of the grid interpolant at x.
  std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> gradient_rows(const Vec2& x) const {
    const Eigen::RowVectorXd a = lagrange_row(nodes, bary, x.x());
    const Eigen::RowVectorXd b = lagrange_row(nodes, bary, x.y());
    const Eigen::RowVectorXd da = a * D1, db = b * D1;
    Eigen::RowVectorXd g1(size()), g2(size());
    for (int j = 0; j < N; ++j) {
      g1.segment(static_cast<Eigen::Index>(j) * N, N) = da * b(j);
      g2.segment(static_cast<Eigen::Index>(j) * N, N) = a * db(j);
    }
    return {g1, g2};
  }

  /// Local least-squares polynomial of total degree `degree` through the
  /// `neighbours` inside nodes nearest to x. Returns rows (length
  /// inside_count) for d/dx1, d/dx2, d2/dx1^2, d2/dx2^2 at x.
  std::array<Eigen::RowVectorXd, 4> local_derivative_rows(const Vec2& x, int neighbours = 45, int degree = 6) const {
    const Eigen::Index nin = inside_count();
    std::vector<std::pair<double, Eigen::Index>> dist;
    dist.reserve(static_cast<std::size_t>(nin));
    for (Eigen::Index s = 0; s < nin; ++s) dist.emplace_back((inside_point(s) - x).squaredNorm(), s);
    const auto m = std::min<std::size_t>(static_cast<std::size_t>(neighbours), dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m), dist.end());
    const double scale = std::sqrt(dist[m - 1].first);
    const int terms = (degree + 1) * (degree + 2) / 2;
    Eigen::MatrixXd V(static_cast<Eigen::Index>(m), terms);
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2 d = (inside_point(dist[i].second) - x) / scale;
      int c = 0;
      for (int t = 0; t <= degree; ++t)
        for (int a = t; a >= 0; --a) V(static_cast<Eigen::Index>(i), c++) = std::pow(d.x(), a) * std::pow(d.y(), t - a);
    }
    // monomial order 1, x, y, x^2, xy, y^2, ...
    const Eigen::MatrixXd P = V.completeOrthogonalDecomposition().pseudoInverse();
    const int pick[4] = {1, 2, 3, 5};
    const double fac[4] = {1.0 / scale, 1.0 / scale, 2.0 / (scale * scale), 2.0 / (scale * scale)};
    std::array<Eigen::RowVectorXd, 4> rows;
    for (int r = 0; r < 4; ++r) {
      rows[static_cast<std::size_t>(r)] = Eigen::RowVectorXd::Zero(nin);
      for (std::size_t i = 0; i < m; ++i)
        rows[static_cast<std::size_t>(r)](dist[i].second) = fac[r] * P(pick[r], static_cast<Eigen::Index>(i));
    }
    return rows;
  }

  /// Gradient rows at x from the local fit above.
  std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> local_gradient_rows(const Vec2& x) const {
    auto r = local_derivative_rows(x);
    return {r[0], r[1]};
  }
};

namespace detail {

/// Lines with fewer inside nodes than this use local fits instead of line DQ.
inline constexpr std::size_t kMinLineRun = 5;

inline InsideOperators build_inside_operators(const ScatterGrid& g) {
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> t1, t2, t11, t22;
  for (int axis = 0; axis < 2; ++axis) {
    for (int line = 0; line < g.N; ++line) {
      std::vector<int> ks;
      std::vector<Eigen::Index> ids;
      for (int k = 0; k < g.N; ++k) {
        const Eigen::Index p = axis == 0 ? g.index(k, line) : g.index(line, k);
        const Eigen::Index s = g.inside_index[static_cast<std::size_t>(p)];
        if (s < 0) continue;
        if (!ks.empty() && ks.back() != k - 1) throw std::logic_error("inside nodes of a grid line are not contiguous");
        ks.push_back(k);
        ids.push_back(s);
      }
      auto& f = axis == 0 ? t1 : t2;
      auto& s = axis == 0 ? t11 : t22;
      if (ks.size() < kMinLineRun) {
        for (auto id : ids) {
          const auto rows = g.local_derivative_rows(g.inside_point(id));
          for (Eigen::Index c = 0; c < g.inside_count(); ++c) {
            if (rows[static_cast<std::size_t>(axis)](c) != 0.0) f.emplace_back(id, c, rows[static_cast<std::size_t>(axis)](c));
            if (rows[static_cast<std::size_t>(2 + axis)](c) != 0.0)
              s.emplace_back(id, c, rows[static_cast<std::size_t>(2 + axis)](c));
          }
        }
        continue;
      }
      const Eigen::MatrixXd a = dq_matrix(g.N, ks, 1), b = dq_matrix(g.N, ks, 2);
      for (std::size_t i = 0; i < ks.size(); ++i)
        for (std::size_t j = 0; j < ks.size(); ++j) {
          const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
          f.emplace_back(ids[i], ids[j], a(ii, jj));
          s.emplace_back(ids[i], ids[j], b(ii, jj));
        }
    }
  }
  const Eigen::Index n = g.inside_count();
  InsideOperators o;
  for (auto [m, t] : {std::pair{&o.d1, &t1}, {&o.d2, &t2}, {&o.d11, &t11}, {&o.d22, &t22}}) {
    m->resize(n, n);
    m->setFromTriplets(t->begin(), t->end());
  }
  o.d12 = (o.d2 * o.d1).pruned();
  return o;
}

}  // namespace detail

inline ScatterGrid interior_grid(int N) {
  if (N < 5) throw std::invalid_argument("interior_grid: N must be >= 5");
  ScatterGrid g;
  g.N = N;
  g.nodes = chebyshev_nodes(N);
  g.weights = clenshaw_curtis_weights(N);
  g.bary = chebyshev_barycentric_weights(N);
  g.D1 = dq_matrix(N, 1);
  g.D2 = dq_matrix(N, 2);
  g.inside.resize(static_cast<std::size_t>(g.size()));
  g.inside_index.assign(static_cast<std::size_t>(g.size()), -1);
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    const bool in = strictly_inside(g.point(p));
    g.inside[static_cast<std::size_t>(p)] = in ? 1 : 0;
    if (in) {
      g.inside_index[static_cast<std::size_t>(p)] = static_cast<Eigen::Index>(g.inside_nodes.size());
      g.inside_nodes.push_back(p);
    }
  }
  g.ops = detail::build_inside_operators(g);
  return g;
}

/// Derivative of a grid field along one axis (0 -> x1, 1 -> x2).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grid_derivative(const ScatterGrid& g,
                                                         const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, int axis,
                                                         int order) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Map<const Mat> F(f.data(), g.N, g.N);
  const Eigen::MatrixXd& D = order == 1 ? g.D1 : g.D2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(g.size());
  Eigen::Map<Mat> O(out.data(), g.N, g.N);
  if (axis == 0)
    O.noalias() = D.cast<Scalar>() * F;
  else
    O.noalias() = F * D.cast<Scalar>().transpose();
  return out;
}

/// Tensor Clenshaw-Curtis sum; with mask_aware only inside nodes contribute.
template <typename Scalar>
Scalar cc_integrate(const ScatterGrid& g, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, bool mask_aware) {
  Scalar s(0);
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    if (mask_aware && !g.is_inside(p)) continue;
    s += g.weight(p) * f(p);
  }
  return s;
}

}  // namespace elscat
