/**
 * @brief Discretized elastodynamic Lippmann-Schwinger problem.
 *
 * The interior field solves u - L(u) = u_inc with
 *
 *     L(v) = V_w( div(dC : eps(v)) + w^2 drho v ) - S_w( (dC : eps(v)) . n ).
 *
 * Unknowns are the displacement at the inside grid nodes, stacked as
 * [u1; u2] (length 2 |inside|). Derivatives along grid lines use the DQ
 * weights of the inside nodes of that line. Contrast coefficient gradients
 * are analytic.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "elscat/geometry.hpp"
#include "elscat/greens.hpp"
#include "elscat/potentials.hpp"

namespace elscat {

/// Value and gradient of a scalar coefficient at a point.
struct ScalarSample {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

using ScalarField = std::function<ScalarSample(const Vec2&)>;

inline ScalarField constant_field(double c) {
  return [c](const Vec2&) { return ScalarSample{c, Vec2::Zero()}; };
}

/// Contrast coefficients (lambda* - lambda, mu* - mu, rho* - rho); empty means zero.
struct ContrastSpec {
  ScalarField d_lambda;
  ScalarField d_mu;
  ScalarField d_rho;
};

/// Contrast sampled at the inside nodes and at the boundary nodes.
struct Contrast {
  Eigen::VectorXd dl, dm, dr;
  Eigen::VectorXd dl_x1, dl_x2, dm_x1, dm_x2;
  Eigen::VectorXd dl_b, dm_b;

  bool is_zero() const {
    return dl.isZero(0.0) && dm.isZero(0.0) && dr.isZero(0.0) && dl_b.isZero(0.0) && dm_b.isZero(0.0) &&
           dl_x1.isZero(0.0) && dl_x2.isZero(0.0) && dm_x1.isZero(0.0) && dm_x2.isZero(0.0);
  }
  bool has_stiffness() const { return !(dl.isZero(0.0) && dm.isZero(0.0) && dl_b.isZero(0.0) && dm_b.isZero(0.0)); }
};

inline Contrast discretize_contrast(const ContrastSpec& spec, const ScatterGrid& g, const BoundaryGeometry& bd) {
  const Eigen::Index n = g.inside_count();
  const auto nb = static_cast<Eigen::Index>(bd.size());
  Contrast c;
  for (auto* v : {&c.dl, &c.dm, &c.dr, &c.dl_x1, &c.dl_x2, &c.dm_x1, &c.dm_x2}) v->setZero(n);
  c.dl_b.setZero(nb);
  c.dm_b.setZero(nb);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Vec2 x = g.inside_point(s);
    if (spec.d_lambda) {
      const auto v = spec.d_lambda(x);
      c.dl(s) = v.value;
      c.dl_x1(s) = v.grad.x();
      c.dl_x2(s) = v.grad.y();
    }
    if (spec.d_mu) {
      const auto v = spec.d_mu(x);
      c.dm(s) = v.value;
      c.dm_x1(s) = v.grad.x();
      c.dm_x2(s) = v.grad.y();
    }
    if (spec.d_rho) c.dr(s) = spec.d_rho(x).value;
  }
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Vec2& x = bd.points[static_cast<std::size_t>(b)];
    if (spec.d_lambda) c.dl_b(b) = spec.d_lambda(x).value;
    if (spec.d_mu) c.dm_b(b) = spec.d_mu(x).value;
  }
  return c;
}

/// Displacement at the inside nodes, stacked [u1; u2].
struct InteriorField {
  Eigen::VectorXcd values;
  PlaneWave incident;
  IsotropicMaterial material;
  double omega = 0.0;

  Eigen::Index nodes() const { return values.size() / 2; }
  CVec2 at(Eigen::Index s) const { return {values(s), values(nodes() + s)}; }
};

inline Eigen::VectorXcd incident_on_grid(const ScatterGrid& g, const PlaneWave& w) {
  const Eigen::Index n = g.inside_count();
  Eigen::VectorXcd u(2 * n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const CVec2 v = eval_plane_wave(w, g.inside_point(s));
    u(s) = v(0);
    u(n + s) = v(1);
  }
  return u;
}

/// First and second derivatives of both displacement components at the inside nodes.
struct DisplacementDerivatives {
  std::array<Eigen::VectorXcd, 2> d1, d2, d11, d22, d12;

  DisplacementDerivatives(const ScatterGrid& g, const Eigen::VectorXcd& u) {
    const Eigen::Index n = g.inside_count();
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXcd uc = u.segment(c * n, n);
      d1[c] = g.ops.d1 * uc;
      d2[c] = g.ops.d2 * uc;
      d11[c] = g.ops.d11 * uc;
      d22[c] = g.ops.d22 * uc;
      d12[c] = g.ops.d12 * uc;
    }
  }
  /// du_c / dx_m
  const Eigen::VectorXcd& grad(int c, int m) const { return m == 0 ? d1[c] : d2[c]; }
};

/// dC : eps(u) = dl (div u) I + 2 dm eps(u) at the inside nodes.
struct StressField {
  Eigen::VectorXcd s11, s22, s12;
};

inline StressField contrast_stress(const ScatterGrid& g, const Eigen::VectorXcd& u, const Eigen::VectorXd& dl,
                                   const Eigen::VectorXd& dm) {
  const DisplacementDerivatives d(g, u);
  const Eigen::VectorXcd div = d.d1[0] + d.d2[1];
  StressField s;
  s.s11 = dl.cast<Complex>().cwiseProduct(div) + 2.0 * dm.cast<Complex>().cwiseProduct(d.d1[0]);
  s.s22 = dl.cast<Complex>().cwiseProduct(div) + 2.0 * dm.cast<Complex>().cwiseProduct(d.d2[1]);
  s.s12 = dm.cast<Complex>().cwiseProduct(d.d2[0] + d.d1[1]);
  return s;
}

/// div(dC : eps(u)) = dm Lap u + (dl + dm) grad div u + (grad dl) div u + 2 eps(u) grad dm.
/// Coefficient gradients are taken from the supplied arrays, not differentiated numerically.
inline std::array<Eigen::VectorXcd, 2> contrast_divergence(const ScatterGrid& g, const Eigen::VectorXcd& u,
                                                           const Eigen::VectorXd& dl, const Eigen::VectorXd& dm,
                                                           const Eigen::VectorXd& dl_x1, const Eigen::VectorXd& dl_x2,
                                                           const Eigen::VectorXd& dm_x1, const Eigen::VectorXd& dm_x2) {
  const DisplacementDerivatives d(g, u);
  const Eigen::Index n = g.inside_count();
  std::array<Eigen::VectorXcd, 2> f{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  for (Eigen::Index p = 0; p < n; ++p) {
    const Complex div = d.d1[0](p) + d.d2[1](p);
    const Complex grad_div[2] = {d.d11[0](p) + d.d12[1](p), d.d12[0](p) + d.d22[1](p)};
    const double gl[2] = {dl_x1(p), dl_x2(p)};
    const double gm[2] = {dm_x1(p), dm_x2(p)};
    for (int i = 0; i < 2; ++i) {
      Complex v = dm(p) * (d.d11[i](p) + d.d22[i](p)) + (dl(p) + dm(p)) * grad_div[i] + gl[i] * div;
      for (int m = 0; m < 2; ++m) v += (d.grad(i, m)(p) + d.grad(m, i)(p)) * gm[m];
      f[i](p) = v;
    }
  }
  return f;
}

inline std::array<Eigen::VectorXcd, 2> contrast_divergence(const ScatterGrid& g, const Eigen::VectorXcd& u,
                                                           const Contrast& c) {
  return contrast_divergence(g, u, c.dl, c.dm, c.dl_x1, c.dl_x2, c.dm_x1, c.dm_x2);
}

// ---------------------------------------------------------------------------

/// Far-field samples over M equidistant directions, one pattern per incident wave.
struct FarFieldPattern {
  /// (m, component) -> 2 m + component
  Eigen::VectorXcd p, s;
};

struct FarFieldSet {
  std::vector<double> angles;
  std::vector<FarFieldPattern> patterns;

  std::size_t directions() const { return angles.size(); }

  /// incident, mode (p then s), direction, component
  Eigen::VectorXcd stacked() const {
    const auto block = static_cast<Eigen::Index>(2 * angles.size());
    Eigen::VectorXcd v(static_cast<Eigen::Index>(patterns.size()) * 2 * block);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      v.segment(static_cast<Eigen::Index>(2 * i) * block, block) = patterns[i].p;
      v.segment(static_cast<Eigen::Index>(2 * i + 1) * block, block) = patterns[i].s;
    }
    return v;
  }

  static FarFieldSet from_stacked(const std::vector<double>& angles, const Eigen::VectorXcd& v) {
    const auto block = static_cast<Eigen::Index>(2 * angles.size());
    if (block == 0 || v.size() % (2 * block) != 0) throw ShapeMismatch("FarFieldSet: stacked length mismatch");
    FarFieldSet f;
    f.angles = angles;
    for (Eigen::Index i = 0; i < v.size() / (2 * block); ++i)
      f.patterns.push_back({v.segment(2 * i * block, block), v.segment((2 * i + 1) * block, block)});
    return f;
  }
};

inline std::vector<double> equidistant_angles(std::size_t M) {
  std::vector<double> a(M);
  for (std::size_t m = 0; m < M; ++m) a[m] = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(M);
  return a;
}

/// Boundary nodes of the fine rule used for the row-sum (constant stress) correction.
inline constexpr int kSubtractionBoundaryNodes = 2048;

/// Contrast-independent discrete operators for one (material, omega, grid, boundary).
///
/// The solver uses L integrated by parts once,
///
///     L(v)(x) = int_Omega d_k Phi_ij(x - y) sigma_jk(y) dy + w^2 V_w(drho v)(x),
///     sigma = dC : eps(v),
///
/// which equals V_w(div sigma) - S_w(sigma . n) but needs only first
/// derivatives of v and avoids cancelling a volume term against a boundary
/// term near the boundary. The self node of each row carries the weight that
/// makes the row integrate a constant stress exactly, using
/// int_Omega grad Phi(x - y) dy = -int_dOmega Phi(x - y) n ds.
class ScatteringOperators {
 public:
  using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  ScatteringOperators(const IsotropicMaterial& mat, double omega, ScatterGrid grid, BoundaryGeometry boundary,
                      std::size_t directions = 64)
      : kernel_(mat, omega), grid_(std::move(grid)), bd_(std::move(boundary)), angles_(equidistant_angles(directions)) {
    mat.validate();
    build_gradient_kernel();
    build_far_field();
  }

  const DynamicKernel& kernel() const { return kernel_; }
  const IsotropicMaterial& material() const { return kernel_.material(); }
  double omega() const { return kernel_.omega(); }
  const ScatterGrid& grid() const { return grid_; }
  const BoundaryGeometry& boundary() const { return bd_; }
  const std::vector<double>& angles() const { return angles_; }
  Eigen::Index inside_count() const { return grid_.inside_count(); }
  Eigen::Index unknowns() const { return 2 * inside_count(); }
  Eigen::Index boundary_count() const { return static_cast<Eigen::Index>(bd_.size()); }

  Contrast discretize(const ContrastSpec& spec) const { return discretize_contrast(spec, grid_, bd_); }

  /// Sparse maps u -> sigma_11, sigma_22, sigma_12 at the inside nodes.
  std::array<SparseRow, 3> stress_operator(const Contrast& c) const {
    const Eigen::Index n = inside_count();
    const auto& o = grid_.ops;
    using Trip = Eigen::Triplet<double>;
    std::array<std::vector<Trip>, 3> t;
    auto add = [&](int comp, int col_block, const Eigen::VectorXd& coef, const SparseRow& D) {
      for (Eigen::Index r = 0; r < n; ++r) {
        if (coef(r) == 0.0) continue;
        for (SparseRow::InnerIterator it(D, r); it; ++it)
          t[static_cast<std::size_t>(comp)].emplace_back(r, col_block * n + it.col(), coef(r) * it.value());
      }
    };
    const Eigen::VectorXd l2m = c.dl + 2.0 * c.dm;
    add(0, 0, l2m, o.d1);
    add(0, 1, c.dl, o.d2);
    add(1, 0, c.dl, o.d1);
    add(1, 1, l2m, o.d2);
    add(2, 0, c.dm, o.d2);
    add(2, 1, c.dm, o.d1);
    std::array<SparseRow, 3> S;
    for (std::size_t k = 0; k < 3; ++k) {
      S[k].resize(n, 2 * n);
      S[k].setFromTriplets(t[k].begin(), t[k].end());
    }
    return S;
  }

  /// sigma = dC : eps(u) as [s11; s22; s12].
  Eigen::VectorXcd stress(const Contrast& c, const Eigen::VectorXcd& u) const {
    const Eigen::Index n = inside_count();
    const auto s = contrast_stress(grid_, u, c.dl, c.dm);
    Eigen::VectorXcd out(3 * n);
    out << s.s11, s.s22, s.s12;
    return out;
  }

  /// w^2 drho u, stacked like u.
  Eigen::VectorXcd inertia(const Contrast& c, const Eigen::VectorXcd& u) const {
    const Eigen::Index n = inside_count();
    Eigen::VectorXcd out(2 * n);
    const double w2 = omega() * omega();
    for (int i = 0; i < 2; ++i) out.segment(i * n, n) = w2 * c.dr.cast<Complex>().cwiseProduct(u.segment(i * n, n));
    return out;
  }

  /// L applied to a stress field [s11; s22; s12] and inertia term.
  Eigen::VectorXcd apply_L_sources(const Eigen::VectorXcd& sigma, const Eigen::VectorXcd& inert) const {
    const Eigen::Index n = inside_count();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * n);
    for (int c = 0; c < 3; ++c) {
      const Eigen::VectorXcd sc = sigma.segment(c * n, n);
      if (sc.isZero(0.0)) continue;
      out.real() += q_re_[static_cast<std::size_t>(c)] * sc.real() - q_im_[static_cast<std::size_t>(c)] * sc.imag();
      out.imag() += q_re_[static_cast<std::size_t>(c)] * sc.imag() + q_im_[static_cast<std::size_t>(c)] * sc.real();
    }
    if (!inert.isZero(0.0)) out += volume_matrix() * inert;
    return out;
  }

  Eigen::VectorXcd apply_L(const Contrast& c, const Eigen::VectorXcd& u) const {
    return apply_L_sources(stress(c, u), inertia(c, u));
  }

  /// Dense matrix of I - L for the given contrast.
  Eigen::MatrixXcd assemble_system(const Contrast& c) const {
    const Eigen::Index nu = unknowns();
    Eigen::MatrixXd re = Eigen::MatrixXd::Zero(nu, nu), im = Eigen::MatrixXd::Zero(nu, nu);
    const auto S = stress_operator(c);
    for (std::size_t k = 0; k < 3; ++k) {
      if (S[k].nonZeros() == 0) continue;
      re.noalias() -= q_re_[k] * S[k];
      im.noalias() -= q_im_[k] * S[k];
    }
    Eigen::MatrixXcd A(nu, nu);
    A.real() = re;
    A.imag() = im;
    if (!c.dr.isZero(0.0)) {
      const Eigen::Index n = inside_count();
      const double w2 = omega() * omega();
      const auto& V = volume_matrix();
      for (Eigen::Index col = 0; col < nu; ++col) A.col(col) -= V.col(col) * (w2 * c.dr(col % n));
    }
    A.diagonal().array() += 1.0;
    return A;
  }

  /// Far-field patterns radiated by a stress field and inertia term.
  FarFieldPattern far_field(const Eigen::VectorXcd& sigma, const Eigen::VectorXcd& inert) const {
    const Eigen::Index n = inside_count();
    Eigen::VectorXcd v = ff_rho_ * inert;
    for (int c = 0; c < 3; ++c) v += ff_sigma_[static_cast<std::size_t>(c)] * sigma.segment(c * n, n);
    const auto half = v.size() / 2;
    return {v.head(half), v.tail(half)};
  }

  FarFieldPattern far_field(const Contrast& c, const Eigen::VectorXcd& u) const {
    return far_field(stress(c, u), inertia(c, u));
  }

  /// Volume potential matrix (2n x 2n) at the inside nodes; built on first use.
  const Eigen::MatrixXcd& volume_matrix() const {
    std::call_once(vol_once_, [this] { build_volume(); });
    return vol_;
  }

 private:
  void build_gradient_kernel() {
    const Eigen::Index n = inside_count();
    for (std::size_t c = 0; c < 3; ++c) {
      q_re_[c].resize(2 * n, n);
      q_im_[c].resize(2 * n, n);
    }
    const BoundaryGeometry fine = boundary_geometry(kSubtractionBoundaryNodes);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index a = 0; a < n; ++a) {
      const Vec2 x = grid_.inside_point(a);
      // exact integral of the kernel over Omega: -int_dOmega Phi(x - y) n_k(y) ds(y)
      std::array<CMat2, 2> total{CMat2::Zero(), CMat2::Zero()};
      for (std::size_t b = 0; b < fine.size(); ++b) {
        const Vec2 d = x - fine.points[b];
        if (d.norm() < kCoincidenceTol) continue;
        const CMat2 phi = fine.weight(b) * kernel_(d);
        for (int k = 0; k < 2; ++k) total[static_cast<std::size_t>(k)] -= phi * fine.normals[b](k);
      }
      std::array<CMat2, 2> rest = total;
      for (Eigen::Index s = 0; s < n; ++s) {
        if (s == a) continue;
        auto g = kernel_.gradient(x - grid_.inside_point(s));
        const double w = grid_.inside_weight(s);
        for (auto& m : g) m *= w;
        rest[0] -= g[0];
        rest[1] -= g[1];
        store(a, s, g);
      }
      store(a, a, rest);
    }
  }

  // K_ijk = g[k](i, j); sum_jk K_ijk sigma_jk = K_i11 s11 + K_i22 s22 + (K_i12 + K_i21) s12
  void store(Eigen::Index a, Eigen::Index s, const std::array<CMat2, 2>& g) {
    const Eigen::Index n = inside_count();
    for (int i = 0; i < 2; ++i) {
      const Complex k11 = g[0](i, 0), k22 = g[1](i, 1), k12 = g[1](i, 0) + g[0](i, 1);
      q_re_[0](i * n + a, s) = k11.real();
      q_im_[0](i * n + a, s) = k11.imag();
      q_re_[1](i * n + a, s) = k22.real();
      q_im_[1](i * n + a, s) = k22.imag();
      q_re_[2](i * n + a, s) = k12.real();
      q_im_[2](i * n + a, s) = k12.imag();
    }
  }

  void build_volume() const {
    const Eigen::Index n = inside_count();
    vol_.resize(2 * n, 2 * n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index a = 0; a < n; ++a) {
      const Vec2 x = grid_.inside_point(a);
      for (Eigen::Index s = 0; s < n; ++s) {
        const CMat2 w = volume_weight(kernel_, x, grid_.inside_point(s), grid_.inside_weight(s));
        for (int i = 0; i < 2; ++i)
          for (int c = 0; c < 2; ++c) vol_(i * n + a, c * n + s) = w(i, c);
      }
    }
  }

  void build_far_field() {
    const auto ff = farfield_coeffs(material(), omega());
    const auto k = kernel_.k();
    const auto M = static_cast<Eigen::Index>(angles_.size());
    const Eigen::Index n = inside_count();
    for (auto& m : ff_sigma_) m.setZero(4 * M, n);
    ff_rho_.setZero(4 * M, 2 * n);
    for (int mode = 0; mode < 2; ++mode) {
      const double kk = mode == 0 ? k.kp : k.ks;
      const Complex beta = mode == 0 ? ff.beta_p : ff.beta_s;
      for (Eigen::Index m = 0; m < M; ++m) {
        const double ang = angles_[static_cast<std::size_t>(m)];
        const Vec2 xh(std::cos(ang), std::sin(ang));
        const Mat2 J = mode == 0 ? FarFieldCoeffs::jp(xh) : FarFieldCoeffs::js(xh);
        for (int i = 0; i < 2; ++i) {
          const Eigen::Index row = (mode * M + m) * 2 + i;
          for (Eigen::Index s = 0; s < n; ++s) {
            const Complex e =
                beta * grid_.inside_weight(s) * std::exp(Complex(0.0, -kk * xh.dot(grid_.inside_point(s))));
            for (int c = 0; c < 2; ++c) ff_rho_(row, c * n + s) = J(i, c) * e;
            // i k (sigma xhat)_i projected by J
            const Complex ie = Complex(0.0, kk) * e;
            ff_sigma_[0](row, s) = ie * J(i, 0) * xh(0);
            ff_sigma_[1](row, s) = ie * J(i, 1) * xh(1);
            ff_sigma_[2](row, s) = ie * (J(i, 0) * xh(1) + J(i, 1) * xh(0));
          }
        }
      }
    }
  }

  DynamicKernel kernel_;
  ScatterGrid grid_;
  BoundaryGeometry bd_;
  std::vector<double> angles_;
  std::array<Eigen::MatrixXd, 3> q_re_, q_im_;
  std::array<Eigen::MatrixXcd, 3> ff_sigma_;
  Eigen::MatrixXcd ff_rho_;
  mutable std::once_flag vol_once_;
  mutable Eigen::MatrixXcd vol_;
};

/// L evaluated in the split form V_w(div sigma + w^2 drho v) - S_w(sigma . n)
/// by direct summation: second derivatives from the inside-node DQ
/// operators, boundary tractions from local fits. Used to cross-check the
/// solver's form; cost is O(n^2) kernel evaluations per call.
inline Eigen::VectorXcd apply_L_split(const ScatteringOperators& ops, const Contrast& c, const Eigen::VectorXcd& u,
                                      const std::vector<Vec2>& targets) {
  const auto& g = ops.grid();
  const auto& bd = ops.boundary();
  const Eigen::Index n = g.inside_count();
  const auto nb = bd.size();
  const auto div = contrast_divergence(g, u, c);
  const double w2 = ops.omega() * ops.omega();
  const QuadratureNodes q = interior_quadrature(g);
  std::vector<CVec2> dens(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s)
    dens[static_cast<std::size_t>(s)] = CVec2(div[0](s), div[1](s)) + w2 * c.dr(s) * CVec2(u(s), u(n + s));
  std::vector<CVec2> trac(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto [r1, r2] = g.local_gradient_rows(bd.points[b]);
    CMat2 grad;  // grad(c, m) = d u_c / d x_m
    for (int cc = 0; cc < 2; ++cc) {
      const Eigen::VectorXcd uc = u.segment(cc * n, n);
      grad(cc, 0) = r1.cast<Complex>() * uc;
      grad(cc, 1) = r2.cast<Complex>() * uc;
    }
    const CMat2 sigma = c.dl_b(static_cast<Eigen::Index>(b)) * grad.trace() * CMat2::Identity() +
                        c.dm_b(static_cast<Eigen::Index>(b)) * (grad + grad.transpose());
    trac[b] = sigma * bd.normals[b].cast<Complex>();
  }
  Eigen::VectorXcd out(2 * static_cast<Eigen::Index>(targets.size()));
  const auto m = static_cast<Eigen::Index>(targets.size());
  for (Eigen::Index t = 0; t < m; ++t) {
    const Vec2& x = targets[static_cast<std::size_t>(t)];
    const CVec2 v = volume_potential(q, dens, x, ops.kernel()) - single_layer(bd, trac, x, ops.kernel());
    out(t) = v(0);
    out(m + t) = v(1);
  }
  return out;
}

/// Factorized I - L for one contrast; reused across incident waves and
/// Frechet right-hand sides.
class LippmannSchwingerSolver {
 public:
  LippmannSchwingerSolver(std::shared_ptr<const ScatteringOperators> ops, Contrast contrast)
      : ops_(std::move(ops)), contrast_(std::move(contrast)) {
    if (contrast_.is_zero()) {
      trivial_ = true;
      return;
    }
    lu_.compute(ops_->assemble_system(contrast_));
    const double rc = lu_.rcond();
    if (!std::isfinite(rc) || rc < 1e-13)
      throw SingularSystem("Lippmann-Schwinger system is singular (rcond estimate " + std::to_string(rc) + ")");
  }

  const ScatteringOperators& operators() const { return *ops_; }
  const std::shared_ptr<const ScatteringOperators>& operators_ptr() const { return ops_; }
  const Contrast& contrast() const { return contrast_; }
  double rcond() const { return trivial_ ? 1.0 : lu_.rcond(); }

  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const {
    if (trivial_) return rhs;
    return lu_.solve(rhs);
  }

  InteriorField solve(const PlaneWave& incident) const {
    InteriorField f;
    f.values = solve(Eigen::MatrixXcd(incident_on_grid(ops_->grid(), incident)));
    f.incident = incident;
    f.material = ops_->material();
    f.omega = ops_->omega();
    return f;
  }

 private:
  std::shared_ptr<const ScatteringOperators> ops_;
  Contrast contrast_;
  bool trivial_ = false;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

inline InteriorField solve_lippmann_schwinger(const std::shared_ptr<const ScatteringOperators>& ops,
                                              const PlaneWave& incident, const Contrast& contrast) {
  return LippmannSchwingerSolver(ops, contrast).solve(incident);
}

inline Eigen::VectorXcd apply_L(const ScatteringOperators& ops, const Eigen::VectorXcd& u, const Contrast& c) {
  return ops.apply_L(c, u);
}

/// Far-field pattern (u_inf_p, u_inf_s) of the field scattered by u.
inline FarFieldPattern far_field(const ScatteringOperators& ops, const InteriorField& u, const Contrast& c) {
  return ops.far_field(c, u.values);
}

}  // namespace elscat
