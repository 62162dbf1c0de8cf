/**
 * @brief Newton-Tikhonov reconstruction of lambda*(x) from far-field data.
 *
 * lambda*(x) = sum_kj L_kj exp(-(K pi / 4)[(x1 - z_k)^2 + (x2 - z_j)^2]),
 * z_k = -1 + 2k/(K-1) for k = 0..K-1. Coefficients are flattened k-major,
 * c = k K + j, everywhere (Jacobian columns, update vectors, CSV output).
 *
 * Only lambda* is unknown; mu* = mu and rho* = rho.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "elscat/lippmann_schwinger.hpp"

namespace elscat {

class GaussianBasis {
 public:
  explicit GaussianBasis(int K) : K_(K) {
    if (K < 2) throw std::invalid_argument("GaussianBasis: K must be >= 2");
  }

  int K() const { return K_; }
  int size() const { return K_ * K_; }
  double width() const { return K_ * kPi / 4.0; }
  double center(int k) const { return -1.0 + 2.0 * k / (K_ - 1); }

  /// Basis function c = k K + j, with its gradient.
  ScalarSample eval(int c, const Vec2& x) const {
    const double a = x.x() - center(c / K_), b = x.y() - center(c % K_);
    const double v = std::exp(-width() * (a * a + b * b));
    return {v, Vec2(-2.0 * width() * a * v, -2.0 * width() * b * v)};
  }

  ScalarField function(int c) const {
    GaussianBasis self = *this;
    return [self, c](const Vec2& x) { return self.eval(c, x); };
  }

 private:
  int K_;
};

struct LambdaField {
  int K = 5;
  /// L(k, j)
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(5, 5);

  static LambdaField zero(int K) { return {K, Eigen::MatrixXd::Zero(K, K)}; }

  /// k-major flattening c = k K + j
  Eigen::VectorXd flat() const {
    Eigen::VectorXd v(K * K);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < K; ++j) v(k * K + j) = coeffs(k, j);
    return v;
  }

  static LambdaField from_flat(int K, const Eigen::VectorXd& v) {
    if (v.size() != K * K) throw ShapeMismatch("LambdaField: coefficient count must be K^2");
    LambdaField f = zero(K);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < K; ++j) f.coeffs(k, j) = v(k * K + j);
    return f;
  }

  ScalarSample sample(const Vec2& x) const {
    const GaussianBasis basis(K);
    ScalarSample s;
    for (int c = 0; c < K * K; ++c) {
      const double w = coeffs(c / K, c % K);
      if (w == 0.0) continue;
      const auto g = basis.eval(c, x);
      s.value += w * g.value;
      s.grad += w * g.grad;
    }
    return s;
  }
};

inline Eigen::VectorXd eval_lambda_field(const LambdaField& f, const std::vector<Vec2>& points) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) v(static_cast<Eigen::Index>(i)) = f.sample(points[i]).value;
  return v;
}

/// Least-squares coefficients whose expansion best matches `value` at the grid nodes.
inline LambdaField initial_coefficients(int K, double value, const ScatterGrid& g) {
  const GaussianBasis basis(K);
  Eigen::MatrixXd A(g.size(), basis.size());
  for (Eigen::Index p = 0; p < g.size(); ++p)
    for (int c = 0; c < basis.size(); ++c) A(p, c) = basis.eval(c, g.point(p)).value;
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(g.size(), value);
  return LambdaField::from_flat(K, A.colPivHouseholderQr().solve(b));
}

struct InversionConfig {
  IsotropicMaterial material{2.0, 1.0, 1.0};
  double omega = 0.1;
  int n = 32;
  int N = 41;
  int K = 5;
  std::size_t directions = 64;
  std::vector<double> incident_angles{0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  WaveKind incident_kind = WaveKind::P;
  double initial_lambda = 0.5;
  double alpha0 = 1e-3;
  double alpha_ratio = 0.5;
  int max_iter = 2;
  double delta = 0.0;
  std::uint64_t seed = 1;
  /// Grid used to synthesize data; the inversion grid when empty.
  std::optional<int> synthesis_N;

  double alpha(int n_iter) const { return alpha0 * std::pow(alpha_ratio, n_iter); }

  void validate() const {
    material.validate();
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    if (n < 4 || N < 5 || K < 2 || directions < 1 || max_iter < 0) throw ConfigError("counts must be positive");
    if (incident_angles.empty()) throw ConfigError("at least one incident direction is required");
    if (!(delta >= 0.0)) throw ConfigError("noise level must be >= 0");
    if (!(alpha0 > 0.0) || !(alpha_ratio > 0.0) || !(alpha_ratio <= 1.0))
      throw ConfigError("regularization schedule must be positive and non-increasing");
  }
};

/// Operators, incident waves and basis shared by every forward solve of one experiment.
class ForwardModel {
 public:
  ForwardModel(const IsotropicMaterial& mat, double omega, int n, int N, std::size_t directions,
               std::vector<PlaneWave> incidents, int K)
      : ops_(std::make_shared<ScatteringOperators>(mat, omega, interior_grid(N), boundary_geometry(n), directions)),
        incidents_(std::move(incidents)),
        basis_(K) {}

  explicit ForwardModel(const InversionConfig& cfg, std::optional<int> N_override = std::nullopt)
      : ForwardModel(cfg.material, cfg.omega, cfg.n, N_override.value_or(cfg.N), cfg.directions, make_incidents(cfg),
                     cfg.K) {}

  static std::vector<PlaneWave> make_incidents(const InversionConfig& cfg) {
    std::vector<PlaneWave> w;
    for (double a : cfg.incident_angles) w.push_back(PlaneWave::make(cfg.incident_kind, a, cfg.material, cfg.omega));
    return w;
  }

  const ScatteringOperators& operators() const { return *ops_; }
  const std::shared_ptr<const ScatteringOperators>& operators_ptr() const { return ops_; }
  const std::vector<PlaneWave>& incidents() const { return incidents_; }
  const GaussianBasis& basis() const { return basis_; }
  const IsotropicMaterial& material() const { return ops_->material(); }

  /// Contrast lambda*(x) - lambda for an arbitrary lambda* field.
  Contrast contrast(const std::function<ScalarSample(const Vec2&)>& lambda_star) const {
    const double lam = material().lambda;
    ContrastSpec spec;
    spec.d_lambda = [lambda_star, lam](const Vec2& x) {
      auto s = lambda_star(x);
      s.value -= lam;
      return s;
    };
    return ops_->discretize(spec);
  }

  Contrast contrast(const LambdaField& f) const {
    return contrast([f](const Vec2& x) { return f.sample(x); });
  }

  /// Contrast (g_c, 0, 0) of basis function c.
  Contrast basis_direction(int c) const {
    ContrastSpec spec;
    spec.d_lambda = basis_.function(c);
    return ops_->discretize(spec);
  }

  Eigen::MatrixXcd incident_matrix() const {
    Eigen::MatrixXcd U(ops_->unknowns(), static_cast<Eigen::Index>(incidents_.size()));
    for (std::size_t i = 0; i < incidents_.size(); ++i)
      U.col(static_cast<Eigen::Index>(i)) = incident_on_grid(ops_->grid(), incidents_[i]);
    return U;
  }

  std::size_t data_length() const { return incidents_.size() * 4 * ops_->angles().size(); }

 private:
  std::shared_ptr<const ScatteringOperators> ops_;
  std::vector<PlaneWave> incidents_;
  GaussianBasis basis_;
};

/// Solved forward problem for one coefficient field: factorization, interior
/// fields (one column per incident wave) and the stacked far field.
struct ForwardState {
  std::shared_ptr<const LippmannSchwingerSolver> solver;
  Eigen::MatrixXcd fields;
  Eigen::VectorXcd far_field;
};

/// Far fields of several interior fields, stacked incident-major.
inline Eigen::VectorXcd stacked_far_field(const ScatteringOperators& ops, const Contrast& c,
                                          const Eigen::MatrixXcd& fields) {
  const auto block = static_cast<Eigen::Index>(4 * ops.angles().size());
  Eigen::VectorXcd out(block * fields.cols());
  for (Eigen::Index i = 0; i < fields.cols(); ++i) {
    const Eigen::VectorXcd u = fields.col(i);
    const auto ff = ops.far_field(c, u);
    out.segment(i * block, block / 2) = ff.p;
    out.segment(i * block + block / 2, block / 2) = ff.s;
  }
  return out;
}

inline ForwardState solve_forward(const ForwardModel& model, const Contrast& c) {
  ForwardState st;
  st.solver = std::make_shared<LippmannSchwingerSolver>(model.operators_ptr(), c);
  st.fields = st.solver->solve(model.incident_matrix());
  st.far_field = stacked_far_field(model.operators(), c, st.fields);
  return st;
}

inline ForwardState solve_forward(const ForwardModel& model, const LambdaField& f) {
  return solve_forward(model, model.contrast(f));
}

/// F(L): stacked far fields (incident, mode, direction, component).
inline Eigen::VectorXcd forward_map(const LambdaField& f, const ForwardModel& model) {
  return solve_forward(model, f).far_field;
}

inline FarFieldSet to_far_field_set(const ForwardModel& model, const Eigen::VectorXcd& stacked) {
  return FarFieldSet::from_stacked(model.operators().angles(), stacked);
}

/// Derivative of F in the direction of the contrast `h`, for every incident.
///
/// w solves (I - L_c) w = L_h(u); the far field of the perturbation is that
/// of the source pair (c, w) plus (h, u).
inline Eigen::VectorXcd frechet_direction(const ForwardModel& model, const ForwardState& st, const Contrast& h) {
  const auto& ops = model.operators();
  const Contrast& c = st.solver->contrast();
  const auto block = static_cast<Eigen::Index>(4 * ops.angles().size());
  const Eigen::Index ni = st.fields.cols();
  Eigen::MatrixXcd rhs(ops.unknowns(), ni);
  for (Eigen::Index i = 0; i < ni; ++i) rhs.col(i) = ops.apply_L(h, st.fields.col(i));
  const Eigen::MatrixXcd w = st.solver->solve(rhs);
  Eigen::VectorXcd out(block * ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const Eigen::VectorXcd wi = w.col(i), ui = st.fields.col(i);
    const auto ff = ops.far_field(ops.stress(c, wi) + ops.stress(h, ui), ops.inertia(c, wi) + ops.inertia(h, ui));
    out.segment(i * block, block / 2) = ff.p;
    out.segment(i * block + block / 2, block / 2) = ff.s;
  }
  return out;
}

inline Eigen::VectorXcd frechet_column(const ForwardModel& model, const ForwardState& st, int c) {
  return frechet_direction(model, st, model.basis_direction(c));
}

/// Complex vector -> [Re; Im].
inline Eigen::VectorXd stack_real(const Eigen::VectorXcd& v) {
  Eigen::VectorXd r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

/// Real stacked Jacobian, one column per basis function (k-major).
inline Eigen::MatrixXd assemble_jacobian(const ForwardModel& model, const ForwardState& st) {
  const int nb = model.basis().size();
  const auto rows = 2 * static_cast<Eigen::Index>(model.data_length());
  Eigen::MatrixXd J(rows, nb);
  for (int c = 0; c < nb; ++c) J.col(c) = stack_real(frechet_column(model, st, c));
  return J;
}

/// tau solving (alpha I + J^T J) tau = J^T r.
inline Eigen::VectorXd tikhonov_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& r, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tikhonov_step: alpha must be positive");
  if (J.rows() != r.size()) throw ShapeMismatch("tikhonov_step: residual length does not match Jacobian rows");
  Eigen::MatrixXd A = J.transpose() * J;
  A.diagonal().array() += alpha;
  return A.llt().solve(J.transpose() * r);
}

struct IterationRecord {
  int n = 0;
  LambdaField coeffs;
  double residual = 0.0;
  /// Grid L2 error of lambda* against the ground truth (NaN when unknown).
  double coeff_error = std::nan("");
};

class Diverged : public Error {
 public:
  Diverged(const std::string& what, std::vector<IterationRecord> records)
      : Error(what), records_(std::move(records)) {}
  const char* kind() const noexcept override { return "Diverged"; }
  const std::vector<IterationRecord>& records() const { return records_; }

 private:
  std::vector<IterationRecord> records_;
};

/// Clenshaw-Curtis L2 norm of (lambda_a - lambda_b) over the inside nodes.
inline double field_l2_error(const ScatterGrid& g, const std::function<double(const Vec2&)>& a,
                             const std::function<double(const Vec2&)>& b) {
  double s = 0.0;
  for (auto p : g.inside_nodes) {
    const Vec2 x = g.point(p);
    const double d = a(x) - b(x);
    s += g.weight(p) * d * d;
  }
  return std::sqrt(s);
}

struct NewtonOptions {
  double alpha0 = 1e-3;
  double alpha_ratio = 0.5;
  int max_iter = 2;
  /// Ground truth for the error column; optional.
  std::function<double(const Vec2&)> truth;
  /// Called after each record is produced.
  std::function<void(const IterationRecord&)> on_record;
};

/// Newton iteration L_{n+1} = L_n + tau_n with tau_n the Tikhonov step for the
/// linearized problem. The adjoint uses the direction quadrature weight 2 pi / M.
/// Record 0 holds the initial guess; record n the n-th iterate.
inline std::vector<IterationRecord> newton_iterate(const ForwardModel& model, const Eigen::VectorXcd& data,
                                                   const LambdaField& initial, const NewtonOptions& opt) {
  if (static_cast<std::size_t>(data.size()) != model.data_length())
    throw ShapeMismatch("newton_iterate: data length " + std::to_string(data.size()) + " does not match model (" +
                        std::to_string(model.data_length()) + ")");
  const double qw = std::sqrt(2.0 * kPi / static_cast<double>(model.operators().angles().size()));
  const auto& grid = model.operators().grid();
  std::vector<IterationRecord> records;
  LambdaField cur = initial;
  int increases = 0;
  for (int it = 0;; ++it) {
    const ForwardState st = solve_forward(model, cur);
    const Eigen::VectorXcd res = data - st.far_field;
    IterationRecord rec;
    rec.n = it;
    rec.coeffs = cur;
    rec.residual = res.norm();
    if (opt.truth)
      rec.coeff_error = field_l2_error(grid, opt.truth, [&cur](const Vec2& x) { return cur.sample(x).value; });
    if (!records.empty()) increases = rec.residual > records.back().residual ? increases + 1 : 0;
    records.push_back(rec);
    if (opt.on_record) opt.on_record(rec);
    if (increases >= 3) throw Diverged("Newton iteration diverged: residual grew 3 times in a row", records);
    if (it >= opt.max_iter || rec.residual == 0.0) break;
    const Eigen::MatrixXd J = qw * assemble_jacobian(model, st);
    const Eigen::VectorXd tau = tikhonov_step(J, qw * stack_real(res), opt.alpha0 * std::pow(opt.alpha_ratio, it));
    cur = LambdaField::from_flat(cur.K, cur.flat() + tau);
  }
  return records;
}

}  // namespace elscat
