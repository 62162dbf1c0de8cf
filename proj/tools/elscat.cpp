// elscat: forward solves, synthetic data, reconstructions and the static
// symbol/Eshelby analysis from one JSON config.
//
//   elscat forward --config configs/example1.json --out out/ex1
//   elscat synth   --config configs/example1.json --out out/ex1 --seed 7
//   elscat invert  --config configs/example1.json --out out/ex1 --data out/ex1/farfield_noisy.csv
//   elscat analyze-symbol --lambda 1 --mu 1 --kappa-star 2 --mu-star 2
//   elscat eshelby-static --config configs/example1.json --out out/eshelby
//
// Exit status: 0 ok, 2 config or input error, 3 solver failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "elscat/config.hpp"
#include "elscat/io.hpp"
#include "elscat/noise.hpp"

namespace fs = std::filesystem;
using namespace elscat;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Args {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string data;
  double lambda = 1.0, mu = 1.0, kappa_star = 2.0, mu_star = 2.0;
};

ExperimentConfig resolve(const Args& a) {
  ExperimentConfig c = a.config.empty() ? parse_config(Json::object()) : load_config(a.config);
  if (a.seed) override_seed(c, *a.seed);
  if (!a.out.empty()) override_output(c, a.out);
  fs::create_directories(c.output);
  return c;
}

int cmd_forward(const Args& a) {
  const ExperimentConfig c = resolve(a);
  const std::string h = c.hash();
  const fs::path dir = c.output;
  const ForwardModel model(c.inv);
  const ForwardState st = solve_forward(model, model.contrast(c.truth()));
  write_grid(dir / "grid.csv", h, model.operators().grid());
  write_boundary(dir / "boundary.csv", h, model.operators().boundary());
  write_interior_field(dir / "interior_field.csv", h, model.operators().grid(), st.fields);
  write_far_field(dir / "farfield.csv", h, to_far_field_set(model, st.far_field));
  std::cerr << "forward: " << model.operators().inside_count() << " inside nodes, |u_inf| = " << st.far_field.norm()
            << "\n";
  return 0;
}

int cmd_synth(const Args& a) {
  const ExperimentConfig c = resolve(a);
  const std::string h = c.hash();
  const fs::path dir = c.output;
  const ForwardModel model(c.inv, c.inv.synthesis_N);
  const Eigen::VectorXcd clean = solve_forward(model, model.contrast(c.truth())).far_field;
  const Eigen::VectorXcd noisy = add_noise(clean, c.inv.delta, c.inv.seed);
  write_far_field(dir / "farfield.csv", h, to_far_field_set(model, clean));
  write_far_field(dir / "farfield_noisy.csv", h, to_far_field_set(model, noisy));
  const double rel = clean.norm() > 0.0 ? (noisy - clean).norm() / clean.norm() : 0.0;
  write_json(dir / "synth.json", h,
             {{"delta", c.inv.delta},
              {"seed", c.inv.seed},
              {"grid_N", model.operators().grid().N},
              {"clean_norm", clean.norm()},
              {"relative_perturbation", rel}});
  std::cerr << "synth: |U| = " << clean.norm() << ", relative perturbation " << rel << "\n";
  return 0;
}

int cmd_invert(const Args& a) {
  const ExperimentConfig c = resolve(a);
  const std::string h = c.hash();
  const fs::path dir = c.output;
  const fs::path data_path = a.data.empty() ? dir / "farfield_noisy.csv" : fs::path(a.data);
  const FarFieldSet data = read_far_field(data_path);
  if (data.directions() != c.inv.directions || data.patterns.size() != c.inv.incident_angles.size())
    throw ShapeMismatch(data_path.string() + ": " + std::to_string(data.patterns.size()) + " incidents x " +
                        std::to_string(data.directions()) + " directions, config expects " +
                        std::to_string(c.inv.incident_angles.size()) + " x " + std::to_string(c.inv.directions));

  const ForwardModel model(c.inv);
  const auto& grid = model.operators().grid();
  const auto truth = c.truth();
  write_grid(dir / "grid.csv", h, grid);
  write_basis(dir / "basis.csv", h, model.basis());
  write_lambda(dir / "truth.csv", h, grid, [&](const Vec2& x) { return truth(x).value; });

  std::vector<IterationRecord> recs;
  NewtonOptions opt;
  opt.alpha0 = c.inv.alpha0;
  opt.alpha_ratio = c.inv.alpha_ratio;
  opt.max_iter = c.inv.max_iter;
  opt.truth = [&](const Vec2& x) { return truth(x).value; };
  opt.on_record = [&](const IterationRecord& r) {
    recs.push_back(r);
    char name[40];
    if (r.n == 0)
      std::snprintf(name, sizeof name, "initial.csv");
    else
      std::snprintf(name, sizeof name, "reconstruction_%02d.csv", r.n);
    write_lambda(dir / name, h, grid, [&](const Vec2& x) { return r.coeffs.sample(x).value; });
    write_iterations(dir / "iterations.csv", h, recs);
    std::cerr << "invert: n = " << r.n << "  residual " << r.residual << "  error " << r.coeff_error << "\n";
  };
  const LambdaField init = initial_coefficients(c.inv.K, c.inv.initial_lambda, grid);
  try {
    newton_iterate(model, data.stacked(), init, opt);
  } catch (const Diverged& e) {
    std::cerr << "invert: " << e.what() << " (outputs up to n = " << recs.back().n << " kept)\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_analyze_symbol(const Args& a) {
  Json out;
  try {
    const IsotropicMaterial bg{a.lambda, a.mu, 1.0};
    bg.validate();
    const double kappa = jk_decompose(a.lambda, a.mu).kappa;
    ContrastModuli cm{a.kappa_star - kappa, a.mu_star - a.mu};
    cm.validate();
    const AlphaBeta ab = alpha_beta(a.lambda, a.mu, cm);
    const StaticCoeffs sc = static_coeffs(a.lambda, a.mu);
    const double det = symbol_det_closed(ab, sc);
    SplitMix64 rng(a.seed.value_or(1));
    double dev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double r = 0.1 + 10.0 * rng.uniform(), t = 2.0 * kPi * rng.uniform();
      dev = std::max(dev, std::abs(symbol_matrix(Vec2(r * std::cos(t), r * std::sin(t)), ab, sc).determinant() - det));
    }
    out = {{"alpha", ab.alpha},
           {"beta", ab.beta},
           {"class", to_string(classify_invertibility(ab, 1e-12))},
           {"det_closed", det},
           {"det_numeric_max_dev", dev}};
  } catch (const Error& e) {
    out = {{"error", e.kind()}, {"message", e.what()}};
  } catch (const std::invalid_argument& e) {
    out = {{"error", "InvalidArgument"}, {"message", e.what()}};
  }
  const bool failed = out.contains("error");
  std::cout << out.dump(2) << '\n';
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    Json stamp = {{"lambda", a.lambda}, {"mu", a.mu}, {"kappa_star", a.kappa_star}, {"mu_star", a.mu_star}};
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(stamp.dump())));
    write_json(fs::path(a.out) / "symbol.json", hex, out);
  }
  return failed ? kExitSolver : 0;
}

int cmd_eshelby_static(const Args& a) {
  const ExperimentConfig c = resolve(a);
  const std::string h = c.hash();
  const fs::path dir = c.output;
  const auto& e = c.eshelby;
  const double lam = c.inv.material.lambda, mu = c.inv.material.mu;
  const ContrastModuli cm{e.kappa_star - jk_decompose(lam, mu).kappa, e.mu_star - mu};
  PeriodicEshelbyProblem prob;
  prob.lambda = lam;
  prob.mu = mu;
  prob.R = e.R;
  prob.contrast = disc_inclusion(e.R, e.radius, cm);
  prob.eps_inc = e.eps_inc;
  const EshelbyResult r = solve_periodic_eshelby(prob, {e.max_iter, e.tol, e.method});
  write_eigenstrain(dir / "eigenstrain.csv", h, r, e.R, prob.contrast);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  std::size_t n = 0;
  for (std::size_t p = 0; p < prob.contrast.size(); ++p)
    if (prob.contrast[p]) {
      mean += r.h.row(static_cast<Eigen::Index>(p)).transpose();
      ++n;
    }
  mean /= static_cast<double>(n);
  write_json(dir / "eshelby.json", h,
             {{"iterations", r.iterations},
              {"residual", r.residuals.back()},
              {"support_cells", n},
              {"mean_h", {mean(0), mean(1), mean(2) / kSqrt2}}});
  std::cerr << "eshelby-static: " << r.iterations << " iterations, residual " << r.residuals.back() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic scattering forward and inverse solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Args a;
  app.add_option("--config", a.config, "Experiment config (JSON)");
  app.add_option("--out", a.out, "Output directory (overrides the config)");
  app.add_option("--seed", a.seed, "Noise seed (overrides the config)");
  app.add_option("--threads", a.threads, "OpenMP threads (0 = runtime default)");

  auto* fwd = app.add_subcommand("forward", "Solve the forward problem for the target field");
  auto* syn = app.add_subcommand("synth", "Synthesize clean and noisy far-field data");
  auto* inv = app.add_subcommand("invert", "Newton-Tikhonov reconstruction from far-field data");
  inv->add_option("--data", a.data, "Far-field CSV (default: <out>/farfield_noisy.csv)");
  auto* sym = app.add_subcommand("analyze-symbol", "alpha, beta, invertibility class and symbol determinant");
  sym->add_option("--lambda", a.lambda, "Background lambda");
  sym->add_option("--mu", a.mu, "Background mu");
  sym->add_option("--kappa-star", a.kappa_star, "Inclusion kappa*");
  sym->add_option("--mu-star", a.mu_star, "Inclusion mu*");
  auto* esh = app.add_subcommand("eshelby-static", "Periodic-cell eigenstrain of a disc inclusion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

#ifdef _OPENMP
  if (a.threads > 0) omp_set_num_threads(a.threads);
#endif

  try {
    if (*fwd) return cmd_forward(a);
    if (*syn) return cmd_synth(a);
    if (*inv) return cmd_invert(a);
    if (*sym) return cmd_analyze_symbol(a);
    if (*esh) return cmd_eshelby_static(a);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}
