// Command-line driver: data generation, training, evaluation sweeps,
// rollout export and center-function curves for the stencil-learning
// library. Data goes to files; human-readable status goes to stderr.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fcnn/equations.hpp"
#include "fcnn/evaluation.hpp"
#include "fcnn/grid.hpp"
#include "fcnn/ic.hpp"
#include "fcnn/model.hpp"
#include "fcnn/rng.hpp"
#include "fcnn/training.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fcnn;

// Seed salts shared with the library's noise-sweep driver: 1 = pair noise,
// 2 = validation pair, 3 = weight init.
constexpr std::uint64_t kValSalt = 2;
constexpr std::uint64_t kInitSalt = 3;

struct GridFlags {
  int nx = 100;
  int ny = 100;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--nx", nx, "Interior cells in x")->capture_default_str();
    cmd->add_option("--ny", ny, "Interior cells in y")->capture_default_str();
    cmd->add_option("--xmin", xmin, "Domain lower x bound")->capture_default_str();
    cmd->add_option("--xmax", xmax, "Domain upper x bound")->capture_default_str();
    cmd->add_option("--ymin", ymin, "Domain lower y bound")->capture_default_str();
    cmd->add_option("--ymax", ymax, "Domain upper y bound")->capture_default_str();
  }

  GridGeometry geometry() const {
    GridGeometry geom{xmin, xmax, ymin, ymax, nx, ny};
    geom.validate();
    return geom;
  }
};

struct EquationFlags {
  std::string equation = "heat";
  double alpha = -1.0;     // <0: use the per-equation default
  double beta = -1.0;      // <0: use the per-equation default
  int poly_order = 0;      // 0: use the per-equation default
  double dt = 0.0;         // 0: use the stability bound
  bool force_dt = false;

  void add_to(CLI::App* cmd, bool with_dt = true) {
    cmd->add_option("--equation", equation, "Equation: heat|fisher|ac|sine|tanh")
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "Diffusion coefficient (default: per equation)");
    cmd->add_option("--beta", beta, "Reaction coefficient (default: per equation)");
    cmd->add_option("--poly-order", poly_order,
                    "Polynomial order (default: 3, or 9 for sine/tanh)");
    if (with_dt) {
      cmd->add_option("--dt", dt, "Time step (default: stability bound)");
      cmd->add_flag("--force-dt", force_dt, "Allow a dt above the stability bound");
    }
  }

  EquationSpec spec() const {
    EquationSpec spec = EquationSpec::defaults(equation_kind_from_string(equation));
    if (alpha >= 0.0) spec.alpha = alpha;
    if (beta >= 0.0) spec.beta = beta;
    if (poly_order > 0) spec.poly_order = poly_order;
    spec.validate();
    return spec;
  }

  double resolve_dt(const EquationSpec& spec, double h) const {
    const double bound = stability_dt(spec, h);
    if (dt <= 0.0) return bound;
    if (dt > bound && !force_dt) {
      throw std::runtime_error(
          "refusing dt=" + std::to_string(dt) + " above the stability bound " +
          std::to_string(bound) + " for this equation; pass --force-dt to override");
    }
    return dt;
  }
};

struct IcFlags {
  std::string ic = "random";
  double r0 = 0.25;
  double r1 = 0.4;
  double r2 = 0.2;
  double eps = 0.012;
  double amplitude = 0.1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--ic", ic, "Initial condition: random|circle|star|circles3|torus|maze")
        ->capture_default_str();
    cmd->add_option("--r0", r0, "Circle radius")->capture_default_str();
    cmd->add_option("--r1", r1, "Torus outer radius")->capture_default_str();
    cmd->add_option("--r2", r2, "Torus inner radius")->capture_default_str();
    cmd->add_option("--eps", eps, "Interface thickness")->capture_default_str();
    cmd->add_option("--amplitude", amplitude, "Random-IC amplitude")->capture_default_str();
  }

  IcParams params(std::uint64_t seed) const {
    IcParams params;
    params.shape = ic_shape_from_string(ic);
    params.r0 = r0;
    params.r1 = r1;
    params.r2 = r2;
    params.eps = eps;
    params.amplitude = amplitude;
    params.seed = seed;
    params.validate();
    return params;
  }
};

struct TrainFlags {
  double lr = 0.01;
  int max_epochs = 50000;
  double delta = 1e-12;
  int patience = 500;
  double noise_sigma = 0.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lr", lr, "ADAM learning rate")->capture_default_str();
    cmd->add_option("--max-epochs", max_epochs, "Epoch limit")->capture_default_str();
    cmd->add_option("--delta", delta, "Stop once train loss drops below this")
        ->capture_default_str();
    cmd->add_option("--patience", patience, "Early-stopping patience (epochs)")
        ->capture_default_str();
    cmd->add_option("--noise-sigma", noise_sigma, "Gaussian noise stddev added to u1")
        ->capture_default_str();
  }

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig cfg;
    cfg.lr = lr;
    cfg.max_epochs = max_epochs;
    cfg.delta = delta;
    cfg.patience = patience;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

Checkpoint load_and_check(const std::string& model_path, const EquationFlags& eq,
                          bool equation_given, const GridGeometry& geom) {
  Checkpoint ckpt = load_checkpoint(model_path);
  if (equation_given &&
      ckpt.kind != equation_kind_from_string(eq.equation)) {
    throw std::runtime_error("checkpoint kind '" + to_string(ckpt.kind) +
                             "' does not match --equation " + eq.equation +
                             "; cross-equation evaluation is not meaningful");
  }
  const double h = geom.h();
  if (std::abs(h - ckpt.h) > 1e-12 * ckpt.h) {
    throw std::runtime_error(
        "checkpoint was trained with h=" + std::to_string(ckpt.h) +
        " but the requested grid gives h=" + std::to_string(h) +
        "; use a matching --nx / domain");
  }
  return ckpt;
}

int cmd_generate(const GridFlags& grid, const EquationFlags& eq, const IcFlags& ic,
                 std::uint64_t seed, double noise_sigma, const std::string& prefix) {
  const GridGeometry geom = grid.geometry();
  const EquationSpec spec = eq.spec();
  const double h = geom.h();
  const double dt = eq.resolve_dt(spec, h);

  Field u0 = make_ic(geom, ic.params(seed));
  Field u1 = fdm_step(u0, spec, dt, h);
  if (noise_sigma > 0.0) {
    u1 = add_gaussian_noise(std::move(u1), noise_sigma, derive_seed(seed, 1));
  }

  const fs::path base(prefix);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  write_fgrid(prefix + "_u0.fgrid", u0);
  write_fgrid(prefix + "_u1.fgrid", u1);
  write_meta(prefix + ".meta",
             {spec.kind, spec.alpha, spec.beta, h, dt, 1, 1});
  std::cerr << "wrote " << prefix << "_u0.fgrid, " << prefix << "_u1.fgrid, "
            << prefix << ".meta\n";
  return 0;
}

int cmd_train(const GridFlags& grid, const EquationFlags& eq, const TrainFlags& tr,
              std::uint64_t seed, const std::string& out) {
  const GridGeometry geom = grid.geometry();
  const EquationSpec spec = eq.spec();
  const double h = geom.h();
  const double dt = eq.resolve_dt(spec, h);

  const SnapshotPair train_pair =
      make_pair(spec, geom.nx, geom.ny, dt, h, seed, tr.noise_sigma);
  const SnapshotPair val_pair = make_pair(spec, geom.nx, geom.ny, dt, h,
                                          derive_seed(seed, kValSalt), tr.noise_sigma);
  Model model0 = init_model(spec.poly_order, 0.0, derive_seed(seed, kInitSalt));

  auto [model, report] = train(std::move(model0), train_pair, val_pair, tr.config(seed));

  const fs::path out_path(out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  save_checkpoint(out_path, {model, spec.kind, dt, h, seed});
  fs::path log_path = out_path;
  log_path.replace_extension(".trainlog");
  write_trainlog(log_path, report);

  std::cerr << "stop_reason=" << to_string(report.stop_reason)
            << " epochs=" << report.epochs_run
            << " train_loss=" << report.final_train_loss
            << " val_loss=" << report.final_val_loss
            << " coefficient_error=" << coefficient_error(model, spec, dt, h)
            << "\n";
  std::cerr << "wrote " << out_path.string() << ", " << log_path.string() << "\n";
  return 0;
}

int cmd_eval(const GridFlags& grid, const EquationFlags& eq, bool equation_given,
             const IcFlags& ic, const std::string& model_path, bool shapes,
             int runs, int horizon, const std::string& error_at,
             std::uint64_t seed, int jobs, const std::string& out) {
  const GridGeometry geom = grid.geometry();
  const Checkpoint ckpt = load_and_check(model_path, eq, equation_given, geom);
  EquationSpec spec = EquationSpec::defaults(ckpt.kind);
  if (eq.alpha >= 0.0) spec.alpha = eq.alpha;
  if (eq.beta >= 0.0) spec.beta = eq.beta;

  const ErrorAt mode = error_at_from_string(error_at);
  if (shapes) {
    const auto rows = eval_shapes(ckpt.model, spec, ckpt.dt, ckpt.h, geom, horizon,
                                  mode, ic.params(seed));
    write_shape_csv(out, rows);
    for (const auto& row : rows) {
      std::cerr << row.shape << ": "
                << (row.failed ? std::string("failed") : std::to_string(row.rel_l2))
                << "\n";
    }
  } else {
    EvalOptions opts;
    opts.nx = geom.nx;
    opts.ny = geom.ny;
    opts.n_runs = runs;
    opts.horizon = horizon;
    opts.base_seed = seed;
    opts.error_at = mode;
    opts.amplitude = ic.amplitude;
    opts.jobs = jobs;
    const EvalReport report = eval_sweep(ckpt.model, spec, ckpt.dt, ckpt.h, opts);
    write_eval_csv(out, report);
    std::cerr << report.spec_summary << ": mean=" << report.mean
              << " ci95=" << report.ci95 << " (" << report.errors.size() << "/"
              << report.n_runs << " runs ok)\n";
  }
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int cmd_noise_sweep(const GridFlags& grid, const EquationFlags& eq,
                    const TrainFlags& tr, std::vector<double> sigmas, int runs,
                    int horizon, const std::string& error_at, std::uint64_t seed,
                    int jobs, const std::string& out) {
  const GridGeometry geom = grid.geometry();
  const EquationSpec spec = eq.spec();
  const double h = geom.h();
  const double dt = eq.resolve_dt(spec, h);

  EvalOptions opts;
  opts.nx = geom.nx;
  opts.ny = geom.ny;
  opts.n_runs = runs;
  opts.horizon = horizon;
  opts.base_seed = seed;
  opts.error_at = error_at_from_string(error_at);
  opts.jobs = jobs;

  const auto rows = noise_sweep(spec, dt, h, sigmas, opts, tr.config(seed));
  write_noise_csv(out, rows);
  for (const auto& row : rows) {
    std::cerr << "sigma=" << row.sigma << ": ";
    if (row.train_failed) {
      std::cerr << "training failed\n";
    } else {
      std::cerr << "mean=" << row.mean << " ci95=" << row.ci95 << "\n";
    }
  }
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int cmd_rollout(const GridFlags& grid, const EquationFlags& eq, bool equation_given,
                const IcFlags& ic, const std::string& model_path, int steps,
                int save_every, const std::string& format, std::uint64_t seed,
                const std::string& prefix) {
  const GridGeometry geom = grid.geometry();
  const Checkpoint ckpt = load_and_check(model_path, eq, equation_given, geom);
  EquationSpec spec = EquationSpec::defaults(ckpt.kind);
  if (eq.alpha >= 0.0) spec.alpha = eq.alpha;
  if (eq.beta >= 0.0) spec.beta = eq.beta;
  if (save_every < 1) throw std::runtime_error("--save-every must be >= 1");
  const bool pgm = format == "pgm";
  if (!pgm && format != "fgrid") {
    throw std::runtime_error("unknown --format '" + format + "' (fgrid|pgm)");
  }

  const fs::path base(prefix);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());

  const auto save = [&](const std::string& tag, int step, const Field& field) {
    const std::string stem = prefix + "_" + tag + "_" + std::to_string(step);
    write_fgrid(stem + ".fgrid", field);
    if (pgm) write_pgm(stem + ".pgm", field);
  };

  Field predicted = pad_neumann(make_ic(geom, ic.params(seed)));
  Field reference = predicted;
  save("fcnn", 0, predicted);
  save("fdm", 0, reference);
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(steps));
  for (int step = 1; step <= steps; ++step) {
    predicted = forward(ckpt.model, predicted);
    reference = fdm_step(reference, spec, ckpt.dt, ckpt.h);
    errors.push_back(relative_l2(predicted, reference));
    if (step % save_every == 0) {
      save("fcnn", step, predicted);
      save("fdm", step, reference);
    }
  }
  write_step_errors_csv(prefix + "_error.csv", errors);
  write_meta(prefix + ".meta",
             {spec.kind, spec.alpha, spec.beta, ckpt.h, ckpt.dt, steps, save_every});
  std::cerr << "wrote " << prefix << "_{fcnn,fdm}_<step>.fgrid"
            << (pgm ? "/.pgm" : "") << ", " << prefix << "_error.csv, " << prefix
            << ".meta\n";
  return 0;
}

int cmd_center_fn(const EquationFlags& eq, bool equation_given,
                  const std::string& model_path, double phi_min, double phi_max,
                  int points, const std::string& out) {
  Checkpoint ckpt = load_checkpoint(model_path);
  if (equation_given &&
      ckpt.kind != equation_kind_from_string(eq.equation)) {
    throw std::runtime_error("checkpoint kind '" + to_string(ckpt.kind) +
                             "' does not match --equation " + eq.equation);
  }
  EquationSpec spec = EquationSpec::defaults(ckpt.kind);
  if (eq.alpha >= 0.0) spec.alpha = eq.alpha;
  if (eq.beta >= 0.0) spec.beta = eq.beta;
  if (points < 2) throw std::runtime_error("--points must be >= 2");

  std::vector<double> phi_grid;
  phi_grid.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    phi_grid.push_back(phi_min + (phi_max - phi_min) * k / (points - 1));
  }
  const CenterFnCurve curve =
      center_fn_compare(ckpt.model, spec, ckpt.dt, ckpt.h, phi_grid);
  write_center_csv(out, curve);
  std::cerr << "max |analytic - learned| over [" << phi_min << "," << phi_max
            << "] = " << curve.max_abs_gap << "\n";
  std::cerr << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns explicit finite-difference stencils for reaction-diffusion "
               "equations from a single snapshot pair"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file");

  const int default_jobs =
      std::max(1u, std::thread::hardware_concurrency());

  // generate
  auto* gen = app.add_subcommand("generate", "Write a (u0, u1) snapshot pair");
  GridFlags gen_grid;
  EquationFlags gen_eq;
  IcFlags gen_ic;
  std::uint64_t gen_seed = 0;
  double gen_noise = 0.0;
  std::string gen_prefix = "pair";
  gen_grid.add_to(gen);
  gen_eq.add_to(gen);
  gen_ic.add_to(gen);
  gen->add_option("--seed", gen_seed, "PRNG seed")->capture_default_str();
  gen->add_option("--noise-sigma", gen_noise, "Gaussian noise stddev added to u1")
      ->capture_default_str();
  gen->add_option("--out-prefix", gen_prefix, "Output path prefix")->capture_default_str();

  // train
  auto* trn = app.add_subcommand("train", "Train a model on one snapshot pair");
  GridFlags trn_grid;
  EquationFlags trn_eq;
  TrainFlags trn_tr;
  std::uint64_t trn_seed = 0;
  std::string trn_out = "model.fcnn";
  trn_grid.add_to(trn);
  trn_eq.add_to(trn);
  trn_tr.add_to(trn);
  trn->add_option("--seed", trn_seed, "PRNG seed")->capture_default_str();
  trn->add_option("--out", trn_out, "Checkpoint output path")->capture_default_str();

  // eval
  auto* evl = app.add_subcommand("eval", "Relative-L2 error sweep for a checkpoint");
  GridFlags evl_grid;
  EquationFlags evl_eq;
  IcFlags evl_ic;
  std::string evl_model = "model.fcnn";
  bool evl_shapes = false;
  int evl_runs = 20;
  int evl_horizon = 50;
  std::string evl_error_at = "final";
  std::uint64_t evl_seed = 0;
  int evl_jobs = default_jobs;
  std::string evl_out = "eval.csv";
  evl_grid.add_to(evl);
  evl_eq.add_to(evl, /*with_dt=*/false);
  evl_ic.add_to(evl);
  evl->add_option("--model", evl_model, "Checkpoint path")->capture_default_str();
  evl->add_flag("--shapes", evl_shapes, "Evaluate the named shapes instead of random ICs");
  evl->add_option("--runs", evl_runs, "Number of random-IC runs")->capture_default_str();
  evl->add_option("--horizon", evl_horizon, "Rollout length (steps)")->capture_default_str();
  evl->add_option("--error-at", evl_error_at, "Error at: final|all")->capture_default_str();
  evl->add_option("--seed", evl_seed, "Base PRNG seed; run k uses seed+k")
      ->capture_default_str();
  evl->add_option("--jobs", evl_jobs, "Parallel workers")->capture_default_str();
  evl->add_option("--out", evl_out, "Output CSV path")->capture_default_str();

  // noise-sweep
  auto* nsw = app.add_subcommand("noise-sweep",
                                 "Train and evaluate across noise levels");
  GridFlags nsw_grid;
  EquationFlags nsw_eq;
  TrainFlags nsw_tr;
  std::vector<double> nsw_sigmas = {0.0, 1e-6, 1e-4, 1e-2};
  int nsw_runs = 20;
  int nsw_horizon = 50;
  std::string nsw_error_at = "final";
  std::uint64_t nsw_seed = 0;
  int nsw_jobs = default_jobs;
  std::string nsw_out = "noise.csv";
  nsw_grid.add_to(nsw);
  nsw_eq.add_to(nsw);
  nsw_tr.add_to(nsw);
  nsw->add_option("--sigmas", nsw_sigmas, "Noise levels, ascending")
      ->delimiter(',')
      ->capture_default_str();
  nsw->add_option("--runs", nsw_runs, "Random-IC runs per noise level")->capture_default_str();
  nsw->add_option("--horizon", nsw_horizon, "Rollout length (steps)")->capture_default_str();
  nsw->add_option("--error-at", nsw_error_at, "Error at: final|all")->capture_default_str();
  nsw->add_option("--seed", nsw_seed, "Base PRNG seed")->capture_default_str();
  nsw->add_option("--jobs", nsw_jobs, "Parallel workers")->capture_default_str();
  nsw->add_option("--out", nsw_out, "Output CSV path")->capture_default_str();

  // rollout
  auto* rol = app.add_subcommand("rollout",
                                 "Export model and reference trajectories side by side");
  GridFlags rol_grid;
  EquationFlags rol_eq;
  IcFlags rol_ic;
  std::string rol_model = "model.fcnn";
  int rol_steps = 100;
  int rol_save_every = 25;
  std::string rol_format = "fgrid";
  std::uint64_t rol_seed = 0;
  std::string rol_prefix = "rollout";
  rol_grid.add_to(rol);
  rol_eq.add_to(rol, /*with_dt=*/false);
  rol_ic.add_to(rol);
  rol->add_option("--model", rol_model, "Checkpoint path")->capture_default_str();
  rol->add_option("--steps", rol_steps, "Rollout length (steps)")->capture_default_str();
  rol->add_option("--save-every", rol_save_every, "Snapshot interval (steps)")
      ->capture_default_str();
  rol->add_option("--format", rol_format, "Snapshot format: fgrid|pgm (pgm adds images)")
      ->capture_default_str();
  rol->add_option("--seed", rol_seed, "PRNG seed for --ic random")->capture_default_str();
  rol->add_option("--out-prefix", rol_prefix, "Output path prefix")->capture_default_str();

  // center-fn
  auto* cfn = app.add_subcommand("center-fn",
                                 "Learned vs analytic center function curve");
  EquationFlags cfn_eq;
  std::string cfn_model = "model.fcnn";
  double cfn_phi_min = -1.0;
  double cfn_phi_max = 1.0;
  int cfn_points = 101;
  std::string cfn_out = "center.csv";
  cfn_eq.add_to(cfn, /*with_dt=*/false);
  cfn->add_option("--model", cfn_model, "Checkpoint path")->capture_default_str();
  cfn->add_option("--phi-min", cfn_phi_min, "Curve lower bound")->capture_default_str();
  cfn->add_option("--phi-max", cfn_phi_max, "Curve upper bound")->capture_default_str();
  cfn->add_option("--points", cfn_points, "Number of curve points")->capture_default_str();
  cfn->add_option("--out", cfn_out, "Output CSV path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_grid, gen_eq, gen_ic, gen_seed, gen_noise, gen_prefix);
    }
    if (trn->parsed()) {
      return cmd_train(trn_grid, trn_eq, trn_tr, trn_seed, trn_out);
    }
    if (evl->parsed()) {
      return cmd_eval(evl_grid, evl_eq, evl->count("--equation") > 0, evl_ic,
                      evl_model, evl_shapes, evl_runs, evl_horizon, evl_error_at,
                      evl_seed, evl_jobs, evl_out);
    }
    if (nsw->parsed()) {
      return cmd_noise_sweep(nsw_grid, nsw_eq, nsw_tr, nsw_sigmas, nsw_runs,
                             nsw_horizon, nsw_error_at, nsw_seed, nsw_jobs, nsw_out);
    }
    if (rol->parsed()) {
      return cmd_rollout(rol_grid, rol_eq, rol->count("--equation") > 0, rol_ic,
                         rol_model, rol_steps, rol_save_every, rol_format, rol_seed,
                         rol_prefix);
    }
    if (cfn->parsed()) {
      return cmd_center_fn(cfn_eq, cfn->count("--equation") > 0, cfn_model,
                           cfn_phi_min, cfn_phi_max, cfn_points, cfn_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
