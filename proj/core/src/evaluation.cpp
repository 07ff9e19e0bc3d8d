#include "fcnn/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fcnn/rng.hpp"

namespace fcnn {

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
// per-index slots; the traversal order is unspecified but the work per index
// is not.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(jobs, n);
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

std::string spec_summary_string(const EquationSpec& spec, double dt, double h,
                                int horizon) {
  std::ostringstream out;
  out << to_string(spec.kind) << " alpha=" << spec.alpha << " beta=" << spec.beta
      << " dt=" << dt << " h=" << h << " horizon=" << horizon;
  return out.str();
}

}  // namespace

std::string to_string(ErrorAt mode) {
  return mode == ErrorAt::Final ? "final" : "all";
}

ErrorAt error_at_from_string(const std::string& name) {
  if (name == "final") return ErrorAt::Final;
  if (name == "all") return ErrorAt::All;
  throw std::invalid_argument("unknown error mode '" + name +
                              "' (expected final|all)");
}

std::vector<Field> rollout_model(const Model& model, const Field& init,
                                 int n_steps) {
  if (n_steps < 0) {
    throw std::invalid_argument("rollout_model: n_steps must be >= 0");
  }
  std::vector<Field> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_steps) + 1);
  trajectory.push_back(pad_neumann(init));
  for (int step = 1; step <= n_steps; ++step) {
    try {
      trajectory.push_back(forward(model, trajectory.back()));
    } catch (const std::runtime_error&) {
      throw InstabilityError(step, 0.0, 0.0);
    }
  }
  return trajectory;
}

double rollout_error(const Model& model, const EquationSpec& spec, double dt,
                     double h, const Field& init, int horizon, ErrorAt error_at) {
  Field predicted = pad_neumann(init);
  Field reference = predicted;
  if (horizon == 0) return relative_l2(predicted, reference);
  double accumulated = 0.0;
  for (int step = 1; step <= horizon; ++step) {
    predicted = forward(model, predicted);
    reference = fdm_step(reference, spec, dt, h);
    if (error_at == ErrorAt::All) {
      accumulated += relative_l2(predicted, reference);
    }
  }
  return error_at == ErrorAt::All ? accumulated / horizon
                                  : relative_l2(predicted, reference);
}

void summary_stats(const std::vector<double>& values, double& mean, double& ci95) {
  mean = 0.0;
  ci95 = 0.0;
  const std::size_t n = values.size();
  if (n == 0) return;
  double sum = 0.0;
  for (double v : values) sum += v;
  mean = sum / static_cast<double>(n);
  if (n < 2) return;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sample_std = std::sqrt(ss / static_cast<double>(n - 1));
  ci95 = 1.96 * sample_std / std::sqrt(static_cast<double>(n));
}

EvalReport eval_sweep(const Model& model, const EquationSpec& spec, double dt,
                      double h, const EvalOptions& opts) {
  if (opts.n_runs < 2) {
    throw std::invalid_argument("eval_sweep: n_runs must be >= 2");
  }
  struct RunResult {
    double error = 0.0;
    bool failed = false;
  };
  std::vector<RunResult> results(static_cast<std::size_t>(opts.n_runs));
  parallel_for(opts.n_runs, opts.jobs, [&](int k) {
    const std::uint64_t seed = opts.base_seed + static_cast<std::uint64_t>(k);
    try {
      const Field ic = ic_random(opts.nx, opts.ny, opts.amplitude, seed);
      results[static_cast<std::size_t>(k)].error =
          rollout_error(model, spec, dt, h, ic, opts.horizon, opts.error_at);
    } catch (const std::exception&) {
      results[static_cast<std::size_t>(k)].failed = true;
    }
  });

  EvalReport report;
  report.n_runs = opts.n_runs;
  report.horizon = opts.horizon;
  report.spec_summary = spec_summary_string(spec, dt, h, opts.horizon);
  for (int k = 0; k < opts.n_runs; ++k) {
    const auto& res = results[static_cast<std::size_t>(k)];
    if (res.failed) {
      report.failed_runs.push_back(k);
    } else {
      report.errors.push_back(res.error);
      report.run_index.push_back(k);
      report.run_seed.push_back(opts.base_seed + static_cast<std::uint64_t>(k));
    }
  }
  summary_stats(report.errors, report.mean, report.ci95);
  return report;
}

std::vector<ShapeError> eval_shapes(const Model& model, const EquationSpec& spec,
                                    double dt, double h, const GridGeometry& geom,
                                    int horizon, ErrorAt error_at,
                                    const IcParams& ic_params) {
  const IcShape shapes[] = {IcShape::Circle, IcShape::Star, IcShape::ThreeCircles,
                            IcShape::Torus, IcShape::Maze};
  std::vector<ShapeError> rows;
  rows.reserve(5);
  for (IcShape shape : shapes) {
    IcParams params = ic_params;
    params.shape = shape;
    ShapeError row;
    row.shape = to_string(shape);
    try {
      const Field ic = make_ic(geom, params);
      row.rel_l2 = rollout_error(model, spec, dt, h, ic, horizon, error_at);
    } catch (const std::exception&) {
      row.failed = true;
      row.rel_l2 = std::nan("");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NoiseRow> noise_sweep(const EquationSpec& spec, double dt, double h,
                                  const std::vector<double>& sigmas,
                                  const EvalOptions& opts,
                                  const TrainConfig& train_cfg) {
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (sigmas[i] < sigmas[i - 1]) {
      throw std::invalid_argument("noise_sweep: sigmas must be sorted ascending");
    }
  }
  std::vector<NoiseRow> rows(sigmas.size());
  // Sessions are independent; the per-session seeds below are all derived
  // from the same base so that the sigma = 0 row reproduces a plain run.
  const std::uint64_t data_seed = opts.base_seed;
  const std::uint64_t val_seed = derive_seed(opts.base_seed, 2);
  const std::uint64_t init_seed = derive_seed(opts.base_seed, 3);
  parallel_for(static_cast<int>(sigmas.size()), opts.jobs, [&](int i) {
    const double sigma = sigmas[static_cast<std::size_t>(i)];
    NoiseRow row;
    row.sigma = sigma;
    try {
      const SnapshotPair train_pair =
          make_pair(spec, opts.nx, opts.ny, dt, h, data_seed, sigma);
      const SnapshotPair val_pair =
          make_pair(spec, opts.nx, opts.ny, dt, h, val_seed, sigma);
      Model model0 = init_model(spec.poly_order, 0.0, init_seed);
      auto [trained, report] = train(std::move(model0), train_pair, val_pair, train_cfg);
      EvalOptions run_opts = opts;
      run_opts.jobs = 1;  // rows already run in parallel
      const EvalReport eval = eval_sweep(trained, spec, dt, h, run_opts);
      row.mean = eval.mean;
      row.ci95 = eval.ci95;
      row.n_ok = static_cast<int>(eval.errors.size());
      row.n_failed = static_cast<int>(eval.failed_runs.size());
    } catch (const std::exception&) {
      row.train_failed = true;
      row.mean = std::nan("");
      row.ci95 = std::nan("");
    }
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });
  return rows;
}

double coefficient_error(const Model& model, const EquationSpec& spec, double dt,
                         double h) {
  const double target = dt * spec.alpha / (h * h);
  return (std::abs(model.w_vert - target) + std::abs(model.w_horiz - target)) / 2.0;
}

CenterFnCurve center_fn_compare(const Model& model, const EquationSpec& spec,
                                double dt, double h,
                                const std::vector<double>& phi_grid) {
  CenterFnCurve curve;
  curve.phi = phi_grid;
  curve.analytic.reserve(phi_grid.size());
  curve.learned.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    const double a = analytic_center_fn(spec, dt, h, phi);
    const double l = learned_center_fn(model, phi);
    curve.analytic.push_back(a);
    curve.learned.push_back(l);
    curve.max_abs_gap = std::max(curve.max_abs_gap, std::abs(a - l));
  }
  return curve;
}

std::vector<double> default_phi_grid() {
  std::vector<double> grid;
  grid.reserve(101);
  for (int k = 0; k <= 100; ++k) {
    grid.push_back(-1.0 + 2.0 * k / 100.0);
  }
  return grid;
}

void write_eval_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_eval_csv: cannot open " + path.string());
  }
  out << "row,seed,rel_l2,ci95\n";
  std::size_t ok = 0;
  for (int k = 0; k < report.n_runs; ++k) {
    const bool failed =
        std::find(report.failed_runs.begin(), report.failed_runs.end(), k) !=
        report.failed_runs.end();
    if (failed) {
      out << k << ",,failed,\n";
    } else {
      out << k << ',' << report.run_seed[ok] << ','
          << format_g17(report.errors[ok]) << ",\n";
      ++ok;
    }
  }
  out << "summary,," << format_g17(report.mean) << ',' << format_g17(report.ci95)
      << "\n";
}

void write_shape_csv(const std::filesystem::path& path,
                     const std::vector<ShapeError>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_shape_csv: cannot open " + path.string());
  }
  out << "shape,rel_l2\n";
  for (const ShapeError& row : rows) {
    out << row.shape << ',' << (row.failed ? "failed" : format_g17(row.rel_l2))
        << "\n";
  }
}

void write_noise_csv(const std::filesystem::path& path,
                     const std::vector<NoiseRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_noise_csv: cannot open " + path.string());
  }
  out << "sigma,mean,ci95,n_ok,n_failed\n";
  for (const NoiseRow& row : rows) {
    if (row.train_failed) {
      out << format_g17(row.sigma) << ",failed,failed,0,0\n";
    } else {
      out << format_g17(row.sigma) << ',' << format_g17(row.mean) << ','
          << format_g17(row.ci95) << ',' << row.n_ok << ',' << row.n_failed
          << "\n";
    }
  }
}

void write_center_csv(const std::filesystem::path& path,
                      const CenterFnCurve& curve) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_center_csv: cannot open " + path.string());
  }
  out << "phi,analytic,learned\n";
  for (std::size_t i = 0; i < curve.phi.size(); ++i) {
    out << format_g17(curve.phi[i]) << ',' << format_g17(curve.analytic[i]) << ','
        << format_g17(curve.learned[i]) << "\n";
  }
}

void write_step_errors_csv(const std::filesystem::path& path,
                           const std::vector<double>& errors) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_step_errors_csv: cannot open " + path.string());
  }
  out << "step,rel_l2\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    out << (i + 1) << ',' << format_g17(errors[i]) << "\n";
  }
}

}  // namespace fcnn
