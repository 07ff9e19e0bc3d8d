#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fcnn/equations.hpp"
#include "fcnn/grid.hpp"
#include "fcnn/ic.hpp"
#include "fcnn/model.hpp"
#include "fcnn/training.hpp"

namespace fcnn {

enum class ErrorAt { Final, All };

std::string to_string(ErrorAt mode);
ErrorAt error_at_from_string(const std::string& name);

struct EvalOptions {
  int nx = 100;
  int ny = 100;
  int n_runs = 20;
  int horizon = 50;
  std::uint64_t base_seed = 0;
  ErrorAt error_at = ErrorAt::Final;  // final-step error or mean over steps
  double amplitude = 0.1;             // random-IC amplitude
  int jobs = 1;
};

// Relative-L2 statistics over a sweep of random initial conditions. Failed
// (unstable) runs are excluded from the statistics but reported.
struct EvalReport {
  std::vector<double> errors;      // one entry per successful run
  std::vector<int> run_index;      // run index of each entry
  std::vector<std::uint64_t> run_seed;
  std::vector<int> failed_runs;
  double mean = 0.0;
  double ci95 = 0.0;               // 1.96 * sample std / sqrt(n)
  int n_runs = 0;                  // attempted runs
  int horizon = 0;
  std::string spec_summary;
};

struct ShapeError {
  std::string shape;
  double rel_l2 = 0.0;
  bool failed = false;
};

struct NoiseRow {
  double sigma = 0.0;
  double mean = 0.0;
  double ci95 = 0.0;
  int n_ok = 0;
  int n_failed = 0;
  bool train_failed = false;
};

struct CenterFnCurve {
  std::vector<double> phi;
  std::vector<double> analytic;
  std::vector<double> learned;
  double max_abs_gap = 0.0;
};

// [phi^0, M(phi^0), M^2(phi^0), ...]; phi^0 is the padded input. A NaN/Inf
// output at step k is reported as InstabilityError with that index.
std::vector<Field> rollout_model(const Model& model, const Field& init,
                                 int n_steps);

// Steps the model and the explicit scheme side by side from the same IC and
// returns the relative L2 error, at the final step or averaged over steps.
double rollout_error(const Model& model, const EquationSpec& spec, double dt,
                     double h, const Field& init, int horizon, ErrorAt error_at);

// mean and ci95 of a sample (sample standard deviation, normal CI).
void summary_stats(const std::vector<double>& values, double& mean, double& ci95);

// Run k uses IC seed base_seed + k. Deterministic for fixed options
// regardless of the job count.
EvalReport eval_sweep(const Model& model, const EquationSpec& spec, double dt,
                      double h, const EvalOptions& opts);

// Errors for the named shapes {circle, star, circles3, torus, maze}.
std::vector<ShapeError> eval_shapes(const Model& model, const EquationSpec& spec,
                                    double dt, double h, const GridGeometry& geom,
                                    int horizon, ErrorAt error_at,
                                    const IcParams& ic_params);

// For each sigma: builds a noisy pair, trains a fresh model from scratch and
// evaluates it over a random-IC sweep. All rows share the training IC and
// evaluation seeds, so sigma = 0 reproduces the plain run with those seeds.
std::vector<NoiseRow> noise_sweep(const EquationSpec& spec, double dt, double h,
                                  const std::vector<double>& sigmas,
                                  const EvalOptions& opts,
                                  const TrainConfig& train_cfg);

// Mean absolute deviation of the tied neighbor weights from dt alpha / h^2.
double coefficient_error(const Model& model, const EquationSpec& spec, double dt,
                         double h);

// Learned vs analytic center function on a phi grid, plus the max-abs gap.
CenterFnCurve center_fn_compare(const Model& model, const EquationSpec& spec,
                                double dt, double h,
                                const std::vector<double>& phi_grid);

// 101 evenly spaced points on [-1, 1].
std::vector<double> default_phi_grid();

// CSV writers. eval: "row,seed,rel_l2,ci95" with one data row per run
// (failed runs write "failed") and one trailing summary row. shapes:
// "shape,rel_l2". noise: "sigma,mean,ci95,n_ok,n_failed". center:
// "phi,analytic,learned". steps: "step,rel_l2".
void write_eval_csv(const std::filesystem::path& path, const EvalReport& report);
void write_shape_csv(const std::filesystem::path& path,
                     const std::vector<ShapeError>& rows);
void write_noise_csv(const std::filesystem::path& path,
                     const std::vector<NoiseRow>& rows);
void write_center_csv(const std::filesystem::path& path,
                      const CenterFnCurve& curve);
void write_step_errors_csv(const std::filesystem::path& path,
                           const std::vector<double>& errors);

}  // namespace fcnn
