#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcnn/grid.hpp"

namespace fcnn {

enum class EquationKind { Heat, Fisher, AllenCahn, Sine, Tanh };

std::string to_string(EquationKind kind);
EquationKind equation_kind_from_string(const std::string& name);

// One reaction-diffusion equation phi_t = alpha * lap(phi) + beta * f(phi).
struct EquationSpec {
  EquationKind kind = EquationKind::Heat;
  double alpha = 1.0;   // diffusion coefficient
  double beta = 0.0;    // reaction coefficient
  int poly_order = 3;   // recommended polynomial order for the learned model

  // Stock coefficients per equation:
  //   heat (1, 0), fisher (1, 20), ac (1, 6944), sine (0.1, 40), tanh (0.5, 10).
  // The Allen-Cahn beta is 1/rho^2 for a transition-layer thickness
  // rho ~ 0.012, stored as the rounded value 6944. Polynomial order is 3 for
  // heat/fisher/ac and 9 for sine/tanh.
  static EquationSpec defaults(EquationKind kind);

  void validate() const;
};

struct StepParams {
  double dt = 0.0;
  double h = 0.0;
  int n_steps = 0;
};

// Thrown when a rollout produces NaN/Inf values. step_index is -1 when the
// failure comes from a single step outside a rollout.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(int step_index, double dt, double suggested_dt);
  int step_index;
  double dt;
  double suggested_dt;
};

// The pointwise reaction term f(phi):
//   heat -> 0, fisher -> phi - phi^2, ac -> phi - phi^3,
//   sine -> sin(pi phi), tanh -> tanh(phi).
double reaction_eval(const EquationSpec& spec, double phi);

// Conservative explicit-Euler step bound: 0.4 * min(h^2/(4 alpha), 1/beta),
// with the reaction bound skipped when beta == 0.
double stability_dt(const EquationSpec& spec, double h);

// One explicit step: pad, then
//   phi' = phi + dt * alpha * lap_h(phi) + dt * beta * f(phi)
// on the interior, re-padded. Throws InstabilityError if the result has
// NaN/Inf values.
Field fdm_step(const Field& field, const EquationSpec& spec, double dt, double h);

// [phi^0, phi^1, ..., phi^n]; phi^0 is the padded input. InstabilityError
// carries the offending step index.
std::vector<Field> fdm_rollout(const Field& init, const EquationSpec& spec,
                               const StepParams& params);

// All center-cell terms of the explicit update:
//   c(phi) = (1 - 4 dt alpha / h^2) phi + dt beta f(phi).
double analytic_center_fn(const EquationSpec& spec, double dt, double h, double phi);

// Sidecar manifest for exported trajectories (text key=value).
struct TrajectoryMeta {
  EquationKind kind = EquationKind::Heat;
  double alpha = 0.0;
  double beta = 0.0;
  double h = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  int save_every = 1;
};

void write_meta(const std::filesystem::path& path, const TrajectoryMeta& meta);
TrajectoryMeta read_meta(const std::filesystem::path& path);

}  // namespace fcnn
