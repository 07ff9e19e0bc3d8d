#include "fcnn/equations.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fcnn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSafetyFactor = 0.4;
}  // namespace

std::string to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::Heat: return "heat";
    case EquationKind::Fisher: return "fisher";
    case EquationKind::AllenCahn: return "ac";
    case EquationKind::Sine: return "sine";
    case EquationKind::Tanh: return "tanh";
  }
  throw std::logic_error("to_string: bad EquationKind");
}

EquationKind equation_kind_from_string(const std::string& name) {
  if (name == "heat") return EquationKind::Heat;
  if (name == "fisher") return EquationKind::Fisher;
  if (name == "ac") return EquationKind::AllenCahn;
  if (name == "sine") return EquationKind::Sine;
  if (name == "tanh") return EquationKind::Tanh;
  throw std::invalid_argument("unknown equation '" + name +
                              "' (expected heat|fisher|ac|sine|tanh)");
}

EquationSpec EquationSpec::defaults(EquationKind kind) {
  switch (kind) {
    case EquationKind::Heat:      return {kind, 1.0, 0.0, 3};
    case EquationKind::Fisher:    return {kind, 1.0, 20.0, 3};
    case EquationKind::AllenCahn: return {kind, 1.0, 6944.0, 3};
    case EquationKind::Sine:      return {kind, 0.1, 40.0, 9};
    case EquationKind::Tanh:      return {kind, 0.5, 10.0, 9};
  }
  throw std::logic_error("defaults: bad EquationKind");
}

void EquationSpec::validate() const {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("EquationSpec: alpha must be > 0");
  }
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("EquationSpec: beta must be >= 0");
  }
  if (poly_order < 1) {
    throw std::invalid_argument("EquationSpec: poly_order must be >= 1");
  }
}

InstabilityError::InstabilityError(int step_index_, double dt_, double suggested_dt_)
    : std::runtime_error(
          "explicit step produced NaN/Inf values" +
          (step_index_ >= 0 ? " at step " + std::to_string(step_index_) : std::string()) +
          " (dt=" + std::to_string(dt_) +
          "; stable dt for this equation is <= " + std::to_string(suggested_dt_) + ")"),
      step_index(step_index_),
      dt(dt_),
      suggested_dt(suggested_dt_) {}

double reaction_eval(const EquationSpec& spec, double phi) {
  switch (spec.kind) {
    case EquationKind::Heat: return 0.0;
    case EquationKind::Fisher: return phi - phi * phi;
    case EquationKind::AllenCahn: return phi - phi * phi * phi;
    case EquationKind::Sine: return std::sin(kPi * phi);
    case EquationKind::Tanh: return std::tanh(phi);
  }
  throw std::logic_error("reaction_eval: bad EquationKind");
}

double stability_dt(const EquationSpec& spec, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("stability_dt: h must be positive");
  }
  double bound = h * h / (4.0 * spec.alpha);
  if (spec.beta > 0.0) {
    bound = std::min(bound, 1.0 / spec.beta);
  }
  return kSafetyFactor * bound;
}

Field fdm_step(const Field& field, const EquationSpec& spec, double dt, double h) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("fdm_step: dt must be positive");
  }
  const Field padded = pad_neumann(field);
  const Field lap = laplacian_5pt(padded, h);
  Field out(field.nx(), field.ny(), 0.0);
  for (int iy = 1; iy <= field.ny(); ++iy) {
    for (int ix = 1; ix <= field.nx(); ++ix) {
      const double phi = padded.at(ix, iy);
      out.at(ix, iy) = phi + dt * spec.alpha * lap.at(ix, iy) +
                       dt * spec.beta * reaction_eval(spec, phi);
    }
  }
  out = pad_neumann(std::move(out));
  if (has_nonfinite(out)) {
    throw InstabilityError(-1, dt, stability_dt(spec, h));
  }
  return out;
}

std::vector<Field> fdm_rollout(const Field& init, const EquationSpec& spec,
                               const StepParams& params) {
  if (params.n_steps < 0) {
    throw std::invalid_argument("fdm_rollout: n_steps must be >= 0");
  }
  std::vector<Field> trajectory;
  trajectory.reserve(static_cast<std::size_t>(params.n_steps) + 1);
  trajectory.push_back(pad_neumann(init));
  for (int step = 1; step <= params.n_steps; ++step) {
    try {
      trajectory.push_back(fdm_step(trajectory.back(), spec, params.dt, params.h));
    } catch (const InstabilityError& e) {
      throw InstabilityError(step, e.dt, e.suggested_dt);
    }
  }
  return trajectory;
}

double analytic_center_fn(const EquationSpec& spec, double dt, double h, double phi) {
  return (1.0 - 4.0 * dt * spec.alpha / (h * h)) * phi +
         dt * spec.beta * reaction_eval(spec, phi);
}

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_meta(const std::filesystem::path& path, const TrajectoryMeta& meta) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_meta: cannot open " + path.string());
  }
  out << "kind=" << to_string(meta.kind) << "\n"
      << "alpha=" << format_g17(meta.alpha) << "\n"
      << "beta=" << format_g17(meta.beta) << "\n"
      << "h=" << format_g17(meta.h) << "\n"
      << "dt=" << format_g17(meta.dt) << "\n"
      << "n_steps=" << meta.n_steps << "\n"
      << "save_every=" << meta.save_every << "\n";
}

TrajectoryMeta read_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_meta: cannot open " + path.string());
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("read_meta: malformed line '" + line + "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::runtime_error("read_meta: missing key '" + key + "' in " +
                               path.string());
    }
    return it->second;
  };
  TrajectoryMeta meta;
  meta.kind = equation_kind_from_string(need("kind"));
  meta.alpha = std::stod(need("alpha"));
  meta.beta = std::stod(need("beta"));
  meta.h = std::stod(need("h"));
  meta.dt = std::stod(need("dt"));
  meta.n_steps = std::stoi(need("n_steps"));
  meta.save_every = std::stoi(need("save_every"));
  return meta;
}

}  // namespace fcnn
