#include "fcnn/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "fcnn/rng.hpp"

namespace fcnn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> pack_trainables(const Model& model) {
  std::vector<double> params;
  params.reserve(static_cast<std::size_t>(model.trainable_count()));
  params.push_back(model.w_vert);
  params.push_back(model.w_horiz);
  params.push_back(model.w_center);
  params.insert(params.end(), model.a.begin(), model.a.end());
  return params;
}

void unpack_trainables(Model& model, const std::vector<double>& params) {
  if (params.size() != static_cast<std::size_t>(model.trainable_count())) {
    throw std::invalid_argument("unpack_trainables: layout size mismatch");
  }
  model.w_vert = params[0];
  model.w_horiz = params[1];
  model.w_center = params[2];
  std::copy(params.begin() + 3, params.end(), model.a.begin());
}

std::vector<double> pack_gradients(const Gradients& grads) {
  std::vector<double> g;
  g.reserve(3 + grads.d_a.size());
  g.push_back(grads.d_w_vert);
  g.push_back(grads.d_w_horiz);
  g.push_back(grads.d_w_center);
  g.insert(g.end(), grads.d_a.begin(), grads.d_a.end());
  return g;
}

Model init_model(int poly_order, double b, std::uint64_t seed) {
  if (poly_order < 1) {
    throw std::invalid_argument("init_model: poly_order must be >= 1");
  }
  Model model;
  model.b = b;
  model.a.resize(static_cast<std::size_t>(poly_order) + 1);
  Xoshiro256pp rng(seed);
  model.w_vert = rng.uniform_symmetric(0.01);
  model.w_horiz = rng.uniform_symmetric(0.01);
  model.w_center = rng.uniform_symmetric(0.01);
  for (double& coeff : model.a) coeff = rng.uniform_symmetric(0.01);
  return model;
}

namespace {

// Coefficients of f(phi) in powers of phi for polynomial reaction terms;
// empty when f is not polynomial.
std::vector<double> reaction_poly_coeffs(EquationKind kind) {
  switch (kind) {
    case EquationKind::Heat: return {};
    case EquationKind::Fisher: return {0.0, 1.0, -1.0};
    case EquationKind::AllenCahn: return {0.0, 1.0, 0.0, -1.0};
    default: return {};
  }
}

// Re-expands sum_j c_j phi^j in powers of s = (phi - b) via the binomial
// theorem: out_k = sum_j c_j C(j,k) b^(j-k).
std::vector<double> shift_poly(const std::vector<double>& coeffs, double b) {
  const std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double binom = 1.0;  // C(j, 0)
    double bpow = std::pow(b, static_cast<double>(j));
    for (std::size_t k = 0; k <= j; ++k) {
      out[k] += coeffs[j] * binom * bpow;
      binom = binom * static_cast<double>(j - k) / static_cast<double>(k + 1);
      bpow = (b != 0.0) ? bpow / b : (k + 1 == j ? 1.0 : 0.0);
    }
  }
  return out;
}

// Taylor coefficients of sin(pi phi) about b, orders 0..n.
std::vector<double> sine_taylor(double b, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  double factorial = 1.0;
  double pik = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      factorial *= k;
      pik *= kPi;
    }
    // d^k/dphi^k sin(pi phi) = pi^k sin(pi b + k pi/2)
    c[static_cast<std::size_t>(k)] =
        pik * std::sin(kPi * b + 0.5 * kPi * k) / factorial;
  }
  return c;
}

// Taylor coefficients of tanh(phi) about b, orders 0..n. The k-th derivative
// is a polynomial P_k in t = tanh(phi) with P_0 = t and
// P_{k+1} = P_k'(t) (1 - t^2).
std::vector<double> tanh_taylor(double b, int n) {
  const double t = std::tanh(b);
  std::vector<double> deriv_poly = {0.0, 1.0};  // P_0(t) = t
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  double factorial = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) factorial *= k;
    double value = 0.0;
    double tpow = 1.0;
    for (double coeff : deriv_poly) {
      value += coeff * tpow;
      tpow *= t;
    }
    c[static_cast<std::size_t>(k)] = value / factorial;
    // Next derivative polynomial: P'(t) * (1 - t^2).
    std::vector<double> dp(deriv_poly.size() >= 1 ? deriv_poly.size() - 1 : 0, 0.0);
    for (std::size_t j = 1; j < deriv_poly.size(); ++j) {
      dp[j - 1] = deriv_poly[j] * static_cast<double>(j);
    }
    std::vector<double> next(dp.size() + 2, 0.0);
    for (std::size_t j = 0; j < dp.size(); ++j) {
      next[j] += dp[j];
      next[j + 2] -= dp[j];
    }
    deriv_poly = std::move(next);
  }
  return c;
}

}  // namespace

Model analytic_model(const EquationSpec& spec, double dt, double h) {
  spec.validate();
  if (!(dt > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("analytic_model: dt and h must be > 0");
  }
  const int n = spec.poly_order;
  Model model;
  model.b = 0.0;
  model.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
  const double neighbor = dt * spec.alpha / (h * h);
  model.w_vert = neighbor;
  model.w_horiz = neighbor;
  model.w_center = -4.0 * neighbor;

  // Polynomial part encodes phi + dt beta f(phi) in powers of (phi - b).
  std::vector<double> reaction(static_cast<std::size_t>(n) + 1, 0.0);
  switch (spec.kind) {
    case EquationKind::Heat:
    case EquationKind::Fisher:
    case EquationKind::AllenCahn: {
      const std::vector<double> f = reaction_poly_coeffs(spec.kind);
      if (f.size() > reaction.size()) {
        throw std::invalid_argument(
            "analytic_model: poly_order " + std::to_string(n) +
            " cannot represent the degree-" + std::to_string(f.size() - 1) +
            " reaction term exactly");
      }
      std::vector<double> padded(f);
      padded.resize(reaction.size(), 0.0);
      reaction = shift_poly(padded, model.b);
      break;
    }
    case EquationKind::Sine:
      reaction = sine_taylor(model.b, n);
      break;
    case EquationKind::Tanh:
      reaction = tanh_taylor(model.b, n);
      break;
  }
  // Identity term phi = b + (phi - b).
  model.a[0] = model.b + dt * spec.beta * reaction[0];
  model.a[1] = 1.0 + dt * spec.beta * reaction[1];
  for (int k = 2; k <= n; ++k) {
    model.a[static_cast<std::size_t>(k)] =
        dt * spec.beta * reaction[static_cast<std::size_t>(k)];
  }
  return model;
}

double polynomial_eval(const Model& model, double phi) {
  const double s = phi - model.b;
  double value = 0.0;
  for (std::size_t k = model.a.size(); k-- > 0;) {
    value = value * s + model.a[k];
  }
  return value;
}

Field forward(const Model& model, const Field& phi0) {
  const Field padded = pad_neumann(phi0);
  Field out(phi0.nx(), phi0.ny(), 0.0);
  for (int iy = 1; iy <= phi0.ny(); ++iy) {
    for (int ix = 1; ix <= phi0.nx(); ++ix) {
      const double phi = padded.at(ix, iy);
      out.at(ix, iy) =
          model.w_vert * (padded.at(ix, iy - 1) + padded.at(ix, iy + 1)) +
          model.w_horiz * (padded.at(ix - 1, iy) + padded.at(ix + 1, iy)) +
          model.w_center * phi + polynomial_eval(model, phi);
    }
  }
  out = pad_neumann(std::move(out));
  if (has_nonfinite(out)) {
    throw std::runtime_error("forward: model produced NaN/Inf values");
  }
  return out;
}

double loss_mse(const Field& pred, const Field& target) {
  if (!pred.same_shape(target)) {
    throw std::invalid_argument("loss_mse: field dimensions differ");
  }
  double sum = 0.0;
  for (int iy = 1; iy <= pred.ny(); ++iy) {
    for (int ix = 1; ix <= pred.nx(); ++ix) {
      const double diff = pred.at(ix, iy) - target.at(ix, iy);
      sum += diff * diff;
    }
  }
  return sum / (static_cast<double>(pred.nx()) * pred.ny());
}

std::pair<double, Gradients> gradients(const Model& model, const Field& u0,
                                       const Field& u1) {
  if (!u0.same_shape(u1)) {
    throw std::invalid_argument("gradients: field dimensions differ");
  }
  const Field padded = pad_neumann(u0);
  const Field pred = forward(model, u0);
  const double loss = loss_mse(pred, u1);
  const double scale = 2.0 / (static_cast<double>(u0.nx()) * u0.ny());

  Gradients grads;
  grads.d_a.assign(model.a.size(), 0.0);
  for (int iy = 1; iy <= u0.ny(); ++iy) {
    for (int ix = 1; ix <= u0.nx(); ++ix) {
      const double r = scale * (pred.at(ix, iy) - u1.at(ix, iy));
      grads.d_w_vert += r * (padded.at(ix, iy - 1) + padded.at(ix, iy + 1));
      grads.d_w_horiz += r * (padded.at(ix - 1, iy) + padded.at(ix + 1, iy));
      grads.d_w_center += r * padded.at(ix, iy);
      const double s = padded.at(ix, iy) - model.b;
      double spow = 1.0;
      for (std::size_t k = 0; k < grads.d_a.size(); ++k) {
        grads.d_a[k] += r * spow;
        spow *= s;
      }
    }
  }
  return {loss, std::move(grads)};
}

double learned_center_fn(const Model& model, double phi) {
  return model.w_center * phi + polynomial_eval(model, phi);
}

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  }
  out << "version=1\n"
      << "kind=" << to_string(ckpt.kind) << "\n"
      << "poly_order=" << ckpt.model.poly_order() << "\n"
      << "b=" << format_g17(ckpt.model.b) << "\n"
      << "w_vert=" << format_g17(ckpt.model.w_vert) << "\n"
      << "w_horiz=" << format_g17(ckpt.model.w_horiz) << "\n"
      << "w_center=" << format_g17(ckpt.model.w_center) << "\n";
  for (std::size_t k = 0; k < ckpt.model.a.size(); ++k) {
    out << "a_" << k << "=" << format_g17(ckpt.model.a[k]) << "\n";
  }
  out << "dt=" << format_g17(ckpt.dt) << "\n"
      << "h=" << format_g17(ckpt.h) << "\n"
      << "seed=" << ckpt.seed << "\n";
  if (!out) {
    throw std::runtime_error("save_checkpoint: write failed for " + path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("load_checkpoint: malformed line '" + line + "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::runtime_error("load_checkpoint: missing key '" + key + "' in " +
                               path.string());
    }
    return it->second;
  };
  if (need("version") != "1") {
    throw std::runtime_error("load_checkpoint: unsupported version " +
                             need("version"));
  }
  Checkpoint ckpt;
  ckpt.kind = equation_kind_from_string(need("kind"));
  const int poly_order = std::stoi(need("poly_order"));
  if (poly_order < 1) {
    throw std::runtime_error("load_checkpoint: bad poly_order");
  }
  ckpt.model.b = std::stod(need("b"));
  ckpt.model.w_vert = std::stod(need("w_vert"));
  ckpt.model.w_horiz = std::stod(need("w_horiz"));
  ckpt.model.w_center = std::stod(need("w_center"));
  ckpt.model.a.resize(static_cast<std::size_t>(poly_order) + 1);
  for (int k = 0; k <= poly_order; ++k) {
    ckpt.model.a[static_cast<std::size_t>(k)] =
        std::stod(need("a_" + std::to_string(k)));
  }
  ckpt.dt = std::stod(need("dt"));
  ckpt.h = std::stod(need("h"));
  ckpt.seed = std::stoull(need("seed"));
  return ckpt;
}

}  // namespace fcnn
