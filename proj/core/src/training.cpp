#include "fcnn/training.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fcnn/ic.hpp"
#include "fcnn/rng.hpp"

namespace fcnn {

namespace {
// Salt for deriving the noise stream from the pair seed, so the noise is
// independent of the initial condition drawn from the same seed.
constexpr std::uint64_t kNoiseSalt = 1;
}  // namespace

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be > 0");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("TrainConfig: delta must be >= 0");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::DeltaReached: return "delta_reached";
    case StopReason::EarlyStopped: return "early_stopped";
    case StopReason::MaxEpochs: return "max_epochs";
  }
  throw std::logic_error("to_string: bad StopReason");
}

Field add_gaussian_noise(Field field, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) {
    throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
  }
  if (sigma == 0.0) return field;
  Xoshiro256pp rng(seed);
  for (int iy = 1; iy <= field.ny(); ++iy) {
    for (int ix = 1; ix <= field.nx(); ++ix) {
      field.at(ix, iy) += sigma * rng.gaussian();
    }
  }
  return pad_neumann(std::move(field));
}

SnapshotPair make_pair(const EquationSpec& spec, int nx, int ny, double dt,
                       double h, std::uint64_t seed, double noise_sigma) {
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("make_pair: noise_sigma must be >= 0");
  }
  SnapshotPair pair;
  pair.u0 = ic_random(nx, ny, 0.1, seed);
  pair.u1 = fdm_step(pair.u0, spec, dt, h);
  pair.u1 = add_gaussian_noise(std::move(pair.u1), noise_sigma,
                               derive_seed(seed, kNoiseSalt));
  pair.meta = {spec, dt, h, seed, noise_sigma};
  return pair;
}

void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grad, const TrainConfig& cfg) {
  if (params.size() != grad.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: layout size mismatch");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g;
    state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
}

std::pair<Model, TrainReport> train(Model model, const SnapshotPair& train_pair,
                                    const SnapshotPair& val_pair,
                                    const TrainConfig& cfg) {
  cfg.validate();
  if (!train_pair.u0.same_shape(train_pair.u1) ||
      !val_pair.u0.same_shape(val_pair.u1)) {
    throw std::invalid_argument("train: snapshot pair dimensions differ");
  }

  TrainReport report;
  std::vector<double> params = pack_trainables(model);
  AdamState state(params.size());

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = params;
  int epochs_since_improve = 0;
  StopReason reason = StopReason::MaxEpochs;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto [train_loss, grads] = gradients(model, train_pair.u0, train_pair.u1);
    if (!std::isfinite(train_loss)) {
      throw TrainingError(
          "train: loss became NaN/Inf at epoch " + std::to_string(epoch) +
          " (learning rate too high or unstable training data)");
    }
    report.train_history.push_back(train_loss);
    report.epochs_run = epoch;

    if (train_loss < cfg.delta) {
      // Converged on the training pair; keep the current parameters.
      report.val_history.push_back(
          loss_mse(forward(model, val_pair.u0), val_pair.u1));
      reason = StopReason::DeltaReached;
      break;
    }

    adam_step(state, params, pack_gradients(grads), cfg);
    unpack_trainables(model, params);

    const double val_loss = loss_mse(forward(model, val_pair.u0), val_pair.u1);
    if (!std::isfinite(val_loss)) {
      throw TrainingError("train: validation loss became NaN/Inf at epoch " +
                          std::to_string(epoch));
    }
    report.val_history.push_back(val_loss);

    if (val_loss < best_val) {
      best_val = val_loss;
      best_params = params;
      epochs_since_improve = 0;
    } else {
      epochs_since_improve += 1;
      if (epochs_since_improve >= cfg.patience) {
        reason = StopReason::EarlyStopped;
        break;
      }
    }
  }

  if (reason != StopReason::DeltaReached && best_val < std::numeric_limits<double>::infinity()) {
    // Restore the best-validation parameters.
    unpack_trainables(model, best_params);
  }

  report.stop_reason = reason;
  report.final_train_loss = loss_mse(forward(model, train_pair.u0), train_pair.u1);
  report.final_val_loss = loss_mse(forward(model, val_pair.u0), val_pair.u1);
  return {std::move(model), std::move(report)};
}

void write_trainlog(const std::filesystem::path& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_trainlog: cannot open " + path.string());
  }
  out << "epoch,train_loss,val_loss\n";
  char buf[80];
  for (std::size_t i = 0; i < report.train_history.size(); ++i) {
    const double val = i < report.val_history.size() ? report.val_history[i]
                                                     : std::nan("");
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i + 1,
                  report.train_history[i], val);
    out << buf;
  }
  if (!out) {
    throw std::runtime_error("write_trainlog: write failed for " + path.string());
  }
}

}  // namespace fcnn
