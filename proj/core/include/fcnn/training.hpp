#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcnn/equations.hpp"
#include "fcnn/grid.hpp"
#include "fcnn/model.hpp"

namespace fcnn {

struct PairMeta {
  EquationSpec spec;
  double dt = 0.0;
  double h = 0.0;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
};

// Two consecutive snapshots (u0, u1 = one explicit step from u0, plus
// optional Gaussian noise on u1). This is the entire training set.
struct SnapshotPair {
  Field u0;
  Field u1;
  PairMeta meta;
};

struct TrainConfig {
  double lr = 0.01;
  int max_epochs = 50000;
  double delta = 1e-12;       // stop once train loss drops below this
  int patience = 500;         // early-stop patience on validation loss
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

enum class StopReason { DeltaReached, EarlyStopped, MaxEpochs };

std::string to_string(StopReason reason);

struct TrainReport {
  int epochs_run = 0;
  double final_train_loss = 0.0;
  double final_val_loss = 0.0;
  StopReason stop_reason = StopReason::MaxEpochs;
  std::vector<double> train_history;
  std::vector<double> val_history;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adds i.i.d. Gaussian(0, sigma^2) noise to the interior cells (Box-Muller
// from the pinned PRNG) and re-pads. sigma = 0 returns the field unchanged.
Field add_gaussian_noise(Field field, double sigma, std::uint64_t seed);

// u0 = random IC (amplitude 0.1) from the pair seed; u1 = fdm_step(u0) plus
// interior Gaussian noise from a stream derived from the same seed.
SnapshotPair make_pair(const EquationSpec& spec, int nx, int ny, double dt,
                       double h, std::uint64_t seed, double noise_sigma);

// One ADAM update with bias correction; mutates params and state in place.
void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grad, const TrainConfig& cfg);

// Full-batch training loop: per epoch compute closed-form gradients on the
// training pair, apply one ADAM step, then evaluate validation loss. Stops
// when train loss < delta, when validation loss has not improved for
// `patience` epochs, or at max_epochs. On EarlyStopped/MaxEpochs the
// best-validation parameters are restored; on DeltaReached the current
// parameters are kept. Throws TrainingError on NaN loss.
std::pair<Model, TrainReport> train(Model model, const SnapshotPair& train_pair,
                                    const SnapshotPair& val_pair,
                                    const TrainConfig& cfg);

// CSV log: header "epoch,train_loss,val_loss" then one row per epoch.
void write_trainlog(const std::filesystem::path& path, const TrainReport& report);

}  // namespace fcnn
