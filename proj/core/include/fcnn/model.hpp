#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "fcnn/equations.hpp"
#include "fcnn/grid.hpp"

namespace fcnn {

// The learned one-step model: a tied five-point stencil (vertical pair,
// horizontal pair, center) plus a pointwise polynomial in (phi - b). The
// stencil kernel absorbs dt * alpha / h^2; dt and h are not model inputs.
// b is a fixed expansion center, not trained.
struct Model {
  double w_vert = 0.0;    // tied weight for the two vertical neighbors
  double w_horiz = 0.0;   // tied weight for the two horizontal neighbors
  double w_center = 0.0;  // center weight
  std::vector<double> a;  // polynomial coefficients a_0..a_N
  double b = 0.0;         // polynomial shift (fixed)

  int poly_order() const { return static_cast<int>(a.size()) - 1; }
  int trainable_count() const { return 3 + static_cast<int>(a.size()); }
};

// dL/dtheta in the same layout as the trainables.
struct Gradients {
  double d_w_vert = 0.0;
  double d_w_horiz = 0.0;
  double d_w_center = 0.0;
  std::vector<double> d_a;
};

// Frozen trainable layout, shared by the optimizer and checkpoints:
// [w_vert, w_horiz, w_center, a_0 .. a_N].
std::vector<double> pack_trainables(const Model& model);
void unpack_trainables(Model& model, const std::vector<double>& params);
std::vector<double> pack_gradients(const Gradients& grads);

// Stencil weights and polynomial coefficients i.i.d. uniform on
// [-0.01, 0.01] from the pinned PRNG, drawn in trainable-layout order.
Model init_model(int poly_order, double b, std::uint64_t seed);

// The model that reproduces the explicit scheme exactly:
//   w_vert = w_horiz = dt alpha / h^2, w_center = -4 dt alpha / h^2,
//   polynomial = phi + dt beta f(phi) expanded about b.
// Exact for polynomial reaction terms (heat, fisher, ac); for sine/tanh the
// polynomial is the degree-N Taylor expansion of dt beta f about b. Throws
// if spec.poly_order cannot represent a polynomial f exactly.
Model analytic_model(const EquationSpec& spec, double dt, double h);

// Horner evaluation of a_0 + sum_k a_k (phi - b)^k.
double polynomial_eval(const Model& model, double phi);

// One model step: pads the input, then on the interior
//   out = w_vert (phi_below + phi_above) + w_horiz (phi_left + phi_right)
//       + w_center phi + poly(phi),
// re-padded. Throws if the output has NaN/Inf values.
Field forward(const Model& model, const Field& phi0);

// Mean squared error over interior cells.
double loss_mse(const Field& pred, const Field& target);

// Closed-form gradients of loss_mse(forward(model, u0), u1) with respect to
// every trainable; returns the loss of the same forward pass.
std::pair<double, Gradients> gradients(const Model& model, const Field& u0,
                                       const Field& u1);

// All update terms that depend only on the center cell:
//   w_center phi + poly(phi).
// Comparable with analytic_center_fn; the split between w_center and the
// linear polynomial term is not identifiable on its own.
double learned_center_fn(const Model& model, double phi);

// Checkpoint: the model plus the provenance needed to rebuild its FDM
// counterpart.
struct Checkpoint {
  Model model;
  EquationKind kind = EquationKind::Heat;
  double dt = 0.0;
  double h = 0.0;
  std::uint64_t seed = 0;
};

// fcnn v1 checkpoint format (text key=value, fixed key order): version,
// kind, poly_order, b, w_vert, w_horiz, w_center, a_0..a_N, dt, h, seed.
// All floats %.17g.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fcnn
