#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "fcnn/grid.hpp"

namespace fcnn {

enum class IcShape { Random, Circle, Star, ThreeCircles, Torus, Maze };

std::string to_string(IcShape shape);
IcShape ic_shape_from_string(const std::string& name);

struct IcParams {
  IcShape shape = IcShape::Random;
  double r0 = 0.25;         // circle radius
  double r1 = 0.4;          // torus outer radius
  double r2 = 0.2;          // torus inner radius
  double eps = 0.012;       // interface thickness
  double amplitude = 0.1;   // random-IC amplitude
  std::uint64_t seed = 0;

  void validate() const;
};

struct Disk {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
};

// Interior cells i.i.d. uniform on [-amplitude, amplitude], drawn row-major
// (bottom interior row first) from the pinned PRNG, then Neumann-padded.
// Identical (nx, ny, amplitude, seed) give bit-identical fields everywhere.
Field ic_random(int nx, int ny, double amplitude, std::uint64_t seed);

// tanh((r0 - |p - mid|) / (sqrt(2) eps)) at every cell center; +1 inside the
// circle, -1 outside. All shaped profiles are centered on the domain
// midpoint, which is (0.5, 0.5) on the default unit domain.
Field ic_circle(const GridGeometry& geom, double r0, double eps);

// Six-lobed star: radius 0.25 + 0.1 cos(6 theta) with theta from the
// two-argument arctangent about the domain midpoint.
Field ic_star(const GridGeometry& geom, double eps);

// Annulus: -1 + tanh((r1 - d)/(sqrt(2) eps)) - tanh((r2 - d)/(sqrt(2) eps)),
// d the distance to the domain midpoint; +1 between the radii, -1 elsewhere.
Field ic_torus(const GridGeometry& geom, double r1, double r2, double eps);

// Pointwise maximum of three single-circle profiles (level-set union).
Field ic_three_circles(const GridGeometry& geom, const std::array<Disk, 3>& disks,
                       double eps);

// Default layout: centers at fractions (0.3,0.3), (0.7,0.3), (0.5,0.7) of the
// domain, radii 0.12 of the domain width each.
std::array<Disk, 3> default_three_circles(const GridGeometry& geom);

// Frozen deterministic maze: a rectangular spiral channel of +1 on a -1
// background, channel width 4 cells on the default 100x100 grid, smoothed by
// tanh(signed distance / (sqrt(2) eps)). No randomness.
Field ic_maze(const GridGeometry& geom, double eps);

// Dispatch on params.shape with the bundled parameters.
Field make_ic(const GridGeometry& geom, const IcParams& params);

}  // namespace fcnn
