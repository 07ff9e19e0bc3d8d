#include "fcnn/ic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcnn/rng.hpp"

namespace fcnn {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

std::string to_string(IcShape shape) {
  switch (shape) {
    case IcShape::Random: return "random";
    case IcShape::Circle: return "circle";
    case IcShape::Star: return "star";
    case IcShape::ThreeCircles: return "circles3";
    case IcShape::Torus: return "torus";
    case IcShape::Maze: return "maze";
  }
  throw std::logic_error("to_string: bad IcShape");
}

IcShape ic_shape_from_string(const std::string& name) {
  if (name == "random") return IcShape::Random;
  if (name == "circle") return IcShape::Circle;
  if (name == "star") return IcShape::Star;
  if (name == "circles3") return IcShape::ThreeCircles;
  if (name == "torus") return IcShape::Torus;
  if (name == "maze") return IcShape::Maze;
  throw std::invalid_argument(
      "unknown initial condition '" + name +
      "' (expected random|circle|star|circles3|torus|maze)");
}

void IcParams::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("IcParams: eps must be > 0");
  if (!(r0 > 0.0)) throw std::invalid_argument("IcParams: r0 must be > 0");
  if (!(r2 > 0.0 && r2 < r1)) {
    throw std::invalid_argument("IcParams: torus radii must satisfy 0 < r2 < r1");
  }
  if (amplitude < 0.0) {
    throw std::invalid_argument("IcParams: amplitude must be >= 0");
  }
}

Field ic_random(int nx, int ny, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0) {
    throw std::invalid_argument("ic_random: amplitude must be >= 0");
  }
  Field field(nx, ny, 0.0);
  Xoshiro256pp rng(seed);
  for (int iy = 1; iy <= ny; ++iy) {
    for (int ix = 1; ix <= nx; ++ix) {
      field.at(ix, iy) = rng.uniform_symmetric(amplitude);
    }
  }
  return pad_neumann(std::move(field));
}

namespace {

// tanh profile of a single circle, evaluated at (x, y).
double circle_profile(double x, double y, double cx, double cy, double r,
                      double eps) {
  const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
  return std::tanh((r - d) / (kSqrt2 * eps));
}

Field evaluate_profile(const GridGeometry& geom, auto&& profile) {
  Field field(geom.nx, geom.ny, 0.0);
  for (int iy = 1; iy <= geom.ny; ++iy) {
    for (int ix = 1; ix <= geom.nx; ++ix) {
      field.at(ix, iy) = profile(geom.x(ix), geom.y(iy));
    }
  }
  return pad_neumann(std::move(field));
}

}  // namespace

Field ic_circle(const GridGeometry& geom, double r0, double eps) {
  geom.validate();
  if (!(r0 > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("ic_circle: r0 and eps must be > 0");
  }
  const double cx = geom.mid_x();
  const double cy = geom.mid_y();
  return evaluate_profile(geom, [&](double x, double y) {
    return circle_profile(x, y, cx, cy, r0, eps);
  });
}

Field ic_star(const GridGeometry& geom, double eps) {
  geom.validate();
  if (!(eps > 0.0)) {
    throw std::invalid_argument("ic_star: eps must be > 0");
  }
  const double cx = geom.mid_x();
  const double cy = geom.mid_y();
  return evaluate_profile(geom, [&](double x, double y) {
    const double dx = x - cx;
    const double dy = y - cy;
    // atan2 matches the one-argument branch rule wherever the latter is
    // defined (cos(6 theta) has period pi/3) and fills the dx == 0 column
    // continuously.
    const double theta = std::atan2(dy, dx);
    const double radius = 0.25 + 0.1 * std::cos(6.0 * theta);
    const double d = std::sqrt(dx * dx + dy * dy);
    return std::tanh((radius - d) / (kSqrt2 * eps));
  });
}

Field ic_torus(const GridGeometry& geom, double r1, double r2, double eps) {
  geom.validate();
  if (!(r2 > 0.0 && r2 < r1)) {
    throw std::invalid_argument("ic_torus: radii must satisfy 0 < r2 < r1");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("ic_torus: eps must be > 0");
  }
  const double cx = geom.mid_x();
  const double cy = geom.mid_y();
  return evaluate_profile(geom, [&](double x, double y) {
    const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
    return -1.0 + std::tanh((r1 - d) / (kSqrt2 * eps)) -
           std::tanh((r2 - d) / (kSqrt2 * eps));
  });
}

Field ic_three_circles(const GridGeometry& geom, const std::array<Disk, 3>& disks,
                       double eps) {
  geom.validate();
  if (!(eps > 0.0)) {
    throw std::invalid_argument("ic_three_circles: eps must be > 0");
  }
  for (const Disk& disk : disks) {
    if (!(disk.r > 0.0)) {
      throw std::invalid_argument("ic_three_circles: radii must be > 0");
    }
  }
  return evaluate_profile(geom, [&](double x, double y) {
    double value = circle_profile(x, y, disks[0].cx, disks[0].cy, disks[0].r, eps);
    for (int k = 1; k < 3; ++k) {
      value = std::max(value,
                       circle_profile(x, y, disks[k].cx, disks[k].cy, disks[k].r, eps));
    }
    return value;
  });
}

std::array<Disk, 3> default_three_circles(const GridGeometry& geom) {
  const double w = geom.b - geom.a;
  const double hgt = geom.d - geom.c;
  const double r = 0.12 * w;
  return {Disk{geom.a + 0.3 * w, geom.c + 0.3 * hgt, r},
          Disk{geom.a + 0.7 * w, geom.c + 0.3 * hgt, r},
          Disk{geom.a + 0.5 * w, geom.c + 0.7 * hgt, r}};
}

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

double point_segment_distance(double px, double py, const Segment& s) {
  const double vx = s.x1 - s.x0;
  const double vy = s.y1 - s.y0;
  const double wx = px - s.x0;
  const double wy = py - s.y0;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  const double dx = px - (s.x0 + t * vx);
  const double dy = py - (s.y0 + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

// Centerline of the spiral channel: an inward rectangular spiral whose
// successive parallel passes are one pitch apart. Geometry is expressed in
// fractions of the domain width, so the pattern is the same on any grid.
std::vector<Segment> spiral_centerline(const GridGeometry& geom) {
  const double scale = geom.b - geom.a;
  const double margin = 0.06 * scale;
  const double pitch = 0.08 * scale;
  double left = geom.a + margin;
  double right = geom.b - margin;
  double bottom = geom.c + margin;
  double top = geom.d - margin;

  std::vector<Segment> segments;
  double x = left;
  double y = bottom;
  int direction = 0;  // 0 right, 1 up, 2 left, 3 down
  while (true) {
    double tx = x;
    double ty = y;
    switch (direction) {
      case 0: tx = right; break;
      case 1: ty = top; break;
      case 2: tx = left; break;
      case 3: ty = bottom; break;
    }
    const double len = std::abs(tx - x) + std::abs(ty - y);
    if (len < 0.5 * pitch) break;
    segments.push_back({x, y, tx, ty});
    // Consume the wall we just traversed along.
    switch (direction) {
      case 0: bottom += pitch; break;
      case 1: right -= pitch; break;
      case 2: top -= pitch; break;
      case 3: left += pitch; break;
    }
    x = tx;
    y = ty;
    direction = (direction + 1) % 4;
  }
  return segments;
}

}  // namespace

Field ic_maze(const GridGeometry& geom, double eps) {
  geom.validate();
  if (!(eps > 0.0)) {
    throw std::invalid_argument("ic_maze: eps must be > 0");
  }
  const std::vector<Segment> segments = spiral_centerline(geom);
  const double halfwidth = 0.02 * (geom.b - geom.a);  // 2 cells at nx=100
  return evaluate_profile(geom, [&](double x, double y) {
    double dist = point_segment_distance(x, y, segments.front());
    for (std::size_t k = 1; k < segments.size(); ++k) {
      dist = std::min(dist, point_segment_distance(x, y, segments[k]));
    }
    // Signed distance to the channel boundary: positive inside the channel.
    return std::tanh((halfwidth - dist) / (kSqrt2 * eps));
  });
}

Field make_ic(const GridGeometry& geom, const IcParams& params) {
  params.validate();
  switch (params.shape) {
    case IcShape::Random:
      return ic_random(geom.nx, geom.ny, params.amplitude, params.seed);
    case IcShape::Circle:
      return ic_circle(geom, params.r0, params.eps);
    case IcShape::Star:
      return ic_star(geom, params.eps);
    case IcShape::ThreeCircles:
      return ic_three_circles(geom, default_three_circles(geom), params.eps);
    case IcShape::Torus:
      return ic_torus(geom, params.r1, params.r2, params.eps);
    case IcShape::Maze:
      return ic_maze(geom, params.eps);
  }
  throw std::logic_error("make_ic: bad IcShape");
}

}  // namespace fcnn
