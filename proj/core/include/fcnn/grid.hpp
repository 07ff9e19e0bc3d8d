#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fcnn {

// Cell-centered 2D scalar grid with a one-cell ghost ring. The interior is
// nx * ny cells; storage is row-major (ny+2) rows of (nx+2) values, row 0
// being the bottom ghost row. Ghost cells carry boundary values and are
// never evolved on their own.
class Field {
 public:
  Field() = default;
  Field(int nx, int ny, double fill);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int width() const { return nx_ + 2; }    // padded row length
  int height() const { return ny_ + 2; }   // padded column length

  // ix in [0, nx+1], iy in [0, ny+1]; (0,*) / (nx+1,*) / (*,0) / (*,ny+1)
  // are ghosts.
  double& at(int ix, int iy) { return data_[static_cast<std::size_t>(iy) * width() + ix]; }
  double at(int ix, int iy) const { return data_[static_cast<std::size_t>(iy) * width() + ix]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const Field& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_;
  }

  bool operator==(const Field& other) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> data_;
};

// Uniform square-cell geometry on (a,b) x (c,d). Cell centers, including the
// ghost ring, sit at x_i = a + (i - 0.5) h for i in [0, nx+1], so the ghost
// centers lie half a cell outside the domain.
struct GridGeometry {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 1.0;
  int nx = 100;
  int ny = 100;

  double h() const { return (b - a) / nx; }
  double x(int ix) const { return a + (ix - 0.5) * h(); }
  double y(int iy) const { return c + (iy - 0.5) * h(); }
  double mid_x() const { return 0.5 * (a + b); }
  double mid_y() const { return 0.5 * (c + d); }

  // Throws if cells are not square or sizes are invalid.
  void validate() const;

  static GridGeometry unit(int nx, int ny) {
    GridGeometry g;
    g.nx = nx;
    g.ny = ny;
    g.validate();
    return g;
  }
};

// Overwrites the ghost ring with a copy of the adjacent interior cells
// (zero Neumann boundary). Edge ghosts copy the nearest interior edge cell;
// corner ghosts copy the diagonal interior corner cell. Idempotent.
Field pad_neumann(Field field);

// Five-point discrete Laplacian over the interior:
//   (phi[i,j+1] + phi[i,j-1] - 4 phi[i,j] + phi[i+1,j] + phi[i-1,j]) / h^2.
// Expects a freshly padded input; the ghost ring of the result is zero.
Field laplacian_5pt(const Field& field, double h);

// ||pred - ref||_2 / ||ref||_2 over interior cells. When ||ref||_2 == 0 the
// absolute norm ||pred||_2 is returned instead and *absolute_fallback (if
// given) is set.
double relative_l2(const Field& pred, const Field& ref,
                   bool* absolute_fallback = nullptr);

// True if any value (ghosts included) is NaN or infinite.
bool has_nonfinite(const Field& field);

// fgrid v1 snapshot format (text): line 1 "fgrid 1 <nx> <ny>", then ny+2
// rows of nx+2 decimal values (%.17g, space separated), bottom row first.
void write_fgrid(const std::filesystem::path& path, const Field& field);
Field read_fgrid(const std::filesystem::path& path);

// 8-bit binary PGM of the interior, mapping [-1,1] -> [0,255] linearly with
// clamping. Row 0 of the image is the top interior row.
void write_pgm(const std::filesystem::path& path, const Field& field);

}  // namespace fcnn
