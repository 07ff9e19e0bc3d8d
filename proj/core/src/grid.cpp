#include "fcnn/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fcnn {

Field::Field(int nx, int ny, double fill) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("Field: nx and ny must be >= 1, got nx=" +
                                std::to_string(nx) + " ny=" + std::to_string(ny));
  }
  if (!std::isfinite(fill)) {
    throw std::invalid_argument("Field: fill value must be finite");
  }
  data_.assign(static_cast<std::size_t>(nx + 2) * (ny + 2), fill);
}

void GridGeometry::validate() const {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("GridGeometry: nx and ny must be >= 1");
  }
  if (!(b > a) || !(d > c)) {
    throw std::invalid_argument("GridGeometry: bounds must satisfy a < b, c < d");
  }
  const double hx = (b - a) / nx;
  const double hy = (d - c) / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw std::invalid_argument("GridGeometry: cells must be square, got hx=" +
                                std::to_string(hx) + " hy=" + std::to_string(hy));
  }
}

Field pad_neumann(Field field) {
  const int nx = field.nx();
  const int ny = field.ny();
  for (int ix = 1; ix <= nx; ++ix) {
    field.at(ix, 0) = field.at(ix, 1);
    field.at(ix, ny + 1) = field.at(ix, ny);
  }
  for (int iy = 1; iy <= ny; ++iy) {
    field.at(0, iy) = field.at(1, iy);
    field.at(nx + 1, iy) = field.at(nx, iy);
  }
  // Corners copy the diagonal interior corner cell. The five-point stencil
  // never reads them, but file dumps must be reproducible.
  field.at(0, 0) = field.at(1, 1);
  field.at(nx + 1, 0) = field.at(nx, 1);
  field.at(0, ny + 1) = field.at(1, ny);
  field.at(nx + 1, ny + 1) = field.at(nx, ny);
  return field;
}

Field laplacian_5pt(const Field& field, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("laplacian_5pt: h must be positive");
  }
  const int nx = field.nx();
  const int ny = field.ny();
  const double inv_h2 = 1.0 / (h * h);
  Field out(nx, ny, 0.0);
  for (int iy = 1; iy <= ny; ++iy) {
    for (int ix = 1; ix <= nx; ++ix) {
      const double sum = field.at(ix, iy + 1) + field.at(ix, iy - 1) -
                         4.0 * field.at(ix, iy) + field.at(ix + 1, iy) +
                         field.at(ix - 1, iy);
      out.at(ix, iy) = sum * inv_h2;
    }
  }
  return out;
}

double relative_l2(const Field& pred, const Field& ref, bool* absolute_fallback) {
  if (!pred.same_shape(ref)) {
    throw std::invalid_argument("relative_l2: field dimensions differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (int iy = 1; iy <= pred.ny(); ++iy) {
    for (int ix = 1; ix <= pred.nx(); ++ix) {
      const double diff = pred.at(ix, iy) - ref.at(ix, iy);
      num += diff * diff;
      const double r = ref.at(ix, iy);
      den += r * r;
    }
  }
  if (absolute_fallback) *absolute_fallback = false;
  if (den == 0.0) {
    // Reference is identically zero; report the absolute norm of pred.
    if (absolute_fallback) *absolute_fallback = true;
    double abs_num = 0.0;
    for (int iy = 1; iy <= pred.ny(); ++iy) {
      for (int ix = 1; ix <= pred.nx(); ++ix) {
        abs_num += pred.at(ix, iy) * pred.at(ix, iy);
      }
    }
    return std::sqrt(abs_num);
  }
  return std::sqrt(num) / std::sqrt(den);
}

bool has_nonfinite(const Field& field) {
  for (double v : field.data()) {
    if (!std::isfinite(v)) return true;
  }
  return false;
}

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_fgrid(const std::filesystem::path& path, const Field& field) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_fgrid: cannot open " + path.string());
  }
  out << "fgrid 1 " << field.nx() << " " << field.ny() << "\n";
  for (int iy = 0; iy < field.height(); ++iy) {
    for (int ix = 0; ix < field.width(); ++ix) {
      if (ix > 0) out << ' ';
      out << format_g17(field.at(ix, iy));
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write_fgrid: write failed for " + path.string());
  }
}

Field read_fgrid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_fgrid: cannot open " + path.string());
  }
  std::string magic;
  int version = 0, nx = 0, ny = 0;
  in >> magic >> version >> nx >> ny;
  if (!in || magic != "fgrid" || version != 1) {
    throw std::runtime_error("read_fgrid: " + path.string() +
                             " is not an fgrid v1 file");
  }
  if (nx < 1 || ny < 1) {
    throw std::runtime_error("read_fgrid: bad dimensions in " + path.string());
  }
  Field field(nx, ny, 0.0);
  for (int iy = 0; iy < field.height(); ++iy) {
    for (int ix = 0; ix < field.width(); ++ix) {
      if (!(in >> field.at(ix, iy))) {
        throw std::runtime_error("read_fgrid: truncated data in " + path.string());
      }
    }
  }
  return field;
}

void write_pgm(const std::filesystem::path& path, const Field& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_pgm: cannot open " + path.string());
  }
  out << "P5\n" << field.nx() << " " << field.ny() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(field.nx()));
  for (int iy = field.ny(); iy >= 1; --iy) {
    for (int ix = 1; ix <= field.nx(); ++ix) {
      const double v = (field.at(ix, iy) + 1.0) * 0.5 * 255.0;
      const double clamped = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
      row[static_cast<std::size_t>(ix - 1)] =
          static_cast<unsigned char>(clamped + 0.5);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) {
    throw std::runtime_error("write_pgm: write failed for " + path.string());
  }
}

}  // namespace fcnn
