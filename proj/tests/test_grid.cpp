#include <doctest.h>

#include <cmath>

#include "fcnn/grid.hpp"
#include "fcnn/ic.hpp"
#include "test_util.hpp"

using namespace fcnn;

TEST_CASE("field construction fills every cell") {
  const Field f(2, 2, 0.0);
  CHECK(f.data().size() == 16);
  for (double v : f.data()) CHECK(v == 0.0);

  const Field g(100, 100, 1.0);
  CHECK(g.data().size() == 102 * 102);
  for (double v : g.data()) CHECK(v == 1.0);

  const Field h(1, 1, -0.5);
  CHECK(h.data().size() == 9);
  for (double v : h.data()) CHECK(v == -0.5);
}

TEST_CASE("field construction rejects bad arguments") {
  CHECK_THROWS_AS(Field(0, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Field(3, -1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Field(3, 3, std::nan("")), std::invalid_argument);
}

TEST_CASE("grid geometry rejects non-square cells") {
  GridGeometry geom{0.0, 1.0, 0.0, 2.0, 10, 10};
  CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
  GridGeometry ok{0.0, 1.0, 0.0, 2.0, 10, 20};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("ghost centers sit half a cell outside the domain") {
  const GridGeometry geom = GridGeometry::unit(4, 4);
  CHECK(geom.x(0) == doctest::Approx(-0.125));
  CHECK(geom.x(5) == doctest::Approx(1.125));
  CHECK(geom.x(1) == doctest::Approx(0.125));
}

TEST_CASE("pad_neumann replicates a single interior cell everywhere") {
  Field f(1, 1, 0.0);
  f.at(1, 1) = 5.0;
  const Field padded = pad_neumann(f);
  for (double v : padded.data()) CHECK(v == 5.0);
}

TEST_CASE("pad_neumann copies edge cells into the ghost columns") {
  Field f(3, 1, 0.0);
  f.at(1, 1) = 1.0;
  f.at(2, 1) = 2.0;
  f.at(3, 1) = 3.0;
  const Field padded = pad_neumann(f);
  CHECK(padded.at(0, 1) == 1.0);
  CHECK(padded.at(4, 1) == 3.0);
  CHECK(padded.at(2, 0) == 2.0);
  CHECK(padded.at(2, 2) == 2.0);
  // Corners copy the diagonal interior corner cell.
  CHECK(padded.at(0, 0) == 1.0);
  CHECK(padded.at(4, 0) == 3.0);
  CHECK(padded.at(0, 2) == 1.0);
  CHECK(padded.at(4, 2) == 3.0);
}

TEST_CASE("pad_neumann zeroes the normal difference on every boundary face") {
  const GridGeometry geom = GridGeometry::unit(8, 8);
  Field f(8, 8, 0.0);
  for (int iy = 1; iy <= 8; ++iy) {
    for (int ix = 1; ix <= 8; ++ix) {
      f.at(ix, iy) = geom.x(ix);
    }
  }
  const Field padded = pad_neumann(f);
  for (int iy = 1; iy <= 8; ++iy) {
    CHECK(padded.at(0, iy) - padded.at(1, iy) == 0.0);
    CHECK(padded.at(9, iy) - padded.at(8, iy) == 0.0);
  }
  for (int ix = 1; ix <= 8; ++ix) {
    CHECK(padded.at(ix, 0) - padded.at(ix, 1) == 0.0);
    CHECK(padded.at(ix, 9) - padded.at(ix, 8) == 0.0);
  }
}

TEST_CASE("pad_neumann is idempotent") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Field f = ic_random(13, 9, 1.0, seed);
    const Field once = pad_neumann(f);
    const Field twice = pad_neumann(once);
    CHECK(once == twice);
  }
}

TEST_CASE("laplacian of a constant field is zero") {
  const Field f(10, 10, 3.25);
  const Field lap = laplacian_5pt(f, 0.1);
  for (double v : lap.data()) CHECK(v == 0.0);
}

TEST_CASE("laplacian of a delta function is the bare stencil") {
  Field f(5, 5, 0.0);
  f.at(3, 3) = 1.0;
  const Field lap = laplacian_5pt(f, 1.0);
  CHECK(lap.at(3, 3) == -4.0);
  CHECK(lap.at(2, 3) == 1.0);
  CHECK(lap.at(4, 3) == 1.0);
  CHECK(lap.at(3, 2) == 1.0);
  CHECK(lap.at(3, 4) == 1.0);
  CHECK(lap.at(2, 2) == 0.0);
  // Ghost ring of the result is zero.
  for (int i = 0; i < 7; ++i) {
    CHECK(lap.at(i, 0) == 0.0);
    CHECK(lap.at(i, 6) == 0.0);
    CHECK(lap.at(0, i) == 0.0);
    CHECK(lap.at(6, i) == 0.0);
  }
}

TEST_CASE("laplacian is exact for x^2 + y^2") {
  // h = 1/8 keeps every cell-center coordinate and its square an exact
  // binary fraction, so the stencil identity (2h^2 + 2h^2)/h^2 = 4 holds
  // bit-exactly away from the padded boundary.
  const int n = 8;
  const GridGeometry geom = GridGeometry::unit(n, n);
  Field f(n, n, 0.0);
  for (int iy = 1; iy <= n; ++iy) {
    for (int ix = 1; ix <= n; ++ix) {
      f.at(ix, iy) = geom.x(ix) * geom.x(ix) + geom.y(iy) * geom.y(iy);
    }
  }
  const Field lap = laplacian_5pt(pad_neumann(f), geom.h());
  for (int iy = 2; iy <= n - 1; ++iy) {
    for (int ix = 2; ix <= n - 1; ++ix) {
      CHECK(lap.at(ix, iy) == 4.0);
    }
  }
}

TEST_CASE("laplacian rejects non-positive h") {
  const Field f(4, 4, 1.0);
  CHECK_THROWS_AS(laplacian_5pt(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(laplacian_5pt(f, -0.1), std::invalid_argument);
}

TEST_CASE("laplacian of a padded field sums to zero") {
  const Field f = pad_neumann(ic_random(32, 32, 1.0, 9));
  const Field lap = laplacian_5pt(f, 0.03125);
  double sum = 0.0;
  double scale = 0.0;
  for (int iy = 1; iy <= 32; ++iy) {
    for (int ix = 1; ix <= 32; ++ix) {
      sum += lap.at(ix, iy);
      scale += std::abs(lap.at(ix, iy));
    }
  }
  CHECK(std::abs(sum) <= 1e-12 * scale);
}

TEST_CASE("laplacian is linear") {
  const Field f = pad_neumann(ic_random(16, 16, 1.0, 4));
  const Field g = pad_neumann(ic_random(16, 16, 1.0, 5));
  const double h = 1.0 / 16.0;
  const double alpha = 1.7;
  const double beta = -0.3;
  Field combo(16, 16, 0.0);
  for (int iy = 0; iy < combo.height(); ++iy) {
    for (int ix = 0; ix < combo.width(); ++ix) {
      combo.at(ix, iy) = alpha * f.at(ix, iy) + beta * g.at(ix, iy);
    }
  }
  const Field lhs = laplacian_5pt(combo, h);
  const Field lf = laplacian_5pt(f, h);
  const Field lg = laplacian_5pt(g, h);
  double max_lap = 1.0;
  for (int iy = 1; iy <= 16; ++iy) {
    for (int ix = 1; ix <= 16; ++ix) {
      max_lap = std::max(max_lap, std::abs(lhs.at(ix, iy)));
    }
  }
  for (int iy = 1; iy <= 16; ++iy) {
    for (int ix = 1; ix <= 16; ++ix) {
      const double rhs = alpha * lf.at(ix, iy) + beta * lg.at(ix, iy);
      CHECK(std::abs(lhs.at(ix, iy) - rhs) <= 1e-13 * max_lap);
    }
  }
}

TEST_CASE("relative_l2 basics") {
  const Field f = ic_random(10, 10, 0.5, 21);
  CHECK(relative_l2(f, f) == 0.0);

  Field doubled = f;
  for (double& v : doubled.data()) v *= 2.0;
  CHECK(relative_l2(doubled, f) == 1.0);
}

TEST_CASE("relative_l2 single-cell perturbation has closed form") {
  const Field ref = ic_random(12, 12, 0.5, 22);
  Field pred = ref;
  const double delta = 0.25;
  pred.at(5, 7) += delta;
  double ref_norm_sq = 0.0;
  for (int iy = 1; iy <= 12; ++iy) {
    for (int ix = 1; ix <= 12; ++ix) {
      ref_norm_sq += ref.at(ix, iy) * ref.at(ix, iy);
    }
  }
  const double expected = delta / std::sqrt(ref_norm_sq);
  CHECK(relative_l2(pred, ref) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("relative_l2 falls back to the absolute norm for a zero reference") {
  const Field zero(6, 6, 0.0);
  Field pred(6, 6, 0.0);
  pred.at(2, 2) = 3.0;
  pred.at(4, 4) = 4.0;
  bool fallback = false;
  const double err = relative_l2(pred, zero, &fallback);
  CHECK(fallback);
  CHECK(err == doctest::Approx(5.0));
  fallback = true;
  relative_l2(pred, pred, &fallback);
  CHECK_FALSE(fallback);
}

TEST_CASE("relative_l2 rejects mismatched shapes") {
  const Field a(4, 4, 1.0);
  const Field b(5, 4, 1.0);
  CHECK_THROWS_AS(relative_l2(a, b), std::invalid_argument);
}

TEST_CASE("relative_l2 is scale invariant") {
  const Field f = ic_random(9, 9, 0.5, 30);
  const Field g = ic_random(9, 9, 0.5, 31);
  const double base = relative_l2(f, g);
  for (double c : {2.0, 0.25, -8.0}) {
    // Powers of two scale exactly.
    Field cf = f;
    Field cg = g;
    for (double& v : cf.data()) v *= c;
    for (double& v : cg.data()) v *= c;
    CHECK(relative_l2(cf, cg) == base);
  }
  Field cf = f;
  Field cg = g;
  for (double& v : cf.data()) v *= 3.7;
  for (double& v : cg.data()) v *= 3.7;
  CHECK(relative_l2(cf, cg) == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("fgrid round-trips exactly") {
  const testutil::TempDir dir("fgrid");
  const Field f = ic_random(7, 5, 0.3, 77);
  const auto path = dir.path / "f.fgrid";
  write_fgrid(path, f);
  const Field back = read_fgrid(path);
  CHECK(back == f);
}

TEST_CASE("fgrid writer is byte deterministic") {
  const testutil::TempDir dir("fgrid_det");
  const Field f = ic_random(6, 6, 0.3, 5);
  write_fgrid(dir.path / "a.fgrid", f);
  write_fgrid(dir.path / "b.fgrid", f);
  CHECK(testutil::read_file(dir.path / "a.fgrid") ==
        testutil::read_file(dir.path / "b.fgrid"));
}

TEST_CASE("fgrid reader rejects malformed input") {
  const testutil::TempDir dir("fgrid_bad");
  {
    std::ofstream out(dir.path / "bad.fgrid");
    out << "not_a_grid 1 3 3\n";
  }
  CHECK_THROWS(read_fgrid(dir.path / "bad.fgrid"));
  {
    std::ofstream out(dir.path / "trunc.fgrid");
    out << "fgrid 1 3 3\n1 2 3\n";
  }
  CHECK_THROWS(read_fgrid(dir.path / "trunc.fgrid"));
  CHECK_THROWS(read_fgrid(dir.path / "missing.fgrid"));
}

TEST_CASE("pgm export maps [-1,1] to [0,255] with clamping") {
  const testutil::TempDir dir("pgm");
  Field f(2, 2, 0.0);
  f.at(1, 1) = -1.0;
  f.at(2, 1) = 1.0;
  f.at(1, 2) = 0.0;
  f.at(2, 2) = 7.0;  // clamps to 255
  const auto path = dir.path / "f.pgm";
  write_pgm(path, f);
  const std::string bytes = testutil::read_file(path);
  const std::string header = "P5\n2 2\n255\n";
  REQUIRE(bytes.size() == header.size() + 4);
  CHECK(bytes.substr(0, header.size()) == header);
  // Top row first: (1,2)=0.0 -> 128, (2,2)=7.0 -> 255.
  CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 128);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 255);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 2]) == 0);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 3]) == 255);
}
