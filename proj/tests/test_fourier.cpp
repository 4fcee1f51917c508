#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "doctest.h"
#include "heisenframe/fourier.hpp"
#include "heisenframe/grid.hpp"
#include "heisenframe/point.hpp"

using namespace heisenframe;

namespace {

const std::vector<double> kWidths = {0.9, 0.9, 0.9};

// Transform of the width-0.9 bump at (1,1,2) on the 64^3 grid, and the
// refined reference (stable through 128^3 and 160^3).
constexpr double kBumpHat64 = 0.00048024383164326135;
constexpr double kBumpHatRef = 0.00048024464978523105;

// partial_fourier_t at omega=2 on the 64^3 bump: slice entries at
// (x,xi) index (32,32) and (20,40), with t-refined (N_t=512) references.
constexpr double kSliceCenter64 = 0.0066724156471562384;
constexpr double kSliceCenterRef = 0.0066724194368992691;
constexpr double kSliceOff64 = 0.0050202329141160748;
constexpr double kSliceOffRef = 0.0050202357654661302;

GridFunction bump64() { return make_bump(GridSpec::reproducing(1, 64), kWidths); }

}  // namespace

TEST_CASE("transform of the constant function") {
  GridSpec spec = GridSpec::reproducing(1, 64);
  GridFunction one = sample(spec, [](const Point&) { return cplx(1.0, 0.0); });

  // Every node value and the cell volume are dyadic, so the zero-frequency
  // sum is the box volume with no rounding at all.
  cplx f0 = fourier_at(one, Frequency(0.0, 0.0, 0.0));
  CHECK(f0.real() == 0.5);
  CHECK(f0.imag() == 0.0);

  // Integer frequencies kill the constant: the phase sum is a full cycle.
  CHECK(std::abs(fourier_at(one, Frequency(1.0, 0.0, 0.0))) < 1e-15);
  CHECK(std::abs(fourier_at(one, Frequency(0.0, -3.0, 0.0))) < 1e-15);
  CHECK(std::abs(fourier_at(one, Frequency(0.0, 0.0, 2.0))) < 1e-15);
}

TEST_CASE("bump transform golden value") {
  GridFunction f = bump64();
  cplx v = fourier_at(f, Frequency(1.0, 1.0, 2.0));
  CHECK(v.real() == doctest::Approx(kBumpHat64).epsilon(1e-13));
  // Even symmetry of the bump makes the transform real.
  CHECK(std::abs(v.imag()) < 1e-17);
  // Agreement with the refined-grid reference pins the quadrature itself,
  // not just reproducibility of one grid.
  CHECK(std::abs(v.real() - kBumpHatRef) / kBumpHatRef < 5e-6);
}

TEST_CASE("transform error shrinks under grid refinement") {
  Frequency w(1.0, 1.0, 2.0);
  cplx a = fourier_at(make_bump(GridSpec::reproducing(1, 16), kWidths), w);
  cplx b = fourier_at(make_bump(GridSpec::reproducing(1, 32), kWidths), w);
  cplx c = fourier_at(bump64(), w);
  double d1 = std::abs(a - b);
  double d2 = std::abs(b - c);
  CHECK(d2 < 0.1 * d1);
  CHECK(d1 > 1e-7);  // the coarse grid really is off, the comparison has teeth
}

TEST_CASE("fourier_many matches fourier_at bit for bit") {
  GridFunction f = bump64();
  std::vector<Frequency> ws = {Frequency(1.0, 1.0, 2.0), Frequency(0.0, 0.0, 0.0),
                               Frequency(-1.0, 0.5, -2.0)};
  std::vector<cplx> many = fourier_many(f, ws);
  REQUIRE(many.size() == ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(many[i] == fourier_at(f, ws[i]));
  }
}

TEST_CASE("linearity") {
  GridFunction f = bump64();
  GridFunction g = sample(f.spec, [](const Point& p) {
    return cplx(p.x[0] + 0.3, p.t - p.xi[0]);
  });
  cplx alpha(2.0, -3.0);
  GridFunction combo{f.spec, std::vector<cplx>(f.values.size()), nullptr};
  for (std::size_t i = 0; i < combo.values.size(); ++i) {
    combo.values[i] = alpha * f.values[i] + g.values[i];
  }
  Frequency w(1.0, -1.0, 2.0);
  cplx lhs = fourier_at(combo, w);
  cplx rhs = alpha * fourier_at(f, w) + fourier_at(g, w);
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("conjugate symmetry for real-valued functions") {
  GridFunction f = bump64();
  cplx fp = fourier_at(f, Frequency(1.0, -2.0, 2.0));
  cplx fm = fourier_at(f, Frequency(-1.0, 2.0, -2.0));
  CHECK(std::abs(fm - std::conj(fp)) < 1e-15);
}

TEST_CASE("trig polynomial transform recovers coefficients") {
  std::map<std::vector<int>, cplx> keys;
  keys[{0, 0, 0}] = cplx(0.5, 0.0);
  keys[{1, 0, 0}] = cplx(0.0, 2.0);
  keys[{-2, 3, 2}] = cplx(1.0, -1.0);
  GridFunction tp = trig_poly(GridSpec::reproducing(1, 32), keys);

  // The box volume is 1/2, so each aligned frequency returns half its
  // coefficient and unaligned integer frequencies vanish on the grid.
  CHECK(std::abs(fourier_at(tp, Frequency(1.0, 0.0, 0.0)) - cplx(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(fourier_at(tp, Frequency(-2.0, 3.0, 2.0)) - cplx(0.5, -0.5)) < 1e-12);
  CHECK(std::abs(fourier_at(tp, Frequency(0.0, 0.0, 0.0)) - cplx(0.25, 0.0)) < 1e-12);
  CHECK(std::abs(fourier_at(tp, Frequency(5.0, 0.0, 0.0))) < 1e-12);
  CHECK(std::abs(fourier_at(tp, Frequency(0.0, 0.0, -2.0))) < 1e-12);
}

TEST_CASE("partial transform then slice transform agrees with the full transform") {
  GridFunction f = bump64();
  Tensor slice = partial_fourier_t(f, 2.0);
  REQUIRE(slice.counts == std::vector<std::size_t>{64, 64});
  cplx via = slice_fourier_at(slice, {1.0}, {1.0});
  cplx direct = fourier_at(f, Frequency(1.0, 1.0, 2.0));
  CHECK(std::abs(via - direct) < 1e-15);
}

TEST_CASE("partial transform golden slice") {
  GridFunction f = bump64();
  Tensor slice = partial_fourier_t(f, 2.0);
  cplx center = slice.values[32 * 64 + 32];
  cplx off = slice.values[20 * 64 + 40];
  CHECK(center.real() == doctest::Approx(kSliceCenter64).epsilon(1e-13));
  CHECK(off.real() == doctest::Approx(kSliceOff64).epsilon(1e-13));
  CHECK(std::abs(center.imag()) < 1e-17);
  CHECK(std::abs(off.imag()) < 1e-17);
  CHECK(std::abs(center.real() - kSliceCenterRef) / kSliceCenterRef < 2e-6);
  CHECK(std::abs(off.real() - kSliceOffRef) / kSliceOffRef < 2e-6);
}

TEST_CASE("partial transform is converged in the central axis") {
  // Same x/xi nodes, eight times the t resolution: every slice entry moves
  // by less than 5e-9, so the t quadrature is not the accuracy bottleneck.
  GridFunction f = bump64();
  GridFunction fr = make_bump(GridSpec::over(1, reproducing_box(1), {64, 64, 512}), kWidths);
  Tensor s = partial_fourier_t(f, 2.0);
  Tensor sr = partial_fourier_t(fr, 2.0);
  REQUIRE(s.values.size() == sr.values.size());
  double md = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    md = std::max(md, std::abs(s.values[i] - sr.values[i]));
  }
  CHECK(md < 5e-9);
}

TEST_CASE("partial transform at zero frequency integrates out the central axis") {
  GridSpec spec = GridSpec::reproducing(1, 32);
  GridFunction g = sample(spec, [](const Point& p) {
    return cplx(std::cos(p.x[0]) * (1.0 + p.xi[0] * p.xi[0]), 0.0);
  });
  Tensor slice = partial_fourier_t(g, 0.0);
  // g does not depend on t, so the t integral is just the t extent 1/2.
  for (std::size_t i = 0; i < 32; ++i) {
    for (std::size_t j = 0; j < 32; ++j) {
      double x = spec.coord(0, i);
      double xi = spec.coord(1, j);
      cplx expect = 0.5 * cplx(std::cos(x) * (1.0 + xi * xi), 0.0);
      REQUIRE(std::abs(slice.values[i * 32 + j] - expect) < 1e-14);
    }
  }
}

TEST_CASE("factored product-set transform matches pointwise calls") {
  GridFunction f = bump64();
  std::vector<std::vector<double>> axes = {{-1.0, 0.0, 1.0}, {0.0, 2.0}, {-2.0, 0.0, 2.0}};
  std::vector<cplx> grid = fourier_grid(f, axes);
  REQUIRE(grid.size() == 3u * 2u * 3u);
  std::size_t idx = 0;
  for (double b : axes[0]) {
    for (double beta : axes[1]) {
      for (double om : axes[2]) {
        cplx direct = fourier_at(f, Frequency(b, beta, om));
        CHECK(std::abs(direct - grid[idx]) < 1e-14);
        ++idx;
      }
    }
  }
}

TEST_CASE("factored slice transform matches pointwise calls") {
  GridFunction f = bump64();
  Tensor slice = partial_fourier_t(f, 2.0);
  std::vector<std::vector<double>> axes = {{-1.0, 0.5, 1.0}, {0.0, 1.0}};
  std::vector<cplx> grid = slice_fourier_grid(slice, axes);
  REQUIRE(grid.size() == 3u * 2u);
  std::size_t idx = 0;
  for (double b : axes[0]) {
    for (double beta : axes[1]) {
      cplx direct = slice_fourier_at(slice, {b}, {beta});
      CHECK(std::abs(direct - grid[idx]) < 1e-14);
      ++idx;
    }
  }
}
