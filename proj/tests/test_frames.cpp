#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "heisenframe/frames.hpp"
#include "heisenframe/grid.hpp"
#include "heisenframe/io.hpp"
#include "heisenframe/point.hpp"
#include "heisenframe/util.hpp"

using namespace heisenframe;

namespace {

// Analysis of the width-0.9 bump at 64^3 under the alternating M=0.05 scheme
// (K_xy = K_t = 3, haar-normalized): coefficient energy and the on-disk table.
constexpr double kAnalysisSumSq = 0.00010699160941709877;

// Quadratic forms of the same bump and scheme.
constexpr double kQfQ = 3.5690744208140004e-05;
constexpr double kQfR = 1.7850258377546599e-05;
constexpr double kQfPhi = 1.7805060500409353e-05;
constexpr double kQfP = 5.3541002585686603e-05;

// FNV-1a of the weighted Gram entries (alternating M=0.05, K=2) formatted
// "%.12e," in row-major order.
const std::string kGramDigest = "041d8ca801f03784";

// stability_constant of alternating schemes at K_xy = K_t = 2.
constexpr double kStabM001 = 0.0015502275661040156;
constexpr double kStabM005 = 0.039135479518235358;
constexpr double kStabM01 = 0.15945998759821414;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridFunction bump64() {
  return make_bump(GridSpec::reproducing(1, 64), {0.9, 0.9, 0.9});
}

}  // namespace

TEST_CASE("truncation counts and membership") {
  CHECK_THROWS_AS(Truncation(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Truncation(3, 0), std::invalid_argument);

  Truncation t(2, 3);
  CHECK(t.pair_count(1) == 25);
  CHECK(t.index_count(1) == 25 * 7);
  CHECK(t.pair_count(2) == 625);
  CHECK(t.index_count(2) == 625 * 7);

  FrameIndex in{{2}, {-2}, 3};
  FrameIndex out_xy{{3}, {0}, 0};
  FrameIndex out_t{{0}, {0}, 4};
  CHECK(t.contains(in));
  CHECK(!t.contains(out_xy));
  CHECK(!t.contains(out_t));
}

TEST_CASE("index enumeration is row major with k fastest") {
  std::vector<FrameIndex> idx = enumerate_indices(1, Truncation(1, 1));
  REQUIRE(idx.size() == 27);
  CHECK(idx[0].a[0] == -1);
  CHECK(idx[0].alpha[0] == -1);
  CHECK(idx[0].k == -1);
  CHECK(idx[1].k == 0);
  CHECK(idx[2].k == 1);
  // after a full k cycle, alpha advances
  CHECK(idx[3].a[0] == -1);
  CHECK(idx[3].alpha[0] == 0);
  CHECK(idx[3].k == -1);
  // after a full (alpha, k) block, a advances
  CHECK(idx[9].a[0] == 0);
  CHECK(idx[9].alpha[0] == -1);
  CHECK(idx.back().a[0] == 1);
  CHECK(idx.back().alpha[0] == 1);
  CHECK(idx.back().k == 1);

  std::vector<FrameIndex> idx2 = enumerate_indices(2, Truncation(1, 1));
  REQUIRE(idx2.size() == 243);
  CHECK(idx2[0].a == std::vector<long>{-1, -1});
  CHECK(idx2[0].alpha == std::vector<long>{-1, -1});
  // the innermost digit is k, then alpha_1
  CHECK(idx2[3].alpha == std::vector<long>{-1, 0});
}

TEST_CASE("tilde map moves only the perturbed slot") {
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(2, 2), 0.1);

  FrameIndex z0{{1}, {0}, 0};
  Frequency f0 = tilde_map(s, z0);
  CHECK(f0.b[0] == s.b_of({1})[0]);
  CHECK(f0.beta[0] == s.beta_of({0})[0]);
  CHECK(f0.omega == 0.0);
  CHECK(std::abs(f0.b[0] - 1.0) == doctest::Approx(0.1).epsilon(1e-13));

  FrameIndex z1{{1}, {-2}, 1};
  Frequency f1 = tilde_map(s, z1);
  CHECK(f1.b[0] == 1.0);  // integers, untouched on k != 0 shells
  CHECK(f1.beta[0] == -2.0);
  CHECK(f1.omega == s.omega_of(1));
  CHECK(std::abs(f1.omega - 2.0) == doctest::Approx(0.1).epsilon(1e-13));

  Frequency h = harmonic_frequency(z1);
  CHECK(h.b[0] == 1.0);
  CHECK(h.beta[0] == -2.0);
  CHECK(h.omega == 2.0);

  FrameIndex outside{{3}, {0}, 0};
  CHECK_THROWS_AS(tilde_map(s, outside), std::invalid_argument);
  CHECK_THROWS_AS(s.omega_of(0), std::invalid_argument);
  CHECK_THROWS_AS(s.omega_of(5), std::invalid_argument);
}

TEST_CASE("scheme factories") {
  Truncation t(2, 2);

  PerturbationScheme h = PerturbationScheme::harmonic(1, t);
  CHECK(scheme_deviation(h) == 0.0);
  CHECK(h.b_of({-2})[0] == -2.0);
  CHECK(h.omega_of(2) == 4.0);

  PerturbationScheme a = PerturbationScheme::alternating(1, t, 0.05);
  CHECK(scheme_deviation(a) == doctest::Approx(0.05).epsilon(1e-13));
  for (long k = -2; k <= 2; ++k) {
    if (k == 0) continue;
    CHECK(std::abs(a.omega_of(k) - 2.0 * static_cast<double>(k)) ==
          doctest::Approx(0.05).epsilon(1e-13));
  }

  PerturbationScheme u = PerturbationScheme::uniform_omega_shift(1, t, 0.3);
  CHECK(u.b_of({1})[0] == 1.0);  // noncentral slots stay harmonic
  CHECK(u.omega_of(1) == 2.3);
  CHECK(u.omega_of(-1) == -1.7);
  CHECK(scheme_deviation(u) == doctest::Approx(0.3).epsilon(1e-13));

  PerturbationScheme r1 = PerturbationScheme::random(1, t, 0.1, 12345);
  PerturbationScheme r2 = PerturbationScheme::random(1, t, 0.1, 12345);
  CHECK(r1.b == r2.b);
  CHECK(r1.beta == r2.beta);
  CHECK(r1.omega == r2.omega);
  CHECK(scheme_deviation(r1) <= 0.1);
  CHECK(scheme_deviation(r1) > 0.0);
  PerturbationScheme r3 = PerturbationScheme::random(1, t, 0.1, 54321);
  CHECK(r1.b != r3.b);
}

TEST_CASE("schemes that cannot be frames are rejected") {
  Truncation t(2, 2);
  // a uniform shift of -2 parks omega_1 at zero
  CHECK_THROWS_AS(PerturbationScheme::uniform_omega_shift(1, t, -2.0), numerical_error);
  // deviation at the 2/n threshold
  CHECK_THROWS_AS(PerturbationScheme::alternating(1, t, 2.0), numerical_error);
  CHECK_THROWS_AS(PerturbationScheme::alternating(2, t, 1.0), numerical_error);

  // hand-edited omega slot
  PerturbationScheme s = PerturbationScheme::alternating(1, t, 0.05);
  s.omega[3] = 0.0;  // slot of k = 1
  CHECK_THROWS_AS(s.validate(), numerical_error);
  GridFunction f = trig_poly(GridSpec::reproducing(1, 16), {{{0, 0, 0}, cplx(1.0, 0.0)}});
  CHECK_THROWS_AS(quadratic_forms(f, s), numerical_error);
  CHECK_THROWS_AS(analysis(f, s), numerical_error);
  CHECK_THROWS_AS(gram_matrix(s, true), numerical_error);
  CHECK_THROWS_AS(stability_constant(s), numerical_error);

  // mangled table shape
  PerturbationScheme bad = PerturbationScheme::harmonic(1, t);
  bad.b.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("weight distortion bound") {
  CHECK(weight_distortion_bound(0.0, 1) == 0.0);
  CHECK(weight_distortion_bound(0.1, 1) == doctest::Approx(0.1 / 1.9).epsilon(1e-15));
  CHECK(weight_distortion_bound(0.5, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(weight_distortion_bound(-0.1, 1), std::domain_error);
  CHECK_THROWS_AS(weight_distortion_bound(2.0, 1), std::domain_error);
  CHECK_THROWS_AS(weight_distortion_bound(1.0, 2), std::domain_error);
}

TEST_CASE("analysis is Parseval on contained trig polynomials") {
  std::map<std::vector<int>, cplx> keys;
  keys[{0, 0, 0}] = cplx(0.5, 0.0);
  keys[{1, -2, 2}] = cplx(0.0, 2.0);
  keys[{-1, 0, -4}] = cplx(1.0, 1.0);
  keys[{2, 1, 0}] = cplx(-0.3, 0.7);
  GridFunction f = trig_poly(GridSpec::reproducing(1, 32), keys);
  PerturbationScheme s = PerturbationScheme::harmonic(1, Truncation(2, 2));

  CoefficientTable c = analysis(f, s);
  CHECK(c.convention == Convention::kHaarNormalized);
  double ss = 0.0;
  for (const cplx& v : c.values) ss += std::norm(v);
  double ns = norm_sq(f);
  CHECK(std::abs(ss - ns) / ns < 1e-12);

  // one specific coefficient: coefficient 2i at frequency (1,-2,2) comes back
  // as 2i/sqrt(2) under the haar normalization
  std::vector<FrameIndex> idx = enumerate_indices(1, s.trunc);
  bool seen = false;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i].a[0] == 1 && idx[i].alpha[0] == -2 && idx[i].k == 1) {
      CHECK(std::abs(c.values[i] - cplx(0.0, 2.0) / std::sqrt(2.0)) < 1e-14);
      seen = true;
    }
  }
  CHECK(seen);

  // the raw convention differs by exactly the sqrt(2) factor
  CoefficientTable raw = analysis(f, s, Convention::kLebesgueRaw);
  CHECK(raw.convention == Convention::kLebesgueRaw);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    REQUIRE(c.values[i] == std::sqrt(2.0) * raw.values[i]);
  }
}

TEST_CASE("analysis golden table") {
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(3, 3), 0.05);
  CoefficientTable c = analysis(bump64(), s);
  REQUIRE(c.values.size() == 343);

  double ss = 0.0;
  for (const cplx& v : c.values) ss += std::norm(v);
  CHECK(ss == doctest::Approx(kAnalysisSumSq).epsilon(1e-13));

  // byte-stable serialization of the same table
  std::string golden = read_file(std::string(HEISENFRAME_GOLDEN_DIR) + "/analysis_m005.hct1");
  std::string tmp = "test_frames_analysis.hct1";
  write_table_hct1(tmp, c);
  CHECK(read_file(tmp) == golden);
  std::remove(tmp.c_str());
}

TEST_CASE("quadratic forms goldens and identities") {
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(3, 3), 0.05);
  GridFunction f = bump64();
  QuadraticForms qf = quadratic_forms(f, s);

  CHECK(qf.q == doctest::Approx(kQfQ).epsilon(1e-13));
  CHECK(qf.r == doctest::Approx(kQfR).epsilon(1e-13));
  CHECK(qf.phi == doctest::Approx(kQfPhi).epsilon(1e-13));
  CHECK(qf.p == doctest::Approx(kQfP).epsilon(1e-13));
  CHECK(qf.p == qf.q + qf.r);

  double C = weight_distortion_bound(scheme_deviation(s), 1);
  CHECK(qf.r >= (1.0 - C) * qf.phi);
  CHECK(qf.r <= (1.0 + C) * qf.phi);

  // harmonic weights are all 1, so the weighted and unweighted shells agree
  QuadraticForms hf = quadratic_forms(f, PerturbationScheme::harmonic(1, Truncation(3, 3)));
  CHECK(hf.r == hf.phi);
}

TEST_CASE("gram entries in closed form") {
  Frequency u(0.3, -0.2, 1.7);
  CHECK(gram_entry(u, u) == cplx(0.5, 0.0));
  // integer frequency differences are exact zeros of sinc
  CHECK(gram_entry(Frequency(1.0, 0.0, 0.0), Frequency(0.0, 0.0, 0.0)) == cplx(0.0, 0.0));
  CHECK(gram_entry(Frequency(0.0, 0.0, 2.0), Frequency(0.0, 0.0, 0.0)) == cplx(0.0, 0.0));
  // sinc(1/2) = 2/pi
  cplx g = gram_entry(Frequency(0.5, 0.0, 0.0), Frequency(0.0, 0.0, 0.0));
  CHECK(g.real() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(g.imag() == 0.0);
  CHECK_THROWS_AS(gram_entry(Frequency({0.1, 0.2}, {0.0, 0.0}, 0.0), Frequency(0.0, 0.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("gram matrix of the harmonic scheme is the identity") {
  PerturbationScheme s = PerturbationScheme::harmonic(1, Truncation(2, 2));
  for (bool weighted : {false, true}) {
    SymMatrix G = gram_matrix(s, weighted);
    REQUIRE(G.n == 125);
    for (std::size_t i = 0; i < G.n; ++i) {
      for (std::size_t j = 0; j < G.n; ++j) {
        REQUIRE(G.at(i, j) == (i == j ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("gram matrix golden digest") {
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(2, 2), 0.05);
  SymMatrix G = gram_matrix(s, true);
  REQUIRE(G.n == 125);
  // symmetry is exact: entries are closed-form in the frequency difference
  for (std::size_t i = 0; i < G.n; ++i) {
    for (std::size_t j = i; j < G.n; ++j) {
      REQUIRE(G.at(i, j) == G.at(j, i));
    }
  }
  std::string blob;
  char ebuf[32];
  for (double v : G.a) {
    std::snprintf(ebuf, sizeof ebuf, "%.12e,", v);
    blob += ebuf;
  }
  CHECK(hex64(fnv1a64(blob)) == kGramDigest);
}

TEST_CASE("gram-sized operations refuse oversized truncations") {
  // (2*16+1)^2 * (2*3+1) = 7623 indices
  PerturbationScheme s = PerturbationScheme::harmonic(1, Truncation(16, 3));
  CHECK_THROWS_AS(gram_matrix(s, true), std::invalid_argument);
  CHECK_THROWS_AS(stability_constant(s), std::invalid_argument);
  CHECK_THROWS_AS(discrete_gram_matrix(s, GridSpec::reproducing(1, 8)), std::invalid_argument);
}

TEST_CASE("discrete gram matches brute-force grid inner products") {
  GridSpec grid = GridSpec::reproducing(1, 8);
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(1, 1), 0.1);
  SymMatrix G = discrete_gram_matrix(s, grid);
  std::vector<FrameIndex> idx = enumerate_indices(1, s.trunc);
  REQUIRE(G.n == idx.size());

  auto atom = [&](std::size_t z, std::size_t ix, std::size_t ixi, std::size_t it) {
    Frequency w = tilde_map(s, idx[z]);
    double ph = kTwoPi * (w.b[0] * grid.coord(0, ix) + w.beta[0] * grid.coord(1, ixi) +
                          w.omega * grid.coord(2, it));
    return cplx(std::cos(ph), std::sin(ph));
  };
  for (std::size_t zi = 0; zi < G.n; ++zi) {
    for (std::size_t wj = zi; wj < G.n; ++wj) {
      cplx acc = 0.0;
      for (std::size_t ix = 0; ix < 8; ++ix) {
        for (std::size_t ixi = 0; ixi < 8; ++ixi) {
          for (std::size_t it = 0; it < 8; ++it) {
            acc += atom(wj, ix, ixi, it) * std::conj(atom(zi, ix, ixi, it));
          }
        }
      }
      cplx expect = kHaarScale * acc * grid.cell_volume();
      REQUIRE(std::abs(expect - cplx(G.at(zi, wj), 0.0)) < 1e-12);
    }
  }

  // harmonic atoms are exactly orthonormal in the grid inner product
  SymMatrix H = discrete_gram_matrix(PerturbationScheme::harmonic(1, Truncation(1, 1)), grid);
  for (std::size_t i = 0; i < H.n; ++i) {
    for (std::size_t j = 0; j < H.n; ++j) {
      REQUIRE(H.at(i, j) == (i == j ? 1.0 : 0.0));
    }
  }

  CHECK_THROWS_AS(
      discrete_gram_matrix(s, GridSpec::over(1, {Interval{0.0, 1.0}, Interval{-0.5, 0.5},
                                                 Interval{-0.25, 0.25}},
                                             {8, 8, 8})),
      std::invalid_argument);
}

TEST_CASE("stability constant") {
  Truncation t(2, 2);
  CHECK(stability_constant(PerturbationScheme::harmonic(1, t)) == 0.0);

  // single perturbed noncentral slot: the difference Gram is diagonal with
  // five equal entries, so the top eigenvalue is available in closed form
  PerturbationScheme s = PerturbationScheme::harmonic(1, t);
  s.b[s.b.size() / 2] = {0.1};
  CHECK(stability_constant(s) == 2.0 * (1.0 - sinc(0.1)));

  double t001 = stability_constant(PerturbationScheme::alternating(1, t, 0.01));
  double t005 = stability_constant(PerturbationScheme::alternating(1, t, 0.05));
  double t01 = stability_constant(PerturbationScheme::alternating(1, t, 0.1));
  CHECK(t001 == doctest::Approx(kStabM001).epsilon(1e-13));
  CHECK(t005 == doctest::Approx(kStabM005).epsilon(1e-13));
  CHECK(t01 == doctest::Approx(kStabM01).epsilon(1e-13));
  CHECK(t001 < t005);
  CHECK(t005 < t01);
}

TEST_CASE("bound envelope") {
  Envelope e = bound_envelope(0.1, 0.01, 1);
  CHECK(e.lo == doctest::Approx((1.0 - 0.1 / 1.9) * 0.81).epsilon(1e-14));
  CHECK(e.hi == doctest::Approx((1.0 + 0.1 / 1.9) * 1.21).epsilon(1e-14));
  CHECK(!e.degenerate_lower);

  Envelope zero = bound_envelope(0.0, 0.0, 1);
  CHECK(zero.lo == 1.0);
  CHECK(zero.hi == 1.0);

  Envelope deg = bound_envelope(0.1, 1.1, 1);
  CHECK(deg.lo == 0.0);
  CHECK(deg.degenerate_lower);
  double root = std::sqrt(1.1);
  CHECK(deg.hi == doctest::Approx((1.0 + 0.1 / 1.9) * (1.0 + root) * (1.0 + root))
                      .epsilon(1e-14));

  CHECK_THROWS_AS(bound_envelope(-0.1, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(bound_envelope(2.0, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(bound_envelope(0.1, -0.01, 1), std::domain_error);
}

TEST_CASE("frame bounds of the harmonic scheme are exactly one") {
  BoundsReport r = frame_bounds(PerturbationScheme::harmonic(1, Truncation(3, 3)), true);
  CHECK(r.A_est == 1.0);
  CHECK(r.B_est == 1.0);
  CHECK(r.C_M == 0.0);
  CHECK(r.T_est == 0.0);
  CHECK(r.condition_number == 1.0);
  CHECK(r.envelope_lo == 1.0);
  CHECK(r.envelope_hi == 1.0);
  CHECK(!r.degenerate_lower);
  CHECK(r.weighted);
  CHECK(r.deviation == 0.0);
  CHECK(r.K_xy == 3);
  CHECK(r.K_t == 3);
  CHECK(r.index_count == 343);
}

TEST_CASE("frame bounds sit inside the envelope") {
  for (double M : {0.01, 0.05, 0.1}) {
    CAPTURE(M);
    BoundsReport r = frame_bounds(PerturbationScheme::alternating(1, Truncation(4, 4), M), true);
    CHECK(r.envelope_lo <= r.A_est);
    CHECK(r.A_est <= r.B_est);
    CHECK(r.B_est <= r.envelope_hi);
    CHECK(r.A_est > 0.0);
    CHECK(r.condition_number == doctest::Approx(r.B_est / r.A_est).epsilon(1e-12));
    CHECK(r.deviation == doctest::Approx(M).epsilon(1e-13));
  }
  BoundsReport u =
      frame_bounds(PerturbationScheme::uniform_omega_shift(1, Truncation(3, 3), 0.1), true);
  CHECK(u.envelope_lo <= u.A_est);
  CHECK(u.B_est <= u.envelope_hi);
}

TEST_CASE("synthesize reproduces a single atom") {
  GridSpec grid = GridSpec::reproducing(1, 16);
  PerturbationScheme s = PerturbationScheme::alternating(1, Truncation(1, 1), 0.1);
  std::vector<FrameIndex> idx = enumerate_indices(1, s.trunc);
  CoefficientTable tab{1, s.trunc, Convention::kHaarNormalized,
                       std::vector<cplx>(idx.size(), 0.0)};
  std::size_t pick = 7;
  tab.values[pick] = cplx(1.0, 0.0);

  GridFunction f = synthesize(tab, s, grid);
  Frequency w = tilde_map(s, idx[pick]);
  for (std::size_t ix = 0; ix < 16; ++ix) {
    for (std::size_t ixi = 0; ixi < 16; ++ixi) {
      for (std::size_t it = 0; it < 16; ++it) {
        double ph = kTwoPi * (w.b[0] * grid.coord(0, ix) + w.beta[0] * grid.coord(1, ixi) +
                              w.omega * grid.coord(2, it));
        cplx expect = std::sqrt(2.0) * cplx(std::cos(ph), std::sin(ph));
        REQUIRE(std::abs(f.values[(ix * 16 + ixi) * 16 + it] - expect) < 1e-14);
      }
    }
  }
  // the evaluator extends off-grid
  REQUIRE(f.evaluator != nullptr);
  Point p(0.111, -0.222, 0.05);
  double ph = kTwoPi * (w.b[0] * p.x[0] + w.beta[0] * p.xi[0] + w.omega * p.t);
  CHECK(std::abs((*f.evaluator)(p)-std::sqrt(2.0) * cplx(std::cos(ph), std::sin(ph))) < 1e-14);

  CoefficientTable wrong{1, Truncation(2, 1), Convention::kHaarNormalized,
                         std::vector<cplx>(45, 0.0)};
  CHECK_THROWS_AS(synthesize(wrong, s, grid), std::invalid_argument);
  CoefficientTable short_tab{1, s.trunc, Convention::kHaarNormalized,
                             std::vector<cplx>(5, 0.0)};
  CHECK_THROWS_AS(synthesize(short_tab, s, grid), std::invalid_argument);
}

TEST_CASE("round trip through analysis and reconstruction") {
  GridSpec grid = GridSpec::reproducing(1, 32);

  // a harmonic trig polynomial inside the truncation
  std::map<std::vector<int>, cplx> keys;
  keys[{1, 0, 2}] = cplx(1.0, 0.0);
  keys[{0, 1, 0}] = cplx(0.0, -1.5);
  keys[{-2, 2, -4}] = cplx(0.4, 0.4);
  GridFunction f = trig_poly(grid, keys);
  PerturbationScheme harm = PerturbationScheme::harmonic(1, Truncation(2, 2));
  CoefficientTable c = analysis(f, harm);

  auto rel_err = [](const GridFunction& got, const GridFunction& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < want.values.size(); ++i) {
      num += std::norm(got.values[i] - want.values[i]);
      den += std::norm(want.values[i]);
    }
    return std::sqrt(num / den);
  };

  ReconstructResult gs = reconstruct(c, harm, grid, ReconstructMethod::kGramSolve, 1e-12, 50);
  CHECK(rel_err(gs.f, f) < 1e-12);
  CHECK(gs.iterations == 0);
  ReconstructResult fi =
      reconstruct(c, harm, grid, ReconstructMethod::kFrameIteration, 1e-12, 50);
  CHECK(rel_err(fi.f, f) < 1e-12);
  CHECK(fi.iterations >= 1);

  // a function built from the perturbed atoms themselves
  PerturbationScheme alt = PerturbationScheme::alternating(1, Truncation(2, 2), 0.05);
  std::vector<FrameIndex> idx = enumerate_indices(1, alt.trunc);
  CoefficientTable g{1, alt.trunc, Convention::kHaarNormalized,
                     std::vector<cplx>(idx.size(), 0.0)};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (cplx& v : g.values) v = cplx(u(rng), u(rng));
  GridFunction fp = synthesize(g, alt, grid);
  CoefficientTable cp = analysis(fp, alt);

  ReconstructResult gs2 = reconstruct(cp, alt, grid, ReconstructMethod::kGramSolve, 1e-12, 50);
  CHECK(rel_err(gs2.f, fp) < 1e-12);
  ReconstructResult fi2 =
      reconstruct(cp, alt, grid, ReconstructMethod::kFrameIteration, 1e-10, 500);
  CHECK(rel_err(fi2.f, fp) < 1e-8);
  CHECK(fi2.iterations > 1);
  CHECK(fi2.iterations < 200);
  CHECK(fi2.residual < 1e-10);

  // zero coefficients give the zero function
  CoefficientTable zero{1, alt.trunc, Convention::kHaarNormalized,
                        std::vector<cplx>(idx.size(), 0.0)};
  ReconstructResult z = reconstruct(zero, alt, grid, ReconstructMethod::kGramSolve, 1e-12, 50);
  for (const cplx& v : z.f.values) REQUIRE(v == cplx(0.0, 0.0));
}

TEST_CASE("reconstruction failure modes") {
  GridSpec grid = GridSpec::reproducing(1, 32);
  PerturbationScheme alt = PerturbationScheme::alternating(1, Truncation(2, 2), 0.05);
  std::vector<FrameIndex> idx = enumerate_indices(1, alt.trunc);
  CoefficientTable g{1, alt.trunc, Convention::kHaarNormalized,
                     std::vector<cplx>(idx.size(), 0.0)};
  g.values[0] = cplx(1.0, 0.0);
  GridFunction fp = synthesize(g, alt, grid);
  CoefficientTable cp = analysis(fp, alt);

  // not enough iterations to reach the tolerance
  CHECK_THROWS_AS(reconstruct(cp, alt, grid, ReconstructMethod::kFrameIteration, 1e-14, 2),
                  numerical_error);

  // two coinciding atoms make the grid Gram exactly singular
  PerturbationScheme dup = PerturbationScheme::harmonic(1, Truncation(1, 1));
  dup.b[0] = {0.3};
  dup.b[1] = {0.3};
  dup.validate();
  std::vector<FrameIndex> didx = enumerate_indices(1, dup.trunc);
  CoefficientTable dc{1, dup.trunc, Convention::kHaarNormalized,
                      std::vector<cplx>(didx.size(), 0.0)};
  dc.values[0] = cplx(1.0, 0.0);
  CHECK_THROWS_AS(reconstruct(dc, dup, grid, ReconstructMethod::kGramSolve, 1e-12, 50),
                  numerical_error);

  // table/scheme shape mismatches
  CoefficientTable wrong{1, Truncation(1, 1), Convention::kHaarNormalized,
                         std::vector<cplx>(27, 0.0)};
  CHECK_THROWS_AS(reconstruct(wrong, alt, grid, ReconstructMethod::kGramSolve, 1e-12, 50),
                  std::invalid_argument);
}
