#include "heisenframe/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace heisenframe {

namespace {

std::size_t side(int K) { return 2 * static_cast<std::size_t>(K) + 1; }

std::size_t row_of(const std::vector<long>& v, int K) {
  std::size_t s = side(K);
  std::size_t r = 0;
  for (long c : v) {
    if (c < -K || c > K) {
      throw std::invalid_argument("frame index outside the truncation");
    }
    r = r * s + static_cast<std::size_t>(c + K);
  }
  return r;
}

std::vector<long> decode_row(std::size_t row, std::size_t n, int K) {
  std::size_t s = side(K);
  std::vector<long> v(n);
  for (std::size_t i = n; i-- > 0;) {
    v[i] = static_cast<long>(row % s) - K;
    row /= s;
  }
  return v;
}

std::vector<double> to_double(const std::vector<long>& v) {
  return std::vector<double>(v.begin(), v.end());
}

double l2_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

std::vector<cplx> sym_matvec(const SymMatrix& A, const std::vector<cplx>& x) {
  std::vector<cplx> y(A.n, cplx(0.0));
  for (std::size_t i = 0; i < A.n; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < A.n; ++j) acc += A.at(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace

Truncation::Truncation(int kxy, int kt) : K_xy(kxy), K_t(kt) {
  if (kxy < 1 || kt < 1) {
    throw std::invalid_argument("Truncation: K_xy and K_t must be positive");
  }
}

std::size_t Truncation::pair_count(std::size_t n) const {
  std::size_t a = 1;
  for (std::size_t i = 0; i < 2 * n; ++i) a *= side(K_xy);
  return a;
}

std::size_t Truncation::index_count(std::size_t n) const {
  return pair_count(n) * side(K_t);
}

bool Truncation::contains(const FrameIndex& z) const {
  for (long c : z.a) {
    if (c < -K_xy || c > K_xy) return false;
  }
  for (long c : z.alpha) {
    if (c < -K_xy || c > K_xy) return false;
  }
  return z.k >= -K_t && z.k <= K_t;
}

std::vector<FrameIndex> enumerate_indices(std::size_t n, const Truncation& t) {
  std::size_t A = 1;
  for (std::size_t i = 0; i < n; ++i) A *= side(t.K_xy);
  std::vector<FrameIndex> out;
  out.reserve(t.index_count(n));
  for (std::size_t ar = 0; ar < A; ++ar) {
    std::vector<long> av = decode_row(ar, n, t.K_xy);
    for (std::size_t br = 0; br < A; ++br) {
      std::vector<long> bv = decode_row(br, n, t.K_xy);
      for (long k = -t.K_t; k <= t.K_t; ++k) {
        out.push_back(FrameIndex{av, bv, k});
      }
    }
  }
  return out;
}

PerturbationScheme PerturbationScheme::harmonic(std::size_t n,
                                                const Truncation& t) {
  PerturbationScheme s;
  s.n = n;
  s.trunc = t;
  std::size_t A = 1;
  for (std::size_t i = 0; i < n; ++i) A *= side(t.K_xy);
  s.b.resize(A);
  s.beta.resize(A);
  for (std::size_t r = 0; r < A; ++r) {
    s.b[r] = to_double(decode_row(r, n, t.K_xy));
    s.beta[r] = s.b[r];
  }
  s.omega.assign(side(t.K_t), 0.0);
  for (long k = -t.K_t; k <= t.K_t; ++k) {
    if (k != 0) s.omega[static_cast<std::size_t>(k + t.K_t)] = 2.0 * k;
  }
  s.validate();
  return s;
}

PerturbationScheme PerturbationScheme::alternating(std::size_t n,
                                                   const Truncation& t,
                                                   double M) {
  auto parity = [](long v) { return v % 2 == 0 ? 1.0 : -1.0; };
  PerturbationScheme s = harmonic(n, t);
  std::size_t A = s.b.size();
  for (std::size_t r = 0; r < A; ++r) {
    std::vector<long> av = decode_row(r, n, t.K_xy);
    for (std::size_t i = 0; i < n; ++i) {
      s.b[r][i] = av[i] + M * parity(av[i]);
      s.beta[r][i] = av[i] - M * parity(av[i]);
    }
  }
  for (long k = -t.K_t; k <= t.K_t; ++k) {
    if (k != 0) s.omega[static_cast<std::size_t>(k + t.K_t)] = 2.0 * k + M * parity(k);
  }
  s.validate();
  return s;
}

PerturbationScheme PerturbationScheme::uniform_omega_shift(std::size_t n,
                                                           const Truncation& t,
                                                           double shift) {
  PerturbationScheme s = harmonic(n, t);
  for (long k = -t.K_t; k <= t.K_t; ++k) {
    if (k != 0) s.omega[static_cast<std::size_t>(k + t.K_t)] = 2.0 * k + shift;
  }
  s.validate();
  return s;
}

PerturbationScheme PerturbationScheme::random(std::size_t n,
                                              const Truncation& t, double M,
                                              std::uint64_t seed) {
  PerturbationScheme s = harmonic(n, t);
  std::mt19937_64 rng(seed);
  // 53-bit canonical doubles in [0,1); bit-reproducible across platforms.
  auto draw = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  auto delta = [&] { return M * (2.0 * draw() - 1.0); };
  for (auto& row : s.b) {
    for (double& c : row) c += delta();
  }
  for (auto& row : s.beta) {
    for (double& c : row) c += delta();
  }
  for (long k = -t.K_t; k <= t.K_t; ++k) {
    if (k != 0) s.omega[static_cast<std::size_t>(k + t.K_t)] += delta();
  }
  s.validate();
  return s;
}

const std::vector<double>& PerturbationScheme::b_of(
    const std::vector<long>& a) const {
  return b[row_of(a, trunc.K_xy)];
}

const std::vector<double>& PerturbationScheme::beta_of(
    const std::vector<long>& alpha) const {
  return beta[row_of(alpha, trunc.K_xy)];
}

double PerturbationScheme::omega_of(long k) const {
  if (k < -trunc.K_t || k > trunc.K_t || k == 0) {
    throw std::invalid_argument("omega_of: k outside the truncation or zero");
  }
  return omega[static_cast<std::size_t>(k + trunc.K_t)];
}

void PerturbationScheme::validate() const {
  std::size_t A = 1;
  for (std::size_t i = 0; i < n; ++i) A *= side(trunc.K_xy);
  if (b.size() != A || beta.size() != A || omega.size() != side(trunc.K_t)) {
    throw std::invalid_argument("PerturbationScheme: table shapes do not match the truncation");
  }
  for (const auto& row : b) {
    if (row.size() != n) throw std::invalid_argument("PerturbationScheme: b row has wrong dimension");
  }
  for (const auto& row : beta) {
    if (row.size() != n) throw std::invalid_argument("PerturbationScheme: beta row has wrong dimension");
  }
  for (long k = -trunc.K_t; k <= trunc.K_t; ++k) {
    if (k != 0 && omega[static_cast<std::size_t>(k + trunc.K_t)] == 0.0) {
      throw numerical_error("scheme is not a frame: omega_" + std::to_string(k) + " = 0");
    }
  }
  double M = scheme_deviation(*this);
  if (M >= 2.0 / static_cast<double>(n)) {
    throw numerical_error("scheme is not a frame: deviation M = " + format_g17(M) +
                          " >= 2/n");
  }
}

Frequency tilde_map(const PerturbationScheme& s, const FrameIndex& z) {
  if (z.a.size() != s.n || z.alpha.size() != s.n || !s.trunc.contains(z)) {
    throw std::invalid_argument("tilde_map: index outside the truncation");
  }
  if (z.k == 0) {
    return Frequency(s.b_of(z.a), s.beta_of(z.alpha), 0.0);
  }
  return Frequency(to_double(z.a), to_double(z.alpha), s.omega_of(z.k));
}

Frequency harmonic_frequency(const FrameIndex& z) {
  return Frequency(to_double(z.a), to_double(z.alpha), 2.0 * z.k);
}

double scheme_deviation(const PerturbationScheme& s) {
  double M = 0.0;
  std::size_t A = s.b.size();
  for (std::size_t r = 0; r < A; ++r) {
    std::vector<long> av = decode_row(r, s.n, s.trunc.K_xy);
    for (std::size_t i = 0; i < s.n; ++i) {
      M = std::max(M, std::abs(s.b[r][i] - av[i]));
      M = std::max(M, std::abs(s.beta[r][i] - av[i]));
    }
  }
  for (long k = -s.trunc.K_t; k <= s.trunc.K_t; ++k) {
    if (k != 0) {
      M = std::max(M, std::abs(s.omega[static_cast<std::size_t>(k + s.trunc.K_t)] - 2.0 * k));
    }
  }
  return M;
}

double weight_distortion_bound(double M, std::size_t n) {
  if (M < 0.0) throw std::domain_error("weight_distortion_bound: M must be nonnegative");
  double nm = static_cast<double>(n) * M;
  if (nm >= 2.0) throw std::domain_error("weight_distortion_bound: M must be < 2/n");
  return nm / (2.0 - nm);
}

CoefficientTable analysis(const GridFunction& f, const PerturbationScheme& s,
                          Convention convention) {
  s.validate();
  if (f.spec.n != s.n) throw std::invalid_argument("analysis: dimension mismatch");
  std::size_t P = s.trunc.pair_count(s.n);
  std::size_t S = side(s.trunc.K_t);
  std::size_t A = s.b.size();
  int Kt = s.trunc.K_t;

  CoefficientTable table;
  table.n = s.n;
  table.trunc = s.trunc;
  table.convention = convention;
  table.values.assign(P * S, cplx(0.0));

  // k != 0 shells share integer noncentral frequencies, so one factored
  // transform covers them all.
  std::vector<std::vector<double>> lists(2 * s.n + 1);
  std::vector<double> ints;
  for (int a = -s.trunc.K_xy; a <= s.trunc.K_xy; ++a) ints.push_back(a);
  for (std::size_t i = 0; i < 2 * s.n; ++i) lists[i] = ints;
  for (long k = -Kt; k <= Kt; ++k) {
    if (k != 0) lists[2 * s.n].push_back(s.omega[static_cast<std::size_t>(k + Kt)]);
  }
  std::vector<cplx> shells = fourier_grid(f, lists);

  // The k = 0 shell has scheme-dependent frequencies; finish the central
  // transform once and probe each pair.
  Tensor slice0 = partial_fourier_t(f, 0.0);
  std::vector<cplx> zero_shell(P);
  parallel_for(P, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const std::vector<double>& bb = s.b[p / A];
      const std::vector<double>& be = s.beta[p % A];
      zero_shell[p] = slice_fourier_at(slice0, bb, be);
    }
  });

  double scale = convention == Convention::kHaarNormalized ? std::sqrt(kHaarScale) : 1.0;
  std::size_t nshell = 2 * static_cast<std::size_t>(Kt);
  for (std::size_t p = 0; p < P; ++p) {
    for (long k = -Kt; k <= Kt; ++k) {
      std::size_t slot = p * S + static_cast<std::size_t>(k + Kt);
      cplx v;
      if (k == 0) {
        v = zero_shell[p];
      } else {
        std::size_t pos = static_cast<std::size_t>(k < 0 ? k + Kt : k + Kt - 1);
        v = shells[p * nshell + pos];
      }
      table.values[slot] = scale * v;
    }
  }
  return table;
}

QuadraticForms quadratic_forms(const GridFunction& f,
                               const PerturbationScheme& s) {
  s.validate();
  if (f.spec.n != s.n) throw std::invalid_argument("quadratic_forms: dimension mismatch");
  std::size_t P = s.trunc.pair_count(s.n);
  std::size_t A = s.b.size();
  int Kt = s.trunc.K_t;

  Tensor slice0 = partial_fourier_t(f, 0.0);
  std::vector<double> qterms(P);
  parallel_for(P, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      qterms[p] = std::norm(slice_fourier_at(slice0, s.b[p / A], s.beta[p % A]));
    }
  });
  QuadraticForms out;
  for (double t : qterms) out.q += t;

  std::vector<std::vector<double>> lists(2 * s.n + 1);
  std::vector<double> ints;
  for (int a = -s.trunc.K_xy; a <= s.trunc.K_xy; ++a) ints.push_back(a);
  for (std::size_t i = 0; i < 2 * s.n; ++i) lists[i] = ints;
  std::vector<long> ks;
  for (long k = -Kt; k <= Kt; ++k) {
    if (k != 0) {
      lists[2 * s.n].push_back(s.omega[static_cast<std::size_t>(k + Kt)]);
      ks.push_back(k);
    }
  }
  std::vector<cplx> shells = fourier_grid(f, lists);
  std::vector<double> shell_sum(ks.size(), 0.0);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t j = 0; j < ks.size(); ++j) {
      shell_sum[j] += std::norm(shells[p * ks.size() + j]);
    }
  }
  for (std::size_t j = 0; j < ks.size(); ++j) {
    double w = std::pow(std::abs(2.0 * ks[j] / s.omega[static_cast<std::size_t>(ks[j] + Kt)]),
                        static_cast<double>(s.n));
    out.r += w * shell_sum[j];
    out.phi += shell_sum[j];
  }
  out.p = out.q + out.r;
  return out;
}

cplx gram_entry(const Frequency& u, const Frequency& v) {
  if (u.b.size() != v.b.size()) {
    throw std::invalid_argument("gram_entry: dimension mismatch");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < u.b.size(); ++i) {
    prod *= sinc(u.b[i] - v.b[i]);
    prod *= sinc(u.beta[i] - v.beta[i]);
  }
  prod *= 0.5 * sinc(0.5 * (u.omega - v.omega));
  return cplx(prod, 0.0);
}

namespace {

struct AtomSet {
  std::vector<Frequency> freqs;
  std::vector<double> sqrt_w;
};

AtomSet tilde_atoms(const PerturbationScheme& s, bool weighted) {
  std::vector<FrameIndex> idx = enumerate_indices(s.n, s.trunc);
  AtomSet set;
  set.freqs.reserve(idx.size());
  set.sqrt_w.assign(idx.size(), 1.0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    set.freqs.push_back(tilde_map(s, idx[i]));
    if (weighted && idx[i].k != 0) {
      double w = std::pow(std::abs(2.0 * idx[i].k / s.omega_of(idx[i].k)),
                          static_cast<double>(s.n));
      set.sqrt_w[i] = std::sqrt(w);
    }
  }
  return set;
}

}  // namespace

SymMatrix gram_matrix(const PerturbationScheme& s, bool weighted) {
  s.validate();
  std::size_t m = s.trunc.index_count(s.n);
  if (m > 5000) {
    throw std::invalid_argument("gram_matrix: " + std::to_string(m) +
                                " indices exceed the dense-solve budget");
  }
  AtomSet set = tilde_atoms(s, weighted);
  SymMatrix G = SymMatrix::zero(m);
  parallel_for(m, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        G.at(i, j) = kHaarScale * set.sqrt_w[i] * set.sqrt_w[j] *
                     gram_entry(set.freqs[i], set.freqs[j]).real();
      }
    }
  });
  return G;
}

namespace {

// Midpoint-rule inner product of two exponentials along one centered axis,
// in closed form: (len/N) sin(pi d len) / sin(pi d len / N), with the exact
// limits at the removable and aliased points.
double discrete_axis_factor(double d, double len, std::size_t N) {
  double r = d * len;
  double rr = std::round(r);
  if (r == rr) {
    long m = std::lround(rr);
    long Nl = static_cast<long>(N);
    if (m % Nl == 0) {
      long q = m / Nl;
      bool neg = (q % 2 != 0) && (N % 2 == 0);
      return neg ? -len : len;
    }
    return 0.0;
  }
  double Nd = static_cast<double>(N);
  return (len / Nd) * std::sin(kPi * r) / std::sin(kPi * r / Nd);
}

double freq_component(const Frequency& f, std::size_t axis, std::size_t n) {
  if (axis < n) return f.b[axis];
  if (axis < 2 * n) return f.beta[axis - n];
  return f.omega;
}

}  // namespace

SymMatrix discrete_gram_matrix(const PerturbationScheme& s,
                               const GridSpec& grid) {
  s.validate();
  if (grid.n != s.n) throw std::invalid_argument("discrete_gram_matrix: dimension mismatch");
  for (std::size_t ax = 0; ax < grid.axes(); ++ax) {
    double len = grid.box[ax].length();
    if (std::abs(grid.box[ax].lo + grid.box[ax].hi) > 1e-12 * std::max(1.0, len)) {
      throw std::invalid_argument("discrete_gram_matrix: grid box must be centered");
    }
  }
  std::size_t m = s.trunc.index_count(s.n);
  if (m > 5000) {
    throw std::invalid_argument("discrete_gram_matrix: " + std::to_string(m) +
                                " indices exceed the dense-solve budget");
  }
  AtomSet set = tilde_atoms(s, false);
  SymMatrix G = SymMatrix::zero(m);
  parallel_for(m, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double prod = kHaarScale;
        for (std::size_t ax = 0; ax < grid.axes(); ++ax) {
          double d = freq_component(set.freqs[i], ax, s.n) -
                     freq_component(set.freqs[j], ax, s.n);
          prod *= discrete_axis_factor(d, grid.box[ax].length(), grid.counts[ax]);
        }
        G.at(i, j) = prod;
      }
    }
  });
  return G;
}

double stability_constant(const PerturbationScheme& s) {
  s.validate();
  std::vector<FrameIndex> idx = enumerate_indices(s.n, s.trunc);
  std::size_t m = idx.size();
  if (m > 5000) {
    throw std::invalid_argument("stability_constant: " + std::to_string(m) +
                                " indices exceed the dense-solve budget");
  }
  std::vector<Frequency> tld(m), har(m);
  for (std::size_t i = 0; i < m; ++i) {
    tld[i] = tilde_map(s, idx[i]);
    har[i] = harmonic_frequency(idx[i]);
  }
  SymMatrix D = SymMatrix::zero(m);
  parallel_for(m, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        D.at(i, j) = gram_entry(tld[i], tld[j]).real() -
                     gram_entry(har[i], tld[j]).real() -
                     gram_entry(tld[i], har[j]).real() +
                     gram_entry(har[i], har[j]).real();
      }
    }
  });
  std::vector<double> vals = eigh_values(D);
  return kHaarScale * std::max(0.0, vals.back());
}

Envelope bound_envelope(double M, double T, std::size_t n) {
  if (T < 0.0) throw std::domain_error("bound_envelope: T must be nonnegative");
  double C = weight_distortion_bound(M, n);
  double rt = std::sqrt(T);
  Envelope env;
  double lo_raw = (1.0 - C) * (1.0 - rt) * (1.0 - rt);
  env.degenerate_lower = rt >= 1.0 || lo_raw <= 0.0;
  if (M == 0.0 && T == 0.0) env.degenerate_lower = false;
  env.lo = env.degenerate_lower ? 0.0 : lo_raw;
  env.hi = (1.0 + C) * (1.0 + rt) * (1.0 + rt);
  return env;
}

BoundsReport frame_bounds(const PerturbationScheme& s, bool weighted) {
  SymMatrix G = gram_matrix(s, weighted);
  EigDecomposition eig = eigh(G);
  double A = eig.values.front();
  double B = eig.values.back();

  // Power iteration can only undershoot the top eigenvalue, so each check is
  // one-sided: a violation means the dense solve itself is wrong.
  double scale = std::max({1.0, std::abs(A), std::abs(B)});
  double rq = rayleigh_max(G, 300);
  if (rq > B + 1e-12 * scale) {
    throw numerical_error("frame_bounds: power iteration exceeds the top eigenvalue");
  }
  SymMatrix H = SymMatrix::zero(G.n);
  for (std::size_t i = 0; i < G.n; ++i) {
    for (std::size_t j = 0; j < G.n; ++j) H.at(i, j) = -G.at(i, j);
    H.at(i, i) += B;
  }
  double rq2 = rayleigh_max(H, 300);
  if (B - rq2 < A - 1e-12 * scale) {
    throw numerical_error("frame_bounds: shifted power iteration undercuts the bottom eigenvalue");
  }

  double M = scheme_deviation(s);
  double T = stability_constant(s);
  Envelope env = bound_envelope(M, T, s.n);

  BoundsReport rep;
  rep.A_est = A;
  rep.B_est = B;
  rep.C_M = weight_distortion_bound(M, s.n);
  rep.T_est = T;
  rep.envelope_lo = env.lo;
  rep.envelope_hi = env.hi;
  rep.degenerate_lower = env.degenerate_lower;
  rep.condition_number = A > 0.0 ? B / A : std::numeric_limits<double>::infinity();
  rep.deviation = M;
  rep.weighted = weighted;
  rep.K_xy = s.trunc.K_xy;
  rep.K_t = s.trunc.K_t;
  rep.index_count = s.trunc.index_count(s.n);
  return rep;
}

namespace {

// out[rest, node] = sum_f e^{+2 pi i freq_f coord_node} in[f, rest]; peeling
// the leading coefficient axis and appending the node axis keeps the result
// row major in grid order after all noncentral axes are processed.
std::vector<cplx> synth_contract_axis(const std::vector<cplx>& in,
                                      const std::vector<double>& freqs,
                                      const std::vector<double>& coords) {
  std::size_t F = freqs.size();
  std::size_t rest = in.size() / F;
  std::size_t Nn = coords.size();
  std::vector<cplx> w(F * Nn);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t i = 0; i < Nn; ++i) {
      w[f * Nn + i] = std::polar(1.0, kTwoPi * freqs[f] * coords[i]);
    }
  }
  std::vector<cplx> out(rest * Nn);
  for (std::size_t r = 0; r < rest; ++r) {
    for (std::size_t i = 0; i < Nn; ++i) {
      cplx acc = 0.0;
      for (std::size_t f = 0; f < F; ++f) acc += w[f * Nn + i] * in[f * rest + r];
      out[r * Nn + i] = acc;
    }
  }
  return out;
}

}  // namespace

GridFunction synthesize(const CoefficientTable& g, const PerturbationScheme& s,
                        const GridSpec& target) {
  s.validate();
  if (g.n != s.n || target.n != s.n || !(g.trunc == s.trunc)) {
    throw std::invalid_argument("synthesize: table and scheme do not match");
  }
  std::size_t P = s.trunc.pair_count(s.n);
  std::size_t S = side(s.trunc.K_t);
  if (g.values.size() != P * S) {
    throw std::invalid_argument("synthesize: table has wrong size");
  }
  double scale =
      g.convention == Convention::kHaarNormalized ? std::sqrt(kHaarScale) : 1.0;
  std::size_t A = s.b.size();
  int Kt = s.trunc.K_t;

  std::size_t nodes = 1;
  for (std::size_t ax = 0; ax < 2 * s.n; ++ax) nodes *= target.counts[ax];
  std::size_t Nt = target.counts[2 * s.n];

  std::vector<std::vector<double>> coords(2 * s.n);
  for (std::size_t ax = 0; ax < 2 * s.n; ++ax) {
    for (std::size_t i = 0; i < target.counts[ax]; ++i) {
      coords[ax].push_back(target.coord(ax, i));
    }
  }

  GridFunction out;
  out.spec = target;
  out.values.assign(target.size(), cplx(0.0));

  // k = 0 shell: frequencies are scheme tables, no product structure, but the
  // field is constant along t.
  std::vector<cplx> field0(nodes, cplx(0.0));
  parallel_for(nodes, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> pt(2 * s.n);
    for (std::size_t q = lo; q < hi; ++q) {
      std::size_t rem = q;
      for (std::size_t ax = 2 * s.n; ax-- > 0;) {
        pt[ax] = coords[ax][rem % target.counts[ax]];
        rem /= target.counts[ax];
      }
      cplx acc = 0.0;
      for (std::size_t p = 0; p < P; ++p) {
        cplx c = g.values[p * S + static_cast<std::size_t>(Kt)];
        if (c == cplx(0.0)) continue;
        const std::vector<double>& bb = s.b[p / A];
        const std::vector<double>& be = s.beta[p % A];
        double phase = 0.0;
        for (std::size_t i = 0; i < s.n; ++i) phase += bb[i] * pt[i] + be[i] * pt[s.n + i];
        acc += c * std::polar(1.0, kTwoPi * phase);
      }
      field0[q] = scale * acc;
    }
  });
  parallel_for(nodes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t q = lo; q < hi; ++q) {
      for (std::size_t j = 0; j < Nt; ++j) out.values[q * Nt + j] += field0[q];
    }
  });

  // k != 0 shells factor over the noncentral axes.
  std::vector<double> ints;
  for (int a = -s.trunc.K_xy; a <= s.trunc.K_xy; ++a) ints.push_back(a);
  for (long k = -Kt; k <= Kt; ++k) {
    if (k == 0) continue;
    std::vector<cplx> cur(P);
    bool any = false;
    for (std::size_t p = 0; p < P; ++p) {
      cur[p] = g.values[p * S + static_cast<std::size_t>(k + Kt)];
      if (cur[p] != cplx(0.0)) any = true;
    }
    if (!any) continue;
    for (std::size_t ax = 0; ax < 2 * s.n; ++ax) {
      cur = synth_contract_axis(cur, ints, coords[ax]);
    }
    double omega = s.omega[static_cast<std::size_t>(k + Kt)];
    std::vector<cplx> tph(Nt);
    for (std::size_t j = 0; j < Nt; ++j) {
      tph[j] = scale * std::polar(1.0, kTwoPi * omega * target.coord(2 * s.n, j));
    }
    parallel_for(nodes, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = lo; q < hi; ++q) {
        cplx fq = cur[q];
        for (std::size_t j = 0; j < Nt; ++j) out.values[q * Nt + j] += tph[j] * fq;
      }
    });
  }

  auto terms = std::make_shared<std::vector<std::pair<Frequency, cplx>>>();
  std::vector<FrameIndex> idx = enumerate_indices(s.n, s.trunc);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (g.values[i] != cplx(0.0)) {
      terms->emplace_back(tilde_map(s, idx[i]), scale * g.values[i]);
    }
  }
  out.evaluator = std::make_shared<const std::function<cplx(const Point&)>>(
      [terms](const Point& p) {
        cplx acc = 0.0;
        for (const auto& [freq, c] : *terms) {
          double phase = dot(freq.b, p.x) + dot(freq.beta, p.xi) + freq.omega * p.t;
          acc += c * std::polar(1.0, kTwoPi * phase);
        }
        return acc;
      });
  return out;
}

ReconstructResult reconstruct(const CoefficientTable& c,
                              const PerturbationScheme& s,
                              const GridSpec& target, ReconstructMethod method,
                              double tol, int max_iter) {
  if (c.n != s.n || !(c.trunc == s.trunc)) {
    throw std::invalid_argument("reconstruct: table and scheme do not match");
  }
  if (c.values.size() != s.trunc.index_count(s.n)) {
    throw std::invalid_argument("reconstruct: table has wrong size");
  }

  ReconstructResult res;
  res.f.spec = target;
  res.f.values.assign(target.size(), cplx(0.0));

  double cnorm = l2_norm(c.values);
  if (cnorm == 0.0) {
    res.f.evaluator = std::make_shared<const std::function<cplx(const Point&)>>(
        [](const Point&) { return cplx(0.0); });
    return res;
  }

  CoefficientTable haar = c;
  if (haar.convention == Convention::kLebesgueRaw) {
    for (cplx& v : haar.values) v *= std::sqrt(kHaarScale);
    haar.convention = Convention::kHaarNormalized;
    cnorm = l2_norm(haar.values);
  }

  SymMatrix Gd = discrete_gram_matrix(s, target);
  EigDecomposition eig = eigh(Gd);
  double A = eig.values.front();
  double B = eig.values.back();
  double floor = 1e-12 * std::max(B, 1.0);
  if (A <= floor) {
    throw numerical_error("reconstruct: not a frame on the target grid (smallest Gram eigenvalue " +
                          format_g17(A) + ")");
  }

  if (method == ReconstructMethod::kGramSolve) {
    std::vector<cplx> g = solve_spd(eig, haar.values, floor);
    CoefficientTable gt;
    gt.n = s.n;
    gt.trunc = s.trunc;
    gt.convention = Convention::kHaarNormalized;
    gt.values = g;
    res.f = synthesize(gt, s, target);
    std::vector<cplx> back = sym_matvec(Gd, g);
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) err += std::norm(back[i] - haar.values[i]);
    res.residual = std::sqrt(err) / cnorm;
    res.iterations = 0;
    return res;
  }

  double tau = 2.0 / (A + B);
  CoefficientTable acc;
  acc.n = s.n;
  acc.trunc = s.trunc;
  acc.convention = Convention::kHaarNormalized;
  acc.values.assign(haar.values.size(), cplx(0.0));

  double rel = 1.0;
  for (int it = 0; it <= max_iter; ++it) {
    CoefficientTable cf = analysis(res.f, s, Convention::kHaarNormalized);
    double err = 0.0;
    for (std::size_t i = 0; i < cf.values.size(); ++i) {
      cf.values[i] = haar.values[i] - cf.values[i];
      err += std::norm(cf.values[i]);
    }
    rel = std::sqrt(err) / cnorm;
    if (rel <= tol) {
      res.iterations = it;
      res.residual = rel;
      return res;
    }
    if (it == max_iter) break;
    for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += tau * cf.values[i];
    res.f = synthesize(acc, s, target);
  }
  throw numerical_error("reconstruct: frame iteration stalled at residual " + format_g17(rel) +
                        " after " + std::to_string(max_iter) + " iterations");
}

}  // namespace heisenframe
