#include "heisenframe/representations.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

CharacterParams::CharacterParams(std::vector<double> b_, std::vector<double> beta_)
    : b(std::move(b_)), beta(std::move(beta_)) {
  if (b.size() != beta.size()) {
    throw std::invalid_argument("CharacterParams: b and beta dimensions differ");
  }
}

CharacterParams::CharacterParams(double b_, double beta_) : b{b_}, beta{beta_} {}

cplx char_value(const CharacterParams& c, const Point& p) {
  if (c.b.size() != p.n()) {
    throw std::invalid_argument("char_value: dimension mismatch");
  }
  double phase = dot(c.b, p.x) + dot(c.beta, p.xi);
  return std::polar(1.0, -kTwoPi * phase);
}

cplx char_coefficient(const GridFunction& f, const CharacterParams& c) {
  return fourier_at(f, Frequency(c.b, c.beta, 0.0));
}

SchrodingerRep::SchrodingerRep(double omega_) : omega(omega_) {
  if (omega == 0.0) {
    throw std::invalid_argument("SchrodingerRep: omega must be nonzero");
  }
}

WindowSpec WindowSpec::matched(const GridSpec& grid, double half_length,
                               std::size_t refine) {
  if (refine == 0) throw std::invalid_argument("WindowSpec: refine must be positive");
  double hx = grid.spacing(0);
  for (std::size_t i = 1; i < grid.n; ++i) {
    if (std::abs(grid.spacing(i) - hx) > 1e-12 * hx) {
      throw std::invalid_argument("WindowSpec: x-axes must share one spacing");
    }
  }
  double hw = hx / static_cast<double>(refine);
  double per = 2.0 * half_length / hw;
  double rounded = std::round(per);
  if (std::abs(per - rounded) > 1e-9 || rounded < 2.0) {
    throw std::invalid_argument("WindowSpec: window length not commensurate with grid spacing");
  }
  WindowSpec spec;
  spec.n = grid.n;
  spec.half_length = half_length;
  spec.per_axis = static_cast<std::size_t>(rounded);
  return spec;
}

std::size_t WindowSpec::size() const {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  return total;
}

Window sample_window(const WindowSpec& spec,
                     const std::function<cplx(const std::vector<double>&)>& phi) {
  Window w;
  w.spec = spec;
  w.values.resize(spec.size());
  std::vector<std::size_t> counts(spec.n, spec.per_axis);
  std::vector<double> y(spec.n);
  for_each_index(counts, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < spec.n; ++i) y[i] = spec.coord(idx[i]);
    w.values[flat] = phi(y);
  });
  return w;
}

double window_norm_sq(const Window& w) {
  double cell = std::pow(w.spec.spacing(), static_cast<double>(w.spec.n));
  double s = 0.0;
  for (const cplx& v : w.values) s += std::norm(v);
  return s * cell;
}

namespace {

// Periodic trigonometric interpolation kernel for N midpoint samples over one
// period: 1 at offset 0, 0 at the other sample offsets.
double dirichlet_kernel(std::size_t N, double u) {
  u -= std::round(u);
  if (std::abs(u) < 1e-15) return 1.0;
  double nd = static_cast<double>(N);
  return std::sin(nd * kPi * u) / (nd * std::tan(kPi * u));
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

// Shifts window samples along one axis: out(y) = in(y + shift). Checks that
// the samples pushed past the window edge are negligible.
void shift_axis(std::vector<cplx>& values, const WindowSpec& spec,
                std::size_t axis, double shift, double scale) {
  if (shift == 0.0) return;
  std::size_t N = spec.per_axis;
  double h = spec.spacing();
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= N;
  for (std::size_t i = axis + 1; i < spec.n; ++i) inner *= N;

  double steps = shift / h;
  long s = std::lround(steps);
  bool commensurate = std::abs(steps - static_cast<double>(s)) <= 1e-9;

  long strip = commensurate ? std::labs(s)
                            : static_cast<long>(std::ceil(std::abs(steps)));
  strip = std::min<long>(strip, static_cast<long>(N));
  double edge_tol = 1e-12 * std::max(scale, 1e-300);
  for (long e = 0; e < strip; ++e) {
    std::size_t j = shift > 0.0 ? N - 1 - static_cast<std::size_t>(e)
                                : static_cast<std::size_t>(e);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t r = 0; r < inner; ++r) {
        if (std::abs(values[(o * N + j) * inner + r]) > edge_tol) {
          throw std::invalid_argument("rho_apply: shifted support leaves the window");
        }
      }
    }
  }

  if (commensurate) {
    std::vector<cplx> line(N);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t r = 0; r < inner; ++r) {
        for (std::size_t i = 0; i < N; ++i) line[i] = values[(o * N + i) * inner + r];
        for (std::size_t i = 0; i < N; ++i) {
          long src = static_cast<long>(i) + s;
          values[(o * N + i) * inner + r] =
              (src >= 0 && src < static_cast<long>(N)) ? line[src] : cplx(0.0);
        }
      }
    }
    return;
  }

  // Trigonometric interpolation with period 2L.
  double period = 2.0 * spec.half_length;
  std::vector<double> weight(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    double target = spec.coord(i) + shift;
    for (std::size_t j = 0; j < N; ++j) {
      weight[i * N + j] = dirichlet_kernel(N, (target - spec.coord(j)) / period);
    }
  }
  std::vector<cplx> line(N);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < inner; ++r) {
      for (std::size_t j = 0; j < N; ++j) line[j] = values[(o * N + j) * inner + r];
      for (std::size_t i = 0; i < N; ++i) {
        cplx acc = 0.0;
        const double* wrow = weight.data() + i * N;
        for (std::size_t j = 0; j < N; ++j) acc += wrow[j] * line[j];
        values[(o * N + i) * inner + r] = acc;
      }
    }
  }
}

}  // namespace

Window rho_apply(const SchrodingerRep& r, const Point& p, const Window& phi) {
  if (p.n() != phi.spec.n) {
    throw std::invalid_argument("rho_apply: dimension mismatch");
  }
  Window out = phi;
  double scale = max_abs(phi.values);
  for (std::size_t axis = 0; axis < phi.spec.n; ++axis) {
    shift_axis(out.values, out.spec, axis, p.x[axis], scale);
  }

  double xdotxi = dot(p.x, p.xi);
  std::vector<std::size_t> counts(out.spec.n, out.spec.per_axis);
  std::vector<cplx> axis_phase(out.spec.per_axis);
  if (out.spec.n == 1) {
    for (std::size_t i = 0; i < out.spec.per_axis; ++i) {
      double phase = r.omega * (p.t + p.xi[0] * out.spec.coord(i) + 0.5 * xdotxi);
      axis_phase[i] = std::polar(1.0, -kTwoPi * phase);
    }
    for (std::size_t i = 0; i < out.spec.per_axis; ++i) out.values[i] *= axis_phase[i];
    return out;
  }
  for_each_index(counts, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    double xiy = 0.0;
    for (std::size_t i = 0; i < out.spec.n; ++i) xiy += p.xi[i] * out.spec.coord(idx[i]);
    double phase = r.omega * (p.t + xiy + 0.5 * xdotxi);
    out.values[flat] *= std::polar(1.0, -kTwoPi * phase);
  });
  return out;
}

Tensor rho_kernel(const SchrodingerRep& r, const GridFunction& f,
                  const WindowSpec& window) {
  if (f.spec.n != 1 || window.n != 1) {
    throw std::invalid_argument("rho_kernel: implemented for n = 1");
  }
  Tensor slice = partial_fourier_t(f, r.omega);
  std::size_t Nx = slice.counts[0];
  std::size_t Nxi = slice.counts[1];
  double hxi = slice.spacing(1);
  double xlen = slice.box[0].length();

  std::size_t Nw = window.per_axis;
  double hw = window.spacing();
  double L = window.half_length;

  // eta_sigma = omega * (y_i + u_j)/2 depends only on sigma = i + j.
  std::size_t nsigma = 2 * Nw - 1;
  std::vector<cplx> G(Nx * nsigma);
  parallel_for(nsigma, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t sig = lo; sig < hi; ++sig) {
      double s_val = 0.5 * (-2.0 * L + (static_cast<double>(sig) + 1.0) * hw);
      double eta = r.omega * s_val;
      for (std::size_t l = 0; l < Nx; ++l) {
        cplx acc = 0.0;
        const cplx* row = slice.values.data() + l * Nxi;
        for (std::size_t m = 0; m < Nxi; ++m) {
          acc += row[m] * std::polar(hxi, -kTwoPi * eta * slice.coord(1, m));
        }
        G[l * nsigma + sig] = acc;
      }
    }
  });

  // d = u - y = delta * hw; f vanishes beyond its x-extent.
  double xhalf = 0.5 * xlen;
  long dmax = std::min<long>(static_cast<long>(Nw) - 1,
                             static_cast<long>(std::ceil(xhalf / hw)) + 2);
  std::size_t ndelta = static_cast<std::size_t>(2 * dmax + 1);
  std::vector<double> interp(ndelta * Nx);
  for (long d = -dmax; d <= dmax; ++d) {
    double dval = static_cast<double>(d) * hw;
    for (std::size_t l = 0; l < Nx; ++l) {
      interp[static_cast<std::size_t>(d + dmax) * Nx + l] =
          dirichlet_kernel(Nx, (dval - slice.coord(0, l)) / xlen);
    }
  }
  std::vector<cplx> H(ndelta * nsigma);
  parallel_for(ndelta, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t di = lo; di < hi; ++di) {
      const double* crow = interp.data() + di * Nx;
      for (std::size_t sig = 0; sig < nsigma; ++sig) {
        cplx acc = 0.0;
        for (std::size_t l = 0; l < Nx; ++l) acc += crow[l] * G[l * nsigma + sig];
        H[di * nsigma + sig] = acc;
      }
    }
  });

  Tensor K;
  K.counts = {Nw, Nw};
  K.box = {{-L, L}, {-L, L}};
  K.values.assign(Nw * Nw, cplx(0.0));
  for (std::size_t i = 0; i < Nw; ++i) {
    for (std::size_t j = 0; j < Nw; ++j) {
      long d = static_cast<long>(j) - static_cast<long>(i);
      if (d < -dmax || d > dmax) continue;
      double dval = static_cast<double>(d) * hw;
      if (std::abs(dval) >= xhalf) continue;
      K.values[i * Nw + j] =
          H[static_cast<std::size_t>(d + dmax) * nsigma + (i + j)];
    }
  }

  // The true kernel decays off the window; visible mass at the border means
  // the window truncates it.
  double total = 0.0;
  double border = 0.0;
  std::size_t band = std::max<std::size_t>(1, Nw / 32);
  for (std::size_t i = 0; i < Nw; ++i) {
    for (std::size_t j = 0; j < Nw; ++j) {
      double m = std::norm(K.values[i * Nw + j]);
      total += m;
      bool edge = i < band || i >= Nw - band || j < band || j >= Nw - band;
      if (edge) border += m;
    }
  }
  if (total > 0.0 && border > 1e-5 * total) {
    throw numerical_error("rho_kernel: window too small, border carries " +
                          format_g17(border / total) + " of the kernel mass");
  }
  return K;
}

double hs_norm_sq_integral(const SchrodingerRep& r, const GridFunction& f) {
  Tensor slice = partial_fourier_t(f, r.omega);
  double s = 0.0;
  for (const cplx& v : slice.values) s += std::norm(v);
  s *= slice.cell_volume();
  return s / std::pow(std::abs(r.omega), static_cast<double>(f.spec.n));
}

double hs_norm_sq_lattice(const SchrodingerRep& r, const GridFunction& f,
                          int K_xy) {
  if (K_xy < 1) throw std::invalid_argument("hs_norm_sq_lattice: K_xy must be >= 1");
  Tensor slice = partial_fourier_t(f, r.omega);
  std::vector<double> freqs;
  for (int a = -K_xy; a <= K_xy; ++a) freqs.push_back(static_cast<double>(a));
  std::vector<std::vector<double>> lists(2 * f.spec.n, freqs);
  std::vector<cplx> vals = slice_fourier_grid(slice, lists);
  double s = 0.0;
  for (const cplx& v : vals) s += std::norm(v);
  return s / std::pow(std::abs(r.omega), static_cast<double>(f.spec.n));
}

double hs_norm_sq_kernel(const SchrodingerRep& r, const GridFunction& f,
                         const WindowSpec& window) {
  Tensor K = rho_kernel(r, f, window);
  double s = 0.0;
  for (const cplx& v : K.values) s += std::norm(v);
  return s * K.cell_volume();
}

}  // namespace heisenframe
