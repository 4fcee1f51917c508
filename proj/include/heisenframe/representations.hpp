#pragma once

#include "heisenframe/fourier.hpp"
#include "heisenframe/grid.hpp"

namespace heisenframe {

// Character chi_{b,beta}(x,xi,t) = e^{-2 pi i (b.x + beta.xi)}; trivial on the
// center.
struct CharacterParams {
  std::vector<double> b;
  std::vector<double> beta;

  CharacterParams() = default;
  CharacterParams(std::vector<double> b_, std::vector<double> beta_);
  CharacterParams(double b_, double beta_);
};

cplx char_value(const CharacterParams& c, const Point& p);

// Integrated character: f^(b, beta, 0) in the Lebesgue convention.
cplx char_coefficient(const GridFunction& f, const CharacterParams& c);

// The infinite-dimensional representation with central behavior e^{-2 pi i w t},
// acting on L²(R^n) by
//   (rho_w(x,xi,t) phi)(y) = e^{-2 pi i w (t + xi.y + x.xi/2)} phi(y + x).
// The xi.y pairing in the phase is forced by the group law: it is the unique
// choice of this shape making rho_w(g) rho_w(h) = rho_w(gh).
struct SchrodingerRep {
  double omega = 2.0;
  explicit SchrodingerRep(double omega_);
};

// Uniform midpoint grid on [-L, L]^n carrying samples of phi in L²(R^n).
struct WindowSpec {
  std::size_t n = 1;
  double half_length = 2.0;
  std::size_t per_axis = 256;

  // Window spacing = grid x-spacing / refine; the x-shifts used by the module
  // then land on window nodes exactly.
  static WindowSpec matched(const GridSpec& grid, double half_length,
                            std::size_t refine = 1);

  double spacing() const {
    return 2.0 * half_length / static_cast<double>(per_axis);
  }
  double coord(std::size_t i) const {
    return -half_length + (static_cast<double>(i) + 0.5) * spacing();
  }
  std::size_t size() const;
};

struct Window {
  WindowSpec spec;
  std::vector<cplx> values;
};

Window sample_window(const WindowSpec& spec,
                     const std::function<cplx(const std::vector<double>&)>& phi);

// Midpoint quadrature of the squared magnitude over the window box.
double window_norm_sq(const Window& w);

// Applies rho_w(p) to a sampled window. Grid-commensurate shifts move samples
// exactly; other shifts use trigonometric interpolation with period 2L.
// Raises invalid_argument when phi carries visible mass at the edge strip
// that the shift pushes out of the window.
Window rho_apply(const SchrodingerRep& r, const Point& p, const Window& phi);

// Integral kernel of rho_w(f) on the window's (y, u) product grid (n = 1):
//   K(y,u) = int int f(u-y, xi, t) e^{-2 pi i w (t + xi.(u+y)/2)} dxi dt,
// so that (rho_w(f) phi)(y) = int K(y,u) phi(u) du. The x-argument u-y is
// evaluated by trigonometric interpolation of f's x-slices; K vanishes
// where |u-y| exceeds the x-extent of f's box.
Tensor rho_kernel(const SchrodingerRep& r, const GridFunction& f,
                  const WindowSpec& window);

// Three routes to the squared Hilbert-Schmidt norm of rho_w(f), all in the
// Lebesgue convention.
double hs_norm_sq_integral(const SchrodingerRep& r, const GridFunction& f);
double hs_norm_sq_lattice(const SchrodingerRep& r, const GridFunction& f,
                          int K_xy);
double hs_norm_sq_kernel(const SchrodingerRep& r, const GridFunction& f,
                         const WindowSpec& window);

}  // namespace heisenframe
