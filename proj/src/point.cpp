#include "heisenframe/point.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

Point::Point(std::vector<double> x_, std::vector<double> xi_, double t_)
    : x(std::move(x_)), xi(std::move(xi_)), t(t_) {
  if (x.size() != xi.size()) {
    throw std::invalid_argument("Point: x and xi dimensions differ");
  }
}

Point::Point(double x_, double xi_, double t_)
    : x{x_}, xi{xi_}, t(t_) {}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Point group_mul(const Point& g, const Point& h) {
  if (g.n() != h.n()) {
    throw std::invalid_argument("group_mul: dimension mismatch");
  }
  Point r;
  r.x.resize(g.n());
  r.xi.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    r.x[i] = g.x[i] + h.x[i];
    r.xi[i] = g.xi[i] + h.xi[i];
  }
  r.t = g.t + h.t + 0.5 * (dot(g.x, h.xi) - dot(h.x, g.xi));
  return r;
}

Point group_inv(const Point& g) {
  Point r = g;
  for (auto& v : r.x) v = -v;
  for (auto& v : r.xi) v = -v;
  r.t = -g.t;
  return r;
}

Point conjugate(const Point& g, const Point& h) {
  Point r = h;
  r.t = h.t + dot(g.x, h.xi) - dot(h.x, g.xi);
  return r;
}

namespace {

bool near_integer(double v, double tol, double* nearest) {
  double r = std::round(v);
  *nearest = r;
  return std::abs(v - r) <= tol;
}

}  // namespace

bool in_lattice(const Point& p, double tol) {
  double nearest;
  for (double v : p.x) {
    if (!near_integer(v, tol, &nearest)) return false;
  }
  for (double v : p.xi) {
    if (!near_integer(v, tol, &nearest)) return false;
  }
  return near_integer(2.0 * p.t, tol, &nearest);
}

Box reproducing_box(std::size_t n) {
  Box box(2 * n + 1);
  for (std::size_t i = 0; i < 2 * n; ++i) box[i] = {-0.5, 0.5};
  box[2 * n] = {-0.25, 0.25};
  return box;
}

Box fundamental_box(std::size_t n) {
  Box box(2 * n + 1);
  for (std::size_t i = 0; i < 2 * n; ++i) box[i] = {0.0, 1.0};
  box[2 * n] = {0.0, 0.5};
  return box;
}

double box_volume(const Box& box) {
  double v = 1.0;
  for (const auto& iv : box) v *= iv.length();
  return v;
}

std::optional<Witness> reproducing_violation(const Point& p, const Point& q,
                                             double tol) {
  Point d = group_mul(p, group_inv(q));
  std::size_t n = d.n();

  std::vector<int> a(n), alpha(n);
  bool lattice = true;
  bool noncentral_zero = true;
  for (std::size_t i = 0; i < n && lattice; ++i) {
    double r = std::round(d.x[i]);
    if (std::abs(d.x[i] - r) > tol) lattice = false;
    a[i] = static_cast<int>(r);
    if (a[i] != 0) noncentral_zero = false;
  }
  for (std::size_t i = 0; i < n && lattice; ++i) {
    double r = std::round(d.xi[i]);
    if (std::abs(d.xi[i] - r) > tol) lattice = false;
    alpha[i] = static_cast<int>(r);
    if (alpha[i] != 0) noncentral_zero = false;
  }
  if (!lattice) return std::nullopt;

  double half_t = std::round(2.0 * d.t) / 2.0;
  if (std::abs(d.t - half_t) > tol) return std::nullopt;

  if (noncentral_zero && half_t == 0.0) return std::nullopt;  // identity

  Witness w;
  w.part = noncentral_zero ? Witness::Part::kCentral : Witness::Part::kNoncentral;
  w.difference = d;
  w.nearest_a = std::move(a);
  w.nearest_alpha = std::move(alpha);
  w.nearest_half_t = half_t;
  return w;
}

}  // namespace heisenframe
