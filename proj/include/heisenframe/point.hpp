#pragma once

#include <optional>
#include <vector>

#include "heisenframe/util.hpp"

namespace heisenframe {

// Group element (x, xi, t) of the real Heisenberg group H_n. x and xi must
// share the same dimension n.
struct Point {
  std::vector<double> x;
  std::vector<double> xi;
  double t = 0.0;

  Point() = default;
  Point(std::vector<double> x_, std::vector<double> xi_, double t_);
  // n = 1 convenience.
  Point(double x_, double xi_, double t_);

  std::size_t n() const { return x.size(); }
};

// (x,xi,t)(x',xi',t') = (x+x', xi+xi', t+t' + (x.xi' - x'.xi)/2).
Point group_mul(const Point& g, const Point& h);
Point group_inv(const Point& g);
// g h g^{-1}; closed form (x', xi', t' + x.xi' - x'.xi).
Point conjugate(const Point& g, const Point& h);

double dot(const std::vector<double>& a, const std::vector<double>& b);

// Lattice Z^n x Z^n x (1/2)Z.
bool in_lattice(const Point& p, double tol);

// Scale relating the normalized Haar measure to Lebesgue measure on
// coordinates: vol(fundamental domain) = 1/2, so densities carry a factor 2.
inline constexpr double kHaarScale = 2.0;

// Box on which the coefficient map is injective: (-1/2,1/2)^{2n} x (-1/4,1/4).
Box reproducing_box(std::size_t n);
// Fundamental domain of the lattice: [0,1)^{2n} x [0,1/2).
Box fundamental_box(std::size_t n);

double box_volume(const Box& box);

// Certificate that two points of the reproducing box are lattice-equivalent.
// `difference` is p q^{-1}; the nearest_* fields give the lattice point it
// coincides with.
struct Witness {
  enum class Part { kNoncentral, kCentral };
  Part part = Part::kNoncentral;
  Point difference;
  std::vector<int> nearest_a;
  std::vector<int> nearest_alpha;
  double nearest_half_t = 0.0;
};

// Returns a witness when p q^{-1} is a nonidentity lattice element (within
// tol), i.e. when the reproducing property fails for the pair. Returns
// nullopt for pairs in general position.
std::optional<Witness> reproducing_violation(const Point& p, const Point& q,
                                             double tol);

}  // namespace heisenframe
