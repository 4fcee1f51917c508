#pragma once

#include <utility>

#include "heisenframe/grid.hpp"

namespace heisenframe {

// Smallest R with f's grid box inside [-R,R]^{2n} x [-R/2,R/2]; never 0.
std::size_t default_gamma_radius(const GridSpec& spec);

// Two routes to the Haar integral of f. Left: kHaarScale times the midpoint
// sum over f's own grid. Right: kHaarScale times the quadrature over the
// lattice fundamental domain of sum_{|gamma| <= radius} f(gamma q), with
// f(gamma q) evaluated through the attached analytic evaluator. The
// quotient quadrature nodes q are f's own grid nodes pushed into the
// fundamental domain by their folding lattice element, so the rule on the
// quotient is the transport of the rule upstairs and the unfolding identity
// holds node by node, not just in the limit. The transport needs the box to
// meet each fold class at most once: every noncentral extent must be <= 1
// and the central extent <= 1/2, else invalid_argument. The shell at
// radius+1 must carry no mass; otherwise the enumeration was too small and
// the routes cannot be trusted, which raises numerical_error.
std::pair<cplx, cplx> weil_check(const GridFunction& f, std::size_t radius);
std::pair<cplx, cplx> weil_check(const GridFunction& f);

}  // namespace heisenframe
