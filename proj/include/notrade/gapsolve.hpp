#pragma once

#include <utility>

#include "notrade/model.hpp"
#include "notrade/wfun.hpp"

namespace notrade {

struct GapSolution {
    double lambda = 0.0;
    double l = 0.0;  // buy-boundary stock-cash ratio
    double u = 0.0;  // sell-boundary stock-cash ratio
    double residual = 0.0;
    int iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
};

// f(lambda, eps) = w(lambda, log(u/l)) - (mu+lambda)/(gamma sigma^2).
// Its unique zero (for small eps) pins down the gap parameter.
double boundary_residual(const MarketParams& params, double lambda);

// Leading-order term lambda ~ gamma sigma^2 (3/(4 gamma) pi*^2 (1-pi*)^2)^{1/3} eps^{1/3}.
// Returns 0 in the degenerate case pi* = 1 (the coefficient vanishes).
double lambda_asymptotic(const MarketParams& params);

// Bracketed root solve for the gap parameter. eps = 0 short-circuits to
// lambda = 0. Throws NoBracket when no sign change exists below the domain
// cap (eps outside the small-spread regime) and SpreadTooLarge when the
// solved policy would not be admissible for the bid-ask process.
GapSolution solve_lambda(const MarketParams& params, double tol = 1e-12);

}  // namespace notrade
