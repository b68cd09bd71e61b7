#pragma once

#include <vector>

#include "notrade/gapsolve.hpp"
#include "notrade/model.hpp"
#include "notrade/policy.hpp"

namespace notrade {

struct HorizonBounds {
    double horizon = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double loss_cap = 0.0;
    double int_w = 0.0;
    double int_w_tilde = 0.0;
    // true when the bounds use the printed leading-order eps/T terms instead
    // of the exact integrals (the O(eps^{4/3}) remainder is unmodeled either way)
    bool leading_order_only = false;
};

struct Endowment {
    double safe_units = 1.0;
    double risky_shares = 0.0;
    double ask_price = 1.0;
    double safe_price = 1.0;

    double wealth_at_ask() const { return safe_units * safe_price + risky_shares * ask_price; }
};

enum class BoundMode { Exact, LeadingOrder };

// Closed form of int_0^{log(u/l)} w(y) dy; the orientation follows the
// integration limits, so the value is negative under leverage. gamma = 1
// falls back to adaptive quadrature (the printed formula divides by gamma-1).
double integral_w(const MarketParams& params, const GapSolution& gap);

// int w~ = int w - log((mu-lambda-gamma sigma^2)/(mu+lambda-gamma sigma^2)),
// with w~ = w - w'/(1-w); asymptotically (mu/gamma sigma^2) eps.
double integral_w_tilde(const MarketParams& params, const GapSolution& gap);

HorizonBounds finite_horizon_bounds(const MarketParams& params, const GapSolution& gap, double horizon,
                                    const Endowment& endow, BoundMode mode = BoundMode::Exact);

// q~(y) = int_0^y w~(z) dz, exposed for the simulator. Backed by a Chebyshev
// interpolant of w~ over the no-trade domain, integrated term by term;
// immutable after construction.
class QTilde {
  public:
    QTilde(const MarketParams& params, const GapSolution& gap, int order = 64);

    double operator()(double y) const;

  private:
    double mid_, half_;
    std::vector<double> icoef_;  // Chebyshev coefficients of the antiderivative
    double at0_;
};

}  // namespace notrade
