#pragma once

#include "notrade/model.hpp"

namespace notrade {

// Closed-form branch of the reduced value-gradient function w. Which branch
// applies depends on gamma and the Merton proportion; LogLinear covers
// gamma = 1, where the first-order equation becomes linear.
enum class Branch { Tanh, Tan, Coth, LogLinear };

const char* branch_name(Branch b);

// Buy/sell boundary stock-cash ratios as functions of the gap parameter.
// Both are negative in the leverage case mu/(gamma*sigma^2) > 1.
double buy_ratio(const MarketParams& params, double lambda);
double sell_ratio(const MarketParams& params, double lambda);

Branch select_branch(const MarketParams& params, double lambda);

// Explicit solution w(lambda, .) of
//   w' + (1-gamma) w^2 + (2 mu/sigma^2 - 1) w - (mu^2-lambda^2)/(gamma sigma^4) = 0,
//   w(0) = (mu-lambda)/(gamma sigma^2),
// on [y_lo, y_hi] = [0, log(u/l)] (or [log(u/l), 0] under leverage).
//
// Internally all three non-linear branches are evaluated through the shifted
// variable v = (gamma-1) w - (mu/sigma^2 - 1/2), which satisfies
// v' = v^2 + a2s with v(0) = b. Writing the solution as a rational function
// of tan(a y)/a (resp. tanh(a y)/a) is algebraically identical to the
// tanh/tan/coth formulas but stays fully accurate as a -> 0, so no separate
// series expansion is needed at the branch-boundary degeneracy.
struct WSolution {
    MarketParams params;
    double lambda = 0.0;
    double a = 0.0;  // sqrt(|a2s|)
    double b = 0.0;
    Branch branch = Branch::Tan;
    double y_lo = 0.0;
    double y_hi = 0.0;

    // signed discriminant (gamma-1)(mu^2-lambda^2)/(gamma sigma^4) - (1/2 - mu/sigma^2)^2
    double a2s = 0.0;

    static WSolution make(const MarketParams& params, double lambda);
};

double w_eval(const WSolution& sol, double y);
double w_prime(const WSolution& sol, double y);
double w_second(const WSolution& sol, double y);

}  // namespace notrade
