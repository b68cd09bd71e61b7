#pragma once

#include "notrade/gapsolve.hpp"
#include "notrade/model.hpp"
#include "notrade/wfun.hpp"

namespace notrade {

struct NoTradePolicy {
    double lambda = 0.0;
    double pi_minus = 0.0;
    double pi_plus = 0.0;
    double l = 0.0;
    double u = 0.0;
    double beta = 0.0;
    double esr = 0.0;
    bool degenerate = false;  // mu/(gamma*sigma^2) == 1
};

// Shadow price coefficient functions over the no-trade domain. Immutable and
// cheap to copy; endpoint values use the smooth extension of w.
class ShadowCoefficients {
  public:
    ShadowCoefficients(const MarketParams& params, const GapSolution& gap, const WSolution& wsol);

    // drift (excess of r) and volatility of the shadow price
    double mu_tilde(double y) const;
    double sigma_tilde(double y) const;
    // price ratio g(y) = S~/S = w / (l e^y (1-w)); stays in [1-eps, 1]
    double g(double y) const;

    const WSolution& w() const { return wsol_; }
    double y_lo() const { return wsol_.y_lo; }
    double y_hi() const { return wsol_.y_hi; }

  private:
    WSolution wsol_;
    double l_;
};

NoTradePolicy build_policy(const MarketParams& params, const GapSolution& gap);

// Two-term expansion of the equivalent safe rate,
// r + mu^2/(2 gamma sigma^2) - (gamma sigma^2 / 2) C^{2/3} eps^{2/3}.
double esr_asymptotic(const MarketParams& params);

ShadowCoefficients shadow_coeffs(const MarketParams& params, const GapSolution& gap, const WSolution& wsol);

// Map an initial endowment (xi0 safe units, xi risky shares, prices s0 ask /
// s0_safe) to the starting point of the reflected state. Endowments must be
// nonnegative and not both zero.
double initial_state(double xi0, double xi, double s0, double s0_safe, const NoTradePolicy& policy);

// Convenience: validate, solve the gap equation (eps = 0 and the degenerate
// Merton case short-circuit), and assemble the policy.
struct SolvedModel {
    MarketParams params;
    GapSolution gap;
    NoTradePolicy policy;
};

SolvedModel solve_model(const MarketParams& params, double tol = 1e-12);

}  // namespace notrade
