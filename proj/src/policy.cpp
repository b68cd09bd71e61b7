#include "notrade/policy.hpp"

#include <cmath>
#include <limits>

namespace notrade {

NoTradePolicy build_policy(const MarketParams& p, const GapSolution& gap) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    NoTradePolicy pol;
    if (p.merton() == 1.0) {
        // Degenerate case: full investment at t=0, no trading afterwards;
        // the equivalent safe rate is the frictionless value.
        pol.degenerate = true;
        pol.pi_minus = pol.pi_plus = 1.0;
        pol.beta = p.mu * p.mu / (2.0 * gs2);
        pol.esr = p.r + pol.beta;
        pol.lambda = 0.0;
        pol.l = pol.u = std::numeric_limits<double>::quiet_NaN();
        return pol;
    }
    pol.lambda = gap.lambda;
    pol.pi_minus = (p.mu - gap.lambda) / gs2;
    pol.pi_plus = (p.mu + gap.lambda) / gs2;
    pol.l = gap.l;
    pol.u = gap.u;
    pol.beta = (p.mu * p.mu - gap.lambda * gap.lambda) / (2.0 * gs2);
    pol.esr = p.r + pol.beta;
    return pol;
}

double esr_asymptotic(const MarketParams& p) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    const double pi = p.merton();
    const double coef = 3.0 / (4.0 * p.gamma) * pi * pi * (1.0 - pi) * (1.0 - pi);
    const double c23 = std::cbrt(coef) * std::cbrt(coef);
    const double e23 = std::cbrt(p.eps) * std::cbrt(p.eps);
    return p.r + p.mu * p.mu / (2.0 * gs2) - 0.5 * gs2 * c23 * e23;
}

ShadowCoefficients::ShadowCoefficients(const MarketParams&, const GapSolution& gap, const WSolution& wsol)
    : wsol_(wsol), l_(gap.l) {}

double ShadowCoefficients::sigma_tilde(double y) const {
    const double w = w_eval(wsol_, y);
    const double wp = w_prime(wsol_, y);
    return wsol_.params.sigma * wp / (w * (1.0 - w));
}

double ShadowCoefficients::mu_tilde(double y) const {
    const MarketParams& p = wsol_.params;
    const double w = w_eval(wsol_, y);
    const double wp = w_prime(wsol_, y);
    const double s2 = p.sigma * p.sigma;
    return s2 * wp / (w * (1.0 - w)) * (wp / (1.0 - w) - (1.0 - p.gamma) * w);
}

double ShadowCoefficients::g(double y) const {
    const double w = w_eval(wsol_, y);
    return w / (l_ * std::exp(y) * (1.0 - w));
}

ShadowCoefficients shadow_coeffs(const MarketParams& p, const GapSolution& gap, const WSolution& wsol) {
    return ShadowCoefficients(p, gap, wsol);
}

double initial_state(double xi0, double xi, double s0, double s0_safe, const NoTradePolicy& policy) {
    if (xi0 < 0.0 || xi < 0.0)
        throw Error(Errc::ZeroEndowment, "negative endowments are not supported");
    const double cash = xi0 * s0_safe;
    const double stock = xi * s0;
    if (cash + stock <= 0.0)
        throw Error(Errc::ZeroEndowment, "initial endowment is zero");
    // Boundary classification in ratio form, written as stock/l vs cash so
    // the comparisons stay valid when l, u < 0 (leverage): any nonnegative
    // endowment then sits below the buy boundary.
    if (stock / policy.l <= cash) return 0.0;
    const double loglu = std::log(policy.u / policy.l);
    if (stock / policy.u >= cash) return loglu;
    return std::log(stock / (cash * policy.l));
}

SolvedModel solve_model(const MarketParams& params, double tol) {
    SolvedModel m;
    m.params = validate(params);
    if (m.params.merton() == 1.0) {
        m.gap = GapSolution{};
        m.policy = build_policy(m.params, m.gap);
        return m;
    }
    m.gap = solve_lambda(m.params, tol);
    m.policy = build_policy(m.params, m.gap);
    return m;
}

}  // namespace notrade
