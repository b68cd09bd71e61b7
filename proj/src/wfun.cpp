#include "notrade/wfun.hpp"

#include <cmath>

namespace notrade {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::Tanh: return "Tanh";
        case Branch::Tan: return "Tan";
        case Branch::Coth: return "Coth";
        case Branch::LogLinear: return "LogLinear";
    }
    return "?";
}

double buy_ratio(const MarketParams& p, double lambda) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return (p.mu - lambda) / (gs2 - (p.mu - lambda));
}

double sell_ratio(const MarketParams& p, double lambda) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return (p.mu + lambda) / ((1.0 - p.eps) * (gs2 - (p.mu + lambda)));
}

Branch select_branch(const MarketParams& p, double lambda) {
    (void)lambda;  // the case split depends on gamma and the Merton weight only
    if (p.gamma == 1.0) return Branch::LogLinear;
    const double pi = p.merton();
    if (pi == 1.0)
        throw Error(Errc::DegenerateMerton, "mu/(gamma*sigma^2) = 1 has no free boundary");
    if ((p.gamma < 1.0 && pi < 1.0) || (p.gamma > 1.0 && pi > 1.0)) return Branch::Tanh;
    if (p.gamma > 1.0) {
        const double half_width = 0.5 * std::sqrt(1.0 - 1.0 / p.gamma);
        if (pi > 0.5 - half_width && pi < 0.5 + half_width) return Branch::Tan;
    }
    return Branch::Coth;
}

WSolution WSolution::make(const MarketParams& p, double lambda) {
    WSolution sol;
    sol.params = p;
    sol.lambda = lambda;
    const double s2 = p.sigma * p.sigma;
    const double gs2 = p.gamma * s2;
    sol.a2s = (p.gamma - 1.0) * (p.mu * p.mu - lambda * lambda) / (p.gamma * s2 * s2) -
              (0.5 - p.mu / s2) * (0.5 - p.mu / s2);
    sol.a = std::sqrt(std::fabs(sol.a2s));
    sol.b = 0.5 - p.mu / s2 + (p.gamma - 1.0) * (p.mu - lambda) / gs2;
    sol.branch = select_branch(p, lambda);
    const double loglu = std::log(sell_ratio(p, lambda) / buy_ratio(p, lambda));
    sol.y_lo = std::min(0.0, loglu);
    sol.y_hi = std::max(0.0, loglu);
    return sol;
}

namespace {

// Shifted variable v = (gamma-1) w - (mu/sigma^2 - 1/2); solves v' = v^2 + a2s,
// v(0) = b. tau = tan(a y)/a or tanh(a y)/a depending on the sign of a2s;
// both cases collapse to v = (b + a2s*tau) / (1 - b*tau).
double v_shift(const WSolution& sol, double y) {
    double tau;
    if (sol.a2s > 0.0) {
        const double ay = sol.a * y;
        if (std::fabs(ay) >= M_PI_2)
            throw Error(Errc::PoleEncountered, "tan argument reached a singularity");
        tau = std::tan(ay) / sol.a;
    } else if (sol.a > 0.0) {
        tau = std::tanh(sol.a * y) / sol.a;
    } else {
        tau = y;
    }
    const double den = 1.0 - sol.b * tau;
    // tau is monotone in y and den(0) = 1, so den <= 0 means the solution has
    // a pole between 0 and y (coth-branch blowup, or tan past its asymptote).
    if (den <= 0.0)
        throw Error(Errc::PoleEncountered, "w has a pole inside the evaluation interval");
    return (sol.b + sol.a2s * tau) / den;
}

}  // namespace

double w_eval(const WSolution& sol, double y) {
    const MarketParams& p = sol.params;
    const double s2 = p.sigma * p.sigma;
    if (sol.branch == Branch::LogLinear) {
        const double k = 2.0 * p.mu / s2 - 1.0;
        const double c = (p.mu * p.mu - sol.lambda * sol.lambda) / (s2 * s2);
        const double w0 = (p.mu - sol.lambda) / s2;
        if (std::fabs(k) < 1e-14) return w0 + c * y;
        return c / k + (w0 - c / k) * std::exp(-k * y);
    }
    return (v_shift(sol, y) + p.mu / s2 - 0.5) / (p.gamma - 1.0);
}

double w_prime(const WSolution& sol, double y) {
    const MarketParams& p = sol.params;
    const double s2 = p.sigma * p.sigma;
    if (sol.branch == Branch::LogLinear) {
        const double k = 2.0 * p.mu / s2 - 1.0;
        const double c = (p.mu * p.mu - sol.lambda * sol.lambda) / (s2 * s2);
        return -k * w_eval(sol, y) + c;
    }
    const double v = v_shift(sol, y);
    return (v * v + sol.a2s) / (p.gamma - 1.0);
}

double w_second(const WSolution& sol, double y) {
    const MarketParams& p = sol.params;
    const double s2 = p.sigma * p.sigma;
    return 2.0 * (p.gamma - 1.0) * w_prime(sol, y) * w_eval(sol, y) -
           (2.0 * p.mu / s2 - 1.0) * w_prime(sol, y);
}

}  // namespace notrade
