#include "notrade/gapsolve.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace notrade {

double boundary_residual(const MarketParams& p, double lambda) {
    const double l = buy_ratio(p, lambda);
    const double u = sell_ratio(p, lambda);
    if (l * u <= 0.0)
        throw Error(Errc::SignError, "trading boundaries l and u have opposite signs");
    const WSolution sol = WSolution::make(p, lambda);
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return w_eval(sol, std::log(u / l)) - (p.mu + lambda) / gs2;
}

double lambda_asymptotic(const MarketParams& p) {
    const double pi = p.merton();
    const double gs2 = p.gamma * p.sigma * p.sigma;
    const double coef = 3.0 / (4.0 * p.gamma) * pi * pi * (1.0 - pi) * (1.0 - pi);
    return gs2 * std::cbrt(coef) * std::cbrt(p.eps);
}

namespace {

std::optional<double> safe_residual(const MarketParams& p, double lambda) {
    try {
        const double v = boundary_residual(p, lambda);
        if (!std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

GapSolution solve_lambda(const MarketParams& p, double tol) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    if (p.merton() == 1.0)
        throw Error(Errc::DegenerateMerton, "mu/(gamma*sigma^2) = 1 is handled at the policy level");

    GapSolution sol;
    if (p.eps == 0.0) {
        sol.lambda = 0.0;
        sol.l = buy_ratio(p, 0.0);
        sol.u = sell_ratio(p, 0.0);
        sol.residual = 0.0;
        return sol;
    }

    // lambda must stay below both mu (beta real) and |gamma sigma^2 - mu|
    // (l and u keep a common sign).
    const double cap = std::min(p.mu, std::fabs(gs2 - p.mu)) * (1.0 - 1e-9);
    const double seed = std::min(lambda_asymptotic(p), cap);

    // Geometric scan upward for the first sign change. The residual can have
    // a pole past the root (coth branch), so the scan starts well below the
    // asymptotic seed and keeps the first bracket it finds.
    double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    double x = seed / 32.0;
    std::optional<double> fx = safe_residual(p, x);
    for (int i = 0; i < 400; ++i) {
        const double xn = std::min(x * 1.15, cap);
        const std::optional<double> fn = safe_residual(p, xn);
        if (fx && fn && ((*fx <= 0.0) != (*fn <= 0.0))) {
            lo = x;
            hi = xn;
            flo = *fx;
            fhi = *fn;
            bracketed = true;
            break;
        }
        if (xn >= cap) break;
        x = xn;
        fx = fn;
    }
    if (!bracketed)
        throw Error(Errc::NoBracket, "no sign change of the boundary residual in (0, " +
                                         std::to_string(cap) + "); eps is outside the small-spread regime");

    sol.bracket = {lo, hi};

    // Bisection with secant acceleration; derivative-free since f_lambda
    // vanishes at the frictionless point.
    double lambda = 0.5 * (lo + hi), f = 0.0;
    int it = 0;
    for (; it < 200; ++it) {
        double trial = lambda;
        if (std::fabs(fhi - flo) > 0.0) {
            trial = lo - flo * (hi - lo) / (fhi - flo);
        }
        const double width = hi - lo;
        if (!(trial > lo + 1e-3 * width && trial < hi - 1e-3 * width))
            trial = 0.5 * (lo + hi);
        const std::optional<double> ft = safe_residual(p, trial);
        if (!ft) {  // pole inside the bracket: fall back to pure bisection
            trial = 0.5 * (lo + hi);
            const std::optional<double> fb = safe_residual(p, trial);
            if (!fb) throw Error(Errc::PoleEncountered, "residual not evaluable inside the bracket");
            f = *fb;
        } else {
            f = *ft;
        }
        lambda = trial;
        if (std::fabs(f) <= tol) break;
        if ((f <= 0.0) == (flo <= 0.0)) {
            lo = lambda;
            flo = f;
        } else {
            hi = lambda;
            fhi = f;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }

    sol.lambda = lambda;
    sol.residual = f;
    sol.iterations = it + 1;
    sol.l = buy_ratio(p, lambda);
    sol.u = sell_ratio(p, lambda);

    // Admissibility of the policy for the bid-ask process.
    const double pi_plus = (p.mu + lambda) / gs2;
    if (p.eps / (1.0 - p.eps) * pi_plus >= 1.0)
        throw Error(Errc::SpreadTooLarge,
                    "eps*pi_plus/(1-eps) >= 1; the solved policy is not admissible at this spread");
    return sol;
}

}  // namespace notrade
