#include "notrade/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace notrade {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_step(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, 48);
}

double w_tilde_at(const WSolution& sol, double y) {
    const double w = w_eval(sol, y);
    return w - w_prime(sol, y) / (1.0 - w);
}

}  // namespace

double integral_w(const MarketParams& p, const GapSolution& gap) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    const double lam = gap.lambda;
    if (lam == 0.0) return 0.0;
    if (p.gamma == 1.0 || std::fabs(p.gamma - 1.0) < 1e-8) {
        // the printed closed form divides by gamma-1; integrate w directly
        const WSolution sol = WSolution::make(p, lam);
        const double loglu = std::log(gap.u / gap.l);
        return integrate([&](double y) { return w_eval(sol, y); }, 0.0, loglu);
    }
    const double mp = p.mu + lam, mm = p.mu - lam;
    const double t1 = (p.mu / (p.sigma * p.sigma) - 0.5) / (p.gamma - 1.0) *
                      std::log(1.0 / (1.0 - p.eps) * (mp * (mm - gs2)) / (mm * (mp - gs2)));
    const double t2 = 0.5 / (p.gamma - 1.0) * std::log((mp * (mp - gs2)) / (mm * (mm - gs2)));
    return t1 + t2;
}

double integral_w_tilde(const MarketParams& p, const GapSolution& gap) {
    if (gap.lambda == 0.0) return 0.0;
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return integral_w(p, gap) - std::log((p.mu - gap.lambda - gs2) / (p.mu + gap.lambda - gs2));
}

HorizonBounds finite_horizon_bounds(const MarketParams& p, const GapSolution& gap, double horizon,
                                    const Endowment& endow, BoundMode mode) {
    if (!(horizon > 0.0)) throw Error(Errc::NonPositiveHorizon, "horizon must be > 0");
    const double gs2 = p.gamma * p.sigma * p.sigma;
    const double T = horizon;
    const double pi = p.merton();
    const double w0 = endow.wealth_at_ask();
    if (!(w0 > 0.0)) throw Error(Errc::ZeroEndowment, "initial wealth must be > 0");

    HorizonBounds hb;
    hb.horizon = T;
    hb.loss_cap = (3.0 * pi + 1.0) * p.eps / T;

    if (pi == 1.0) {
        // Degenerate case: no gap equation; report the printed leading-order bounds.
        const double base = p.r + p.mu * p.mu / (2.0 * gs2) + std::log(w0) / T;
        const double share = endow.risky_shares * endow.ask_price / w0;
        hb.upper = base + pi * p.eps / T;
        hb.lower = base - (2.0 * pi + share) * p.eps / T;
        hb.leading_order_only = true;
        return hb;
    }

    const double beta = (p.mu * p.mu - gap.lambda * gap.lambda) / (2.0 * gs2);
    const double base = p.r + beta + std::log(w0) / T;
    hb.int_w = integral_w(p, gap);
    hb.int_w_tilde = integral_w_tilde(p, gap);

    if (mode == BoundMode::LeadingOrder || gap.lambda == 0.0) {
        const double share = endow.risky_shares * endow.ask_price / w0;
        hb.upper = base + pi * (p.eps == 0.0 ? 0.0 : p.eps) / T;
        hb.lower = base - (2.0 * pi + share) * p.eps / T;
        hb.leading_order_only = true;
        if (p.eps == 0.0) hb.upper = hb.lower = base;
        return hb;
    }

    const NoTradePolicy pol = build_policy(p, gap);
    const WSolution wsol = WSolution::make(p, gap.lambda);
    const ShadowCoefficients coeffs = shadow_coeffs(p, gap, wsol);
    const double y0 = initial_state(endow.safe_units, endow.risky_shares, endow.ask_price, endow.safe_price, pol);
    const double shadow_w0 =
        endow.safe_units * endow.safe_price + endow.risky_shares * coeffs.g(y0) * endow.ask_price;
    const double qrange = std::fabs(hb.int_w_tilde);
    hb.upper = base + qrange / T;
    hb.lower = p.r + beta + std::log(shadow_w0) / T - qrange / T +
               std::log(1.0 - p.eps / (1.0 - p.eps) * pol.pi_plus) / T;
    hb.leading_order_only = false;
    return hb;
}

QTilde::QTilde(const MarketParams& p, const GapSolution& gap, int order) {
    const WSolution sol = WSolution::make(p, gap.lambda);
    mid_ = 0.5 * (sol.y_lo + sol.y_hi);
    half_ = 0.5 * (sol.y_hi - sol.y_lo);
    const int n = order;
    std::vector<double> fvals(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = std::cos(M_PI * j / n);
        fvals[j] = half_ == 0.0 ? 0.0 : w_tilde_at(sol, mid_ + half_ * x);
    }
    // Chebyshev coefficients (c0 halved convention) via the Lobatto cosine sum
    std::vector<double> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double s = 0.5 * (fvals[0] + (k % 2 == 0 ? fvals[n] : -fvals[n]));
        for (int j = 1; j < n; ++j) s += fvals[j] * std::cos(M_PI * j * k / n);
        c[k] = 2.0 / n * s;
    }
    c[n] *= 0.5;
    // term-by-term antiderivative, scaled by the domain half-width
    icoef_.assign(n + 2, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
        const double cm1 = (k - 1 <= n) ? c[k - 1] : 0.0;
        const double cp1 = (k + 1 <= n) ? c[k + 1] : 0.0;
        icoef_[k] = half_ * (cm1 - cp1) / (2.0 * k);
    }
    at0_ = 0.0;
    at0_ = (*this)(0.0);
}

double QTilde::operator()(double y) const {
    if (half_ == 0.0) return 0.0;
    const double x = (y - mid_) / half_;
    // Clenshaw evaluation of sum icoef_[k] T_k(x)
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(icoef_.size()) - 1; k >= 1; --k) {
        const double b0 = icoef_[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 - at0_;
}

}  // namespace notrade
