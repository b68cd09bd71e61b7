#pragma once

// Independent numerical oracles used only by the tests: Runge-Kutta
// integration of the first-order equation for w, bisection on an
// RK4-shot boundary residual, composite quadrature, and finite
// differences. None of these call the closed forms they cross-check.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "notrade/model.hpp"

namespace oracle {

inline double riccati_rhs(const notrade::MarketParams& p, double lambda, double w) {
    const double s2 = p.sigma * p.sigma;
    return -(1.0 - p.gamma) * w * w - (2.0 * p.mu / s2 - 1.0) * w +
           (p.mu * p.mu - lambda * lambda) / (p.gamma * s2 * s2);
}

// RK4 from w(0) = (mu-lambda)/(gamma sigma^2) to y (y may be negative).
inline double w_rk4(const notrade::MarketParams& p, double lambda, double y, int n_steps = 20000) {
    const double h = y / n_steps;
    double w = (p.mu - lambda) / (p.gamma * p.sigma * p.sigma);
    for (int i = 0; i < n_steps; ++i) {
        const double k1 = riccati_rhs(p, lambda, w);
        const double k2 = riccati_rhs(p, lambda, w + 0.5 * h * k1);
        const double k3 = riccati_rhs(p, lambda, w + 0.5 * h * k2);
        const double k4 = riccati_rhs(p, lambda, w + h * k3);
        w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return w;
}

inline double boundary_l(const notrade::MarketParams& p, double lambda) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return (p.mu - lambda) / (gs2 - (p.mu - lambda));
}

inline double boundary_u(const notrade::MarketParams& p, double lambda) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return (p.mu + lambda) / ((1.0 - p.eps) * (gs2 - (p.mu + lambda)));
}

inline double shoot_residual(const notrade::MarketParams& p, double lambda, int n_steps = 20000) {
    const double l = boundary_l(p, lambda), u = boundary_u(p, lambda);
    if (l * u <= 0.0) throw std::runtime_error("oracle: boundary ratios change sign");
    const double gs2 = p.gamma * p.sigma * p.sigma;
    return w_rk4(p, lambda, std::log(u / l), n_steps) - (p.mu + lambda) / gs2;
}

// Bisection for the gap parameter, seeded by a fine geometric scan upward.
inline double solve_lambda_bisect(const notrade::MarketParams& p, double tol = 1e-13) {
    const double gs2 = p.gamma * p.sigma * p.sigma;
    const double cap = std::min(p.mu, std::fabs(gs2 - p.mu)) * (1.0 - 1e-9);
    double lo = 0.0, hi = 0.0;
    double x = cap / 4096.0;
    double fx = shoot_residual(p, x);
    for (int i = 0; i < 400 && hi == 0.0; ++i) {
        const double xn = std::min(x * 1.1, cap);
        double fn;
        try {
            fn = shoot_residual(p, xn);
        } catch (const std::runtime_error&) {
            break;
        }
        if ((fx <= 0.0) != (fn <= 0.0)) {
            lo = x;
            hi = xn;
        }
        if (xn >= cap) break;
        x = xn;
        fx = fn;
    }
    if (hi == 0.0) throw std::runtime_error("oracle: no bracket");
    const double flo = shoot_residual(p, lo);
    for (int i = 0; i < 200 && hi - lo > tol * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = shoot_residual(p, mid);
        if ((fm <= 0.0) == (flo <= 0.0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double fd1(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace oracle
