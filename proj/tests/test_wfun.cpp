#include <cmath>

#include "doctest.h"
#include "notrade/wfun.hpp"
#include "oracles.hpp"

using namespace notrade;

namespace {

// lambda values near the solved gap for each branch; exactness of the closed
// form holds for any lambda in the admissible range, not just the root
const MarketParams kTan{0.08, 0.16, 0.02, 5.0, 0.01};
const MarketParams kTanh{0.08, 0.16, 0.02, 1.25, 0.01};  // leverage
const MarketParams kCoth{0.08, 0.16, 0.02, 0.5, 0.01};
const MarketParams kLog{0.08, 0.16, 0.02, 1.0, 0.01};

double ode_residual(const WSolution& sol, double y) {
    const MarketParams& p = sol.params;
    const double s2 = p.sigma * p.sigma;
    const double w = w_eval(sol, y);
    return w_prime(sol, y) + (1.0 - p.gamma) * w * w + (2.0 * p.mu / s2 - 1.0) * w -
           (p.mu * p.mu - sol.lambda * sol.lambda) / (p.gamma * s2 * s2);
}

}  // namespace

TEST_CASE("branch selection matches the sign conditions") {
    CHECK(select_branch(kTan, 0.005) == Branch::Tan);
    CHECK(select_branch(kTanh, 0.013) == Branch::Tanh);
    CHECK(select_branch(kCoth, 0.029) == Branch::Coth);
    CHECK(select_branch(kLog, 0.017) == Branch::LogLinear);
    CHECK(WSolution::make(kTan, 0.005).a2s > 0.0);
    CHECK(WSolution::make(kTanh, 0.013).a2s < 0.0);
}

TEST_CASE("closed form matches RK4 integration of the first-order equation") {
    struct Case {
        MarketParams p;
        double lambda;
    } cases[] = {{kTan, 0.0055}, {kTanh, 0.0138}, {kCoth, 0.0295}, {kLog, 0.0172}};
    for (const auto& c : cases) {
        const WSolution sol = WSolution::make(c.p, c.lambda);
        for (int i = 0; i <= 20; ++i) {
            const double y = sol.y_lo + (sol.y_hi - sol.y_lo) * i / 20.0;
            CHECK(w_eval(sol, y) == doctest::Approx(oracle::w_rk4(c.p, c.lambda, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("ODE residual below 1e-10 on a dense grid for all four branches") {
    struct Case {
        MarketParams p;
        double lambda;
    } cases[] = {{kTan, 0.0055}, {kTanh, 0.0138}, {kCoth, 0.0295}, {kLog, 0.0172}};
    for (const auto& c : cases) {
        const WSolution sol = WSolution::make(c.p, c.lambda);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double y = sol.y_lo + (sol.y_hi - sol.y_lo) * i / 1000.0;
            worst = std::max(worst, std::fabs(ode_residual(sol, y)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("derivatives agree with finite differences") {
    const WSolution sol = WSolution::make(kTan, 0.0055);
    auto f = [&](double y) { return w_eval(sol, y); };
    for (double y : {0.05, 0.15, 0.3}) {
        CHECK(w_prime(sol, y) == doctest::Approx(oracle::fd1(f, y)).epsilon(1e-8));
        CHECK(w_second(sol, y) == doctest::Approx(oracle::fd2(f, y)).epsilon(1e-6));
    }
}

TEST_CASE("initial condition and monotone range") {
    struct Case {
        MarketParams p;
        double lambda;
    } cases[] = {{kTan, 0.0055}, {kTanh, 0.0138}, {kCoth, 0.0295}, {kLog, 0.0172}};
    for (const auto& c : cases) {
        const double gs2 = c.p.gamma * c.p.sigma * c.p.sigma;
        const WSolution sol = WSolution::make(c.p, c.lambda);
        CHECK(w_eval(sol, 0.0) == doctest::Approx((c.p.mu - c.lambda) / gs2).epsilon(1e-14));
        // w is monotone between the boundary weights; the direction flips with
        // the sign of m - m^2, so compare against the total endpoint change
        const double dir = w_eval(sol, sol.y_hi) - w_eval(sol, sol.y_lo);
        double prev = w_eval(sol, sol.y_lo);
        bool monotone = true;
        for (int i = 1; i <= 200; ++i) {
            const double cur = w_eval(sol, sol.y_lo + (sol.y_hi - sol.y_lo) * i / 200.0);
            if ((cur - prev) * dir < -1e-12 * std::fabs(dir)) monotone = false;
            prev = cur;
        }
        CHECK(monotone);
    }
}

TEST_CASE("evaluation is continuous across the vanishing-discriminant degeneracy") {
    // choose gamma so the signed discriminant crosses zero; the rational form
    // of the solution must not jump between the trig and hyperbolic regimes
    MarketParams p{0.08, 0.16, 0.02, 5.0, 0.01};
    const double lambda = 0.005;
    auto a2s_of = [&](double gamma) {
        MarketParams q = p;
        q.gamma = gamma;
        return WSolution::make(q, lambda).a2s;
    };
    double lo = 1.01, hi = 5.0;
    REQUIRE(a2s_of(lo) * a2s_of(hi) < 0.0);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (a2s_of(mid) * a2s_of(lo) <= 0.0) hi = mid;
        else lo = mid;
    }
    MarketParams below = p, above = p;
    below.gamma = lo - 1e-9;
    above.gamma = hi + 1e-9;
    const WSolution sa = WSolution::make(below, lambda);
    const WSolution sb = WSolution::make(above, lambda);
    for (double y : {0.05, 0.1, 0.2}) {
        CHECK(w_eval(sa, y) == doctest::Approx(w_eval(sb, y)).epsilon(1e-7));
    }
}

TEST_CASE("pole past the domain raises PoleEncountered") {
    const WSolution sol = WSolution::make(kCoth, 0.0295);
    bool threw = false;
    try {
        // walk far beyond the no-trade interval until the denominator crosses;
        // for these parameters the pole sits below the interval
        for (double y = sol.y_lo; y > sol.y_lo - 50.0; y -= 0.05) (void)w_eval(sol, y);
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == Errc::PoleEncountered);
    }
    CHECK(threw);
}
