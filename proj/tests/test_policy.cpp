#include <cmath>

#include "doctest.h"
#include "notrade/policy.hpp"
#include "oracles.hpp"

using namespace notrade;

namespace {
const MarketParams kP1{0.08, 0.16, 0.02, 5.0, 0.01};
}

TEST_CASE("boundary ratios reproduce the no-trade weights") {
    const SolvedModel m = solve_model(kP1);
    const double lo = m.policy.l / (1.0 + m.policy.l);
    const double ue = m.policy.u * (1.0 - kP1.eps);
    const double hi = ue / (1.0 + ue);
    CHECK(std::fabs(lo - m.policy.pi_minus) < 1e-12);
    CHECK(std::fabs(hi - m.policy.pi_plus) < 1e-12);
    CHECK(m.policy.pi_minus == doctest::Approx(0.5819423117533653).epsilon(1e-10));
    CHECK(m.policy.pi_plus == doctest::Approx(0.6680576882466347).epsilon(1e-10));
    CHECK(m.policy.esr == doctest::Approx(0.04488134627090276).epsilon(1e-10));
}

TEST_CASE("trading friction can only lower the equivalent safe rate") {
    for (const MarketParams& p :
         {kP1, MarketParams{0.08, 0.16, 0.02, 1.25, 0.01}, MarketParams{0.08, 0.16, 0.02, 0.5, 0.01}}) {
        const SolvedModel m = solve_model(p);
        CHECK(m.policy.esr <= baseline(p).esr0);
        CHECK(m.policy.esr == doctest::Approx(p.r + m.policy.beta).epsilon(1e-15));
    }
}

TEST_CASE("welfare asymptotics approach the exact rate") {
    MarketParams p = kP1;
    p.eps = 1e-5;
    const SolvedModel m = solve_model(p);
    const double esr0 = baseline(p).esr0;
    const double exact_loss = esr0 - m.policy.esr;
    const double asym_loss = esr0 - esr_asymptotic(p);
    CHECK(asym_loss / exact_loss == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("shadow price ratio pins the spread endpoints and stays inside") {
    const SolvedModel m = solve_model(kP1);
    const WSolution sol = WSolution::make(m.params, m.policy.lambda);
    const ShadowCoefficients coeffs = shadow_coeffs(m.params, m.gap, sol);
    const double loglu = std::log(m.policy.u / m.policy.l);
    CHECK(std::fabs(coeffs.g(0.0) - 1.0) < 1e-12);
    CHECK(std::fabs(coeffs.g(loglu) - (1.0 - kP1.eps)) < 1e-12);
    double prev = coeffs.g(0.0);
    for (int i = 1; i <= 10000; ++i) {
        const double g = coeffs.g(loglu * i / 10000.0);
        CHECK(g <= 1.0 + 1e-12);
        CHECK(g >= 1.0 - kP1.eps - 1e-12);
        CHECK(g <= prev + 1e-12);  // monotone from ask to bid
        prev = g;
    }
}

TEST_CASE("shadow drift and volatility match the generator of g S") {
    // mu~ and sigma~ must be the Ito coefficients of S~ = g(Y) S; check them
    // against finite differences of g plus the Ito correction
    const SolvedModel m = solve_model(kP1);
    const WSolution sol = WSolution::make(m.params, m.policy.lambda);
    const ShadowCoefficients coeffs = shadow_coeffs(m.params, m.gap, sol);
    const MarketParams& p = m.params;
    const double s2 = p.sigma * p.sigma;
    auto g = [&](double y) { return coeffs.g(y); };
    for (double y : {0.05, 0.15, 0.3}) {
        const double gp = oracle::fd1(g, y), gpp = oracle::fd2(g, y), gv = g(y);
        const double sig_ref = p.sigma * (1.0 + gp / gv);
        // drift of dS~/S~ in excess of r under the ask-price dynamics
        const double mu_ref = p.mu + (p.mu - 0.5 * s2) * gp / gv + 0.5 * s2 * gpp / gv + s2 * gp / gv;
        CHECK(coeffs.sigma_tilde(y) == doctest::Approx(sig_ref).epsilon(1e-5));
        CHECK(coeffs.mu_tilde(y) == doctest::Approx(mu_ref).epsilon(1e-4));
    }
}

TEST_CASE("log utility ties the shadow weight to w") {
    MarketParams p{0.08, 0.16, 0.02, 1.0, 0.01};
    const SolvedModel m = solve_model(p);
    const WSolution sol = WSolution::make(p, m.policy.lambda);
    const ShadowCoefficients coeffs = shadow_coeffs(p, m.gap, sol);
    const double loglu = std::log(m.policy.u / m.policy.l);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double y = loglu * i / 2000.0;
        const double st = coeffs.sigma_tilde(y);
        worst = std::max(worst, std::fabs(coeffs.mu_tilde(y) / (st * st) - w_eval(sol, y)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("initial endowments map onto the state interval") {
    const SolvedModel m = solve_model(kP1);
    const double loglu = std::log(m.policy.u / m.policy.l);
    // all cash: below the buy boundary
    CHECK(initial_state(1.0, 0.0, 1.0, 1.0, m.policy) == 0.0);
    // all stock: above the sell boundary
    CHECK(initial_state(0.0, 1.0, 1.0, 1.0, m.policy) == loglu);
    // geometric midpoint of the ratio interval lands mid-interval
    const double ratio = std::sqrt(m.policy.l * m.policy.u);
    CHECK(initial_state(1.0, ratio, 1.0, 1.0, m.policy) == doctest::Approx(0.5 * loglu).epsilon(1e-12));
    // inside: exact ratio position
    CHECK(initial_state(1.0, 1.5, 1.0, 1.0, m.policy) ==
          doctest::Approx(std::log(1.5 / m.policy.l)).epsilon(1e-12));
}

TEST_CASE("initial endowment guards") {
    const SolvedModel m = solve_model(kP1);
    CHECK_THROWS_AS(initial_state(0.0, 0.0, 1.0, 1.0, m.policy), Error);
    CHECK_THROWS_AS(initial_state(-1.0, 2.0, 1.0, 1.0, m.policy), Error);
}

TEST_CASE("leverage policy has negative ratios but valid weights above one") {
    MarketParams p{0.08, 0.16, 0.02, 1.25, 0.01};
    const SolvedModel m = solve_model(p);
    CHECK(m.policy.l < 0.0);
    CHECK(m.policy.u < 0.0);
    CHECK(m.policy.pi_minus > 1.0);
    CHECK(m.policy.pi_plus > 1.0);
    CHECK(m.policy.pi_minus < m.policy.pi_plus);
    // under leverage all-cash still starts at the buy boundary
    CHECK(initial_state(1.0, 0.0, 1.0, 1.0, m.policy) == 0.0);
}

TEST_CASE("degenerate Merton proportion yields buy and hold") {
    MarketParams p{0.128, 0.16, 0.02, 5.0, 0.01};
    const SolvedModel m = solve_model(p);
    CHECK(m.policy.degenerate);
    CHECK(m.policy.pi_minus == 1.0);
    CHECK(m.policy.pi_plus == 1.0);
    CHECK(m.policy.esr == doctest::Approx(baseline(p).esr0).epsilon(1e-15));
}
