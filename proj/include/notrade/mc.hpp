#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "notrade/model.hpp"
#include "notrade/policy.hpp"

namespace notrade {

struct SimConfig {
    double horizon = 50.0;
    double dt = 1.0 / 2520.0;  // 10 steps per business day
    long n_paths = 10000;
    uint64_t seed = 12345;
    double xi0 = 1.0;      // initial safe units
    double xi = 0.0;       // initial risky shares
    double s0 = 1.0;       // initial ask price
    double s0_safe = 1.0;  // initial safe account value
    bool antithetic = false;
    int threads = 0;  // 0: NOTRADE_THREADS env or OpenMP default
};

struct PathState {
    double y = 0.0;
    double local_lo = 0.0;  // local time accumulated at y_lo
    double local_hi = 0.0;  // local time accumulated at y_hi
    double x_shadow = 0.0;
    double phi = 0.0;
    double phi0 = 0.0;
    double s = 1.0;
    double s_safe = 1.0;
};

struct PathSummary {
    long path_id = 0;
    double terminal_liquidation = 0.0;
    double turnover = 0.0;  // sum |dphi|/phi over the path
    double occupancy_lo = 0.0;
    double occupancy_hi = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double sandwich_slack = 0.0;  // most negative slack of the wealth sandwich
    bool trade_off_boundary = false;
};

struct SimResult {
    double ce_rate = 0.0;
    double ce_se = 0.0;
    double mean_turnover = 0.0;
    double occupancy_lo = 0.0;
    double occupancy_hi = 0.0;
    double w_min = 0.0;
    double w_max = 0.0;
    long n_paths = 0;
    long n_steps = 0;
};

// Simulates the reflected log stock-cash ratio and the induced share/wealth
// dynamics. eps = 0 collapses to a constant-weight frictionless portfolio and
// the degenerate Merton case to buy-and-hold, matching the policy module.
class Simulator {
  public:
    Simulator(const MarketParams& params, const NoTradePolicy& policy);

    PathState initial_state(const SimConfig& cfg) const;

    // One Euler increment with projection-and-accumulate reflection. Shares
    // change only by the boundary local-time increments; the safe position is
    // updated by self-financing accounting at ask (buy) / bid (sell).
    PathState step(const PathState& state, double dW, double dt) const;

    double liquidation_value(const PathState& state) const;

    SimResult run(const SimConfig& cfg, bool parallel = true,
                  std::vector<PathSummary>* per_path = nullptr) const;

    const NoTradePolicy& policy() const { return policy_; }
    double y_lo() const { return y_lo_; }
    double y_hi() const { return y_hi_; }

  private:
    enum class Mode { Reflected, Frictionless, BuyAndHold };

    PathSummary simulate_path(const SimConfig& cfg, long path_id, long n_steps) const;

    MarketParams params_;
    NoTradePolicy policy_;
    std::optional<WSolution> wsol_;
    std::optional<ShadowCoefficients> coeffs_;
    Mode mode_ = Mode::Reflected;
    double y_lo_ = 0.0, y_hi_ = 0.0;
    double loglu_ = 0.0;
};

// Free-function forms of the spec surface.
double liquidation_value(const PathState& state, double eps);

SimResult estimate_ce_rate(const SimConfig& cfg, const MarketParams& params, const NoTradePolicy& policy,
                           bool parallel = true);

int resolve_thread_count(int requested);

}  // namespace notrade
