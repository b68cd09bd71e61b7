#include "notrade/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "notrade/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace notrade {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NOTRADE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Simulator::Simulator(const MarketParams& params, const NoTradePolicy& policy)
    : params_(params), policy_(policy) {
    if (policy.degenerate) {
        mode_ = Mode::BuyAndHold;
        return;
    }
    if (params.eps == 0.0 || policy.lambda == 0.0) {
        mode_ = Mode::Frictionless;
        return;
    }
    mode_ = Mode::Reflected;
    wsol_ = WSolution::make(params, policy.lambda);
    GapSolution gap;
    gap.lambda = policy.lambda;
    gap.l = policy.l;
    gap.u = policy.u;
    coeffs_ = shadow_coeffs(params, gap, *wsol_);
    loglu_ = std::log(policy.u / policy.l);
    y_lo_ = std::min(0.0, loglu_);
    y_hi_ = std::max(0.0, loglu_);
}

PathState Simulator::initial_state(const SimConfig& cfg) const {
    const double cash = cfg.xi0 * cfg.s0_safe;
    const double stock = cfg.xi * cfg.s0;
    if (cfg.xi0 < 0.0 || cfg.xi < 0.0 || cash + stock <= 0.0)
        throw Error(Errc::ZeroEndowment, "initial endowment must be nonnegative and nonzero");

    PathState st;
    st.s = cfg.s0;
    st.s_safe = cfg.s0_safe;

    if (mode_ == Mode::BuyAndHold) {
        st.phi = cfg.xi + cash / cfg.s0;
        st.phi0 = 0.0;
        st.x_shadow = st.phi * st.s;
        return st;
    }
    if (mode_ == Mode::Frictionless) {
        const double pi = params_.merton();
        st.x_shadow = cash + stock;
        st.phi = pi * st.x_shadow / st.s;
        st.phi0 = (1.0 - pi) * st.x_shadow / st.s_safe;
        return st;
    }

    st.y = notrade::initial_state(cfg.xi0, cfg.xi, cfg.s0, cfg.s0_safe, policy_);
    const double l = policy_.l, u = policy_.u;
    if (stock / policy_.l <= cash) {
        // initial purchase at the ask down to the buy boundary
        st.phi = l * (cash + stock) / ((1.0 + l) * cfg.s0);
        st.phi0 = (cash + stock) / ((1.0 + l) * cfg.s0_safe);
    } else if (stock / policy_.u >= cash) {
        // initial sale at the bid up at the sell boundary
        const double ue = u * (1.0 - params_.eps);
        st.phi = u * (cash + (1.0 - params_.eps) * stock) / ((1.0 + ue) * cfg.s0);
        st.phi0 = st.phi * cfg.s0 / (u * cfg.s0_safe);
    } else {
        st.phi = cfg.xi;
        st.phi0 = cfg.xi0;
    }
    st.x_shadow = st.phi0 * st.s_safe + st.phi * coeffs_->g(st.y) * st.s;
    return st;
}

PathState Simulator::step(const PathState& state, double dW, double dt) const {
    const double mu = params_.mu, sig = params_.sigma, r = params_.r;
    PathState st = state;
    st.s = state.s * std::exp((mu + r - 0.5 * sig * sig) * dt + sig * dW);
    st.s_safe = state.s_safe * std::exp(r * dt);

    if (mode_ == Mode::BuyAndHold) {
        st.x_shadow = st.phi * st.s;
        return st;
    }
    if (mode_ == Mode::Frictionless) {
        const double pi = params_.merton();
        st.x_shadow = state.x_shadow *
                      std::exp((r + pi * mu - 0.5 * pi * pi * sig * sig) * dt + pi * sig * dW);
        st.phi = pi * st.x_shadow / st.s;
        st.phi0 = (1.0 - pi) * st.x_shadow / st.s_safe;
        return st;
    }

    const double y_raw = state.y + (mu - 0.5 * sig * sig) * dt + sig * dW;
    st.y = std::clamp(y_raw, y_lo_, y_hi_);
    const double delta = st.y - y_raw;

    // local time at Upsilon = 0 (dL) and at Upsilon = log(u/l) (dU); both are
    // negative under leverage, where the domain orientation flips.
    double dL = 0.0, dU = 0.0;
    if (delta > 0.0) {
        if (loglu_ > 0.0) dL = delta;  // pushed up at the buy boundary
        else dU = -delta;
    } else if (delta < 0.0) {
        if (loglu_ > 0.0) dU = -delta;  // pushed down at the sell boundary
        else dL = delta;
    }
    if (dL != 0.0 || dU != 0.0) {
        // Trade to put the post-step stock-cash ratio exactly on the boundary,
        // buying at the ask (ratio l, at Upsilon=0) or selling at the bid
        // (ratio u). Exponentiating the local-time increment instead agrees to
        // first order but lets the ratio identity drift at O(dL^2) per hit.
        if (dL != 0.0) {
            const double wealth = state.phi0 * st.s_safe + state.phi * st.s;
            st.phi = policy_.l * wealth / ((1.0 + policy_.l) * st.s);
            st.phi0 = wealth / ((1.0 + policy_.l) * st.s_safe);
        } else {
            const double ue = policy_.u * (1.0 - params_.eps);
            const double wealth = state.phi0 * st.s_safe + state.phi * (1.0 - params_.eps) * st.s;
            st.phi = policy_.u * wealth / ((1.0 + ue) * st.s);
            st.phi0 = st.phi * st.s / (policy_.u * st.s_safe);
        }
        st.local_lo += (loglu_ > 0.0) ? dL : dU;
        st.local_hi += (loglu_ > 0.0) ? dU : dL;
    }
    st.x_shadow = st.phi0 * st.s_safe + st.phi * coeffs_->g(st.y) * st.s;
    return st;
}

double Simulator::liquidation_value(const PathState& state) const {
    return notrade::liquidation_value(state, params_.eps);
}

double liquidation_value(const PathState& state, double eps) {
    const double risky = state.phi > 0.0 ? state.phi * (1.0 - eps) * state.s : state.phi * state.s;
    return state.phi0 * state.s_safe + risky;
}

PathSummary Simulator::simulate_path(const SimConfig& cfg, long path_id, long n_steps) const {
    const uint64_t stream = cfg.antithetic ? static_cast<uint64_t>(path_id) >> 1
                                           : static_cast<uint64_t>(path_id);
    const double sign = (cfg.antithetic && (path_id & 1)) ? -1.0 : 1.0;
    NormalStream rng(cfg.seed, stream);
    const double sqdt = std::sqrt(cfg.dt);

    PathState st = initial_state(cfg);
    PathSummary out;
    out.path_id = path_id;
    out.y_min = out.y_max = st.y;
    out.sandwich_slack = std::numeric_limits<double>::infinity();

    const double spread_factor = params_.eps / (1.0 - params_.eps);
    long at_lo = 0, at_hi = 0;

    for (long k = 0; k < n_steps; ++k) {
        const double dW = sign * rng.next() * sqdt;
        const PathState prev = st;
        st = step(prev, dW, cfg.dt);
        if (mode_ == Mode::Reflected) {
            if (st.y == y_lo_) ++at_lo;
            if (st.y == y_hi_) ++at_hi;
            out.y_min = std::min(out.y_min, st.y);
            out.y_max = std::max(out.y_max, st.y);
            if (st.phi != prev.phi) {
                out.turnover += std::fabs(st.phi / prev.phi - 1.0);
                if (st.local_lo == prev.local_lo && st.local_hi == prev.local_hi)
                    out.trade_off_boundary = true;
                // shares must only move when the pre-projection state exited
                const double y_raw = prev.y + (params_.mu - 0.5 * params_.sigma * params_.sigma) * cfg.dt +
                                     params_.sigma * dW;
                if (y_raw >= y_lo_ && y_raw <= y_hi_) out.trade_off_boundary = true;
            }
            // wealth sandwich around the shadow wealth
            const double xi_liq = liquidation_value(st);
            const double z = coeffs_->g(st.y) * policy_.l * std::exp(st.y);
            const double w_here = z / (1.0 + z);
            const double lo_slack = xi_liq - (1.0 - spread_factor * w_here) * st.x_shadow;
            const double hi_slack = st.x_shadow - xi_liq;
            out.sandwich_slack = std::min({out.sandwich_slack, lo_slack, hi_slack});
        }
    }

    out.terminal_liquidation = liquidation_value(st);
    if (mode_ == Mode::Reflected && n_steps > 0) {
        out.occupancy_lo = static_cast<double>(at_lo) / static_cast<double>(n_steps);
        out.occupancy_hi = static_cast<double>(at_hi) / static_cast<double>(n_steps);
    }
    return out;
}

SimResult Simulator::run(const SimConfig& cfg, bool parallel, std::vector<PathSummary>* per_path) const {
    if (!(cfg.dt > 0.0) || !(cfg.horizon >= cfg.dt))
        throw Error(Errc::NonPositiveHorizon, "require dt > 0 and horizon >= dt");
    if (cfg.n_paths < 1) throw Error(Errc::NonPositiveHorizon, "n_paths must be >= 1");
    const long n_steps = std::lround(cfg.horizon / cfg.dt);
    const long n = cfg.n_paths;

    std::vector<PathSummary> paths(n);
#ifdef _OPENMP
    const int nt = parallel ? resolve_thread_count(cfg.threads) : 1;
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
    for (long i = 0; i < n; ++i) paths[i] = simulate_path(cfg, i, n_steps);
#else
    (void)parallel;
    for (long i = 0; i < n; ++i) paths[i] = simulate_path(cfg, i, n_steps);
#endif

    const double T = n_steps * cfg.dt;
    const double gamma = params_.gamma;

    SimResult res;
    res.n_paths = n;
    res.n_steps = n_steps;

    // deterministic serial reduction, independent of the worker count
    std::vector<double> growth(n);
    for (long i = 0; i < n; ++i) {
        const double xi = paths[i].terminal_liquidation;
        if (gamma > 1.0 && !(xi > 0.0))
            throw Error(Errc::NumericalOverflow, "nonpositive liquidation value under gamma > 1");
        growth[i] = std::log(xi);
        res.mean_turnover += paths[i].turnover;
        res.occupancy_lo += paths[i].occupancy_lo;
        res.occupancy_hi += paths[i].occupancy_hi;
    }
    res.mean_turnover /= static_cast<double>(n) * T;
    res.occupancy_lo /= static_cast<double>(n);
    res.occupancy_hi /= static_cast<double>(n);

    if (gamma == 1.0) {
        double mean = 0.0;
        for (double v : growth) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : growth) var += (v - mean) * (v - mean);
        var /= n > 1 ? static_cast<double>(n - 1) : 1.0;
        res.ce_rate = mean / T;
        res.ce_se = std::sqrt(var / static_cast<double>(n)) / T;
    } else {
        // log-sum-exp for the power-utility certainty equivalent
        double peak = -std::numeric_limits<double>::infinity();
        for (double v : growth) peak = std::max(peak, (1.0 - gamma) * v);
        std::vector<double> scaled(n);
        for (long i = 0; i < n; ++i) scaled[i] = std::exp((1.0 - gamma) * growth[i] - peak);
        // antithetic pairs count as one sample for the error estimate
        std::vector<double> samples;
        if (cfg.antithetic && n % 2 == 0) {
            samples.resize(n / 2);
            for (long i = 0; i < n / 2; ++i) samples[i] = 0.5 * (scaled[2 * i] + scaled[2 * i + 1]);
        } else {
            samples = scaled;
        }
        const long m = static_cast<long>(samples.size());
        double mean = 0.0;
        for (double v : samples) mean += v;
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (double v : samples) var += (v - mean) * (v - mean);
        var /= m > 1 ? static_cast<double>(m - 1) : 1.0;
        res.ce_rate = (peak + std::log(mean)) / ((1.0 - gamma) * T);
        res.ce_se = std::sqrt(var / static_cast<double>(m)) / (std::fabs(1.0 - gamma) * T * mean);
    }

    if (mode_ == Mode::Reflected) {
        double ymin = std::numeric_limits<double>::infinity();
        double ymax = -std::numeric_limits<double>::infinity();
        for (const auto& ps : paths) {
            ymin = std::min(ymin, ps.y_min);
            ymax = std::max(ymax, ps.y_max);
        }
        const double w1 = w_eval(*wsol_, ymin);
        const double w2 = w_eval(*wsol_, ymax);
        res.w_min = std::min(w1, w2);
        res.w_max = std::max(w1, w2);
    } else if (mode_ == Mode::Frictionless) {
        res.w_min = res.w_max = params_.merton();
    } else {
        res.w_min = res.w_max = 1.0;
    }

    if (per_path) *per_path = std::move(paths);
    return res;
}

SimResult estimate_ce_rate(const SimConfig& cfg, const MarketParams& params, const NoTradePolicy& policy,
                           bool parallel) {
    return Simulator(params, policy).run(cfg, parallel);
}

}  // namespace notrade
