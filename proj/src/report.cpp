#include "notrade/report.hpp"

#include <cmath>
#include <cstdio>

#include "notrade/gapsolve.hpp"

namespace notrade {

namespace {

// 17 significant digits round-trips any double exactly
std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Report make_report(const SolvedModel& model) {
    Report rep;
    rep.params = model.params;
    rep.policy = model.policy;
    rep.lambda_asym = model.policy.degenerate ? 0.0 : lambda_asymptotic(model.params);
    const double gs2 = model.params.gamma * model.params.sigma * model.params.sigma;
    rep.pi_minus_asym = (model.params.mu - rep.lambda_asym) / gs2;
    rep.pi_plus_asym = (model.params.mu + rep.lambda_asym) / gs2;
    rep.esr_asym = esr_asymptotic(model.params);
    rep.residual = model.gap.residual;
    rep.iterations = model.gap.iterations;
    return rep;
}

nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["params"] = {{"mu", r.params.mu},
                   {"sigma", r.params.sigma},
                   {"r", r.params.r},
                   {"gamma", r.params.gamma},
                   {"eps", r.params.eps}};
    j["policy"] = {{"lambda", r.policy.lambda}, {"pi_minus", r.policy.pi_minus},
                   {"pi_plus", r.policy.pi_plus}, {"l", r.policy.l},
                   {"u", r.policy.u},           {"beta", r.policy.beta},
                   {"esr", r.policy.esr},       {"degenerate", r.policy.degenerate}};
    j["asymptotics"] = {{"lambda", r.lambda_asym},
                        {"pi_minus", r.pi_minus_asym},
                        {"pi_plus", r.pi_plus_asym},
                        {"esr", r.esr_asym}};
    if (r.bounds) {
        j["bounds"] = {{"horizon", r.bounds->horizon},
                       {"upper", r.bounds->upper},
                       {"lower", r.bounds->lower},
                       {"loss_cap", r.bounds->loss_cap},
                       {"int_w", r.bounds->int_w},
                       {"int_w_tilde", r.bounds->int_w_tilde},
                       {"leading_order_only", r.bounds->leading_order_only}};
    }
    if (r.sim) {
        j["sim"] = {{"ce_rate", r.sim->ce_rate},
                    {"ce_se", r.sim->ce_se},
                    {"mean_turnover", r.sim->mean_turnover},
                    {"occupancy_lo", r.sim->occupancy_lo},
                    {"occupancy_hi", r.sim->occupancy_hi},
                    {"w_min", r.sim->w_min},
                    {"w_max", r.sim->w_max},
                    {"n_paths", r.sim->n_paths},
                    {"n_steps", r.sim->n_steps}};
    }
    j["diagnostics"] = {{"residual", r.residual}, {"iterations", r.iterations}};
    return j;
}

std::string render_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

std::vector<SweepRow> run_sweep(const MarketParams& base, const std::vector<double>& eps_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        MarketParams p = base;
        p.eps = eps;
        SweepRow row;
        row.eps = eps;
        try {
            const SolvedModel m = solve_model(p);
            const double esr0 = baseline(m.params).esr0;
            row.lambda_exact = m.policy.lambda;
            row.lambda_asym = m.policy.degenerate ? 0.0 : lambda_asymptotic(m.params);
            row.pi_minus = m.policy.pi_minus;
            row.pi_plus = m.policy.pi_plus;
            row.esr_exact = m.policy.esr;
            row.esr_asym = esr_asymptotic(m.params);
            row.loss = esr0 - m.policy.esr;
        } catch (const Error& e) {
            row.failed = true;
            row.error = errc_name(e.code());
        }
        rows.push_back(row);
    }
    return rows;
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "eps,lambda_exact,lambda_asym,pi_minus,pi_plus,esr_exact,esr_asym,loss,status\n";
    for (const auto& r : rows) {
        if (r.failed) {
            out += num17(r.eps) + ",,,,,,,," + r.error + "\n";
            continue;
        }
        out += num17(r.eps) + "," + num17(r.lambda_exact) + "," + num17(r.lambda_asym) + "," +
               num17(r.pi_minus) + "," + num17(r.pi_plus) + "," + num17(r.esr_exact) + "," +
               num17(r.esr_asym) + "," + num17(r.loss) + ",ok\n";
    }
    return out;
}

std::string render_paths_csv(const std::vector<PathSummary>& paths) {
    std::string out = "path_id,terminal_liquidation,turnover,occupancy_lo,occupancy_hi\n";
    for (const auto& p : paths) {
        out += std::to_string(p.path_id) + "," + num17(p.terminal_liquidation) + "," + num17(p.turnover) +
               "," + num17(p.occupancy_lo) + "," + num17(p.occupancy_hi) + "\n";
    }
    return out;
}

}  // namespace notrade
