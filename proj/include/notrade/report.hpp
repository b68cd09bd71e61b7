#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "notrade/bounds.hpp"
#include "notrade/mc.hpp"
#include "notrade/model.hpp"
#include "notrade/policy.hpp"

namespace notrade {

inline constexpr const char* kReportSchema = "notrade-report/1";

struct Report {
    MarketParams params;
    NoTradePolicy policy;
    // asymptotic companions of the exact solution
    double lambda_asym = 0.0;
    double pi_minus_asym = 0.0;
    double pi_plus_asym = 0.0;
    double esr_asym = 0.0;
    std::optional<HorizonBounds> bounds;
    std::optional<SimResult> sim;
    double residual = 0.0;
    int iterations = 0;
};

Report make_report(const SolvedModel& model);

nlohmann::ordered_json to_json(const Report& report);

// Serialized form used for golden files: every double is emitted by the
// shortest round-trip representation, so equal values give equal bytes.
std::string render_json(const Report& report);

struct SweepRow {
    double eps = 0.0;
    double lambda_exact = 0.0;
    double lambda_asym = 0.0;
    double pi_minus = 0.0;
    double pi_plus = 0.0;
    double esr_exact = 0.0;
    double esr_asym = 0.0;
    double loss = 0.0;  // esr0 - esr_exact
    bool failed = false;
    std::string error;
};

std::vector<SweepRow> run_sweep(const MarketParams& base, const std::vector<double>& eps_grid);

std::string render_sweep_csv(const std::vector<SweepRow>& rows);

std::string render_paths_csv(const std::vector<PathSummary>& paths);

}  // namespace notrade
