#include <chrono>
#include <cstdio>
#include <cstring>

#include "notrade/mc.hpp"
#include "notrade/policy.hpp"

// Times the Monte Carlo path loop serially and with the OpenMP worker pool
// and verifies the aggregates agree bit for bit.
int main(int argc, char** argv) {
    notrade::SimConfig cfg;
    cfg.horizon = 10.0;
    cfg.n_paths = 2000;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (!std::strcmp(argv[i], "--paths")) cfg.n_paths = std::atol(argv[i + 1]);
        if (!std::strcmp(argv[i], "--horizon")) cfg.horizon = std::atof(argv[i + 1]);
    }

    const notrade::MarketParams params{0.08, 0.16, 0.02, 5.0, 0.01};
    const notrade::SolvedModel model = notrade::solve_model(params);
    const notrade::Simulator sim(model.params, model.policy);

    using clock = std::chrono::steady_clock;

    auto t0 = clock::now();
    const notrade::SimResult serial = sim.run(cfg, false);
    auto t1 = clock::now();
    const notrade::SimResult parallel = sim.run(cfg, true);
    auto t2 = clock::now();

    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double tp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("paths=%ld steps=%ld\n", cfg.n_paths, serial.n_steps);
    std::printf("serial    %8.3f s   ce=%.17g\n", ts, serial.ce_rate);
    std::printf("parallel  %8.3f s   ce=%.17g  (%d workers)\n", tp, parallel.ce_rate,
                notrade::resolve_thread_count(0));
    std::printf("speedup   %8.2fx\n", ts / tp);
    if (serial.ce_rate != parallel.ce_rate || serial.mean_turnover != parallel.mean_turnover) {
        std::printf("MISMATCH between serial and parallel aggregates\n");
        return 1;
    }
    std::printf("aggregates identical\n");
    return 0;
}
