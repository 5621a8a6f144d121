// Benchmark front end: configure runs, execute them, and emit plot-ready CSV
// plus JSON metrics. Exit codes: 0 success, 2 configuration error, 3 solver
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fct/runner.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

void add_common_options(CLI::App* cmd, fct::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--problem", cfg.problem, "benchmark problem name");
    cmd->add_option("--mode", cfg.mode, "limiter mode: LP, AP, LE, AE, LET, low, high");
    cmd->add_option("--sigma", cfg.sigma, "time weight in [0,1]");
    auto* cells = cmd->add_option("--cells", "cells per axis override");
    auto* dt = cmd->add_option("--dt", "time step override");
    auto* tend = cmd->add_option("--t-end", "end time override");
    cmd->add_option("--low-flux", cfg.low_flux, "upwind, rusanov or godunov");
    cmd->add_option("--high-flux", cfg.high_flux, "centered or quick");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for randomized self checks");
    cmd->callback([cells, dt, tend, &cfg] {
        if (!cells->empty()) cfg.cells = cells->as<int>();
        if (!dt->empty()) cfg.dt = dt->as<double>();
        if (!tend->empty()) cfg.t_end = tend->as<double>();
    });
}

fct::RunConfig load_config(const std::string& path, const fct::RunConfig& overrides,
                           const CLI::App* cmd) {
    fct::RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw fct::ValidationError("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = fct::run_config_from_json(ss.str());
    }
    // Flags given on the command line win over file values.
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--problem") || cfg.problem.empty()) cfg.problem = overrides.problem;
    if (given("--mode")) cfg.mode = overrides.mode;
    if (given("--sigma")) cfg.sigma = overrides.sigma;
    if (given("--cells")) cfg.cells = overrides.cells;
    if (given("--dt")) cfg.dt = overrides.dt;
    if (given("--t-end")) cfg.t_end = overrides.t_end;
    if (given("--low-flux")) cfg.low_flux = overrides.low_flux;
    if (given("--high-flux")) cfg.high_flux = overrides.high_flux;
    if (given("--out")) cfg.out_dir = overrides.out_dir;
    if (given("--seed")) cfg.seed = overrides.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flux-limited finite-volume benchmark driver"};
    app.require_subcommand(1);

    fct::RunConfig flags;
    std::string config_path;

    auto* run_cmd = app.add_subcommand("run", "execute one configured benchmark run");
    add_common_options(run_cmd, flags, config_path);

    auto* bench_cmd = app.add_subcommand("bench", "reproduce a published comparison table");
    std::string table_id;
    std::string bench_out;
    std::string bench_mode;
    double bench_sigma = -1.0;
    bench_cmd->add_option("table", table_id, "table1..table5")->required();
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("--sigma", bench_sigma, "restrict to one sigma value");
    bench_cmd->add_option("--mode", bench_mode, "restrict to LP or AP");

    auto* compare_cmd =
        app.add_subcommand("compare", "run several limiter modes and compare to the reference");
    fct::RunConfig cmp_flags;
    std::string cmp_config_path;
    std::string cmp_modes = "LP,LE";
    add_common_options(compare_cmd, cmp_flags, cmp_config_path);
    compare_cmd->add_option("--modes", cmp_modes, "comma-separated limiter modes");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in sanity battery");
    unsigned long selftest_seed = 12345;
    bool selftest_verbose = false;
    selftest_cmd->add_option("--seed", selftest_seed, "fuzz seed");
    selftest_cmd->add_flag("--verbose", selftest_verbose, "print each check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const fct::RunConfig cfg = load_config(config_path, flags, run_cmd);
            const fct::RunResult r = fct::run_problem(cfg);
            std::printf("problem=%s mode=%s sigma=%g cells=%d steps=%ld\n", cfg.problem.c_str(),
                        cfg.mode.c_str(), cfg.sigma, r.cells, r.steps);
            std::printf("l1_error=%.6e y_max=%.6f conservation_drift=%.3e\n", r.l1, r.y_max,
                        r.conservation_drift);
            for (const auto& s : r.shapes)
                std::printf("  shape %-16s l1=%.6e y_max=%.6f\n", s.name.c_str(), s.l1, s.y_max);
            if (!r.residual_series.empty())
                std::printf("entropy_residual_max=%.3e\n", r.residual_max_overall);
            if (!cfg.out_dir.empty())
                std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
            return 0;
        }
        if (bench_cmd->parsed()) {
            std::optional<double> sf;
            if (bench_sigma >= 0.0) sf = bench_sigma;
            const auto rows = fct::bench_table(table_id, bench_out, sf, bench_mode, true);
            std::printf("%-18s %-6s %-4s %-13s %-13s %-9s\n", "case", "sigma", "mode",
                        "l1_measured", "l1_paper", "rel_dev");
            for (const auto& b : rows)
                std::printf("%-18s %-6.2f %-4s %-13.6e %-13.6e %+9.4f\n", b.case_name.c_str(),
                            b.sigma, b.mode.c_str(), b.l1, b.l1_paper,
                            (b.l1 - b.l1_paper) / b.l1_paper);
            return 0;
        }
        if (compare_cmd->parsed()) {
            const fct::RunConfig cfg = load_config(cmp_config_path, cmp_flags, compare_cmd);
            std::vector<std::string> modes;
            std::stringstream ss(cmp_modes);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) modes.push_back(tok);
            const auto entries = fct::compare_modes(cfg, modes, cfg.out_dir);
            std::printf("%-5s %-13s %-9s %-13s\n", "mode", "l1_distance", "y_max",
                        "residual_max");
            for (const auto& e : entries)
                std::printf("%-5s %-13.6e %-9.5f %-13.3e\n", e.mode.c_str(), e.distance, e.y_max,
                            e.residual_max);
            return 0;
        }
        if (selftest_cmd->parsed()) {
            const bool ok = fct::selftest(selftest_seed, selftest_verbose);
            std::printf("selftest: %s\n", ok ? "PASS" : "FAIL");
            return ok ? 0 : 1;
        }
    } catch (const fct::ValidationError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitValidation;
    } catch (const fct::GridError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    }
    return 0;
}
