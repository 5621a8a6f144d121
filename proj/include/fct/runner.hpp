#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fct/problems.hpp"

namespace fct {

struct RunConfig {
    std::string problem;
    std::string mode = "AP";
    double sigma = 0.0;
    std::optional<int> cells;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::string low_flux;   // empty = problem default (upwind / rusanov)
    std::string high_flux;  // empty = centered
    std::string out_dir;    // empty = keep everything in memory
    unsigned long seed = 12345;

    bool operator==(const RunConfig&) const = default;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);

struct RunResult {
    RunConfig resolved;  // every default filled in
    int cells = 0;
    double dt = 0.0;
    double t_end = 0.0;
    long steps = 0;
    double l1 = 0.0;
    double y_max = 0.0;
    std::vector<ShapeError> shapes;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double conservation_drift = 0.0;  // relative
    long picard_total = 0;
    long lp_iterations_total = 0;
    double alpha_min = 1.0;
    std::vector<double> entropy_series;
    std::vector<double> residual_series;
    double residual_max_overall = 0.0;
    double runtime_seconds = 0.0;
    Field solution;
    Field reference;
};

/// Executes one configured benchmark run; writes solution.csv, metrics.json
/// and manifest.json when out_dir is set.
RunResult run_problem(const RunConfig& cfg);

struct BenchRow {
    std::string case_name;
    double sigma = 0.0;
    std::string mode;
    double l1 = 0.0, l1_paper = 0.0;
    double y_max = 0.0, y_max_paper = 0.0;
    double y_max_exact = 0.0;  // table5 only
};

/// Reruns one published comparison table and reports measured values next to
/// the published ones. Optional filters trim the run matrix.
std::vector<BenchRow> bench_table(const std::string& table_id, const std::string& out_dir,
                                  std::optional<double> sigma_filter = {},
                                  const std::string& mode_filter = {}, bool verbose = false);

struct CompareEntry {
    std::string mode;
    double distance = 0.0;  // L1 distance to the problem reference
    double y_max = 0.0;
    double residual_max = 0.0;
};

std::vector<CompareEntry> compare_modes(const RunConfig& base,
                                        const std::vector<std::string>& modes,
                                        const std::string& out_dir = {});

/// Quick built-in battery (flux consistency, LP fuzz vs the enumeration
/// oracle, one advection step against a direct reimplementation).
bool selftest(unsigned long seed, bool verbose);

}  // namespace fct
