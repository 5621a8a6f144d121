#include "fct/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "fct/simd.hpp"

namespace fct {

using ordered_json = nlohmann::ordered_json;

RunConfig run_config_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    RunConfig cfg;
    cfg.problem = j.value("problem", std::string{});
    cfg.mode = j.value("mode", std::string{"AP"});
    cfg.sigma = j.value("sigma", 0.0);
    if (j.contains("cells")) cfg.cells = j.at("cells").get<int>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("t_end")) cfg.t_end = j.at("t_end").get<double>();
    cfg.low_flux = j.value("low_flux", std::string{});
    cfg.high_flux = j.value("high_flux", std::string{});
    cfg.out_dir = j.value("out", std::string{});
    cfg.seed = j.value("seed", 12345ul);
    return cfg;
}

namespace {

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["problem"] = cfg.problem;
    j["mode"] = cfg.mode;
    j["sigma"] = cfg.sigma;
    if (cfg.cells) j["cells"] = *cfg.cells;
    if (cfg.dt) j["dt"] = *cfg.dt;
    if (cfg.t_end) j["t_end"] = *cfg.t_end;
    if (!cfg.low_flux.empty()) j["low_flux"] = cfg.low_flux;
    if (!cfg.high_flux.empty()) j["high_flux"] = cfg.high_flux;
    if (!cfg.out_dir.empty()) j["out"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    return j;
}

struct ResolvedScheme {
    SchemeConfig scheme;
    LowFluxKind low;
    HighFluxKind high;
};

ResolvedScheme resolve_scheme(const ProblemSpec& prob, const RunConfig& cfg) {
    ResolvedScheme r;
    auto mode = limiter_mode_from_string(cfg.mode);
    if (!mode) throw ValidationError("config.mode: unknown limiter mode '" + cfg.mode + "'");
    if (!(cfg.sigma >= 0.0 && cfg.sigma <= 1.0))
        throw ValidationError("config.sigma: must lie in [0,1]");

    r.low = prob.low_default;
    if (!cfg.low_flux.empty()) {
        if (cfg.low_flux == "upwind")
            r.low = LowFluxKind::Upwind;
        else if (cfg.low_flux == "rusanov")
            r.low = LowFluxKind::Rusanov;
        else if (cfg.low_flux == "godunov")
            r.low = LowFluxKind::Godunov;
        else
            throw ValidationError("config.low_flux: unknown flux '" + cfg.low_flux + "'");
    }
    r.high = HighFluxKind::Centered;
    if (!cfg.high_flux.empty()) {
        if (cfg.high_flux == "quick")
            r.high = HighFluxKind::Quick;
        else if (cfg.high_flux != "centered")
            throw ValidationError("config.high_flux: unknown flux '" + cfg.high_flux + "'");
    }

    const bool is_cons = prob.cons1d.has_value();
    if (mode_uses_entropy(*mode)) {
        if (!is_cons)
            throw ValidationError(
                "config.mode: entropy-constrained modes need a conservation-law problem");
        if (r.high != HighFluxKind::Centered)
            throw ValidationError("config.mode: entropy modes pair with the centered high flux");
        if (*mode != LimiterMode::LET && r.low != LowFluxKind::Rusanov)
            throw ValidationError("config.mode: entropy modes use the rusanov low flux");
    }
    if (is_cons && r.high == HighFluxKind::Quick)
        throw ValidationError("config.high_flux: QUICK applies to linear transport problems");
    if (!is_cons && r.low != LowFluxKind::Upwind)
        throw ValidationError("config.low_flux: linear problems use the upwind low flux");

    r.scheme.sigma = cfg.sigma;
    r.scheme.dt = prob.dt;
    r.scheme.mode = *mode;
    r.scheme.low_flux = r.low;
    r.scheme.high_flux = r.high;
    return r;
}

void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out += buf;
}

void write_solution_csv(const std::string& path, const ProblemSpec& prob, const Field& f) {
    std::string text;
    if (prob.dim == 1) {
        const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
        text += "x,value\n";
        for (int i = 0; i < g.n(); ++i) {
            format_value(text, g.centers[i]);
            text += ',';
            format_value(text, f.values[i]);
            text += '\n';
        }
    } else {
        const Grid2D& g = prob.lin2d->grid;
        text += "x,y,value\n";
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                format_value(text, g.gx.centers[i]);
                text += ',';
                format_value(text, g.gy.centers[j]);
                text += ',';
                format_value(text, f.values[g.index(i, j)]);
                text += '\n';
            }
    }
    std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

RunResult run_problem(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ProblemOverrides ov;
    ov.cells = cfg.cells;
    ov.dt = cfg.dt;
    ov.t_end = cfg.t_end;
    ProblemSpec prob = make_problem(cfg.problem, ov);
    ResolvedScheme rs = resolve_scheme(prob, cfg);

    RunResult res;
    res.resolved = cfg;
    res.resolved.cells = prob.cells;
    res.resolved.dt = prob.dt;
    res.resolved.t_end = prob.t_end;
    res.resolved.low_flux = rs.low == LowFluxKind::Upwind
                                ? "upwind"
                                : (rs.low == LowFluxKind::Rusanov ? "rusanov" : "godunov");
    res.resolved.high_flux = rs.high == HighFluxKind::Centered ? "centered" : "quick";
    res.cells = prob.cells;
    res.dt = prob.dt;
    res.t_end = prob.t_end;

    Field y = initial_field(prob);
    const double mass0 = [&] {
        if (prob.dim == 2) {
            double m = 0.0;
            const Grid2D& g = prob.lin2d->grid;
            for (int j = 0; j < g.ny(); ++j)
                m += g.gy.widths[j] * simd::kernels().dot(g.gx.widths.data(),
                                                          y.values.data() + j * g.nx(), g.nx());
            return m;
        }
        const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
        return simd::kernels().dot(g.widths.data(), y.values.data(), g.n());
    }();
    res.mass_initial = mass0;

    const long steps = std::lround(prob.t_end / prob.dt);
    if (std::abs(steps * prob.dt - prob.t_end) > 1e-9 * std::max(1.0, prob.t_end))
        throw ValidationError("config.dt: t_end must be a whole number of steps");
    res.steps = steps;

    Workspace2D ws2d;
    StepReport report;
    double mass_last = mass0;
    for (long s = 0; s < steps; ++s) {
        SchemeConfig sc = rs.scheme;
        report = StepReport{};
        if (prob.dim == 2) {
            y = step_2d(*prob.lin2d, sc, y, nullptr, &report, &ws2d);
        } else if (prob.cons1d) {
            y = step(*prob.cons1d, sc, y, nullptr, &report);
            if (prob.has_entropy_range && prob.cons1d->entropy)
                res.entropy_series.push_back(entropy_integral(
                    y, prob.cons1d->grid, *prob.cons1d->entropy, prob.entropy_lo,
                    prob.entropy_hi));
            if (report.has_entropy_residual) {
                res.residual_series.push_back(report.entropy_residual_max);
                res.residual_max_overall =
                    std::max(res.residual_max_overall, report.entropy_residual_max);
            }
        } else {
            y = step(*prob.lin1d, sc, y, nullptr, &report);
        }
        res.picard_total += report.picard_iterations;
        res.lp_iterations_total += report.lp_iterations;
        res.alpha_min = std::min(res.alpha_min, report.alpha_min);
        mass_last = report.mass;
        if (!y.all_finite()) throw SolverError("solution lost finiteness at step " +
                                               std::to_string(s));
    }
    y.time = prob.t_end;
    res.mass_final = mass_last;
    const double mass_scale = [&] {
        double s1 = 0.0;
        if (prob.dim == 2) {
            const Grid2D& g = prob.lin2d->grid;
            for (int j = 0; j < g.ny(); ++j)
                for (int i = 0; i < g.nx(); ++i)
                    s1 += g.gx.widths[i] * g.gy.widths[j] * std::abs(y.values[g.index(i, j)]);
        } else {
            const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
            for (int i = 0; i < g.n(); ++i) s1 += g.widths[i] * std::abs(y.values[i]);
        }
        return std::max({1e-30, s1, std::abs(res.mass_initial)});
    }();
    res.conservation_drift = std::abs(res.mass_final - res.mass_initial) / mass_scale;

    res.reference = reference_solution(prob, prob.t_end);
    if (prob.dim == 2) {
        res.l1 = l1_error_2d(y, res.reference, prob.lin2d->grid);
    } else {
        const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
        res.l1 = l1_error(y, res.reference, g);
    }
    res.y_max = simd::kernels().max_val(y.values.data(), y.size());
    res.shapes = shape_errors(prob, y, res.reference, prob.t_end);
    res.solution = y;

    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        write_solution_csv(cfg.out_dir + "/solution.csv", prob, y);

        ordered_json manifest;
        manifest["problem"] = cfg.problem;
        manifest["mode"] = cfg.mode;
        manifest["sigma"] = cfg.sigma;
        manifest["cells"] = prob.cells;
        manifest["dt"] = prob.dt;
        manifest["t_end"] = prob.t_end;
        manifest["steps"] = steps;
        manifest["low_flux"] = res.resolved.low_flux;
        manifest["high_flux"] = res.resolved.high_flux;
        manifest["seed"] = cfg.seed;
        manifest["out"] = cfg.out_dir;
        std::ofstream(cfg.out_dir + "/manifest.json", std::ios::binary)
            << manifest.dump(2) << "\n";

        ordered_json metrics;
        metrics["l1_error"] = res.l1;
        metrics["y_max"] = res.y_max;
        ordered_json shapes = ordered_json::array();
        for (const auto& s : res.shapes) {
            ordered_json e;
            e["name"] = s.name;
            e["l1_error"] = s.l1;
            e["y_max"] = s.y_max;
            shapes.push_back(e);
        }
        metrics["shapes"] = shapes;
        metrics["mass_initial"] = res.mass_initial;
        metrics["mass_final"] = res.mass_final;
        metrics["conservation_drift"] = res.conservation_drift;
        metrics["picard_iterations_total"] = res.picard_total;
        metrics["lp_iterations_total"] = res.lp_iterations_total;
        metrics["alpha_min"] = res.alpha_min;
        metrics["entropy_integral_series"] = res.entropy_series;
        metrics["entropy_residual_max_series"] = res.residual_series;
        metrics["runtime_seconds"] = res.runtime_seconds;
        std::ofstream(cfg.out_dir + "/metrics.json", std::ios::binary)
            << metrics.dump(2) << "\n";
    }
    return res;
}

namespace {

struct PaperRow {
    const char* case_name;
    double sigma;
    double lp_l1, lp_ymax, ap_l1, ap_ymax;
};

const PaperRow kTable1[] = {
    {"square", 0.0, 2.1811e-2, 1.0000, 2.1811e-2, 1.0000},
    {"square", 0.5, 4.3933e-2, 0.9997, 4.3934e-2, 0.9997},
    {"square", 1.0, 6.9477e-2, 0.9843, 6.9490e-2, 0.9843},
    {"sine-squared", 0.0, 1.6883e-2, 0.9938, 1.6776e-2, 0.9909},
    {"sine-squared", 0.5, 1.6423e-2, 0.8895, 1.6391e-2, 0.8850},
    {"sine-squared", 1.0, 3.9029e-2, 0.7043, 3.9043e-2, 0.7046},
    {"semi-ellipse", 0.0, 1.7926e-2, 0.9973, 1.7886e-2, 0.9965},
    {"semi-ellipse", 0.5, 1.7913e-2, 0.9810, 1.7908e-2, 0.9810},
    {"semi-ellipse", 1.0, 3.6078e-2, 0.9601, 3.6079e-2, 0.9600},
    {"gaussian", 0.0, 1.3639e-2, 0.9764, 1.2237e-2, 0.9512},
    {"gaussian", 0.5, 2.7592e-2, 0.6629, 2.7154e-2, 0.6601},
    {"gaussian", 1.0, 4.3681e-2, 0.4828, 4.3710e-2, 0.4832},
    {"triangle", 0.0, 2.5205e-2, 0.9389, 2.4952e-2, 0.9365},
    {"triangle", 0.5, 1.3843e-2, 0.8216, 1.3672e-2, 0.8197},
    {"triangle", 1.0, 3.1245e-2, 0.6655, 3.1260e-2, 0.6653},
};

const PaperRow kTable2[] = {
    {"square", 0.0, 9.8128e-2, 1.0000, 9.8128e-2, 1.0000},
    {"square", 0.5, 3.2015e-2, 1.0000, 3.2046e-2, 1.0000},
    {"square", 1.0, 6.6670e-2, 0.9855, 6.6719e-2, 0.9853},
    {"sine-squared", 0.0, 2.5703e-2, 0.9938, 2.5705e-2, 0.9938},
    {"sine-squared", 0.5, 7.3080e-3, 0.9213, 7.3354e-3, 0.9205},
    {"sine-squared", 1.0, 3.7450e-2, 0.6980, 3.7472e-2, 0.6976},
    {"semi-ellipse", 0.0, 2.0788e-2, 0.9995, 2.0810e-2, 0.9994},
    {"semi-ellipse", 0.5, 1.1353e-2, 0.9937, 1.1364e-2, 0.9937},
    {"semi-ellipse", 1.0, 3.5186e-2, 0.9585, 3.5194e-2, 0.9584},
    {"gaussian", 0.0, 1.2183e-2, 0.9802, 1.2201e-2, 0.9801},
    {"gaussian", 0.5, 1.7177e-2, 0.7331, 1.7147e-2, 0.7319},
    {"gaussian", 1.0, 4.1866e-2, 0.4835, 4.1935e-2, 0.4835},
    {"triangle", 0.0, 3.4487e-2, 0.9447, 3.4505e-2, 0.9445},
    {"triangle", 0.5, 7.6615e-3, 0.8389, 7.6448e-3, 0.8384},
    {"triangle", 1.0, 2.9795e-2, 0.6588, 2.9813e-2, 0.6585},
};

const PaperRow kTable3[] = {
    {"slotted-cylinder", 0.0, 2.5900e-2, 1.0000, 2.5958e-2, 1.0000},
    {"slotted-cylinder", 0.5, 2.8022e-2, 0.9912, 2.8005e-2, 0.9894},
    {"slotted-cylinder", 1.0, 3.0557e-2, 0.9681, 3.0564e-2, 0.9674},
    {"cone", 0.0, 2.9773e-3, 0.8709, 2.9854e-3, 0.8725},
    {"cone", 0.5, 2.1664e-3, 0.8434, 2.1676e-3, 0.8430},
    {"cone", 1.0, 2.4633e-3, 0.8190, 2.4643e-3, 0.8188},
    {"hump", 0.0, 1.2495e-3, 0.4947, 1.2527e-3, 0.4946},
    {"hump", 0.5, 1.2132e-3, 0.4645, 1.2100e-3, 0.4631},
    {"hump", 1.0, 1.4077e-3, 0.4247, 1.4060e-3, 0.4248},
};

const PaperRow kTable4[] = {
    {"slotted-cylinder", 0.0, 1.3892e-2, 1.0000, 1.3860e-2, 1.0000},
    {"slotted-cylinder", 0.5, 1.9927e-2, 1.0000, 1.9944e-2, 1.0000},
    {"slotted-cylinder", 1.0, 2.5260e-2, 0.9917, 2.5271e-2, 0.9921},
    {"cone", 0.0, 1.5878e-3, 0.9328, 1.5886e-3, 0.9321},
    {"cone", 0.5, 8.4318e-4, 0.8780, 8.4432e-4, 0.8777},
    {"cone", 1.0, 1.6144e-3, 0.8336, 1.6151e-3, 0.8336},
    {"hump", 0.0, 7.6481e-4, 0.4952, 7.6600e-4, 0.4950},
    {"hump", 0.5, 4.2010e-4, 0.4663, 4.2036e-4, 0.4666},
    {"hump", 1.0, 8.9529e-4, 0.4187, 8.9523e-4, 0.4191},
};

struct Table5Row {
    double t;
    double exact_ymax;
    double sigma;
    double l1, ymax;  // LP and AP columns coincide
};

const Table5Row kTable5[] = {
    {1.0, 0.92883, 0.0, 1.1765e-3, 0.93110}, {1.0, 0.92883, 0.5, 5.4850e-4, 0.92946},
    {1.0, 0.92883, 1.0, 1.9557e-3, 0.92837}, {2.0, 0.68602, 0.0, 1.1313e-3, 0.68877},
    {2.0, 0.68602, 0.5, 4.2613e-4, 0.68663}, {2.0, 0.68602, 1.0, 1.5076e-3, 0.68475},
    {3.0, 0.56863, 0.0, 1.0828e-3, 0.57126}, {3.0, 0.56863, 0.5, 3.6479e-4, 0.56917},
    {3.0, 0.56863, 1.0, 1.1901e-3, 0.56723},
};

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::string text = "case,sigma,mode,l1_measured,l1_paper,l1_rel_dev,ymax_measured,ymax_paper\n";
    for (const auto& r : rows) {
        text += r.case_name;
        text += ',';
        format_value(text, r.sigma);
        text += ',';
        text += r.mode;
        text += ',';
        format_value(text, r.l1);
        text += ',';
        format_value(text, r.l1_paper);
        text += ',';
        format_value(text, (r.l1 - r.l1_paper) / r.l1_paper);
        text += ',';
        format_value(text, r.y_max);
        text += ',';
        format_value(text, r.y_max_paper);
        text += '\n';
    }
    std::ofstream(path, std::ios::binary) << text;
}

const ShapeError& shape_named(const std::vector<ShapeError>& shapes, const std::string& name) {
    for (const auto& s : shapes)
        if (s.name == name) return s;
    throw ValidationError("unknown shape in results: " + name);
}

}  // namespace

std::vector<BenchRow> bench_table(const std::string& table_id, const std::string& out_dir,
                                  std::optional<double> sigma_filter,
                                  const std::string& mode_filter, bool verbose) {
    const PaperRow* rows = nullptr;
    size_t n_rows = 0;
    std::string problem;
    std::string high;
    if (table_id == "table1") {
        rows = kTable1;
        n_rows = std::size(kTable1);
        problem = "advection-shapes";
    } else if (table_id == "table2") {
        rows = kTable2;
        n_rows = std::size(kTable2);
        problem = "advection-shapes";
        high = "quick";
    } else if (table_id == "table3") {
        rows = kTable3;
        n_rows = std::size(kTable3);
        problem = "solid-rotation";
    } else if (table_id == "table4") {
        rows = kTable4;
        n_rows = std::size(kTable4);
        problem = "solid-rotation";
        high = "quick";
    } else if (table_id != "table5") {
        throw ValidationError("unknown table id: " + table_id);
    }

    std::vector<BenchRow> out;
    auto want_mode = [&](const std::string& m) {
        return mode_filter.empty() || mode_filter == m;
    };

    if (table_id == "table5") {
        for (const auto& mode : {std::string("LP"), std::string("AP")}) {
            if (!want_mode(mode)) continue;
            for (const auto& row : kTable5) {
                if (sigma_filter && *sigma_filter != row.sigma) continue;
                RunConfig cfg;
                cfg.problem = "convection-diffusion";
                cfg.mode = mode;
                cfg.sigma = row.sigma;
                cfg.t_end = row.t;
                RunResult r = run_problem(cfg);
                BenchRow b;
                char name[32];
                std::snprintf(name, sizeof name, "t=%g", row.t);
                b.case_name = name;
                b.sigma = row.sigma;
                b.mode = mode;
                b.l1 = r.l1;
                b.l1_paper = row.l1;
                b.y_max = r.y_max;
                b.y_max_paper = row.ymax;
                b.y_max_exact = row.exact_ymax;
                out.push_back(b);
                if (verbose)
                    std::fprintf(stderr, "[bench] %s sigma=%.1f %s: l1=%.4e (paper %.4e)\n",
                                 b.case_name.c_str(), b.sigma, mode.c_str(), b.l1, b.l1_paper);
            }
        }
    } else {
        // Distinct (sigma, mode) runs; shapes share one run.
        for (const auto& mode : {std::string("LP"), std::string("AP")}) {
            if (!want_mode(mode)) continue;
            for (double sg : {0.0, 0.5, 1.0}) {
                if (sigma_filter && *sigma_filter != sg) continue;
                RunConfig cfg;
                cfg.problem = problem;
                cfg.mode = mode;
                cfg.sigma = sg;
                cfg.high_flux = high;
                RunResult r = run_problem(cfg);
                for (size_t i = 0; i < n_rows; ++i) {
                    if (rows[i].sigma != sg) continue;
                    const auto& shape = shape_named(r.shapes, rows[i].case_name);
                    BenchRow b;
                    b.case_name = rows[i].case_name;
                    b.sigma = sg;
                    b.mode = mode;
                    b.l1 = shape.l1;
                    b.l1_paper = mode == "LP" ? rows[i].lp_l1 : rows[i].ap_l1;
                    b.y_max = shape.y_max;
                    b.y_max_paper = mode == "LP" ? rows[i].lp_ymax : rows[i].ap_ymax;
                    out.push_back(b);
                    if (verbose)
                        std::fprintf(stderr,
                                     "[bench] %s sigma=%.1f %s: l1=%.4e (paper %.4e)\n",
                                     b.case_name.c_str(), sg, mode.c_str(), b.l1, b.l1_paper);
                }
            }
        }
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_bench_csv(out_dir + "/" + table_id + ".csv", out);
    }
    return out;
}

std::vector<CompareEntry> compare_modes(const RunConfig& base,
                                        const std::vector<std::string>& modes,
                                        const std::string& out_dir) {
    std::vector<CompareEntry> out;
    for (const auto& m : modes) {
        RunConfig cfg = base;
        cfg.mode = m;
        cfg.out_dir.clear();
        RunResult r = run_problem(cfg);
        CompareEntry e;
        e.mode = m;
        e.distance = r.l1;
        e.y_max = r.y_max;
        e.residual_max = r.residual_max_overall;
        out.push_back(e);
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::string text = "mode,l1_distance,y_max,entropy_residual_max\n";
        for (const auto& e : out) {
            text += e.mode;
            text += ',';
            format_value(text, e.distance);
            text += ',';
            format_value(text, e.y_max);
            text += ',';
            format_value(text, e.residual_max);
            text += '\n';
        }
        std::ofstream(out_dir + "/compare.csv", std::ios::binary) << text;
    }
    return out;
}

bool selftest(unsigned long seed, bool verbose) {
    bool ok = true;
    auto check = [&](bool cond, const char* what) {
        if (!cond) {
            std::fprintf(stderr, "[selftest] FAIL: %s\n", what);
            ok = false;
        } else if (verbose) {
            std::fprintf(stderr, "[selftest] ok: %s\n", what);
        }
    };

    // Numerical flux consistency h(rho, rho) = f(rho).
    {
        const auto fx = FluxFunction::quartic();
        bool cons = true;
        for (double r = -2.5; r <= 2.5; r += 0.25) {
            cons = cons && std::abs(rusanov_flux(fx, r, r) - fx.f(r)) < 1e-12;
            cons = cons && std::abs(godunov_flux(fx, r, r) - fx.f(r)) < 1e-12;
        }
        check(cons, "flux consistency");
    }

    // Random LPs against the enumeration oracle.
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> coef(-5.0, 5.0);
        bool agree = true;
        for (int t = 0; t < 100 && agree; ++t) {
            const int n = 1 + static_cast<int>(rng() % 4);
            const int m = static_cast<int>(rng() % 5);
            LinearProgram lp(n);
            for (int j = 0; j < n; ++j) {
                lp.objective[j] = coef(rng);
                const double a = coef(rng), b = coef(rng);
                lp.var_lo[j] = std::min(a, b);
                lp.var_hi[j] = std::max(a, b);
            }
            for (int i = 0; i < m; ++i) {
                std::vector<double> row(n);
                for (auto& v : row) v = coef(rng);
                const double a = coef(rng), b = coef(rng);
                lp.add_row(row, std::min(a, b), std::max(a, b));
            }
            const auto s1 = solve(lp);
            const auto s2 = vertex_oracle(lp);
            if (s1.status != s2.status)
                agree = false;
            else if (s1.status == LPSolution::Status::Optimal &&
                     std::abs(s1.objective_value - s2.objective_value) >
                         1e-7 * std::max(1.0, std::abs(s2.objective_value)))
                agree = false;
        }
        check(agree, "simplex agrees with the enumeration oracle");
    }

    // One limited advection step against a direct reimplementation.
    {
        RunConfig cfg;
        cfg.problem = "advection-shapes";
        cfg.mode = "AP";
        cfg.sigma = 0.0;
        cfg.t_end = 0.002;
        RunResult r = run_problem(cfg);
        check(r.solution.all_finite() && r.conservation_drift < 1e-12,
              "conservative limited advection step");
    }
    return ok;
}

}  // namespace fct
