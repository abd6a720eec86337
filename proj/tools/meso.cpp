// Command-line front end: loads a system configuration and a forecast day,
// assembles the selected scheduling scenario(s), solves, audits and writes the
// result files. All diagnostics go to stderr; files are the only data output.
// Exit codes: 0 success, 1 infeasible schedule or failed audit, 2 bad usage.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "meso/mps.hpp"
#include "meso/num_io.hpp"
#include "meso/scheduler.hpp"

namespace {

struct Invocation {
    std::string config_path;
    std::string forecast_path;
    std::string scenario = "all"; // s1..s4 or "all"
    std::string output_dir = ".";
    std::string schedule_path;    // validate only
    double gap = 0.0;             // 0 = keep the configured tolerance
    long nodes = 0;               // 0 = keep the configured limit
    int segments = 0;             // 0 = keep the configured count
};

std::vector<meso::ScenarioId> selected(const std::string& text) {
    if (text == "all")
        return {meso::ScenarioId::s1, meso::ScenarioId::s2, meso::ScenarioId::s3,
                meso::ScenarioId::s4};
    return {meso::parse_scenario(text)};
}

int env_threads() {
    const char* raw = std::getenv("MESO_THREADS");
    if (!raw) return 0;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 0)
        throw meso::UsageError("MESO_THREADS must be a nonnegative integer");
    return static_cast<int>(v);
}

void apply_knobs(meso::SystemConfig& cfg, const Invocation& inv) {
    if (inv.gap != 0.0) {
        if (!(inv.gap > 0.0 && inv.gap < 1.0))
            throw meso::UsageError("--gap must lie in (0, 1)");
        cfg.solver.gap_tol = inv.gap;
    }
    if (inv.nodes != 0) {
        if (inv.nodes < 0) throw meso::UsageError("--nodes must be positive");
        cfg.solver.node_limit = inv.nodes;
    }
    if (inv.segments != 0) {
        if (inv.segments < 1) throw meso::UsageError("--segments must be positive");
        cfg.solver.fuel_segments = inv.segments;
    }
}

std::string out_path(const Invocation& inv, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(inv.output_dir);
    return (fs::path(inv.output_dir) / name).string();
}

const char* status_text(meso::SolveStatus s) {
    switch (s) {
        case meso::SolveStatus::optimal: return "optimal";
        case meso::SolveStatus::infeasible: return "infeasible";
        case meso::SolveStatus::unbounded: return "unbounded";
        case meso::SolveStatus::gap_limit: return "gap limit reached";
    }
    return "?";
}

void log_report(const meso::ScheduleReport& r) {
    std::cerr << "[meso] scenario " << meso::scenario_name(r.scenario) << ": "
              << status_text(r.status);
    if (!r.series.empty())
        std::cerr << ", total cost " << meso::to_shortest(r.costs.total) << ", objective "
                  << meso::to_shortest(r.objective) << ", nodes " << r.nodes;
    std::cerr << '\n';
}

int run_command(const Invocation& inv, bool whole_comparison) {
    meso::SystemConfig cfg = meso::load_config(inv.config_path);
    apply_knobs(cfg, inv);
    const meso::ForecastSet fs = meso::load_forecasts(inv.forecast_path, cfg.grid);

    std::vector<meso::ScheduleReport> reports;
    const std::vector<meso::ScenarioId> ids =
        whole_comparison ? selected("all") : selected(inv.scenario);
    if (ids.size() == 4) {
        reports = meso::run_all_scenarios(cfg, fs, env_threads());
    } else {
        reports.push_back(meso::run_scenario(cfg, fs, ids.front()));
    }

    bool all_solved = true;
    for (const meso::ScheduleReport& r : reports) {
        log_report(r);
        if (r.series.empty()) {
            all_solved = false;
            continue;
        }
        const std::string name =
            std::string("schedule_") + meso::scenario_name(r.scenario) + ".csv";
        meso::write_schedule_csv(out_path(inv, name), r);
    }
    meso::write_cost_csv(out_path(inv, "costs.csv"), reports);
    meso::write_pump_strings(out_path(inv, "pump_duty.csv"), reports);
    std::cerr << "[meso] wrote results to " << inv.output_dir << '\n';
    return all_solved ? 0 : 1;
}

int validate_command(const Invocation& inv) {
    meso::SystemConfig cfg = meso::load_config(inv.config_path);
    const meso::ForecastSet fs = meso::load_forecasts(inv.forecast_path, cfg.grid);
    if (inv.scenario == "all")
        throw meso::UsageError("validate checks one schedule; pass --scenario s1..s4");
    const meso::ScenarioId id = meso::parse_scenario(inv.scenario);
    const meso::ScheduleReport r = meso::load_schedule_csv(inv.schedule_path, id, cfg, fs);
    const std::vector<std::string> violations = meso::validate_schedule(r, cfg, fs);
    if (violations.empty()) {
        std::cerr << "[meso] schedule passes the audit; total cost "
                  << meso::to_shortest(r.costs.total) << '\n';
        return 0;
    }
    std::cerr << "[meso] schedule fails the audit with " << violations.size()
              << " violation(s):\n";
    for (const std::string& v : violations) std::cerr << "  " << v << '\n';
    return 1;
}

int export_command(const Invocation& inv) {
    meso::SystemConfig cfg = meso::load_config(inv.config_path);
    apply_knobs(cfg, inv);
    const meso::ForecastSet fs = meso::load_forecasts(inv.forecast_path, cfg.grid);
    for (meso::ScenarioId id : selected(inv.scenario)) {
        meso::AssembledProblem a = meso::assemble(cfg, fs, id);
        const std::string name = std::string("model_") + meso::scenario_name(id) + ".mps";
        const std::string path = out_path(inv, name);
        meso::mps::write(a.problem, path, "MESO");
        std::cerr << "[meso] wrote " << path << " (" << a.problem.vars.size()
                  << " columns, " << a.problem.rows.size() << " rows)\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"day-ahead multi-energy microgrid scheduler"};
    app.require_subcommand(1);

    Invocation inv;
    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", inv.config_path, "system configuration JSON")->required();
        sub->add_option("--forecasts", inv.forecast_path, "forecast day CSV")->required();
        if (needs_out) sub->add_option("--out", inv.output_dir, "output directory");
        sub->add_option("--gap", inv.gap, "MIP gap tolerance override, in (0,1)");
        sub->add_option("--nodes", inv.nodes, "search node limit override");
        sub->add_option("--segments", inv.segments, "fuel-curve segment count override");
    };

    CLI::App* run = app.add_subcommand("run", "solve and write schedule/cost files");
    add_common(run, true);
    run->add_option("--scenario", inv.scenario, "s1..s4 or 'all' (default)");

    CLI::App* compare =
        app.add_subcommand("compare", "run all four scenarios and write the comparison");
    add_common(compare, true);

    CLI::App* validate = app.add_subcommand("validate", "audit an existing schedule CSV");
    validate->add_option("--config", inv.config_path, "system configuration JSON")->required();
    validate->add_option("--forecasts", inv.forecast_path, "forecast day CSV")->required();
    validate->add_option("--scenario", inv.scenario, "scenario the schedule was built for")
        ->required();
    validate->add_option("--schedule", inv.schedule_path, "schedule CSV to audit")->required();

    CLI::App* expmps = app.add_subcommand("export-mps", "write the model without solving");
    add_common(expmps, true);
    expmps->add_option("--scenario", inv.scenario, "s1..s4 or 'all' (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(run)) return run_command(inv, false);
        if (app.got_subcommand(compare)) return run_command(inv, true);
        if (app.got_subcommand(validate)) return validate_command(inv);
        return export_command(inv);
    } catch (const meso::ValidationError& e) {
        std::cerr << "[meso] " << e.what() << '\n';
        return 1;
    } catch (const meso::Error& e) {
        std::cerr << "[meso] " << e.what() << '\n';
        return 2;
    }
}
