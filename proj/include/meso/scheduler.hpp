#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meso/config.hpp"
#include "meso/milp.hpp"

namespace meso {

// The four load-management setups, ordered from least to most flexible. Each
// one keeps every feasible schedule of the one before it:
//   s1  pumps run a fixed mains-only plan; no curtailment; heat demand rigid
//   s2  pump duty optimized over the day; no curtailment; heat demand rigid
//   s3  s2 plus interruptible-load curtailment
//   s4  s3 plus the reschedulable share of the heat demand
enum class ScenarioId { s1, s2, s3, s4 };

const char* scenario_name(ScenarioId s);
ScenarioId parse_scenario(const std::string& text); // "s2", "S2" or "2"; UsageError

struct ScenarioGates {
    bool optimize_pumps = false;
    bool curtailment = false;
    bool flexible_heat = false;
};
ScenarioGates gates(ScenarioId s);

// The assembled day-ahead problem plus every block handle needed to read a
// solution back out of it.
struct AssembledProblem {
    ScenarioId scenario = ScenarioId::s1;
    TimeGrid grid;
    ModelBuilder model;
    MilpProblem problem;

    std::vector<UnitBlock> units; // index-aligned with SystemConfig::units
    HeatCoupling coupling;
    std::optional<BessBlock> battery;
    std::optional<TessBlock> heat_store;
    std::optional<PumpBlock> pumps;
    std::optional<IlBlock> curtail;
    std::optional<FlexBlock> flexible;

    std::vector<VarRef> grid_import, grid_export, heat_import;
    VarRef peak_excess; // import above the contracted capacity, day maximum

    std::vector<LinExpr> fuel_cost_terms; // one per gas turbine, model (secant) form
};

// Builds commitment, coupling, storage, load and exchange blocks, the two
// balance rows per hour, the reserve rows, the capacity-charge linearization
// and the cost objective, gated by the scenario. Throws ConfigError when the
// config has no generation or no group; length errors surface from the blocks.
AssembledProblem assemble(const SystemConfig& config, const ForecastSet& forecasts,
                          ScenarioId scenario);

struct CostBreakdown {
    double fuel = 0.0;        // true quadratic turbine fuel cost
    double battery = 0.0;     // storage wear
    double startup = 0.0;
    double shutdown = 0.0;
    double capacity = 0.0;    // charge on peak import above contract
    double boiler = 0.0;      // boiler gas
    double grid = 0.0;        // energy purchases minus sales plus heat import
    double curtailment = 0.0; // interruptible-load payouts
    double total = 0.0;       // sum of the above
};

struct ScheduleReport {
    ScenarioId scenario = ScenarioId::s1;
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0; // model objective (secant fuel form)
    double bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    long lp_iterations = 0;

    std::vector<std::string> columns; // stable CSV order
    std::map<std::string, std::vector<double>> series;
    std::map<std::string, std::string> pump_strings; // pump id -> "111000..."
    CostBreakdown costs;
    double fuel_model_gap = 0.0; // secant fuel cost minus the true quadratic
    double peak_excess_mw = 0.0;
};

// Extracts the per-hour series from a solution and prices the schedule. Every
// cost component is recomputed from dispatch values; the capacity charge and
// the secant-vs-quadratic fuel gap come from the solution's own columns so the
// validator can cross-check them.
ScheduleReport report_costs(const AssembledProblem& a, const SystemConfig& config,
                            const ForecastSet& forecasts, const Solution& sol);

// Prices a schedule straight from its series (no solver artifacts available,
// e.g. a reloaded CSV): the capacity charge is recomputed from peak import and
// the fuel gap is zero.
CostBreakdown costs_from_series(const SystemConfig& config, const ForecastSet& forecasts,
                                const std::map<std::string, std::vector<double>>& series);

// Independent feasibility audit of a reported schedule: balances, reserve,
// storage replay through the canonical update maps, commitment timelines
// (method windows, phase durations, soak powers, up/down times), pump duty
// and startup budgets, curtailment caps, heat-demand conservation, and the
// capacity-charge cross-check. Returns human-readable violations; empty means
// feasible at 1e-6.
std::vector<std::string> validate_schedule(const ScheduleReport& report,
                                           const SystemConfig& config,
                                           const ForecastSet& forecasts);

struct RunOptions {
    std::map<std::string, double> seed; // warm-start incumbent, by variable name
    std::optional<double> gap_tol;      // overrides config.solver
    std::optional<long> node_limit;
};

// assemble + solve + report + audit. A failed audit on a solver solution is a
// defect, so it throws ValidationError; infeasibility is reported via status.
ScheduleReport run_scenario(const SystemConfig& config, const ForecastSet& forecasts,
                            ScenarioId scenario, const RunOptions& opt = {});

// All four scenarios. Serially each optimum seeds the next (nested feasible
// sets, so reported costs are nonincreasing); with threads > 1 they run
// independently in parallel.
std::vector<ScheduleReport> run_all_scenarios(const SystemConfig& config,
                                              const ForecastSet& forecasts, int threads = 0);

// hour column plus the report's columns, shortest round-trip numbers.
void write_schedule_csv(const std::string& path, const ScheduleReport& report);

// Reloads a schedule written by write_schedule_csv (column order free) and
// re-prices it from the series, so the result passes the same audit.
ScheduleReport load_schedule_csv(const std::string& path, ScenarioId scenario,
                                 const SystemConfig& config, const ForecastSet& forecasts);

// One row per report: cost breakdown, solver stats, and the percentage
// reduction of each total against the first row.
void write_cost_csv(const std::string& path, const std::vector<ScheduleReport>& reports);

// Duty strings per pump, one block per scenario.
void write_pump_strings(const std::string& path, const std::vector<ScheduleReport>& reports);

} // namespace meso
