#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meso/model.hpp"
#include "meso/timegrid.hpp"

namespace meso {

enum class PumpClass { main, auxiliary };

struct PumpSpec {
    std::string id;
    double flow_rate = 0.0;  // m^3 moved per duty hour
    double efficiency = 0.0; // kWh consumed per m^3
    int max_startups = 0;    // rising edges allowed over the horizon
    PumpClass cls = PumpClass::main;

    void validate() const; // throws SpecError on out-of-range fields
};

struct PumpFleet {
    std::vector<PumpSpec> pumps;
    double daily_volume = 0.0; // m^3 that must be moved over the horizon

    void validate() const;
};

struct PumpVars {
    // on[p][k] is the duty flag of pump p in hour k; start[p][k] counts its
    // rising edges (continuous, pinned to {0,1} by the edge rows).
    std::vector<std::vector<VarRef>> on;
    std::vector<std::vector<VarRef>> start;
    std::vector<LinExpr> power_mw; // fleet draw per hour, for the demand side
};

struct PumpBlock {
    PumpFleet fleet;
    PumpVars vars;
};

// Adds duty flags, startup counters with their per-pump budgets, and the
// delivered-volume floor. All pumps are off in the hour before the horizon.
// Throws FleetError when even round-the-clock duty cannot move daily_volume.
PumpBlock build_pump_block(ModelBuilder& m, const PumpFleet& fleet, const TimeGrid& grid);

// Duty plan that moves the whole volume in the fewest leading hours using the
// main pumps only: every main on for ceil(V_d / sum of main flows) hours, all
// auxiliaries idle. Returned as variable fixings for the caller to apply, so
// the same block serves both fixed and optimized runs. Throws FleetError when
// there is no main pump or the mains cannot finish within the horizon.
std::vector<std::pair<VarRef, double>> fixed_pump_schedule(const PumpBlock& blk,
                                                           const TimeGrid& grid);

// One curtailment contract. Curtailed energy is repaid at a premium over the
// hourly purchase price.
struct IlSpec {
    std::string id;
    double hourly_cap = 0.0;       // MWh per hour
    double daily_cap = 0.0;        // MWh over the horizon
    double price_multiplier = 1.5; // premium over the purchase price

    void validate() const; // throws SpecError on out-of-range fields
};

struct IlVars {
    std::vector<std::vector<VarRef>> curtail; // [contract][hour], MWh
    std::vector<LinExpr> total_mw;            // curtailment per hour, all contracts
    LinExpr cost;                             // $ paid out for the day
};

struct IlBlock {
    std::vector<IlSpec> specs;
    IlVars vars;
};

// Adds curtailment columns with the per-contract hourly and daily caps and the
// shared per-hour ceiling of demand_fraction times that hour's demand.
IlBlock build_il_block(ModelBuilder& m, const std::vector<IlSpec>& ils, const TimeGrid& grid,
                       const std::vector<double>& elec_demand_mw,
                       const std::vector<double>& buy_price, double demand_fraction);

// Reschedulable share of the heat demand: each hour may defer up to dr_max of
// its nominal load, and deferred energy must be served elsewhere the same day.
struct FlexThermalSpec {
    double dr_max = 0.0; // fraction of an hour's nominal demand that may move

    void validate() const; // throws SpecError on out-of-range fields
};

struct FlexVars {
    std::vector<VarRef> dr;         // deferred fraction per hour, [0, dr_max]
    std::vector<VarRef> shift;      // MW moved into the hour
    std::vector<LinExpr> served_mw; // (1 - dr)*nominal + shift
};

struct FlexBlock {
    FlexThermalSpec spec;
    FlexVars vars;
};

// Adds the deferral and shift-in columns, the served-demand expressions, and
// the day-total conservation row.
FlexBlock build_flex_thermal_block(ModelBuilder& m, const FlexThermalSpec& spec,
                                   const TimeGrid& grid, const std::vector<double>& nominal_mw);

} // namespace meso
