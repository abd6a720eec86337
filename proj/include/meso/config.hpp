#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meso/loads.hpp"
#include "meso/storage.hpp"
#include "meso/thermal.hpp"
#include "meso/timegrid.hpp"

namespace meso {

// Tie lines to the utility: hourly electricity in both directions plus heat
// import, with a capacity charge on import above the contracted level.
struct GridExchangeSpec {
    double import_max_mw = 50.0;
    double export_max_mw = 50.0;
    double heat_import_max_mw = 80.0;
    double contracted_capacity = 25.0; // MW of import covered by the contract
    double capacity_rate = 12860.0;    // $/MW applied to the peak excess import
    double heat_price = 100.0;         // $/MW of imported heat
    double gas_price = 3.81;           // $/mcf of boiler fuel

    void validate() const; // throws SpecError when a field is negative
};

struct SolverKnobs {
    double gap_tol = 1e-6;
    long node_limit = 200000;
    int fuel_segments = 8;         // secant count per turbine fuel curve
    double reserve_fraction = 0.1; // reserve as a demand share when no series given

    void validate() const; // throws ConfigError on out-of-range knobs
};

// One combined-cycle group: the turbines and boiler coupled through a shared
// steam header. Members are unit ids from SystemConfig::units.
struct CcppGroupConfig {
    std::string id;
    std::string gt, st, boiler;
};

struct SystemConfig {
    TimeGrid grid;
    std::vector<ThermalUnitSpec> units;
    std::map<std::string, UnitState> initial_states; // keyed by unit id
    std::vector<CcppGroupConfig> groups;
    std::vector<std::string> extra_steam_turbines; // fed from the pooled surplus
    std::optional<BessSpec> battery;
    std::optional<TessSpec> heat_store;
    PumpFleet pumps;
    std::vector<IlSpec> interruptible;
    double il_demand_fraction = 0.05; // demand share curtailable per hour
    FlexThermalSpec flexible_heat;
    GridExchangeSpec exchange;
    SolverKnobs solver;

    const ThermalUnitSpec& unit(const std::string& id) const; // ConfigError if absent

    // Structural checks: unique ids, every group member present with the right
    // kind, no unit in two groups, every steam turbine sourced, every unit
    // given a boundary state, storage attached to a real group. Equipment
    // specs re-validate themselves (SpecError).
    void validate() const;
};

// Parses the JSON configuration document. origin names the source in errors.
// Throws ParseError for malformed text, ConfigError for structural problems,
// SpecError for equipment fields outside their domains.
SystemConfig parse_config(const std::string& text, const std::string& origin);

// parse_config over the contents of a file; unreadable path -> ConfigError.
SystemConfig load_config(const std::string& path);

} // namespace meso
