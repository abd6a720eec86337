#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "meso/model.hpp"
#include "meso/timegrid.hpp"

namespace meso {

enum class UnitKind { gt, st, br };
enum class StartupKind { hot, warm, cold };
enum class UnitPhase { off, synch, soak, dispatch, desync };

// Open-ended upper bound for the coldest start-up window.
inline constexpr int kUnboundedWindow = std::numeric_limits<int>::max();

// One start-up method. The window bounds are inclusive hours of downtime
// (measured from shutdown initiation) for which this method applies.
struct StartupMethodSpec {
    StartupKind method = StartupKind::hot;
    int window_lo = 1;
    int window_hi = kUnboundedWindow;
    int synch_duration = 0;   // grid-synchronization hours (steam turbines only)
    int soak_duration = 1;    // hours at constant soak output before dispatch
    double soak_power = 0.0;  // MW produced per soak hour (0 for boilers)
    // $ per start-up hour. Warm and cold starts accrue it over synchronization
    // and soak; a hot start charges its soak hours only.
    double startup_cost = 0.0;
};

struct ThermalUnitSpec {
    std::string id;
    UnitKind kind = UnitKind::gt;
    // Dispatch-phase output range. Electrical MW for GT/ST; for a boiler these
    // bound its thermal output (the fuel variable is scaled by fuel_to_heat).
    double p_e_min = 0.0;
    double p_e_max = 0.0;
    int ut = 3;               // minimum hours in dispatch once entered
    int dt = 3;               // minimum hours out of dispatch once left
    std::vector<StartupMethodSpec> methods; // exactly hot, warm, cold
    int desync_duration = 0;  // hours to disconnect (GT/ST; 0 for boilers)
    double shutdown_cost = 0.0; // $ per desynchronization hour
    double msr = 0.0;         // max spinning rate, MW/min (GT/ST)
    double fuel_quad = 0.0, fuel_lin = 0.0, fuel_const = 0.0; // GT fuel $ curve
    double heat_a0 = 0.0, heat_a1 = 0.0;  // GT waste-heat curve P_h = a0*P_e + a1
    double fuel_to_heat = 0.0;            // boiler MW per mcf of fuel
    double steam_b1 = 0.0, steam_b2 = 0.0; // ST steam draw h = b1*P_e + b2

    // Throws SpecError when the method windows do not partition [1, inf) or a
    // field is inconsistent with the unit kind.
    void validate() const;
    const StartupMethodSpec& method(StartupKind n) const;
};

// Operating point during the hour immediately before the horizon.
// hours_in_phase counts consecutive hours spent in `phase`, that hour included.
// prior_downtime is the number of hours since the last shutdown initiation
// (phase = off), or the downtime that preceded the in-progress start-up
// (phase = synch/soak); it selects the start-up method being continued.
struct UnitState {
    UnitPhase phase = UnitPhase::dispatch;
    int hours_in_phase = 1;
    int prior_downtime = 0;
    double initial_power = 0.0; // MW during that hour (dispatch phase only)
};

// Pre-horizon events implied by a boundary state, in absolute hours <= 0.
// Horizon hours are 1-based, so every window formula works unchanged on
// history: an event at hour tau <= 0 enters it as a constant, not a column.
struct BoundaryEvents {
    bool has_stop = false;
    int stop_hour = 0;       // shutdown initiation, <= 0
    bool has_start = false;
    int start_hour = 0;      // start-up initiation, <= 0
    int start_slot = 0;      // method slot of the start-up in progress
    bool dispatched = false; // unit was dispatching during hour 0
};

// Maps a boundary state to its implied events. Model assembly and the
// schedule audit both use this, so history is interpreted exactly once.
// Throws StateError when the state is inconsistent with the spec.
BoundaryEvents resolve_boundary(const ThermalUnitSpec& spec, const UnitState& st);

// Columns and derived per-hour expressions for one unit. The only binary
// columns are the start-up/shutdown initiation events; every phase flag is an
// affine expression of those events (plus pre-horizon history constants), and
// the dispatch indicator is a continuous column pinned by a recurrence, so it
// takes integral values whenever the events do.
struct UnitVars {
    std::vector<std::array<VarRef, 3>> start_event; // [hour][method slot]
    std::vector<VarRef> stop_event;                 // shutdown initiation
    std::vector<VarRef> x_disp;                     // in-dispatch indicator
    std::vector<VarRef> p_e;     // electrical output, MW (GT/ST)
    std::vector<VarRef> sr;      // spinning reserve, MW (GT/ST)
    std::vector<VarRef> br_fuel; // boiler fuel, mcf (BR)

    std::vector<LinExpr> disp_start;                  // dispatch-entry event
    std::array<std::vector<LinExpr>, 3> synch_flag;   // per method slot
    std::array<std::vector<LinExpr>, 3> soak_flag;
    std::vector<LinExpr> synch_any, soak_any, desync_flag, off_flag;
    std::vector<LinExpr> soak_power_mw; // MW fed to the electrical balance
    std::vector<LinExpr> heat_out_mw;   // thermal production (GT/BR; zero for ST)
    std::vector<LinExpr> steam_in_mw;   // steam drawn by an ST (zero otherwise)
    std::vector<LinExpr> startup_cost;  // $ accrued this hour
    std::vector<LinExpr> shutdown_cost; // $ accrued this hour
};

struct UnitBlock {
    ThermalUnitSpec spec;
    UnitState state;
    UnitVars vars;
};

// Slot of a method inside UnitVars' per-method arrays.
int method_slot(const ThermalUnitSpec& spec, StartupKind n);

// Declares the unit's columns and emits commitment logic: the dispatch
// recurrence, phase exclusivity, start-up selection windows (using state for
// pre-horizon history), minimum up/down rows truncated at the horizon end,
// boundary fixings implied by the state, and output gating to the dispatch
// phase. Throws StateError for a state inconsistent with the spec.
UnitBlock build_commitment_block(ModelBuilder& m, const ThermalUnitSpec& spec,
                                 const UnitState& state, const TimeGrid& grid);

// Per-hour MW entering the electrical balance while the unit soaks.
std::vector<LinExpr> build_soak_power_terms(const UnitBlock& u);

// Hour-to-hour output band for steam turbines (half of p_e_max per step, first
// step anchored at the boundary operating point). No-op for other kinds.
void build_ramp_block(ModelBuilder& m, const UnitBlock& u, const TimeGrid& grid);

// System spinning-reserve requirement plus per-unit reserve caps. grid_import
// is the hourly purchased-power column; import_cap its upper bound, whose
// unused headroom counts toward the requirement. Boiler blocks are ignored.
void build_reserve_block(ModelBuilder& m, const std::vector<const UnitBlock*>& units,
                         const TimeGrid& grid, const std::vector<double>& reserve_req_mw,
                         const std::vector<VarRef>& grid_import, double import_cap);

// One combined-cycle group: the GT's recovered heat plus the boiler's output
// must cover the group ST's steam draw.
struct CcppGroup {
    const UnitBlock* gt = nullptr;
    const UnitBlock* st = nullptr;
    const UnitBlock* br = nullptr;
};

struct HeatCoupling {
    // [group][hour]: heat left after the group's own ST is served; cap for the
    // group's storage charge.
    std::vector<std::vector<LinExpr>> group_surplus;
    // [hour]: surplus pooled across groups net of extra-turbine draw; cap for
    // the total storage charge when extra turbines are present.
    std::vector<LinExpr> pooled_surplus;
};

// Steam-sufficiency rows per group, plus a pooled row covering steam turbines
// that sit outside every group. Throws SpecError on an incomplete group.
HeatCoupling build_heat_coupling(ModelBuilder& m, const std::vector<CcppGroup>& groups,
                                 const std::vector<const UnitBlock*>& extra_st,
                                 const TimeGrid& grid);

// Piecewise-linear fuel cost for a GT: epigraph columns tied to p_e and the
// dispatch indicator so the constant term is charged only when committed.
// Returns the total cost expression to add to the objective.
LinExpr build_fuel_cost_block(ModelBuilder& m, const UnitBlock& u, const TimeGrid& grid,
                              int segments);

} // namespace meso
