#pragma once

#include <string>
#include <vector>

#include "meso/model.hpp"
#include "meso/timegrid.hpp"

namespace meso {

// Battery storage. State of charge is tracked as a fraction of capacity and
// advances by (eta_c*P_c - P_d/eta_d)/P_1C each hour, where P_1C is the power
// that would (dis)charge the full capacity in one hour.
struct BessSpec {
    std::string id = "BESS";
    double eta_c = 0.97;       // charge efficiency, (0, 1]
    double eta_d = 0.97;       // discharge efficiency, (0, 1]
    double p1c = 0.0;          // 1C-rate power, MW
    double soc_min = 0.0;      // state-of-charge band, fractions of capacity
    double soc_max = 1.0;
    double soc_init = 0.0;     // state at the start of the horizon
    double pbc_max = 0.0;      // charge power ceiling, MW
    double pbd_max = 0.0;      // discharge power ceiling, MW
    double capital_cost = 0.0; // installed cost, $/kWh
    double capacity_kwh = 0.0;
    double lifetime_hours = 0.0; // cumulative charge+discharge hours rated
    double t_bc = 4.0;         // rated daily charge hours
    double t_bd = 4.0;         // rated daily discharge hours

    void validate() const; // throws SpecError on out-of-range fields
};

struct BessVars {
    std::vector<VarRef> p_charge;    // MW drawn from the bus, per hour
    std::vector<VarRef> p_discharge; // MW fed to the bus, per hour
    std::vector<VarRef> soc;         // state at the END of each hour
    std::vector<VarRef> charging;    // binary: 1 blocks discharge, 0 blocks charge
    // Lifetime wear charged to every MW moved:
    //   capital * 1000 / (2 * capacity * lifetime) * (P_c/T_bc + P_d/T_bd).
    LinExpr wear_cost;
};

struct BessBlock {
    BessSpec spec;
    BessVars vars;
};

// Adds the battery columns, the state-of-charge recurrence (bounded at every
// hour, final state included), and the exclusion between the two directions.
BessBlock build_bess_block(ModelBuilder& m, const BessSpec& spec, const TimeGrid& grid);

// Heat accumulator attached to one CCPP group. Levels are MW-hours of heat;
// gamma is the standing loss the tank sheds each hour.
struct TessSpec {
    std::string id = "TESS";
    double h_min = 0.0;
    double h_max = 0.0;
    double gamma_max = 0.0; // standing-loss ceiling, MW per hour
    double h_init = 0.0;
    std::string group;      // CCPP group whose surplus may charge the tank

    void validate() const; // throws SpecError on out-of-range fields
};

struct TessVars {
    std::vector<VarRef> q_in;   // MW charged, per hour
    std::vector<VarRef> q_out;  // MW released, per hour
    std::vector<VarRef> loss;   // standing loss actually shed, [0, gamma_max]
    std::vector<VarRef> level;  // tank level at the END of each hour
};

struct TessBlock {
    TessSpec spec;
    TessVars vars;
};

// Adds the tank columns and level recurrence (bounded at every hour, final
// state included). charge_cap holds one expression per hour; the hour's inflow
// is constrained to stay below it (the owning group's spare heat).
TessBlock build_tess_block(ModelBuilder& m, const TessSpec& spec, const TimeGrid& grid,
                           const std::vector<LinExpr>& charge_cap);

} // namespace meso
