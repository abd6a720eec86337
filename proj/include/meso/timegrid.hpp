#pragma once

#include <string>
#include <vector>

#include "meso/errors.hpp"

namespace meso {

// Hourly day-ahead horizon. start_hour is the label of the first step (1-based).
struct TimeGrid {
    int start_hour = 1;
    int num_steps = 24;
    double step_hours = 1.0;

    void validate() const {
        if (num_steps <= 0) throw DomainError("time grid must have at least one step");
        if (step_hours <= 0.0) throw DomainError("time grid step length must be positive");
    }
    int hour(int k) const { return start_hour + k; } // k is 0-based step index
};

// Per-hour exogenous series for one scheduling day. All vectors have grid.num_steps entries.
struct ForecastSet {
    std::vector<double> elec_demand_mw;
    std::vector<double> thermal_demand_mw;   // nominal (pre-flexibility) heat demand
    std::vector<double> res_mw;              // renewable in-feed, consumed as-is
    std::vector<double> buy_price;           // $/MWh purchased
    std::vector<double> sell_price;          // $/MWh sold back
    std::vector<double> spin_reserve_mw;     // empty => derived as a demand fraction
};

struct WindTurbineSpec {
    double power_coeff = 0.4;   // aerodynamic efficiency, Betz-limited
    double correction = 1.0;    // dimensionless adjustment factor
    double air_density = 1.225; // kg/m^3
    double rotor_area = 5000.0; // m^2

    void validate() const {
        if (power_coeff <= 0.0 || power_coeff > 0.593)
            throw DomainError("wind power coefficient must lie in (0, 0.593]");
        if (correction <= 0.0) throw DomainError("wind correction factor must be positive");
        if (air_density <= 0.0) throw DomainError("air density must be positive");
        if (rotor_area <= 0.0) throw DomainError("rotor area must be positive");
    }
};

// Turbine output in MW for a given wind speed in m/s.
double wind_power(const WindTurbineSpec& spec, double wind_speed_ms);

// Reads/writes the forecast CSV. Exact header (reserve column optional on read):
//   hour,elec_demand_mw,thermal_demand_mw,res_mw,buy_price,sell_price[,spin_reserve_mw]
// Errors carry 1-based row/column positions.
ForecastSet load_forecasts(const std::string& path, const TimeGrid& grid);
void write_forecasts(const std::string& path, const TimeGrid& grid, const ForecastSet& fs);

// Reserve requirement series: explicit column if present, otherwise fraction * demand.
std::vector<double> reserve_series(const ForecastSet& fs, double default_fraction);

} // namespace meso
