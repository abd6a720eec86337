#include "meso/loads.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace meso {

namespace {

std::string col(const std::string& id, const std::string& family, int hour) {
    return id + "." + family + "[" + std::to_string(hour) + "]";
}

} // namespace

void PumpSpec::validate() const {
    if (id.empty()) throw SpecError("pump id must be non-empty");
    if (flow_rate <= 0.0) throw SpecError(id + ": pump flow rate must be positive");
    if (efficiency <= 0.0) throw SpecError(id + ": pump specific energy must be positive");
    if (max_startups < 0) throw SpecError(id + ": startup budget must be non-negative");
}

void PumpFleet::validate() const {
    if (daily_volume < 0.0) throw SpecError("fleet duty volume must be non-negative");
    for (const PumpSpec& p : pumps) p.validate();
}

PumpBlock build_pump_block(ModelBuilder& m, const PumpFleet& fleet, const TimeGrid& grid) {
    fleet.validate();
    grid.validate();

    const int K = grid.num_steps;
    double deliverable = 0.0;
    for (const PumpSpec& p : fleet.pumps) deliverable += p.flow_rate * K * grid.step_hours;
    if (deliverable < fleet.daily_volume)
        throw FleetError("fleet moves at most " + std::to_string(deliverable) +
                         " m^3 over the horizon, " + std::to_string(fleet.daily_volume) +
                         " required");

    PumpBlock b;
    b.fleet = fleet;
    PumpVars& v = b.vars;
    v.power_mw.assign(static_cast<size_t>(K), LinExpr());

    LinExpr volume;
    for (const PumpSpec& p : fleet.pumps) {
        std::vector<VarRef> on, start;
        LinExpr starts;
        for (int k = 0; k < K; ++k) {
            const int hour = grid.hour(k);
            VarRef u = m.add_binary(col(p.id, "on", hour));
            VarRef w = m.add_continuous(0.0, 1.0, col(p.id, "start", hour));
            // off in the hour before the horizon
            LinExpr prev = (k == 0) ? LinExpr(0.0) : LinExpr(on.back());
            LinExpr edge = LinExpr(u) - prev;
            m.add(le(2.0 * LinExpr(w) - edge, 1.0, col(p.id, "start_ub", hour)));
            m.add(ge(2.0 * LinExpr(w) - edge, 0.0, col(p.id, "start_lb", hour)));
            // pins the counter to 1 on a rising edge, keeping it continuous
            m.add(ge(LinExpr(w) - edge, 0.0, col(p.id, "start_edge", hour)));

            volume = volume + p.flow_rate * grid.step_hours * LinExpr(u);
            v.power_mw[static_cast<size_t>(k)] =
                v.power_mw[static_cast<size_t>(k)] +
                (p.efficiency * p.flow_rate / 1000.0) * LinExpr(u);
            starts = starts + LinExpr(w);
            on.push_back(u);
            start.push_back(w);
        }
        m.add(le(starts, static_cast<double>(p.max_startups), p.id + ".starts"));
        v.on.push_back(std::move(on));
        v.start.push_back(std::move(start));
    }
    if (fleet.daily_volume > 0.0) m.add(ge(volume, fleet.daily_volume, "pump_volume"));
    return b;
}

std::vector<std::pair<VarRef, double>> fixed_pump_schedule(const PumpBlock& blk,
                                                           const TimeGrid& grid) {
    const int K = grid.num_steps;
    double main_flow = 0.0;
    for (const PumpSpec& p : blk.fleet.pumps)
        if (p.cls == PumpClass::main) main_flow += p.flow_rate;
    if (main_flow <= 0.0) throw FleetError("fixed duty plan needs at least one main pump");

    int duty_hours = 0;
    if (blk.fleet.daily_volume > 0.0)
        duty_hours = static_cast<int>(
            std::ceil(blk.fleet.daily_volume / (main_flow * grid.step_hours) - 1e-12));
    if (duty_hours > K)
        throw FleetError("main pumps need " + std::to_string(duty_hours) +
                         " hours to move the duty volume, horizon has " + std::to_string(K));

    std::vector<std::pair<VarRef, double>> fixings;
    for (size_t p = 0; p < blk.fleet.pumps.size(); ++p) {
        const bool is_main = blk.fleet.pumps[p].cls == PumpClass::main;
        for (int k = 0; k < K; ++k)
            fixings.emplace_back(blk.vars.on[p][static_cast<size_t>(k)],
                                 (is_main && k < duty_hours) ? 1.0 : 0.0);
    }
    return fixings;
}

void IlSpec::validate() const {
    if (id.empty()) throw SpecError("curtailment contract id must be non-empty");
    if (hourly_cap <= 0.0 || daily_cap <= 0.0)
        throw SpecError(id + ": curtailment caps must be positive");
    if (price_multiplier < 0.0)
        throw SpecError(id + ": curtailment price multiplier must be non-negative");
}

IlBlock build_il_block(ModelBuilder& m, const std::vector<IlSpec>& ils, const TimeGrid& grid,
                       const std::vector<double>& elec_demand_mw,
                       const std::vector<double>& buy_price, double demand_fraction) {
    grid.validate();
    const int K = grid.num_steps;
    if (elec_demand_mw.size() != static_cast<size_t>(K))
        throw InputLengthError("curtailment block: one demand value per hour expected");
    if (buy_price.size() != static_cast<size_t>(K))
        throw InputLengthError("curtailment block: one purchase price per hour expected");
    if (demand_fraction < 0.0 || demand_fraction > 1.0)
        throw DomainError("curtailable demand share must lie in [0, 1]");

    IlBlock b;
    b.specs = ils;
    IlVars& v = b.vars;
    v.total_mw.assign(static_cast<size_t>(K), LinExpr());

    for (const IlSpec& s : ils) {
        s.validate();
        std::vector<VarRef> cols;
        LinExpr day;
        for (int k = 0; k < K; ++k) {
            VarRef c = m.add_continuous(0.0, s.hourly_cap, col(s.id, "cut", grid.hour(k)));
            day = day + LinExpr(c);
            v.total_mw[static_cast<size_t>(k)] = v.total_mw[static_cast<size_t>(k)] + LinExpr(c);
            v.cost = v.cost + (s.price_multiplier * buy_price[static_cast<size_t>(k)]) * LinExpr(c);
            cols.push_back(c);
        }
        m.add(le(day, s.daily_cap, s.id + ".daily"));
        v.curtail.push_back(std::move(cols));
    }
    if (!ils.empty()) {
        for (int k = 0; k < K; ++k)
            m.add(le(v.total_mw[static_cast<size_t>(k)],
                     demand_fraction * elec_demand_mw[static_cast<size_t>(k)],
                     "il_share[" + std::to_string(grid.hour(k)) + "]"));
    }
    return b;
}

void FlexThermalSpec::validate() const {
    if (dr_max < 0.0 || dr_max > 1.0)
        throw SpecError("reschedulable demand fraction must lie in [0, 1]");
}

FlexBlock build_flex_thermal_block(ModelBuilder& m, const FlexThermalSpec& spec,
                                   const TimeGrid& grid, const std::vector<double>& nominal_mw) {
    spec.validate();
    grid.validate();
    const int K = grid.num_steps;
    if (nominal_mw.size() != static_cast<size_t>(K))
        throw InputLengthError("reschedulable demand: one nominal value per hour expected");

    FlexBlock b;
    b.spec = spec;
    FlexVars& v = b.vars;

    // everything deferred somewhere must fit into a single hour at worst
    const double movable =
        spec.dr_max * std::accumulate(nominal_mw.begin(), nominal_mw.end(), 0.0);

    LinExpr deferred, shifted;
    for (int k = 0; k < K; ++k) {
        const int hour = grid.hour(k);
        const double nominal = nominal_mw[static_cast<size_t>(k)];
        VarRef dr = m.add_continuous(0.0, spec.dr_max, col("DH", "dr", hour));
        VarRef sh = m.add_continuous(0.0, movable, col("DH", "shift", hour));
        v.dr.push_back(dr);
        v.shift.push_back(sh);
        v.served_mw.push_back(LinExpr(nominal) - nominal * LinExpr(dr) + LinExpr(sh));
        deferred = deferred + nominal * LinExpr(dr);
        shifted = shifted + LinExpr(sh);
    }
    // day total conserved: shifted-in equals deferred-out
    m.add(eq(shifted - deferred, 0.0, "heat_shift_balance"));
    return b;
}

} // namespace meso
