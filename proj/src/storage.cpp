#include "meso/storage.hpp"

#include <string>

namespace meso {

namespace {

std::string col(const std::string& id, const std::string& family, int hour) {
    return id + "." + family + "[" + std::to_string(hour) + "]";
}

} // namespace

void BessSpec::validate() const {
    if (id.empty()) throw SpecError("battery id must be non-empty");
    if (eta_c <= 0.0 || eta_c > 1.0 || eta_d <= 0.0 || eta_d > 1.0)
        throw SpecError(id + ": efficiencies must lie in (0, 1]");
    if (p1c <= 0.0) throw SpecError(id + ": 1C-rate power must be positive");
    if (soc_min < 0.0 || soc_min >= soc_max || soc_max > 1.0)
        throw SpecError(id + ": state-of-charge band must satisfy 0 <= min < max <= 1");
    if (soc_init < soc_min || soc_init > soc_max)
        throw SpecError(id + ": initial state of charge falls outside its band");
    if (pbc_max <= 0.0 || pbd_max <= 0.0)
        throw SpecError(id + ": charge and discharge ceilings must be positive");
    if (capital_cost <= 0.0 || capacity_kwh <= 0.0 || lifetime_hours <= 0.0)
        throw SpecError(id + ": capital cost, capacity and lifetime must be positive");
    if (t_bc <= 0.0 || t_bd <= 0.0)
        throw SpecError(id + ": rated daily charge/discharge hours must be positive");
}

BessBlock build_bess_block(ModelBuilder& m, const BessSpec& spec, const TimeGrid& grid) {
    spec.validate();
    grid.validate();

    const int K = grid.num_steps;
    BessBlock b;
    b.spec = spec;
    BessVars& v = b.vars;

    // capital_cost is $/kWh and the flows are MW, hence the factor 1000.
    const double wear_c =
        spec.capital_cost * 1000.0 / (2.0 * spec.capacity_kwh * spec.lifetime_hours * spec.t_bc);
    const double wear_d =
        spec.capital_cost * 1000.0 / (2.0 * spec.capacity_kwh * spec.lifetime_hours * spec.t_bd);

    for (int k = 0; k < K; ++k) {
        const int hour = grid.hour(k);
        VarRef pc = m.add_continuous(0.0, spec.pbc_max, col(spec.id, "pbc", hour));
        VarRef pd = m.add_continuous(0.0, spec.pbd_max, col(spec.id, "pbd", hour));
        VarRef soc = m.add_continuous(spec.soc_min, spec.soc_max, col(spec.id, "soc", hour));
        VarRef chg = m.add_binary(col(spec.id, "chg", hour));
        v.p_charge.push_back(pc);
        v.p_discharge.push_back(pd);
        v.soc.push_back(soc);
        v.charging.push_back(chg);

        // One direction per hour.
        m.add(le(LinExpr(pc) - spec.pbc_max * LinExpr(chg), 0.0,
                 col(spec.id, "chg_dir", hour)));
        m.add(le(LinExpr(pd) + spec.pbd_max * LinExpr(chg), spec.pbd_max,
                 col(spec.id, "dis_dir", hour)));

        LinExpr prev = (k == 0) ? LinExpr(spec.soc_init) : LinExpr(v.soc[static_cast<size_t>(k - 1)]);
        m.add(eq(LinExpr(soc) - prev - (spec.eta_c / spec.p1c) * LinExpr(pc) +
                     (1.0 / (spec.eta_d * spec.p1c)) * LinExpr(pd),
                 0.0, col(spec.id, "soc_chain", hour)));

        v.wear_cost = v.wear_cost + wear_c * LinExpr(pc) + wear_d * LinExpr(pd);
    }
    return b;
}

void TessSpec::validate() const {
    if (id.empty()) throw SpecError("thermal store id must be non-empty");
    if (h_min > h_max) throw SpecError(id + ": level floor exceeds its ceiling");
    if (h_init < h_min || h_init > h_max)
        throw SpecError(id + ": initial level falls outside its band");
    if (gamma_max < 0.0) throw SpecError(id + ": standing-loss ceiling must be non-negative");
}

TessBlock build_tess_block(ModelBuilder& m, const TessSpec& spec, const TimeGrid& grid,
                           const std::vector<LinExpr>& charge_cap) {
    spec.validate();
    grid.validate();
    if (charge_cap.size() != static_cast<size_t>(grid.num_steps))
        throw InputLengthError(spec.id + ": one inflow cap per hour expected, got " +
                               std::to_string(charge_cap.size()));

    const int K = grid.num_steps;
    const double swing = spec.h_max - spec.h_min;
    TessBlock b;
    b.spec = spec;
    TessVars& v = b.vars;

    for (int k = 0; k < K; ++k) {
        const int hour = grid.hour(k);
        VarRef qi = m.add_continuous(0.0, swing, col(spec.id, "qin", hour));
        VarRef qo = m.add_continuous(0.0, swing, col(spec.id, "qout", hour));
        VarRef g = m.add_continuous(0.0, spec.gamma_max, col(spec.id, "loss", hour));
        VarRef h = m.add_continuous(spec.h_min, spec.h_max, col(spec.id, "level", hour));
        v.q_in.push_back(qi);
        v.q_out.push_back(qo);
        v.loss.push_back(g);
        v.level.push_back(h);

        m.add(le(LinExpr(qi) - charge_cap[static_cast<size_t>(k)], 0.0,
                 col(spec.id, "qin_cap", hour)));

        LinExpr prev = (k == 0) ? LinExpr(spec.h_init) : LinExpr(v.level[static_cast<size_t>(k - 1)]);
        m.add(eq(LinExpr(h) - prev - LinExpr(qi) + LinExpr(qo) + LinExpr(g), 0.0,
                 col(spec.id, "level_chain", hour)));
    }
    return b;
}

} // namespace meso
