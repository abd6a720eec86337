#include "meso/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace meso {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
    return *it;
}

double num(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
    return it->get<double>();
}

int integer(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number_integer()) throw ConfigError(ctx + ": '" + key + "' must be an integer");
    return v.get<int>();
}

int integer_or(const json& j, const char* key, int fallback, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer())
        throw ConfigError(ctx + ": '" + key + "' must be an integer");
    return it->get<int>();
}

std::string str(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_string()) throw ConfigError(ctx + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

const json& array(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_array()) throw ConfigError(ctx + ": '" + key + "' must be an array");
    return v;
}

const json& object(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_object()) throw ConfigError(ctx + ": '" + key + "' must be an object");
    return v;
}

UnitKind parse_kind(const std::string& s, const std::string& ctx) {
    if (s == "gt") return UnitKind::gt;
    if (s == "st") return UnitKind::st;
    if (s == "br") return UnitKind::br;
    throw ConfigError(ctx + ": unknown unit kind '" + s + "' (expected gt, st or br)");
}

StartupKind parse_method(const std::string& s, const std::string& ctx) {
    if (s == "hot") return StartupKind::hot;
    if (s == "warm") return StartupKind::warm;
    if (s == "cold") return StartupKind::cold;
    throw ConfigError(ctx + ": unknown startup method '" + s + "'");
}

UnitPhase parse_phase(const std::string& s, const std::string& ctx) {
    if (s == "off") return UnitPhase::off;
    if (s == "synch") return UnitPhase::synch;
    if (s == "soak") return UnitPhase::soak;
    if (s == "dispatch") return UnitPhase::dispatch;
    if (s == "desync") return UnitPhase::desync;
    throw ConfigError(ctx + ": unknown phase '" + s + "'");
}

ThermalUnitSpec parse_unit(const json& j, const std::string& ctx) {
    ThermalUnitSpec u;
    u.id = str(j, "id", ctx);
    const std::string uctx = ctx + " " + u.id;
    u.kind = parse_kind(str(j, "kind", uctx), uctx);
    u.p_e_min = num(j, "p_min", uctx);
    u.p_e_max = num(j, "p_max", uctx);
    u.ut = integer_or(j, "min_up", 3, uctx);
    u.dt = integer_or(j, "min_down", 3, uctx);
    u.desync_duration = integer_or(j, "desync_hours", 0, uctx);
    u.shutdown_cost = num_or(j, "shutdown_cost_per_hour", 0.0, uctx);
    u.msr = num_or(j, "max_spin_rate_mw_min", 0.0, uctx);
    if (j.contains("fuel_curve")) {
        const json& f = object(j, "fuel_curve", uctx);
        u.fuel_quad = num(f, "quad", uctx + ".fuel_curve");
        u.fuel_lin = num(f, "lin", uctx + ".fuel_curve");
        u.fuel_const = num(f, "const", uctx + ".fuel_curve");
    }
    if (j.contains("heat_recovery")) {
        const json& h = object(j, "heat_recovery", uctx);
        u.heat_a0 = num(h, "a0", uctx + ".heat_recovery");
        u.heat_a1 = num(h, "a1", uctx + ".heat_recovery");
    }
    if (j.contains("steam_demand")) {
        const json& s = object(j, "steam_demand", uctx);
        u.steam_b1 = num(s, "b1", uctx + ".steam_demand");
        u.steam_b2 = num(s, "b2", uctx + ".steam_demand");
    }
    u.fuel_to_heat = num_or(j, "fuel_to_heat", 0.0, uctx);

    for (const json& mj : array(j, "startup_methods", uctx)) {
        const std::string mctx = uctx + ".startup_methods";
        StartupMethodSpec msp;
        msp.method = parse_method(str(mj, "method", mctx), mctx);
        const json& w = array(mj, "downtime_window", mctx);
        if (w.size() != 2 || !w[0].is_number_integer() ||
            !(w[1].is_number_integer() || w[1].is_null()))
            throw ConfigError(mctx + ": downtime_window must be [first-hour, last-hour|null]");
        msp.window_lo = w[0].get<int>();
        msp.window_hi = w[1].is_null() ? kUnboundedWindow : w[1].get<int>();
        msp.synch_duration = integer_or(mj, "synch_hours", 0, mctx);
        msp.soak_duration = integer_or(mj, "soak_hours", 1, mctx);
        msp.soak_power = num_or(mj, "soak_power_mw", 0.0, mctx);
        msp.startup_cost = num_or(mj, "cost_per_hour", 0.0, mctx);
        u.methods.push_back(msp);
    }
    return u;
}

UnitState parse_state(const json& j, const std::string& ctx) {
    UnitState st;
    st.phase = parse_phase(str(j, "phase", ctx), ctx);
    st.hours_in_phase = integer(j, "hours_in_phase", ctx);
    st.prior_downtime = integer_or(j, "prior_downtime", 0, ctx);
    st.initial_power = num_or(j, "initial_power", 0.0, ctx);
    return st;
}

BessSpec parse_battery(const json& j, const std::string& ctx) {
    BessSpec b;
    if (j.contains("id")) b.id = str(j, "id", ctx);
    b.eta_c = num_or(j, "eta_c", b.eta_c, ctx);
    b.eta_d = num_or(j, "eta_d", b.eta_d, ctx);
    b.p1c = num(j, "p1c_mw", ctx);
    b.soc_min = num(j, "soc_min", ctx);
    b.soc_max = num(j, "soc_max", ctx);
    b.soc_init = num(j, "soc_init", ctx);
    b.pbc_max = num(j, "charge_max_mw", ctx);
    b.pbd_max = num(j, "discharge_max_mw", ctx);
    b.capital_cost = num(j, "capital_cost_per_kwh", ctx);
    b.capacity_kwh = num(j, "capacity_kwh", ctx);
    b.lifetime_hours = num(j, "lifetime_hours", ctx);
    b.t_bc = num_or(j, "rated_charge_hours", b.t_bc, ctx);
    b.t_bd = num_or(j, "rated_discharge_hours", b.t_bd, ctx);
    return b;
}

TessSpec parse_heat_store(const json& j, const std::string& ctx) {
    TessSpec t;
    if (j.contains("id")) t.id = str(j, "id", ctx);
    t.h_min = num(j, "level_min_mwh", ctx);
    t.h_max = num(j, "level_max_mwh", ctx);
    t.gamma_max = num(j, "standing_loss_max_mw", ctx);
    t.h_init = num(j, "level_init_mwh", ctx);
    t.group = str(j, "group", ctx);
    return t;
}

PumpFleet parse_pumps(const json& j, const std::string& ctx) {
    PumpFleet f;
    f.daily_volume = num_or(j, "daily_volume_m3", 0.0, ctx);
    if (j.contains("units")) {
        for (const json& pj : array(j, "units", ctx)) {
            PumpSpec p;
            p.id = str(pj, "id", ctx);
            const std::string pctx = ctx + " " + p.id;
            p.flow_rate = num(pj, "flow_m3_per_h", pctx);
            p.efficiency = num(pj, "kwh_per_m3", pctx);
            p.max_startups = integer(pj, "max_startups", pctx);
            const std::string cls = str(pj, "class", pctx);
            if (cls == "main")
                p.cls = PumpClass::main;
            else if (cls == "auxiliary")
                p.cls = PumpClass::auxiliary;
            else
                throw ConfigError(pctx + ": unknown pump class '" + cls + "'");
            f.pumps.push_back(std::move(p));
        }
    }
    return f;
}

} // namespace

void GridExchangeSpec::validate() const {
    if (import_max_mw < 0.0 || export_max_mw < 0.0 || heat_import_max_mw < 0.0 ||
        contracted_capacity < 0.0 || capacity_rate < 0.0 || heat_price < 0.0 ||
        gas_price < 0.0)
        throw SpecError("grid exchange fields must be non-negative");
}

void SolverKnobs::validate() const {
    if (!(gap_tol > 0.0 && gap_tol < 1.0))
        throw ConfigError("solver.gap_tol must lie in (0, 1)");
    if (node_limit < 1) throw ConfigError("solver.node_limit must be positive");
    if (fuel_segments < 1) throw ConfigError("solver.fuel_segments must be positive");
    if (reserve_fraction < 0.0 || reserve_fraction > 1.0)
        throw ConfigError("solver.reserve_fraction must lie in [0, 1]");
}

const ThermalUnitSpec& SystemConfig::unit(const std::string& id) const {
    for (const ThermalUnitSpec& u : units)
        if (u.id == id) return u;
    throw ConfigError("no unit named '" + id + "'");
}

void SystemConfig::validate() const {
    grid.validate();

    std::set<std::string> ids;
    for (const ThermalUnitSpec& u : units) {
        u.validate();
        if (!ids.insert(u.id).second) throw ConfigError("duplicate unit id '" + u.id + "'");
        if (initial_states.find(u.id) == initial_states.end())
            throw ConfigError("unit '" + u.id + "' has no initial state");
    }

    std::set<std::string> group_ids, grouped;
    auto member = [&](const std::string& gid, const std::string& uid, UnitKind want,
                      const char* slot) {
        const ThermalUnitSpec& u = unit(uid); // ConfigError when absent
        if (u.kind != want)
            throw ConfigError("group '" + gid + "': " + slot + " slot names " + uid +
                              ", which is not a " + slot);
        if (!grouped.insert(uid).second)
            throw ConfigError("unit '" + uid + "' appears in more than one group");
    };
    for (const CcppGroupConfig& g : groups) {
        if (!group_ids.insert(g.id).second)
            throw ConfigError("duplicate group id '" + g.id + "'");
        member(g.id, g.gt, UnitKind::gt, "gt");
        member(g.id, g.st, UnitKind::st, "st");
        member(g.id, g.boiler, UnitKind::br, "boiler");
    }

    std::set<std::string> pooled;
    for (const std::string& id : extra_steam_turbines) {
        const ThermalUnitSpec& u = unit(id);
        if (u.kind != UnitKind::st)
            throw ConfigError("extra_steam_turbines entry '" + id + "' is not a steam turbine");
        if (grouped.count(id))
            throw ConfigError("steam turbine '" + id + "' is both grouped and pooled");
        if (!pooled.insert(id).second)
            throw ConfigError("steam turbine '" + id + "' pooled twice");
    }
    for (const ThermalUnitSpec& u : units)
        if (u.kind == UnitKind::st && !grouped.count(u.id) && !pooled.count(u.id))
            throw ConfigError("steam turbine '" + u.id +
                              "' has no steam source: list it in a group or in "
                              "extra_steam_turbines");

    if (battery) battery->validate();
    if (heat_store) {
        heat_store->validate();
        if (!group_ids.count(heat_store->group))
            throw ConfigError("heat store charges from unknown group '" +
                              heat_store->group + "'");
    }
    pumps.validate();
    for (const IlSpec& il : interruptible) il.validate();
    if (il_demand_fraction < 0.0 || il_demand_fraction > 1.0)
        throw ConfigError("interruptible.demand_fraction must lie in [0, 1]");
    flexible_heat.validate();
    exchange.validate();
    solver.validate();
}

SystemConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");

    SystemConfig c;
    if (j.contains("horizon")) {
        const json& h = object(j, "horizon", origin);
        c.grid.start_hour = integer_or(h, "start_hour", 1, origin + ".horizon");
        c.grid.num_steps = integer_or(h, "hours", 24, origin + ".horizon");
        c.grid.step_hours = num_or(h, "step_hours", 1.0, origin + ".horizon");
    }

    for (const json& uj : array(j, "units", origin))
        c.units.push_back(parse_unit(uj, origin + ".units"));

    const json& states = object(j, "initial_states", origin);
    for (auto it = states.begin(); it != states.end(); ++it)
        c.initial_states[it.key()] =
            parse_state(it.value(), origin + ".initial_states." + it.key());

    for (const json& gj : array(j, "groups", origin)) {
        const std::string gctx = origin + ".groups";
        CcppGroupConfig g;
        g.id = str(gj, "id", gctx);
        g.gt = str(gj, "gt", gctx);
        g.st = str(gj, "st", gctx);
        g.boiler = str(gj, "boiler", gctx);
        c.groups.push_back(std::move(g));
    }

    if (j.contains("extra_steam_turbines")) {
        for (const json& sj : array(j, "extra_steam_turbines", origin)) {
            if (!sj.is_string())
                throw ConfigError(origin + ": extra_steam_turbines entries must be unit ids");
            c.extra_steam_turbines.push_back(sj.get<std::string>());
        }
    }

    if (j.contains("battery"))
        c.battery = parse_battery(object(j, "battery", origin), origin + ".battery");
    if (j.contains("heat_store"))
        c.heat_store =
            parse_heat_store(object(j, "heat_store", origin), origin + ".heat_store");
    if (j.contains("pumps")) c.pumps = parse_pumps(object(j, "pumps", origin), origin + ".pumps");
    if (j.contains("interruptible")) {
        const json& ij = object(j, "interruptible", origin);
        const std::string ictx = origin + ".interruptible";
        c.il_demand_fraction = num_or(ij, "demand_fraction", c.il_demand_fraction, ictx);
        if (ij.contains("contracts")) {
            for (const json& cj : array(ij, "contracts", ictx)) {
                IlSpec s;
                s.id = str(cj, "id", ictx);
                s.hourly_cap = num(cj, "hourly_cap_mwh", ictx + " " + s.id);
                s.daily_cap = num(cj, "daily_cap_mwh", ictx + " " + s.id);
                s.price_multiplier = num_or(cj, "price_multiplier", 1.5, ictx + " " + s.id);
                c.interruptible.push_back(std::move(s));
            }
        }
    }
    if (j.contains("flexible_heat"))
        c.flexible_heat.dr_max =
            num(object(j, "flexible_heat", origin), "dr_max", origin + ".flexible_heat");

    if (j.contains("exchange")) {
        const json& e = object(j, "exchange", origin);
        const std::string ectx = origin + ".exchange";
        GridExchangeSpec& x = c.exchange;
        x.import_max_mw = num_or(e, "import_max_mw", x.import_max_mw, ectx);
        x.export_max_mw = num_or(e, "export_max_mw", x.export_max_mw, ectx);
        x.heat_import_max_mw = num_or(e, "heat_import_max_mw", x.heat_import_max_mw, ectx);
        x.contracted_capacity = num_or(e, "contracted_capacity_mw", x.contracted_capacity, ectx);
        x.capacity_rate = num_or(e, "capacity_rate", x.capacity_rate, ectx);
        x.heat_price = num_or(e, "heat_price", x.heat_price, ectx);
        x.gas_price = num_or(e, "gas_price", x.gas_price, ectx);
    }
    if (j.contains("solver")) {
        const json& s = object(j, "solver", origin);
        const std::string sctx = origin + ".solver";
        c.solver.gap_tol = num_or(s, "gap_tol", c.solver.gap_tol, sctx);
        c.solver.node_limit =
            static_cast<long>(num_or(s, "node_limit", static_cast<double>(c.solver.node_limit), sctx));
        c.solver.fuel_segments = integer_or(s, "fuel_segments", c.solver.fuel_segments, sctx);
        c.solver.reserve_fraction = num_or(s, "reserve_fraction", c.solver.reserve_fraction, sctx);
    }

    c.validate();
    return c;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

} // namespace meso
