#include "meso/scheduler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <span>
#include <sstream>
#include <thread>

#include "meso/mld.hpp"
#include "meso/num_io.hpp"

namespace meso {

namespace {

constexpr std::array<const char*, 4> kScenarioNames = {"s1", "s2", "s3", "s4"};

const char* method_tag(StartupKind n) {
    switch (n) {
        case StartupKind::hot: return "hot";
        case StartupKind::warm: return "warm";
        case StartupKind::cold: return "cold";
    }
    return "?";
}

std::string hcol(const std::string& base, int hour) {
    return base + "[" + std::to_string(hour) + "]";
}

double value_at(const Solution& sol, const VarRef& v) {
    return sol.values.at(static_cast<size_t>(v.index));
}

} // namespace

const char* scenario_name(ScenarioId s) {
    return kScenarioNames.at(static_cast<size_t>(s));
}

ScenarioId parse_scenario(const std::string& text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (size_t i = 0; i < kScenarioNames.size(); ++i)
        if (t == kScenarioNames[i] || t == std::string(1, static_cast<char>('1' + i)))
            return static_cast<ScenarioId>(i);
    throw UsageError("unknown scenario '" + text + "' (expected s1, s2, s3 or s4)");
}

ScenarioGates gates(ScenarioId s) {
    ScenarioGates g;
    g.optimize_pumps = s != ScenarioId::s1;
    g.curtailment = s == ScenarioId::s3 || s == ScenarioId::s4;
    g.flexible_heat = s == ScenarioId::s4;
    return g;
}

AssembledProblem assemble(const SystemConfig& config, const ForecastSet& forecasts,
                          ScenarioId scenario) {
    config.validate();
    const TimeGrid& grid = config.grid;
    const size_t K = static_cast<size_t>(grid.num_steps);
    auto need_len = [&](const std::vector<double>& v, const char* what) {
        if (v.size() != K)
            throw InputLengthError(std::string(what) + " series does not match the horizon");
    };
    need_len(forecasts.elec_demand_mw, "electrical demand");
    need_len(forecasts.thermal_demand_mw, "thermal demand");
    need_len(forecasts.res_mw, "renewable in-feed");
    need_len(forecasts.buy_price, "purchase price");
    need_len(forecasts.sell_price, "sale price");
    if (!forecasts.spin_reserve_mw.empty()) need_len(forecasts.spin_reserve_mw, "reserve requirement");
    if (config.groups.empty())
        throw ConfigError("scheduling needs at least one combined-cycle group");

    AssembledProblem a;
    a.scenario = scenario;
    a.grid = grid;
    ModelBuilder& m = a.model;
    const ScenarioGates g = gates(scenario);
    const GridExchangeSpec& ex = config.exchange;

    // generation commitment, in configured order
    a.units.reserve(config.units.size());
    for (const ThermalUnitSpec& spec : config.units) {
        a.units.push_back(build_commitment_block(m, spec, config.initial_states.at(spec.id), grid));
        build_ramp_block(m, a.units.back(), grid);
    }
    auto block_of = [&](const std::string& id) -> const UnitBlock& {
        for (const UnitBlock& u : a.units)
            if (u.spec.id == id) return u;
        throw ConfigError("unknown unit '" + id + "'");
    };

    // steam sufficiency inside each group and across the pool
    std::vector<CcppGroup> groups;
    groups.reserve(config.groups.size());
    for (const CcppGroupConfig& gc : config.groups)
        groups.push_back(CcppGroup{&block_of(gc.gt), &block_of(gc.st), &block_of(gc.boiler)});
    std::vector<const UnitBlock*> extra;
    for (const std::string& id : config.extra_steam_turbines) extra.push_back(&block_of(id));
    a.coupling = build_heat_coupling(m, groups, extra, grid);

    // turbine fuel cost in secant form
    for (const UnitBlock& u : a.units)
        if (u.spec.kind == UnitKind::gt)
            a.fuel_cost_terms.push_back(
                build_fuel_cost_block(m, u, grid, config.solver.fuel_segments));

    if (config.battery) a.battery = build_bess_block(m, *config.battery, grid);
    if (config.heat_store) {
        size_t gi = 0;
        while (gi < config.groups.size() && config.groups[gi].id != config.heat_store->group) ++gi;
        if (gi == config.groups.size())
            throw ConfigError("heat store names an unknown group '" + config.heat_store->group + "'");
        a.heat_store = build_tess_block(m, *config.heat_store, grid, a.coupling.group_surplus[gi]);
    }

    if (!config.pumps.pumps.empty()) {
        a.pumps = build_pump_block(m, config.pumps, grid);
        if (!g.optimize_pumps)
            for (const auto& [v, duty] : fixed_pump_schedule(*a.pumps, grid)) m.fix(v, duty);
    }
    if (g.curtailment && !config.interruptible.empty())
        a.curtail = build_il_block(m, config.interruptible, grid, forecasts.elec_demand_mw,
                                   forecasts.buy_price, config.il_demand_fraction);
    if (g.flexible_heat && config.flexible_heat.dr_max > 0.0)
        a.flexible =
            build_flex_thermal_block(m, config.flexible_heat, grid, forecasts.thermal_demand_mw);

    // utility tie lines
    for (size_t k = 0; k < K; ++k) {
        const int hour = grid.hour(static_cast<int>(k));
        a.grid_import.push_back(m.add_continuous(0.0, ex.import_max_mw, hcol("grid_buy", hour)));
        a.grid_export.push_back(m.add_continuous(0.0, ex.export_max_mw, hcol("grid_sell", hour)));
        a.heat_import.push_back(
            m.add_continuous(0.0, ex.heat_import_max_mw, hcol("heat_buy", hour)));
    }

    std::vector<const UnitBlock*> pool;
    for (const UnitBlock& u : a.units) pool.push_back(&u);
    build_reserve_block(m, pool, grid, reserve_series(forecasts, config.solver.reserve_fraction),
                        a.grid_import, ex.import_max_mw);

    // day peak of import above the contracted capacity
    a.peak_excess =
        m.add_continuous(0.0, std::max(0.0, ex.import_max_mw - ex.contracted_capacity),
                         "peak_import_excess");
    for (size_t k = 0; k < K; ++k)
        m.add(ge(LinExpr(a.peak_excess) - LinExpr(a.grid_import[k]), -ex.contracted_capacity,
                 hcol("peak_excess", grid.hour(static_cast<int>(k)))));

    // hourly balances: the demand side may not exceed the supply side
    for (size_t k = 0; k < K; ++k) {
        const int hour = grid.hour(static_cast<int>(k));
        LinExpr supply(forecasts.res_mw[k]);
        for (const UnitBlock& u : a.units)
            if (u.spec.kind != UnitKind::br)
                supply += LinExpr(u.vars.p_e[k]) + u.vars.soak_power_mw[k];
        supply += LinExpr(a.grid_import[k]) - LinExpr(a.grid_export[k]);
        if (a.battery)
            supply += LinExpr(a.battery->vars.p_discharge[k]) - LinExpr(a.battery->vars.p_charge[k]);
        LinExpr demand(forecasts.elec_demand_mw[k]);
        if (a.pumps) demand += a.pumps->vars.power_mw[k];
        if (a.curtail) demand -= a.curtail->vars.total_mw[k];
        m.add(le(demand - supply, 0.0, hcol("elec_balance", hour)));

        LinExpr heat_supply(a.heat_import[k]);
        for (const UnitBlock& u : a.units) heat_supply += u.vars.heat_out_mw[k];
        if (a.heat_store)
            heat_supply +=
                LinExpr(a.heat_store->vars.q_out[k]) - LinExpr(a.heat_store->vars.q_in[k]);
        LinExpr heat_demand = a.flexible ? a.flexible->vars.served_mw[k]
                                         : LinExpr(forecasts.thermal_demand_mw[k]);
        for (const UnitBlock& u : a.units) heat_demand += u.vars.steam_in_mw[k];
        m.add(le(heat_demand - heat_supply, 0.0, hcol("heat_balance", hour)));
    }

    LinExpr cost;
    for (const LinExpr& t : a.fuel_cost_terms) cost += t;
    for (const UnitBlock& u : a.units)
        for (size_t k = 0; k < K; ++k) {
            cost += u.vars.startup_cost[k] + u.vars.shutdown_cost[k];
            if (u.spec.kind == UnitKind::br) cost += ex.gas_price * LinExpr(u.vars.br_fuel[k]);
        }
    for (size_t k = 0; k < K; ++k)
        cost += forecasts.buy_price[k] * LinExpr(a.grid_import[k]) -
                forecasts.sell_price[k] * LinExpr(a.grid_export[k]) +
                ex.heat_price * LinExpr(a.heat_import[k]);
    cost += ex.capacity_rate * LinExpr(a.peak_excess);
    if (a.battery) cost += a.battery->vars.wear_cost;
    if (a.curtail) cost += a.curtail->vars.cost;
    m.add_objective(cost);

    a.problem = m.build();

    // Branching guidance: commitment decisions cascade forward through the
    // on/off chains, so resolving the earliest-hour events first collapses far
    // more of the fractional relaxation than any later binary. Rank integer
    // columns by hour (earlier = higher), and within an hour put unit start /
    // stop events ahead of pump and storage flags.
    a.problem.branch_priority.assign(static_cast<size_t>(a.problem.num_vars()), 0);
    for (int j = 0; j < a.problem.num_vars(); ++j) {
        const auto& v = a.problem.vars[static_cast<size_t>(j)];
        if (!v.integer) continue;
        auto br = v.name.find('[');
        int hour_rank = 0;
        if (br != std::string::npos)
            hour_rank = grid.num_steps - (std::atoi(v.name.c_str() + br + 1) - grid.start_hour);
        int bonus = 0;
        if (v.name.find(".su_") != std::string::npos ||
            v.name.find(".sd[") != std::string::npos)
            bonus = 2;
        else if (v.name.find(".on[") != std::string::npos ||
                 v.name.find(".start[") != std::string::npos)
            bonus = 1;
        a.problem.branch_priority[static_cast<size_t>(j)] = 4 * hour_rank + bonus;
    }
    return a;
}

CostBreakdown costs_from_series(const SystemConfig& config, const ForecastSet& forecasts,
                                const std::map<std::string, std::vector<double>>& series) {
    const size_t K = static_cast<size_t>(config.grid.num_steps);
    auto get = [&](const std::string& name) -> const std::vector<double>& {
        auto it = series.find(name);
        if (it == series.end())
            throw ValidationError("schedule is missing the '" + name + "' series");
        if (it->second.size() != K)
            throw InputLengthError("'" + name + "' series does not match the horizon");
        return it->second;
    };
    auto maybe = [&](const std::string& name) -> const std::vector<double>* {
        auto it = series.find(name);
        if (it == series.end()) return nullptr;
        if (it->second.size() != K)
            throw InputLengthError("'" + name + "' series does not match the horizon");
        return &it->second;
    };

    CostBreakdown c;
    for (const ThermalUnitSpec& u : config.units) {
        auto st = config.initial_states.find(u.id);
        if (st == config.initial_states.end())
            throw ValidationError(u.id + ": no boundary state configured");
        const BoundaryEvents b = resolve_boundary(u, st->second);

        // start-up cost accrues over the in-horizon share of the charged
        // window: soak hours for a hot start, synchronization and soak for
        // the slower methods
        auto accrue_start = [&](long tau, const StartupMethodSpec& msp) {
            long lo = msp.method == StartupKind::hot ? tau + msp.synch_duration : tau;
            long hi = tau + msp.synch_duration + msp.soak_duration - 1;
            lo = std::max(lo, 1L);
            hi = std::min(hi, static_cast<long>(K));
            if (hi >= lo) c.startup += msp.startup_cost * static_cast<double>(hi - lo + 1);
        };
        if (b.has_start) accrue_start(b.start_hour, u.methods.at(static_cast<size_t>(b.start_slot)));
        for (const StartupMethodSpec& msp : u.methods) {
            const std::vector<double>& ev = get(u.id + ".start_" + method_tag(msp.method));
            for (size_t k = 0; k < K; ++k)
                if (ev[k] > 0.5) accrue_start(static_cast<long>(k) + 1, msp);
        }
        auto accrue_stop = [&](long tau) {
            const long lo = std::max(tau, 1L);
            const long hi = std::min(tau + u.desync_duration - 1, static_cast<long>(K));
            if (hi >= lo) c.shutdown += u.shutdown_cost * static_cast<double>(hi - lo + 1);
        };
        if (b.has_stop) accrue_stop(b.stop_hour);
        const std::vector<double>& stops = get(u.id + ".stop");
        for (size_t k = 0; k < K; ++k)
            if (stops[k] > 0.5) accrue_stop(static_cast<long>(k) + 1);

        if (u.kind == UnitKind::gt) {
            const std::vector<double>& pe = get(u.id + ".pe_mw");
            const std::vector<double>& xd = get(u.id + ".x");
            for (size_t k = 0; k < K; ++k)
                c.fuel += u.fuel_quad * pe[k] * pe[k] + u.fuel_lin * pe[k] + u.fuel_const * xd[k];
        } else if (u.kind == UnitKind::br) {
            const std::vector<double>& fuel = get(u.id + ".fuel_mcf");
            for (size_t k = 0; k < K; ++k) c.boiler += config.exchange.gas_price * fuel[k];
        }
    }

    if (config.battery) {
        const BessSpec& b = *config.battery;
        const double wear_c =
            b.capital_cost * 1000.0 / (2.0 * b.capacity_kwh * b.lifetime_hours * b.t_bc);
        const double wear_d =
            b.capital_cost * 1000.0 / (2.0 * b.capacity_kwh * b.lifetime_hours * b.t_bd);
        const std::vector<double>& pc = get(b.id + ".charge_mw");
        const std::vector<double>& pd = get(b.id + ".discharge_mw");
        for (size_t k = 0; k < K; ++k) c.battery += wear_c * pc[k] + wear_d * pd[k];
    }

    const std::vector<double>& imp = get("grid_import_mw");
    const std::vector<double>& expv = get("grid_export_mw");
    const std::vector<double>& himp = get("heat_import_mw");
    if (forecasts.buy_price.size() != K || forecasts.sell_price.size() != K)
        throw InputLengthError("price series do not match the horizon");
    for (size_t k = 0; k < K; ++k)
        c.grid += forecasts.buy_price[k] * imp[k] - forecasts.sell_price[k] * expv[k] +
                  config.exchange.heat_price * himp[k];

    for (const IlSpec& il : config.interruptible) {
        const std::vector<double>* cut = maybe(il.id + ".cut_mwh");
        if (!cut) continue; // scenario without curtailment
        for (size_t k = 0; k < K; ++k)
            c.curtailment += il.price_multiplier * forecasts.buy_price[k] * (*cut)[k];
    }

    double peak = 0.0;
    for (size_t k = 0; k < K; ++k) peak = std::max(peak, imp[k]);
    c.capacity = config.exchange.capacity_rate *
                 std::max(0.0, peak - config.exchange.contracted_capacity);

    c.total = c.fuel + c.battery + c.startup + c.shutdown + c.capacity + c.boiler + c.grid +
              c.curtailment;
    return c;
}

ScheduleReport report_costs(const AssembledProblem& a, const SystemConfig& config,
                            const ForecastSet& forecasts, const Solution& sol) {
    ScheduleReport r;
    r.scenario = a.scenario;
    r.status = sol.status;
    r.objective = sol.objective;
    r.bound = sol.bound;
    r.gap = sol.gap;
    r.nodes = sol.nodes;
    r.lp_iterations = sol.lp_iterations;
    if (sol.values.empty()) return r;

    const size_t K = static_cast<size_t>(a.grid.num_steps);
    const std::span<const double> x(sol.values);

    auto put = [&](std::string name, std::vector<double> column) {
        r.columns.push_back(name);
        r.series.emplace(std::move(name), std::move(column));
    };
    auto from_vars = [&](const std::vector<VarRef>& vs) {
        std::vector<double> out;
        out.reserve(vs.size());
        for (const VarRef& v : vs) out.push_back(value_at(sol, v));
        return out;
    };
    auto from_exprs = [&](const std::vector<LinExpr>& es) {
        std::vector<double> out;
        out.reserve(es.size());
        for (const LinExpr& e : es) out.push_back(e.value(x));
        return out;
    };

    for (const UnitBlock& u : a.units) {
        const std::string& id = u.spec.id;
        put(id + ".x", from_vars(u.vars.x_disp));
        for (size_t n = 0; n < u.spec.methods.size(); ++n) {
            std::vector<double> ev(K);
            for (size_t k = 0; k < K; ++k) ev[k] = value_at(sol, u.vars.start_event[k][n]);
            put(id + ".start_" + method_tag(u.spec.methods[n].method), std::move(ev));
        }
        put(id + ".stop", from_vars(u.vars.stop_event));
        if (u.spec.kind == UnitKind::br) {
            put(id + ".fuel_mcf", from_vars(u.vars.br_fuel));
            put(id + ".heat_mw", from_exprs(u.vars.heat_out_mw));
        } else {
            put(id + ".pe_mw", from_vars(u.vars.p_e));
            put(id + ".sr_mw", from_vars(u.vars.sr));
            put(id + ".soak_mw", from_exprs(u.vars.soak_power_mw));
            if (u.spec.kind == UnitKind::gt)
                put(id + ".heat_mw", from_exprs(u.vars.heat_out_mw));
            else
                put(id + ".steam_mw", from_exprs(u.vars.steam_in_mw));
        }
    }
    if (a.battery) {
        const std::string& id = a.battery->spec.id;
        put(id + ".charge_mw", from_vars(a.battery->vars.p_charge));
        put(id + ".discharge_mw", from_vars(a.battery->vars.p_discharge));
        put(id + ".soc", from_vars(a.battery->vars.soc));
    }
    if (a.heat_store) {
        const std::string& id = a.heat_store->spec.id;
        put(id + ".qin_mw", from_vars(a.heat_store->vars.q_in));
        put(id + ".qout_mw", from_vars(a.heat_store->vars.q_out));
        put(id + ".loss_mw", from_vars(a.heat_store->vars.loss));
        put(id + ".level_mwh", from_vars(a.heat_store->vars.level));
    }
    if (a.pumps)
        for (size_t p = 0; p < a.pumps->fleet.pumps.size(); ++p)
            put(a.pumps->fleet.pumps[p].id + ".on", from_vars(a.pumps->vars.on[p]));
    if (a.curtail)
        for (size_t i = 0; i < a.curtail->specs.size(); ++i)
            put(a.curtail->specs[i].id + ".cut_mwh", from_vars(a.curtail->vars.curtail[i]));
    if (a.flexible) {
        put("heat_dr_frac", from_vars(a.flexible->vars.dr));
        put("heat_shift_mw", from_vars(a.flexible->vars.shift));
        put("heat_served_mw", from_exprs(a.flexible->vars.served_mw));
    }
    put("grid_import_mw", from_vars(a.grid_import));
    put("grid_export_mw", from_vars(a.grid_export));
    put("heat_import_mw", from_vars(a.heat_import));

    if (a.pumps)
        for (size_t p = 0; p < a.pumps->fleet.pumps.size(); ++p) {
            std::string duty;
            for (const VarRef& on : a.pumps->vars.on[p])
                duty.push_back(value_at(sol, on) > 0.5 ? '1' : '0');
            r.pump_strings[a.pumps->fleet.pumps[p].id] = std::move(duty);
        }

    r.costs = costs_from_series(config, forecasts, r.series);
    r.peak_excess_mw = value_at(sol, a.peak_excess);
    r.costs.capacity = config.exchange.capacity_rate * r.peak_excess_mw;
    r.costs.total = r.costs.fuel + r.costs.battery + r.costs.startup + r.costs.shutdown +
                    r.costs.capacity + r.costs.boiler + r.costs.grid + r.costs.curtailment;
    double model_fuel = 0.0;
    for (const LinExpr& t : a.fuel_cost_terms) model_fuel += t.value(x);
    r.fuel_model_gap = model_fuel - r.costs.fuel;
    return r;
}

std::vector<std::string> validate_schedule(const ScheduleReport& r, const SystemConfig& config,
                                           const ForecastSet& forecasts) {
    std::vector<std::string> out;
    auto flag = [&](std::string msg) { out.push_back(std::move(msg)); };

    const TimeGrid& grid = config.grid;
    const size_t K = static_cast<size_t>(grid.num_steps);
    const ScenarioGates g = gates(r.scenario);
    const bool has_il = g.curtailment && !config.interruptible.empty();
    const bool has_flex = g.flexible_heat && config.flexible_heat.dr_max > 0.0;

    if (forecasts.elec_demand_mw.size() != K || forecasts.thermal_demand_mw.size() != K ||
        forecasts.res_mw.size() != K || forecasts.buy_price.size() != K ||
        forecasts.sell_price.size() != K) {
        flag("forecast series do not match the horizon");
        return out;
    }

    auto series_of = [&](const std::string& name) -> const std::vector<double>* {
        auto it = r.series.find(name);
        if (it == r.series.end()) {
            flag("series '" + name + "' is missing");
            return nullptr;
        }
        if (it->second.size() != K) {
            flag("series '" + name + "' has the wrong length");
            return nullptr;
        }
        return &it->second;
    };
    auto hour_of = [&](size_t k) { return std::to_string(grid.hour(static_cast<int>(k))); };

    const double bin_tol = 1e-4; // commitment values are pinned to integers
    const double mw_tol = 1e-5;  // balance and gating slack on the MW scale
    auto near01 = [&](double v) {
        return std::abs(v) <= bin_tol || std::abs(v - 1.0) <= bin_tol;
    };
    auto agree = [&](double got, double want) {
        return std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want));
    };

    // ---- generation commitment timelines -----------------------------------
    for (const ThermalUnitSpec& spec : config.units) {
        auto st_it = config.initial_states.find(spec.id);
        if (st_it == config.initial_states.end()) {
            flag(spec.id + ": no boundary state configured");
            continue;
        }
        BoundaryEvents b;
        try {
            b = resolve_boundary(spec, st_it->second);
        } catch (const Error& e) {
            flag(e.what());
            continue;
        }

        const std::vector<double>* x = series_of(spec.id + ".x");
        const std::vector<double>* stop = series_of(spec.id + ".stop");
        std::array<const std::vector<double>*, 3> starts{};
        bool ok = x && stop;
        for (size_t n = 0; n < spec.methods.size(); ++n) {
            starts[n] = series_of(spec.id + ".start_" + method_tag(spec.methods[n].method));
            ok = ok && starts[n] != nullptr;
        }
        const std::vector<double>* pe = nullptr;
        const std::vector<double>* sr = nullptr;
        const std::vector<double>* soak = nullptr;
        const std::vector<double>* heat = nullptr;
        const std::vector<double>* steam = nullptr;
        const std::vector<double>* fuel = nullptr;
        if (spec.kind == UnitKind::br) {
            fuel = series_of(spec.id + ".fuel_mcf");
            heat = series_of(spec.id + ".heat_mw");
            ok = ok && fuel && heat;
        } else {
            pe = series_of(spec.id + ".pe_mw");
            sr = series_of(spec.id + ".sr_mw");
            soak = series_of(spec.id + ".soak_mw");
            ok = ok && pe && sr && soak;
            if (spec.kind == UnitKind::gt) {
                heat = series_of(spec.id + ".heat_mw");
                ok = ok && heat;
            } else {
                steam = series_of(spec.id + ".steam_mw");
                ok = ok && steam;
            }
        }
        if (!ok) continue;

        for (size_t k = 0; k < K; ++k) {
            if (!near01((*x)[k]))
                flag(spec.id + " hour " + hour_of(k) + ": dispatch flag is not 0/1");
            if (!near01((*stop)[k]))
                flag(spec.id + " hour " + hour_of(k) + ": shutdown event is not 0/1");
            for (size_t n = 0; n < spec.methods.size(); ++n)
                if (!near01((*starts[n])[k]))
                    flag(spec.id + " hour " + hour_of(k) + ": start-up event is not 0/1");
        }

        // paint phase occupancy from the events, history included
        struct StartEv {
            long tau;
            int slot;
        };
        std::vector<StartEv> sevs;
        std::vector<long> stop_hours;
        if (b.has_start) sevs.push_back({b.start_hour, b.start_slot});
        if (b.has_stop) stop_hours.push_back(b.stop_hour);
        for (size_t k = 0; k < K; ++k) {
            for (size_t n = 0; n < spec.methods.size(); ++n)
                if ((*starts[n])[k] > 0.5)
                    sevs.push_back({static_cast<long>(k) + 1, static_cast<int>(n)});
            if ((*stop)[k] > 0.5) stop_hours.push_back(static_cast<long>(k) + 1);
        }

        std::vector<double> synch_cnt(K, 0.0), desync_cnt(K, 0.0), entry_cnt(K, 0.0);
        std::vector<std::array<double, 3>> soak_cnt(K, {0.0, 0.0, 0.0});
        auto paint = [&](long lo, long hi, auto&& apply) {
            for (long h = std::max(lo, 1L); h <= std::min(hi, static_cast<long>(K)); ++h)
                apply(static_cast<size_t>(h - 1));
        };
        for (const StartEv& ev : sevs) {
            const StartupMethodSpec& msp = spec.methods[static_cast<size_t>(ev.slot)];
            paint(ev.tau, ev.tau + msp.synch_duration - 1,
                  [&](size_t h) { synch_cnt[h] += 1.0; });
            paint(ev.tau + msp.synch_duration,
                  ev.tau + msp.synch_duration + msp.soak_duration - 1,
                  [&](size_t h) { soak_cnt[h][static_cast<size_t>(ev.slot)] += 1.0; });
            const long e = ev.tau + msp.synch_duration + msp.soak_duration;
            if (e >= 1 && e <= static_cast<long>(K)) entry_cnt[static_cast<size_t>(e - 1)] += 1.0;
        }
        for (long tau : stop_hours)
            paint(tau, tau + spec.desync_duration - 1, [&](size_t h) { desync_cnt[h] += 1.0; });

        double x_prev = b.dispatched ? 1.0 : 0.0;
        for (size_t k = 0; k < K; ++k) {
            const double stop_k = (*stop)[k] > 0.5 ? 1.0 : 0.0;
            const double xk = x_prev + entry_cnt[k] - stop_k;
            if (xk < -bin_tol || xk > 1.0 + bin_tol)
                flag(spec.id + " hour " + hour_of(k) + ": start/stop events break the dispatch chain");
            if (std::abs((*x)[k] - xk) > bin_tol)
                flag(spec.id + " hour " + hour_of(k) +
                     ": dispatch flag disagrees with the start/stop events");
            double occupied = synch_cnt[k] + desync_cnt[k] + std::max(xk, 0.0);
            for (size_t n = 0; n < spec.methods.size(); ++n) occupied += soak_cnt[k][n];
            if (occupied > 1.0 + bin_tol)
                flag(spec.id + " hour " + hour_of(k) + ": overlapping operating phases");
            x_prev = xk;
        }

        // ordering rules along the merged event timeline
        struct TEv {
            long tau;
            int type; // 0 stop, 1 start
            int slot;
        };
        std::vector<TEv> timeline;
        for (long tau : stop_hours) timeline.push_back({tau, 0, -1});
        for (const StartEv& ev : sevs) timeline.push_back({ev.tau, 1, ev.slot});
        std::sort(timeline.begin(), timeline.end(), [](const TEv& lhs, const TEv& rhs) {
            return lhs.tau != rhs.tau ? lhs.tau < rhs.tau : lhs.type < rhs.type;
        });
        bool have_stop = false, running = b.dispatched;
        long last_stop = 0;
        long disp_since = b.dispatched ? 1 - static_cast<long>(st_it->second.hours_in_phase) : 0;
        for (const TEv& ev : timeline) {
            if (ev.type == 0) {
                if (!running) {
                    if (ev.tau >= 1)
                        flag(spec.id + ": shutdown at hour " + std::to_string(ev.tau) +
                             " without a dispatch run");
                } else if (ev.tau - disp_since < spec.ut) {
                    flag(spec.id + ": dispatch run stopping at hour " + std::to_string(ev.tau) +
                         " falls short of the minimum up time");
                }
                running = false;
                have_stop = true;
                last_stop = ev.tau;
            } else {
                const StartupMethodSpec& msp = spec.methods[static_cast<size_t>(ev.slot)];
                if (ev.tau >= 1) { // the boundary start was vetted by resolve_boundary
                    if (running)
                        flag(spec.id + ": start-up at hour " + std::to_string(ev.tau) +
                             " while the unit is already running");
                    else if (!have_stop)
                        flag(spec.id + ": start-up at hour " + std::to_string(ev.tau) +
                             " without a prior shutdown");
                    else {
                        const long downtime = ev.tau - last_stop;
                        if (downtime < msp.window_lo ||
                            (msp.window_hi != kUnboundedWindow && downtime > msp.window_hi))
                            flag(spec.id + ": " + method_tag(msp.method) + " start-up at hour " +
                                 std::to_string(ev.tau) + " outside its downtime window");
                    }
                }
                const long entry = ev.tau + msp.synch_duration + msp.soak_duration;
                if (have_stop && entry < last_stop + spec.dt)
                    flag(spec.id + ": dispatch re-entry at hour " + std::to_string(entry) +
                         " violates the minimum down time");
                running = true;
                disp_since = entry;
            }
        }

        // outputs only exist inside the dispatch phase
        for (size_t k = 0; k < K; ++k) {
            const double xv = (*x)[k] > 0.5 ? 1.0 : 0.0;
            if (spec.kind == UnitKind::br) {
                const double h = (*fuel)[k] * spec.fuel_to_heat;
                if (h > spec.p_e_max * xv + mw_tol || h < spec.p_e_min * xv - mw_tol)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": boiler output outside its committed range");
                if (!agree((*heat)[k], h))
                    flag(spec.id + " hour " + hour_of(k) +
                         ": boiler heat series disagrees with its fuel");
            } else {
                const double p = (*pe)[k], s = (*sr)[k];
                if (p > spec.p_e_max * xv + mw_tol || p < spec.p_e_min * xv - mw_tol)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": output outside its committed range");
                if (s < -mw_tol || s > 10.0 * spec.msr * xv + mw_tol)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": reserve offer beyond the spinning-rate limit");
                if (p + s > spec.p_e_max * xv + mw_tol)
                    flag(spec.id + " hour " + hour_of(k) + ": reserve offer beyond the headroom");
                double expect_soak = 0.0;
                for (size_t n = 0; n < spec.methods.size(); ++n)
                    expect_soak += soak_cnt[k][n] * spec.methods[n].soak_power;
                if (!agree((*soak)[k], expect_soak))
                    flag(spec.id + " hour " + hour_of(k) +
                         ": soak output differs from the active method");
                if (spec.kind == UnitKind::gt) {
                    if (!agree((*heat)[k], spec.heat_a0 * p + spec.heat_a1 * xv))
                        flag(spec.id + " hour " + hour_of(k) +
                             ": recovered heat disagrees with the output curve");
                } else {
                    if (!agree((*steam)[k], spec.steam_b1 * p + spec.steam_b2 * xv))
                        flag(spec.id + " hour " + hour_of(k) +
                             ": steam draw disagrees with the demand curve");
                }
            }
        }
        if (spec.kind == UnitKind::st) {
            double prev = st_it->second.phase == UnitPhase::dispatch
                              ? st_it->second.initial_power
                              : 0.0;
            for (size_t k = 0; k < K; ++k) {
                if (std::abs((*pe)[k] - prev) > 0.5 * spec.p_e_max + mw_tol)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": output moves faster than the hourly band");
                prev = (*pe)[k];
            }
        }
    }

    // ---- storage replay through the canonical update maps ------------------
    if (config.battery) {
        const BessSpec& spec = *config.battery;
        const std::vector<double>* pc = series_of(spec.id + ".charge_mw");
        const std::vector<double>* pd = series_of(spec.id + ".discharge_mw");
        const std::vector<double>* soc = series_of(spec.id + ".soc");
        if (pc && pd && soc) {
            MldBuilder mb;
            VarRef s = mb.add_state("soc", spec.soc_min, spec.soc_max);
            VarRef c = mb.add_input("charge", 0.0, spec.pbc_max);
            VarRef d = mb.add_input("discharge", 0.0, spec.pbd_max);
            mb.set_dynamics(s, LinExpr(s) + (spec.eta_c / spec.p1c) * LinExpr(c) -
                                   (1.0 / (spec.eta_d * spec.p1c)) * LinExpr(d));
            mb.add_bound_rows();
            const MldModel mm = mb.assemble();
            std::vector<double> state = {spec.soc_init};
            for (size_t k = 0; k < K; ++k) {
                if (std::min((*pc)[k], (*pd)[k]) > mw_tol)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": charges and discharges in the same hour");
                try {
                    state = mm.simulate_step(state, {(*pc)[k], (*pd)[k]}, {}, 1e-6);
                } catch (const InfeasiblePointError& e) {
                    flag(spec.id + " hour " + hour_of(k) + ": " + e.what());
                    state = {(*soc)[k]};
                    continue;
                }
                if (std::abs(state[0] - (*soc)[k]) > 1e-6)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": state of charge breaks the update recurrence");
                state[0] = (*soc)[k];
            }
            if (state[0] < spec.soc_min - 1e-6 || state[0] > spec.soc_max + 1e-6)
                flag(spec.id + ": final state of charge leaves its band");
        }
    }
    if (config.heat_store) {
        const TessSpec& spec = *config.heat_store;
        const std::vector<double>* qi = series_of(spec.id + ".qin_mw");
        const std::vector<double>* qo = series_of(spec.id + ".qout_mw");
        const std::vector<double>* lo = series_of(spec.id + ".loss_mw");
        const std::vector<double>* lv = series_of(spec.id + ".level_mwh");
        if (qi && qo && lo && lv) {
            const double flow_max = spec.h_max - spec.h_min;
            MldBuilder mb;
            VarRef s = mb.add_state("level", spec.h_min, spec.h_max);
            VarRef in = mb.add_input("charge", 0.0, flow_max);
            VarRef outq = mb.add_input("release", 0.0, flow_max);
            VarRef shed = mb.add_input("loss", 0.0, spec.gamma_max);
            mb.set_dynamics(s, LinExpr(s) + LinExpr(in) - LinExpr(outq) - LinExpr(shed));
            mb.add_bound_rows();
            const MldModel mm = mb.assemble();
            std::vector<double> state = {spec.h_init};
            for (size_t k = 0; k < K; ++k) {
                try {
                    state = mm.simulate_step(state, {(*qi)[k], (*qo)[k], (*lo)[k]}, {}, 1e-6);
                } catch (const InfeasiblePointError& e) {
                    flag(spec.id + " hour " + hour_of(k) + ": " + e.what());
                    state = {(*lv)[k]};
                    continue;
                }
                if (std::abs(state[0] - (*lv)[k]) > 1e-6)
                    flag(spec.id + " hour " + hour_of(k) +
                         ": tank level breaks the update recurrence");
                state[0] = (*lv)[k];
            }
            if (state[0] < spec.h_min - 1e-6 || state[0] > spec.h_max + 1e-6)
                flag(spec.id + ": final tank level leaves its band");
        }
    }

    // ---- pump duty ----------------------------------------------------------
    std::vector<double> pump_mw(K, 0.0);
    if (!config.pumps.pumps.empty()) {
        double volume = 0.0;
        bool fleet_ok = true;
        for (const PumpSpec& p : config.pumps.pumps) {
            const std::vector<double>* on = series_of(p.id + ".on");
            if (!on) {
                fleet_ok = false;
                continue;
            }
            int edges = 0;
            double prev = 0.0; // every pump rests in the hour before the horizon
            for (size_t k = 0; k < K; ++k) {
                if (!near01((*on)[k]))
                    flag(p.id + " hour " + hour_of(k) + ": duty flag is not 0/1");
                const double cur = (*on)[k] > 0.5 ? 1.0 : 0.0;
                if (cur > prev + 0.5) ++edges;
                volume += p.flow_rate * grid.step_hours * cur;
                pump_mw[k] += p.efficiency * p.flow_rate / 1000.0 * cur;
                prev = cur;
            }
            if (edges > p.max_startups)
                flag(p.id + ": " + std::to_string(edges) + " startups exceed the budget of " +
                     std::to_string(p.max_startups));
        }
        if (fleet_ok && volume < config.pumps.daily_volume -
                                     1e-6 * std::max(1.0, config.pumps.daily_volume))
            flag("pump fleet moves " + to_shortest(volume) + " m^3, duty requires " +
                 to_shortest(config.pumps.daily_volume));
    }

    // ---- curtailment --------------------------------------------------------
    std::vector<double> cut_mw(K, 0.0);
    if (has_il) {
        for (const IlSpec& il : config.interruptible) {
            const std::vector<double>* cut = series_of(il.id + ".cut_mwh");
            if (!cut) continue;
            double day = 0.0;
            for (size_t k = 0; k < K; ++k) {
                if ((*cut)[k] < -mw_tol)
                    flag(il.id + " hour " + hour_of(k) + ": negative curtailment");
                if ((*cut)[k] > il.hourly_cap + mw_tol)
                    flag(il.id + " hour " + hour_of(k) + ": curtailment above the hourly cap");
                day += (*cut)[k];
                cut_mw[k] += (*cut)[k];
            }
            if (day > il.daily_cap + mw_tol)
                flag(il.id + ": daily curtailment above the contract cap");
        }
        for (size_t k = 0; k < K; ++k)
            if (cut_mw[k] > config.il_demand_fraction * forecasts.elec_demand_mw[k] + mw_tol)
                flag("hour " + hour_of(k) + ": curtailment above the demand share cap");
    }

    // ---- flexible heat ------------------------------------------------------
    std::vector<double> served = forecasts.thermal_demand_mw;
    if (has_flex) {
        const std::vector<double>* dr = series_of("heat_dr_frac");
        const std::vector<double>* shift = series_of("heat_shift_mw");
        const std::vector<double>* sv = series_of("heat_served_mw");
        if (dr && shift && sv) {
            double nominal_total = 0.0, served_total = 0.0;
            for (size_t k = 0; k < K; ++k) {
                if ((*dr)[k] < -1e-9 || (*dr)[k] > config.flexible_heat.dr_max + 1e-9)
                    flag("hour " + hour_of(k) + ": deferral fraction outside its range");
                if ((*shift)[k] < -mw_tol)
                    flag("hour " + hour_of(k) + ": negative shifted-in heat");
                const double want =
                    (1.0 - (*dr)[k]) * forecasts.thermal_demand_mw[k] + (*shift)[k];
                if (!agree((*sv)[k], want))
                    flag("hour " + hour_of(k) +
                         ": served heat disagrees with the deferral bookkeeping");
                nominal_total += forecasts.thermal_demand_mw[k];
                served_total += (*sv)[k];
            }
            if (std::abs(served_total - nominal_total) > 1e-6 * std::max(1.0, nominal_total))
                flag("day total of served heat is not conserved");
            served = *sv;
        }
    }

    // ---- hourly balances, reserve, steam coupling ---------------------------
    const std::vector<double>* imp = series_of("grid_import_mw");
    const std::vector<double>* expv = series_of("grid_export_mw");
    const std::vector<double>* himp = series_of("heat_import_mw");
    if (imp && expv && himp) {
        const GridExchangeSpec& ex = config.exchange;
        std::vector<double> req;
        try {
            req = reserve_series(forecasts, config.solver.reserve_fraction);
        } catch (const Error& e) {
            flag(e.what());
        }
        for (size_t k = 0; k < K; ++k) {
            if ((*imp)[k] < -mw_tol || (*imp)[k] > ex.import_max_mw + mw_tol)
                flag("hour " + hour_of(k) + ": import outside the tie-line range");
            if ((*expv)[k] < -mw_tol || (*expv)[k] > ex.export_max_mw + mw_tol)
                flag("hour " + hour_of(k) + ": export outside the tie-line range");
            if ((*himp)[k] < -mw_tol || (*himp)[k] > ex.heat_import_max_mw + mw_tol)
                flag("hour " + hour_of(k) + ": heat import outside the tie-line range");

            double supply = forecasts.res_mw[k] + (*imp)[k] - (*expv)[k];
            double reserve_pool = 0.0;
            bool rows_ok = true;
            for (const ThermalUnitSpec& spec : config.units) {
                if (spec.kind == UnitKind::br) continue;
                const std::vector<double>* upe = series_of(spec.id + ".pe_mw");
                const std::vector<double>* usoak = series_of(spec.id + ".soak_mw");
                const std::vector<double>* usr = series_of(spec.id + ".sr_mw");
                if (!upe || !usoak || !usr) {
                    rows_ok = false;
                    break;
                }
                supply += (*upe)[k] + (*usoak)[k];
                reserve_pool += (*usr)[k];
            }
            if (!rows_ok) break;
            if (config.battery) {
                const std::vector<double>* pc = series_of(config.battery->id + ".charge_mw");
                const std::vector<double>* pd = series_of(config.battery->id + ".discharge_mw");
                if (!pc || !pd) break;
                supply += (*pd)[k] - (*pc)[k];
            }
            const double demand = forecasts.elec_demand_mw[k] + pump_mw[k] - cut_mw[k];
            if (demand > supply + 1e-5)
                flag("hour " + hour_of(k) + ": electrical demand exceeds supply by " +
                     to_shortest(demand - supply) + " MW");

            if (!req.empty() &&
                reserve_pool + (ex.import_max_mw - (*imp)[k]) < req[k] - 1e-5)
                flag("hour " + hour_of(k) + ": spinning reserve falls short of the requirement");

            double heat_supply = (*himp)[k];
            double steam_draw = 0.0;
            for (const ThermalUnitSpec& spec : config.units) {
                if (spec.kind == UnitKind::st) {
                    const std::vector<double>* d = series_of(spec.id + ".steam_mw");
                    if (!d) {
                        rows_ok = false;
                        break;
                    }
                    steam_draw += (*d)[k];
                } else {
                    const std::vector<double>* h = series_of(spec.id + ".heat_mw");
                    if (!h) {
                        rows_ok = false;
                        break;
                    }
                    heat_supply += (*h)[k];
                }
            }
            if (!rows_ok) break;
            double qin = 0.0;
            if (config.heat_store) {
                const std::vector<double>* qi = series_of(config.heat_store->id + ".qin_mw");
                const std::vector<double>* qo = series_of(config.heat_store->id + ".qout_mw");
                if (!qi || !qo) break;
                qin = (*qi)[k];
                heat_supply += (*qo)[k] - qin;
            }
            const double heat_demand = served[k] + steam_draw;
            if (heat_demand > heat_supply + 1e-5)
                flag("hour " + hour_of(k) + ": thermal demand exceeds supply by " +
                     to_shortest(heat_demand - heat_supply) + " MW");

            // steam sufficiency inside each group, and the pooled residue
            double pooled = 0.0;
            for (const CcppGroupConfig& gc : config.groups) {
                const std::vector<double>* gh = series_of(gc.gt + ".heat_mw");
                const std::vector<double>* bh = series_of(gc.boiler + ".heat_mw");
                const std::vector<double>* sd = series_of(gc.st + ".steam_mw");
                if (!gh || !bh || !sd) {
                    rows_ok = false;
                    break;
                }
                const double surplus = (*gh)[k] + (*bh)[k] - (*sd)[k];
                if (surplus < -1e-5)
                    flag("hour " + hour_of(k) + ": group '" + gc.id +
                         "' steam draw exceeds its recovered heat");
                if (config.heat_store && config.heat_store->group == gc.id &&
                    qin > surplus + 1e-5)
                    flag("hour " + hour_of(k) + ": tank charges beyond the group surplus");
                pooled += surplus;
            }
            if (!rows_ok) break;
            for (const std::string& id : config.extra_steam_turbines) {
                const std::vector<double>* sd = series_of(id + ".steam_mw");
                if (!sd) {
                    rows_ok = false;
                    break;
                }
                pooled -= (*sd)[k];
            }
            if (!rows_ok) break;
            if (!config.extra_steam_turbines.empty() && pooled < -1e-5)
                flag("hour " + hour_of(k) + ": pooled steam draw exceeds the group surpluses");
        }

        // capacity charge must match the day peak
        double peak = 0.0;
        for (size_t k = 0; k < K; ++k) peak = std::max(peak, (*imp)[k]);
        const double want =
            ex.capacity_rate * std::max(0.0, peak - ex.contracted_capacity);
        if (std::abs(r.costs.capacity - want) > std::max(1e-3, 1e-6 * want))
            flag("capacity charge " + to_shortest(r.costs.capacity) +
                 " does not match the day peak import (expected " + to_shortest(want) + ")");
    }

    // ---- cost breakdown re-derivation ---------------------------------------
    try {
        const CostBreakdown ref = costs_from_series(config, forecasts, r.series);
        auto check_cost = [&](double got, double want, const char* what) {
            if (std::abs(got - want) > std::max(1e-6, 1e-9 * std::abs(want)))
                flag(std::string(what) + " cost " + to_shortest(got) +
                     " differs from the schedule-derived " + to_shortest(want));
        };
        check_cost(r.costs.fuel, ref.fuel, "fuel");
        check_cost(r.costs.battery, ref.battery, "storage wear");
        check_cost(r.costs.startup, ref.startup, "start-up");
        check_cost(r.costs.shutdown, ref.shutdown, "shutdown");
        check_cost(r.costs.boiler, ref.boiler, "boiler gas");
        check_cost(r.costs.grid, ref.grid, "grid exchange");
        check_cost(r.costs.curtailment, ref.curtailment, "curtailment");
        const double parts = r.costs.fuel + r.costs.battery + r.costs.startup +
                             r.costs.shutdown + r.costs.capacity + r.costs.boiler +
                             r.costs.grid + r.costs.curtailment;
        if (std::abs(parts - r.costs.total) > 1e-6)
            flag("cost components do not add up to the reported total");
    } catch (const Error& e) {
        flag(std::string("cost re-derivation failed: ") + e.what());
    }

    return out;
}

namespace {

ScheduleReport run_one(const SystemConfig& config, const ForecastSet& forecasts,
                       ScenarioId scenario, const RunOptions& opt,
                       std::map<std::string, double>* snapshot) {
    AssembledProblem a = assemble(config, forecasts, scenario);
    MilpOptions mo;
    mo.gap_tol = opt.gap_tol.value_or(config.solver.gap_tol);
    mo.node_limit = opt.node_limit.value_or(config.solver.node_limit);
    mo.seed_solution = opt.seed;
    const Solution sol = solve_milp(a.problem, mo);
    ScheduleReport r = report_costs(a, config, forecasts, sol);
    if (!sol.values.empty()) {
        const std::vector<std::string> violations = validate_schedule(r, config, forecasts);
        if (!violations.empty()) {
            std::string msg = std::string("scenario ") + scenario_name(scenario) +
                              " solution failed its audit:";
            for (const std::string& v : violations) msg += "\n  " + v;
            throw ValidationError(msg);
        }
        if (snapshot) {
            snapshot->clear();
            for (size_t i = 0; i < sol.values.size(); ++i)
                (*snapshot)[a.problem.vars[i].name] = sol.values[i];
        }
    }
    return r;
}

} // namespace

ScheduleReport run_scenario(const SystemConfig& config, const ForecastSet& forecasts,
                            ScenarioId scenario, const RunOptions& opt) {
    return run_one(config, forecasts, scenario, opt, nullptr);
}

std::vector<ScheduleReport> run_all_scenarios(const SystemConfig& config,
                                              const ForecastSet& forecasts, int threads) {
    constexpr std::array<ScenarioId, 4> ids = {ScenarioId::s1, ScenarioId::s2, ScenarioId::s3,
                                               ScenarioId::s4};
    std::vector<ScheduleReport> out(ids.size());
    if (threads > 1) {
        std::atomic<size_t> next{0};
        std::exception_ptr failure;
        std::mutex mu;
        auto worker = [&]() {
            for (size_t i = next.fetch_add(1); i < ids.size(); i = next.fetch_add(1)) {
                try {
                    out[i] = run_scenario(config, forecasts, ids[i], {});
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const size_t n = std::min<size_t>(static_cast<size_t>(threads), ids.size());
        pool.reserve(n);
        for (size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        return out;
    }
    // serially, each optimum seeds the next (the feasible sets are nested)
    std::map<std::string, double> seed;
    for (size_t i = 0; i < ids.size(); ++i) {
        RunOptions opt;
        opt.seed = seed;
        std::map<std::string, double> snapshot;
        out[i] = run_one(config, forecasts, ids[i], opt, &snapshot);
        if (!snapshot.empty()) seed = std::move(snapshot);
    }
    return out;
}

void write_schedule_csv(const std::string& path, const ScheduleReport& report) {
    if (report.columns.empty())
        throw ExportError("schedule report has no series to write");
    const size_t K = report.series.at(report.columns.front()).size();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExportError("cannot open '" + path + "' for writing");
    out << "hour";
    for (const std::string& name : report.columns) out << ',' << name;
    out << '\n';
    for (size_t k = 0; k < K; ++k) {
        out << k + 1;
        for (const std::string& name : report.columns)
            out << ',' << to_shortest(report.series.at(name).at(k));
        out << '\n';
    }
    if (!out) throw ExportError("write to '" + path + "' failed");
}

ScheduleReport load_schedule_csv(const std::string& path, ScenarioId scenario,
                                 const SystemConfig& config, const ForecastSet& forecasts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open schedule file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("schedule file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto split = [](const std::string& text) {
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            const size_t comma = text.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(text.substr(pos));
                break;
            }
            fields.push_back(text.substr(pos, comma - pos));
            pos = comma + 1;
        }
        return fields;
    };

    const std::vector<std::string> header = split(line);
    if (header.empty() || header.front() != "hour")
        throw ParseError("row 1: schedule header must start with 'hour'");

    ScheduleReport r;
    r.scenario = scenario;
    r.status = SolveStatus::optimal;
    r.columns.assign(header.begin() + 1, header.end());
    const size_t K = static_cast<size_t>(config.grid.num_steps);
    for (const std::string& name : r.columns) {
        if (name.empty()) throw ParseError("schedule header has an empty column name");
        if (!r.series.emplace(name, std::vector<double>()).second)
            throw ParseError("schedule header repeats column '" + name + "'");
        r.series[name].reserve(K);
    }

    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line);
        if (fields.size() != header.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        const double hour = parse_double(fields[0], "schedule hour column");
        if (hour != static_cast<double>(row - 1))
            throw ParseError("row " + std::to_string(row) + ": expected hour " +
                             std::to_string(row - 1));
        for (size_t i = 1; i < fields.size(); ++i)
            r.series[header[i]].push_back(parse_double(fields[i], "schedule value"));
    }
    for (const std::string& name : r.columns)
        if (r.series[name].size() != K)
            throw InputLengthError("schedule file has " + std::to_string(r.series[name].size()) +
                                   " data rows, grid needs " + std::to_string(K));

    for (const PumpSpec& p : config.pumps.pumps) {
        auto it = r.series.find(p.id + ".on");
        if (it == r.series.end()) continue;
        std::string duty;
        for (double v : it->second) duty.push_back(v > 0.5 ? '1' : '0');
        r.pump_strings[p.id] = std::move(duty);
    }

    r.costs = costs_from_series(config, forecasts, r.series);
    const std::vector<double>& imp = r.series.at("grid_import_mw");
    double peak = 0.0;
    for (double v : imp) peak = std::max(peak, v);
    r.peak_excess_mw = std::max(0.0, peak - config.exchange.contracted_capacity);
    return r;
}

void write_cost_csv(const std::string& path, const std::vector<ScheduleReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExportError("cannot open '" + path + "' for writing");
    out << "scenario,status,total,fuel,battery,startup,shutdown,capacity,boiler,grid,"
           "curtailment,reduction_pct,objective,bound,gap,nodes,lp_iterations\n";
    const double base =
        reports.empty() ? 0.0 : reports.front().costs.total;
    for (const ScheduleReport& r : reports) {
        const char* status = r.status == SolveStatus::optimal      ? "optimal"
                             : r.status == SolveStatus::infeasible ? "infeasible"
                             : r.status == SolveStatus::unbounded  ? "unbounded"
                                                                   : "gap_limit";
        const double cut = base != 0.0 ? (base - r.costs.total) / base * 100.0 : 0.0;
        out << scenario_name(r.scenario) << ',' << status << ',' << to_shortest(r.costs.total)
            << ',' << to_shortest(r.costs.fuel) << ',' << to_shortest(r.costs.battery) << ','
            << to_shortest(r.costs.startup) << ',' << to_shortest(r.costs.shutdown) << ','
            << to_shortest(r.costs.capacity) << ',' << to_shortest(r.costs.boiler) << ','
            << to_shortest(r.costs.grid) << ',' << to_shortest(r.costs.curtailment) << ','
            << to_shortest(cut) << ',' << to_shortest(r.objective) << ','
            << to_shortest(r.bound) << ',' << to_shortest(r.gap) << ',' << r.nodes << ','
            << r.lp_iterations << '\n';
    }
    if (!out) throw ExportError("write to '" + path + "' failed");
}

void write_pump_strings(const std::string& path, const std::vector<ScheduleReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExportError("cannot open '" + path + "' for writing");
    out << "scenario,pump,duty\n";
    for (const ScheduleReport& r : reports)
        for (const auto& [id, duty] : r.pump_strings)
            out << scenario_name(r.scenario) << ',' << id << ',' << duty << '\n';
    if (!out) throw ExportError("write to '" + path + "' failed");
}

} // namespace meso
