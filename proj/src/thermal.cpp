#include "meso/thermal.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "meso/milp.hpp"

namespace meso {

namespace {

const char* method_tag(StartupKind n) {
    switch (n) {
        case StartupKind::hot: return "hot";
        case StartupKind::warm: return "warm";
        case StartupKind::cold: return "cold";
    }
    return "?";
}

std::string col(const std::string& id, const std::string& family, int hour) {
    return id + "." + family + "[" + std::to_string(hour) + "]";
}

int active_method_slot(const ThermalUnitSpec& spec, int downtime) {
    for (size_t i = 0; i < spec.methods.size(); ++i) {
        const StartupMethodSpec& msp = spec.methods[i];
        if (downtime >= msp.window_lo &&
            (msp.window_hi == kUnboundedWindow || downtime <= msp.window_hi))
            return static_cast<int>(i);
    }
    return -1;
}

} // namespace

BoundaryEvents resolve_boundary(const ThermalUnitSpec& spec, const UnitState& st) {
    if (st.hours_in_phase < 1)
        throw StateError(spec.id + ": hours_in_phase must be at least 1");
    if (st.phase != UnitPhase::dispatch && st.initial_power != 0.0)
        throw StateError(spec.id + ": initial power only applies to the dispatch phase");

    BoundaryEvents h;
    switch (st.phase) {
        case UnitPhase::dispatch:
            if (st.initial_power < spec.p_e_min || st.initial_power > spec.p_e_max)
                throw StateError(spec.id + ": initial power outside the technical range");
            h.dispatched = true;
            return h;
        case UnitPhase::off:
            if (st.prior_downtime < spec.desync_duration + 1)
                throw StateError(spec.id +
                                 ": downtime too short for a finished desynchronization");
            h.has_stop = true;
            h.stop_hour = 1 - st.prior_downtime;
            return h;
        case UnitPhase::desync:
            if (spec.desync_duration < 1)
                throw StateError(spec.id + ": unit has no desynchronization phase");
            if (st.hours_in_phase > spec.desync_duration)
                throw StateError(spec.id + ": desynchronization would already be finished");
            h.has_stop = true;
            h.stop_hour = 1 - st.hours_in_phase;
            return h;
        case UnitPhase::synch:
        case UnitPhase::soak: {
            if (st.prior_downtime < 1)
                throw StateError(spec.id + ": a start-up in progress needs its prior downtime");
            int slot = active_method_slot(spec, st.prior_downtime);
            if (slot < 0)
                throw StateError(spec.id + ": no start-up method covers the prior downtime");
            const StartupMethodSpec& msp = spec.methods[static_cast<size_t>(slot)];
            if (st.phase == UnitPhase::synch) {
                if (msp.synch_duration < 1)
                    throw StateError(spec.id +
                                     ": the active start-up method has no synchronization hours");
                if (st.hours_in_phase > msp.synch_duration)
                    throw StateError(spec.id + ": synchronization would already be finished");
                h.start_hour = 1 - st.hours_in_phase;
            } else {
                if (st.hours_in_phase > msp.soak_duration)
                    throw StateError(spec.id + ": soak would already be finished");
                h.start_hour = 1 - msp.synch_duration - st.hours_in_phase;
            }
            h.has_start = true;
            h.start_slot = slot;
            return h;
        }
    }
    throw StateError(spec.id + ": unknown phase");
}

void ThermalUnitSpec::validate() const {
    if (id.empty()) throw SpecError("thermal unit has no id");
    if (!(p_e_min > 0.0) || !(p_e_max >= p_e_min))
        throw SpecError(id + ": output range must satisfy 0 < min <= max");
    if (ut < 1 || dt < 1)
        throw SpecError(id + ": minimum up/down times must be at least 1h");
    if (desync_duration < 0)
        throw SpecError(id + ": negative desynchronization duration");
    if (kind == UnitKind::br && desync_duration != 0)
        throw SpecError(id + ": boilers drop offline without a desynchronization phase");
    if (kind == UnitKind::br && !(fuel_to_heat > 0.0))
        throw SpecError(id + ": boiler fuel-to-heat slope must be positive");
    if (shutdown_cost < 0.0 || msr < 0.0)
        throw SpecError(id + ": negative cost or spinning rate");

    if (methods.size() != 3)
        throw SpecError(id + ": expected exactly a hot, a warm and a cold start-up method");
    bool seen[3] = {false, false, false};
    for (const StartupMethodSpec& msp : methods) {
        bool& flag = seen[static_cast<size_t>(msp.method)];
        if (flag) throw SpecError(id + ": duplicate start-up method");
        flag = true;
        if (msp.window_lo < 1 ||
            (msp.window_hi != kUnboundedWindow && msp.window_hi < msp.window_lo))
            throw SpecError(id + ": malformed start-up window");
        if (msp.soak_duration < 1)
            throw SpecError(id + ": every start-up method needs at least one soak hour");
        if (msp.synch_duration < 0 || msp.soak_power < 0.0 || msp.startup_cost < 0.0)
            throw SpecError(id + ": negative start-up parameter");
        if (kind != UnitKind::st && msp.synch_duration != 0)
            throw SpecError(id + ": only steam turbines have a synchronization phase");
    }

    // the windows must cover every possible downtime exactly once
    auto sorted = methods;
    std::sort(sorted.begin(), sorted.end(),
              [](const StartupMethodSpec& a, const StartupMethodSpec& b) {
                  return a.window_lo < b.window_lo;
              });
    if (sorted.front().window_lo != 1)
        throw SpecError(id + ": start-up windows must begin at 1h of downtime");
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].window_hi == kUnboundedWindow ||
            sorted[i + 1].window_lo != sorted[i].window_hi + 1)
            throw SpecError(id + ": start-up windows must partition the downtime axis");
    }
    if (sorted.back().window_hi != kUnboundedWindow)
        throw SpecError(id + ": the coldest start-up window must be open-ended");
}

const StartupMethodSpec& ThermalUnitSpec::method(StartupKind n) const {
    for (const StartupMethodSpec& msp : methods)
        if (msp.method == n) return msp;
    throw SpecError(id + ": no " + method_tag(n) + " start-up method");
}

int method_slot(const ThermalUnitSpec& spec, StartupKind n) {
    for (size_t i = 0; i < spec.methods.size(); ++i)
        if (spec.methods[i].method == n) return static_cast<int>(i);
    throw SpecError(spec.id + ": no " + method_tag(n) + " start-up method");
}

UnitBlock build_commitment_block(ModelBuilder& m, const ThermalUnitSpec& spec,
                                 const UnitState& state, const TimeGrid& grid) {
    spec.validate();
    grid.validate();
    const BoundaryEvents hist = resolve_boundary(spec, state);
    const int K = grid.num_steps;
    const size_t S = spec.methods.size();

    UnitBlock b;
    b.spec = spec;
    b.state = state;
    UnitVars& v = b.vars;

    for (int k = 0; k < K; ++k) {
        const int hour = grid.hour(k);
        std::array<VarRef, 3> su;
        for (size_t n = 0; n < S; ++n)
            su[n] = m.add_binary(
                col(spec.id, std::string("su_") + method_tag(spec.methods[n].method), hour));
        v.start_event.push_back(su);
        v.stop_event.push_back(m.add_binary(col(spec.id, "sd", hour)));
        v.x_disp.push_back(m.add_continuous(0.0, 1.0, col(spec.id, "x", hour)));
        if (spec.kind == UnitKind::br) {
            v.br_fuel.push_back(m.add_continuous(0.0, spec.p_e_max / spec.fuel_to_heat,
                                                 col(spec.id, "fuel", hour)));
        } else {
            v.p_e.push_back(m.add_continuous(0.0, spec.p_e_max, col(spec.id, "pe", hour)));
            v.sr.push_back(m.add_continuous(0.0, spec.p_e_max, col(spec.id, "sr", hour)));
        }
    }

    // event at absolute hour tau: a column in-horizon, a constant before it
    auto start_at = [&](long tau, size_t slot) -> LinExpr {
        if (tau >= 1 && tau <= K)
            return LinExpr(v.start_event[static_cast<size_t>(tau - 1)][slot]);
        if (hist.has_start && tau == hist.start_hour &&
            static_cast<int>(slot) == hist.start_slot)
            return LinExpr(1.0);
        return LinExpr(0.0);
    };
    auto stop_at = [&](long tau) -> LinExpr {
        if (tau >= 1 && tau <= K) return LinExpr(v.stop_event[static_cast<size_t>(tau - 1)]);
        if (hist.has_stop && tau == hist.stop_hour) return LinExpr(1.0);
        return LinExpr(0.0);
    };

    for (size_t n = 0; n < S; ++n) {
        v.synch_flag[n].resize(static_cast<size_t>(K));
        v.soak_flag[n].resize(static_cast<size_t>(K));
    }
    v.disp_start.resize(static_cast<size_t>(K));
    v.synch_any.resize(static_cast<size_t>(K));
    v.soak_any.resize(static_cast<size_t>(K));
    v.desync_flag.resize(static_cast<size_t>(K));
    v.off_flag.resize(static_cast<size_t>(K));

    for (int k = 0; k < K; ++k) {
        const size_t uk = static_cast<size_t>(k);
        const long kk = k + 1;
        for (size_t n = 0; n < S; ++n) {
            const StartupMethodSpec& msp = spec.methods[n];
            LinExpr synch, soak;
            for (long tau = kk - msp.synch_duration + 1; tau <= kk; ++tau)
                synch += start_at(tau, n);
            if (msp.synch_duration == 0) synch = LinExpr(); // empty window
            for (long tau = kk - msp.synch_duration - msp.soak_duration + 1;
                 tau <= kk - msp.synch_duration; ++tau)
                soak += start_at(tau, n);
            v.synch_flag[n][uk] = synch;
            v.soak_flag[n][uk] = soak;
            v.synch_any[uk] += synch;
            v.soak_any[uk] += soak;
            v.disp_start[uk] += start_at(kk - msp.synch_duration - msp.soak_duration, n);
        }
        LinExpr de;
        for (long tau = kk - spec.desync_duration + 1; tau <= kk; ++tau) de += stop_at(tau);
        if (spec.desync_duration == 0) de = LinExpr();
        v.desync_flag[uk] = de;
    }

    // dispatch chain and one-phase-at-a-time
    LinExpr x_prev(hist.dispatched ? 1.0 : 0.0);
    for (int k = 0; k < K; ++k) {
        const size_t uk = static_cast<size_t>(k);
        LinExpr x(v.x_disp[uk]);
        m.add(eq(x - x_prev - v.disp_start[uk] + LinExpr(v.stop_event[uk]), 0.0,
                 col(spec.id, "chain", grid.hour(k))));
        m.add(le(v.synch_any[uk] + v.soak_any[uk] + x + v.desync_flag[uk], 1.0,
                 col(spec.id, "phase", grid.hour(k))));
        v.off_flag[uk] =
            LinExpr(1.0) - v.synch_any[uk] - v.soak_any[uk] - x - v.desync_flag[uk];
        x_prev = x;
    }

    // a start-up method is armed only while the downtime it needs has accrued;
    // events whose window can never open are fixed away instead of getting a row
    for (int k = 0; k < K; ++k) {
        const long kk = k + 1;
        for (size_t n = 0; n < S; ++n) {
            const StartupMethodSpec& msp = spec.methods[n];
            LinExpr armed;
            const long first = msp.window_hi == kUnboundedWindow
                                   ? 1
                                   : std::max<long>(1, kk - msp.window_hi);
            for (long tau = first; tau <= kk - msp.window_lo; ++tau) armed += stop_at(tau);
            if (hist.has_stop) {
                const long downtime = kk - hist.stop_hour;
                if (downtime >= msp.window_lo &&
                    (msp.window_hi == kUnboundedWindow || downtime <= msp.window_hi))
                    armed += LinExpr(1.0);
            }
            const VarRef& e = v.start_event[static_cast<size_t>(k)][n];
            if (armed.is_constant()) {
                if (armed.constant() == 0.0) m.tighten_upper(e, 0.0);
            } else {
                m.add(le(LinExpr(e), armed,
                         col(spec.id, std::string("arm_") + method_tag(msp.method),
                             grid.hour(k))));
            }
        }
    }

    // minimum time in dispatch is anchored on the entry event so a unit cannot
    // slip from soak straight into desynchronization; both sums truncate at the
    // horizon end rather than forcing an artificial end-of-day state
    for (int k = 0; k < K; ++k) {
        const size_t uk = static_cast<size_t>(k);
        const int L_up = std::min(spec.ut, K - k);
        LinExpr run_up;
        for (int t = 0; t < L_up; ++t) run_up += LinExpr(v.x_disp[uk + static_cast<size_t>(t)]);
        m.add(ge(run_up, static_cast<double>(L_up) * v.disp_start[uk],
                 col(spec.id, "minup", grid.hour(k))));

        const int L_dn = std::min(spec.dt, K - k);
        LinExpr run_dn;
        for (int t = 0; t < L_dn; ++t) run_dn += LinExpr(v.x_disp[uk + static_cast<size_t>(t)]);
        m.add(le(run_dn + static_cast<double>(L_dn) * LinExpr(v.stop_event[uk]),
                 static_cast<double>(L_dn), col(spec.id, "mindown", grid.hour(k))));
    }

    // boundary residues: an ongoing dispatch run must complete its minimum
    // uptime; a recent shutdown still holds the unit out of dispatch
    if (hist.dispatched) {
        const int residue = std::min(K, spec.ut - state.hours_in_phase);
        for (int k = 0; k < residue; ++k) m.tighten_lower(v.x_disp[static_cast<size_t>(k)], 1.0);
    }
    if (hist.has_stop) {
        const long held_out = hist.stop_hour + spec.dt - 1;
        for (long kk = 1; kk <= std::min<long>(K, held_out); ++kk)
            m.tighten_upper(v.x_disp[static_cast<size_t>(kk - 1)], 0.0);
    }

    // output exists only in dispatch
    for (int k = 0; k < K; ++k) {
        const size_t uk = static_cast<size_t>(k);
        LinExpr x(v.x_disp[uk]);
        LinExpr out = spec.kind == UnitKind::br
                          ? LinExpr::term(v.br_fuel[uk], spec.fuel_to_heat)
                          : LinExpr(v.p_e[uk]);
        m.add(le(out, spec.p_e_max * x, col(spec.id, "cap", grid.hour(k))));
        m.add(ge(out, spec.p_e_min * x, col(spec.id, "floor", grid.hour(k))));
    }

    v.soak_power_mw.resize(static_cast<size_t>(K));
    v.heat_out_mw.resize(static_cast<size_t>(K));
    v.steam_in_mw.resize(static_cast<size_t>(K));
    v.startup_cost.resize(static_cast<size_t>(K));
    v.shutdown_cost.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        const size_t uk = static_cast<size_t>(k);
        LinExpr soak_mw, su_cost;
        for (size_t n = 0; n < S; ++n) {
            const StartupMethodSpec& msp = spec.methods[n];
            soak_mw += msp.soak_power * v.soak_flag[n][uk];
            // hot starts charge their soak hours only; the slower methods
            // accrue cost over synchronization as well
            if (msp.method == StartupKind::hot)
                su_cost += msp.startup_cost * v.soak_flag[n][uk];
            else
                su_cost += msp.startup_cost * (v.synch_flag[n][uk] + v.soak_flag[n][uk]);
        }
        v.soak_power_mw[uk] = soak_mw;
        v.startup_cost[uk] = su_cost;
        v.shutdown_cost[uk] = spec.shutdown_cost * v.desync_flag[uk];
        switch (spec.kind) {
            case UnitKind::gt:
                v.heat_out_mw[uk] = spec.heat_a0 * LinExpr(v.p_e[uk]) +
                                    spec.heat_a1 * LinExpr(v.x_disp[uk]);
                break;
            case UnitKind::st:
                v.steam_in_mw[uk] = spec.steam_b1 * LinExpr(v.p_e[uk]) +
                                    spec.steam_b2 * LinExpr(v.x_disp[uk]);
                break;
            case UnitKind::br:
                v.heat_out_mw[uk] = LinExpr::term(v.br_fuel[uk], spec.fuel_to_heat);
                break;
        }
    }
    return b;
}

std::vector<LinExpr> build_soak_power_terms(const UnitBlock& u) { return u.vars.soak_power_mw; }

void build_ramp_block(ModelBuilder& m, const UnitBlock& u, const TimeGrid& grid) {
    if (u.spec.kind != UnitKind::st) return;
    grid.validate();
    const double band = 0.5 * u.spec.p_e_max;
    const double anchor =
        u.state.phase == UnitPhase::dispatch ? u.state.initial_power : 0.0;
    for (size_t k = 0; k < u.vars.p_e.size(); ++k) {
        LinExpr delta = LinExpr(u.vars.p_e[k]) -
                        (k == 0 ? LinExpr(anchor) : LinExpr(u.vars.p_e[k - 1]));
        const int hour = grid.hour(static_cast<int>(k));
        m.add(le(delta, band, col(u.spec.id, "ramp_up", hour)));
        m.add(ge(delta, -band, col(u.spec.id, "ramp_dn", hour)));
    }
}

void build_reserve_block(ModelBuilder& m, const std::vector<const UnitBlock*>& units,
                         const TimeGrid& grid, const std::vector<double>& reserve_req_mw,
                         const std::vector<VarRef>& grid_import, double import_cap) {
    grid.validate();
    const size_t K = static_cast<size_t>(grid.num_steps);
    if (reserve_req_mw.size() != K)
        throw InputLengthError("reserve requirement series does not match the horizon");
    if (grid_import.size() != K)
        throw InputLengthError("grid import series does not match the horizon");

    for (const UnitBlock* u : units) {
        if (!u) throw SpecError("reserve pool contains a missing unit");
        if (u->spec.kind == UnitKind::br) continue; // boilers carry no reserve
        if (!(u->spec.msr > 0.0))
            throw SpecError(u->spec.id + ": a spinning rate is required to offer reserve");
        for (size_t k = 0; k < K; ++k) {
            const int hour = grid.hour(static_cast<int>(k));
            LinExpr x(u->vars.x_disp[k]);
            m.add(le(LinExpr(u->vars.sr[k]), 10.0 * u->spec.msr * x,
                     col(u->spec.id, "sr_rate", hour)));
            m.add(le(LinExpr(u->vars.sr[k]) + LinExpr(u->vars.p_e[k]),
                     u->spec.p_e_max * x, col(u->spec.id, "sr_room", hour)));
        }
    }
    for (size_t k = 0; k < K; ++k) {
        LinExpr pool;
        for (const UnitBlock* u : units)
            if (u->spec.kind != UnitKind::br) pool += LinExpr(u->vars.sr[k]);
        // headroom left on the import tie counts toward the requirement
        m.add(ge(pool - LinExpr(grid_import[k]), reserve_req_mw[k] - import_cap,
                 "reserve[" + std::to_string(grid.hour(static_cast<int>(k))) + "]"));
    }
}

HeatCoupling build_heat_coupling(ModelBuilder& m, const std::vector<CcppGroup>& groups,
                                 const std::vector<const UnitBlock*>& extra_st,
                                 const TimeGrid& grid) {
    grid.validate();
    const size_t K = static_cast<size_t>(grid.num_steps);
    HeatCoupling hc;
    hc.group_surplus.resize(groups.size());
    hc.pooled_surplus.assign(K, LinExpr());

    for (size_t g = 0; g < groups.size(); ++g) {
        const CcppGroup& grp = groups[g];
        if (!grp.gt || !grp.st || !grp.br || grp.gt->spec.kind != UnitKind::gt ||
            grp.st->spec.kind != UnitKind::st || grp.br->spec.kind != UnitKind::br)
            throw SpecError("combined-cycle group must pair a GT, an ST and a boiler");
        hc.group_surplus[g].resize(K);
        for (size_t k = 0; k < K; ++k) {
            LinExpr surplus = grp.gt->vars.heat_out_mw[k] + grp.br->vars.heat_out_mw[k] -
                              grp.st->vars.steam_in_mw[k];
            m.add(ge(surplus, 0.0,
                     col(grp.st->spec.id, "steam", grid.hour(static_cast<int>(k)))));
            hc.group_surplus[g][k] = surplus;
            hc.pooled_surplus[k] += surplus;
        }
    }
    for (const UnitBlock* u : extra_st) {
        if (!u || u->spec.kind != UnitKind::st)
            throw SpecError("pooled steam consumers must be steam turbines");
        for (size_t k = 0; k < K; ++k) hc.pooled_surplus[k] -= u->vars.steam_in_mw[k];
    }
    if (!extra_st.empty())
        for (size_t k = 0; k < K; ++k)
            m.add(ge(hc.pooled_surplus[k], 0.0,
                     "steam_pool[" + std::to_string(grid.hour(static_cast<int>(k))) + "]"));
    return hc;
}

LinExpr build_fuel_cost_block(ModelBuilder& m, const UnitBlock& u, const TimeGrid& grid,
                              int segments) {
    if (u.spec.kind != UnitKind::gt)
        throw SpecError(u.spec.id + ": fuel cost curves apply to gas turbines");
    grid.validate();
    PwlCurve curve = linearize_convex_quadratic(u.spec.fuel_quad, u.spec.fuel_lin,
                                                u.spec.fuel_const, u.spec.p_e_max, segments);
    const double z_max = curve.eval(u.spec.p_e_max);
    LinExpr total;
    for (size_t k = 0; k < u.vars.p_e.size(); ++k) {
        const int hour = grid.hour(static_cast<int>(k));
        VarRef z = m.add_continuous(0.0, z_max, col(u.spec.id, "fz", hour));
        for (size_t i = 0; i < curve.segments.size(); ++i)
            m.add(ge(LinExpr(z),
                     curve.segments[i].slope * LinExpr(u.vars.p_e[k]) +
                         curve.segments[i].intercept * LinExpr(u.vars.x_disp[k]),
                     col(u.spec.id, "fcut" + std::to_string(i), hour)));
        total += LinExpr(z);
    }
    return total;
}

} // namespace meso
