#include <doctest.h>

#include <span>
#include <utility>
#include <vector>

#include "meso/loads.hpp"
#include "meso/milp.hpp"

using namespace meso;

namespace {

TimeGrid hours(int n) { return TimeGrid{1, n, 1.0}; }

PumpSpec main_pump(const std::string& id) {
    PumpSpec p;
    p.id = id;
    p.flow_rate = 72000.0;   // m^3/h
    p.efficiency = 0.06;     // kWh/m^3
    p.max_startups = 5;
    p.cls = PumpClass::main;
    return p;
}

PumpSpec aux_pump(const std::string& id) {
    PumpSpec p = main_pump(id);
    p.flow_rate = 36000.0;
    p.cls = PumpClass::auxiliary;
    return p;
}

PumpFleet site_fleet() {
    PumpFleet f;
    f.pumps = {main_pump("MP1"), main_pump("MP2"), main_pump("MP3"),
               aux_pump("AP1"), aux_pump("AP2")};
    f.daily_volume = 600000.0;
    return f;
}

IlSpec il(const std::string& id) {
    IlSpec s;
    s.id = id;
    s.hourly_cap = 2.5;
    s.daily_cap = 10.0;
    s.price_multiplier = 1.5;
    return s;
}

Solution optimize(ModelBuilder& m, const LinExpr& obj) {
    m.add_objective(obj);
    return solve_milp(m.build(), {});
}

double val(const VarRef& v, const Solution& s) {
    return s.values[static_cast<size_t>(v.index)];
}

double ev(const LinExpr& e, const Solution& s) {
    return e.value(std::span<const double>(s.values));
}

} // namespace

TEST_CASE("pump spec and fleet validation") {
    CHECK_NOTHROW(main_pump("P").validate());

    auto bad = main_pump("P");
    bad.flow_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), SpecError);

    bad = main_pump("P");
    bad.efficiency = -0.01;
    CHECK_THROWS_AS(bad.validate(), SpecError);

    bad = main_pump("P");
    bad.max_startups = -1;
    CHECK_THROWS_AS(bad.validate(), SpecError);

    // duty beyond what every pump running all day can deliver
    PumpFleet starved;
    starved.pumps = {main_pump("MP1")};
    starved.daily_volume = 25.0 * 72000.0;
    ModelBuilder m;
    CHECK_THROWS_AS(build_pump_block(m, starved, hours(24)), FleetError);
}

TEST_CASE("a running pump draws its rated electrical power") {
    PumpFleet f;
    f.pumps = {main_pump("MP1"), aux_pump("AP1")};
    f.daily_volume = 0.0;
    ModelBuilder m;
    PumpBlock b = build_pump_block(m, f, hours(1));
    m.fix(b.vars.on[0][0], 1.0);
    m.fix(b.vars.on[1][0], 1.0);
    Solution s = optimize(m, LinExpr(0.0));
    REQUIRE(s.status == SolveStatus::optimal);
    // 0.06 kWh/m^3 * 72000 m^3/h = 4.32 MW, plus half that for the small pump
    CHECK(ev(b.vars.power_mw[0], s) == doctest::Approx(6.48));
}

TEST_CASE("the startup budget forces a contiguous duty block") {
    auto run = [](int max_startups) {
        ModelBuilder m;
        PumpFleet f;
        f.pumps = {main_pump("MP1")};
        f.pumps[0].max_startups = max_startups;
        f.daily_volume = 2.0 * 72000.0; // two on-hours required
        PumpBlock b = build_pump_block(m, f, hours(4));
        LinExpr tariff = LinExpr(b.vars.on[0][0]) + 10.0 * LinExpr(b.vars.on[0][1]) +
                         10.0 * LinExpr(b.vars.on[0][2]) + LinExpr(b.vars.on[0][3]);
        Solution s = optimize(m, tariff);
        return std::pair<Solution, PumpBlock>(std::move(s), std::move(b));
    };
    {
        // one start only: the cheap edge hours cannot both be used
        auto [s, b] = run(1);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.objective == doctest::Approx(11.0));
        double starts = 0.0, volume = 0.0;
        for (int k = 0; k < 4; ++k) {
            starts += val(b.vars.start[0][static_cast<size_t>(k)], s);
            volume += 72000.0 * val(b.vars.on[0][static_cast<size_t>(k)], s);
        }
        CHECK(starts == doctest::Approx(1.0));
        CHECK(volume >= 2.0 * 72000.0 - 1e-6);
    }
    {
        // two starts: split across the cheap edge hours
        auto [s, b] = run(2);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.objective == doctest::Approx(2.0));
        CHECK(val(b.vars.on[0][0], s) == doctest::Approx(1.0));
        CHECK(val(b.vars.on[0][3], s) == doctest::Approx(1.0));
    }
}

TEST_CASE("start counters track rising edges of the duty cycle") {
    auto fixed_pattern = [](int max_startups) {
        ModelBuilder m;
        PumpFleet f;
        f.pumps = {main_pump("MP1")};
        f.pumps[0].max_startups = max_startups;
        f.daily_volume = 0.0;
        PumpBlock b = build_pump_block(m, f, hours(4));
        const double pattern[4] = {1.0, 1.0, 0.0, 1.0}; // off before hour 1
        LinExpr starts;
        for (int k = 0; k < 4; ++k) {
            m.fix(b.vars.on[0][static_cast<size_t>(k)], pattern[k]);
            starts = starts + LinExpr(b.vars.start[0][static_cast<size_t>(k)]);
        }
        return optimize(m, starts);
    };
    Solution s = fixed_pattern(2);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == doctest::Approx(2.0)); // edges at hours 1 and 4 only

    CHECK(fixed_pattern(1).status == SolveStatus::infeasible);
}

TEST_CASE("the fastest-first fixed schedule empties the duty with mains only") {
    {
        ModelBuilder m;
        PumpBlock b = build_pump_block(m, site_fleet(), hours(24));
        auto fixings = fixed_pump_schedule(b, hours(24));
        for (const auto& [v, value] : fixings) m.fix(v, value);
        Solution s = optimize(m, LinExpr(0.0));
        REQUIRE(s.status == SolveStatus::optimal);
        // ceil(600000 / 216000) = 3 leading hours, every main on, auxiliaries idle
        double volume = 0.0;
        for (size_t p = 0; p < 5; ++p) {
            for (int k = 0; k < 24; ++k) {
                double u = val(b.vars.on[p][static_cast<size_t>(k)], s);
                double want = (p < 3 && k < 3) ? 1.0 : 0.0;
                CHECK(u == doctest::Approx(want));
                volume += b.fleet.pumps[p].flow_rate * u;
            }
        }
        CHECK(volume == doctest::Approx(648000.0));
    }
    {
        ModelBuilder m;
        PumpFleet f = site_fleet();
        f.daily_volume = 216000.0;
        PumpBlock b = build_pump_block(m, f, hours(24));
        auto fixings = fixed_pump_schedule(b, hours(24));
        for (const auto& [v, value] : fixings) m.fix(v, value);
        Solution s = optimize(m, LinExpr(0.0));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(val(b.vars.on[0][0], s) == doctest::Approx(1.0));
        CHECK(val(b.vars.on[0][1], s) == doctest::Approx(0.0));
    }
    {
        ModelBuilder m;
        PumpFleet f;
        f.pumps = {aux_pump("AP1")};
        f.daily_volume = 1000.0;
        PumpBlock b = build_pump_block(m, f, hours(24));
        CHECK_THROWS_AS(fixed_pump_schedule(b, hours(24)), FleetError);
    }
    {
        ModelBuilder m;
        PumpFleet f;
        f.pumps = {main_pump("MP1"), aux_pump("AP1")};
        f.daily_volume = 5.0 * 72000.0; // mains alone need five hours, grid has four
        PumpBlock b = build_pump_block(m, f, hours(4));
        CHECK_THROWS_AS(fixed_pump_schedule(b, hours(4)), FleetError);
    }
}

TEST_CASE("interruptible load caps and pricing") {
    CHECK_NOTHROW(il("IL1").validate());
    auto bad = il("IL1");
    bad.hourly_cap = 0.0;
    CHECK_THROWS_AS(bad.validate(), SpecError);
    bad = il("IL1");
    bad.daily_cap = -1.0;
    CHECK_THROWS_AS(bad.validate(), SpecError);
    bad = il("IL1");
    bad.price_multiplier = -0.5;
    CHECK_THROWS_AS(bad.validate(), SpecError);

    {
        // curtailing 2 MWh at a 60 $/MWh purchase price costs 1.5x the energy value
        ModelBuilder m;
        IlBlock b = build_il_block(m, {il("IL1")}, hours(1), {100.0}, {60.0}, 0.05);
        m.fix(b.vars.curtail[0][0], 2.0);
        Solution s = optimize(m, LinExpr(0.0));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(ev(b.vars.cost, s) == doctest::Approx(180.0));
    }
    {
        // per-contract hourly cap binds when demand is plentiful
        ModelBuilder m;
        IlBlock b = build_il_block(m, {il("IL1")}, hours(1), {100.0}, {60.0}, 0.05);
        Solution s = optimize(m, -LinExpr(b.vars.curtail[0][0]));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(-s.objective == doctest::Approx(2.5));
    }
    {
        // the demand-share cap squeezes three contracts below their own limits
        ModelBuilder m;
        IlBlock b = build_il_block(m, {il("IL1"), il("IL2"), il("IL3")}, hours(1),
                                   {40.0}, {60.0}, 0.05);
        Solution s = optimize(m, -b.vars.total_mw[0]);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(-s.objective == doctest::Approx(2.0));
    }
    {
        // the daily energy budget binds across a long cheap stretch
        ModelBuilder m;
        std::vector<double> demand(8, 100.0), price(8, 60.0);
        IlBlock b = build_il_block(m, {il("IL1")}, hours(8), demand, price, 0.05);
        LinExpr total;
        for (int k = 0; k < 8; ++k) total = total + b.vars.total_mw[static_cast<size_t>(k)];
        Solution s = optimize(m, -total);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(-s.objective == doctest::Approx(10.0));
        CHECK(ev(b.vars.cost, s) == doctest::Approx(1.5 * 60.0 * 10.0));
    }
    {
        ModelBuilder m;
        CHECK_THROWS_AS(build_il_block(m, {il("IL1")}, hours(2), {100.0}, {60.0, 60.0}, 0.05),
                        InputLengthError);
        ModelBuilder m2;
        CHECK_THROWS_AS(build_il_block(m2, {il("IL1")}, hours(1), {100.0}, {60.0}, 1.5),
                        DomainError);
    }
}

TEST_CASE("reschedulable heat demand conserves the daily total") {
    FlexThermalSpec spec;
    spec.dr_max = 0.1;
    CHECK_NOTHROW(spec.validate());
    auto bad = spec;
    bad.dr_max = 1.2;
    CHECK_THROWS_AS(bad.validate(), SpecError);
    bad.dr_max = -0.1;
    CHECK_THROWS_AS(bad.validate(), SpecError);

    const std::vector<double> nominal = {100.0, 50.0};
    {
        // nothing rescheduled: served demand is the nominal profile
        ModelBuilder m;
        FlexBlock b = build_flex_thermal_block(m, spec, hours(2), nominal);
        m.fix(b.vars.dr[0], 0.0);
        m.fix(b.vars.dr[1], 0.0);
        m.fix(b.vars.shift[0], 0.0);
        Solution s = optimize(m, LinExpr(0.0));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(ev(b.vars.served_mw[0], s) == doctest::Approx(100.0));
        CHECK(ev(b.vars.served_mw[1], s) == doctest::Approx(50.0));
    }
    {
        // deferring 10% of hour 1 must reappear in hour 2
        ModelBuilder m;
        FlexBlock b = build_flex_thermal_block(m, spec, hours(2), nominal);
        m.fix(b.vars.dr[0], 0.1);
        m.fix(b.vars.dr[1], 0.0);
        m.fix(b.vars.shift[0], 0.0);
        Solution s = optimize(m, LinExpr(0.0));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(ev(b.vars.served_mw[0], s) == doctest::Approx(90.0));
        CHECK(ev(b.vars.served_mw[1], s) == doctest::Approx(60.0));
        CHECK(ev(b.vars.served_mw[0] + b.vars.served_mw[1], s) ==
              doctest::Approx(150.0).epsilon(1e-9));
    }
    {
        // at most dr_max of each hour may move
        ModelBuilder m;
        FlexBlock b = build_flex_thermal_block(m, spec, hours(2), nominal);
        LinExpr moved = 100.0 * LinExpr(b.vars.dr[0]) + 50.0 * LinExpr(b.vars.dr[1]);
        Solution s = optimize(m, -moved);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(-s.objective == doctest::Approx(15.0));
    }
    {
        ModelBuilder m;
        CHECK_THROWS_AS(build_flex_thermal_block(m, spec, hours(3), nominal),
                        InputLengthError);
    }
}
