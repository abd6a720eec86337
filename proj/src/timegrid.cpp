#include "meso/timegrid.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace meso {

double wind_power(const WindTurbineSpec& spec, double wind_speed_ms) {
    spec.validate();
    if (wind_speed_ms < 0.0) throw DomainError("wind speed cannot be negative");
    // 1/2 * Cp * k * rho * A * v^3, in watts; report MW.
    double watts = 0.5 * spec.power_coeff * spec.correction * spec.air_density *
                   spec.rotor_area * wind_speed_ms * wind_speed_ms * wind_speed_ms;
    return watts * 1e-6;
}

namespace {

const char* kHeaderBase = "hour,elec_demand_mw,thermal_demand_mw,res_mw,buy_price,sell_price";
const char* kHeaderFull = "hour,elec_demand_mw,thermal_demand_mw,res_mw,buy_price,sell_price,spin_reserve_mw";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') { cells.push_back(cur); cur.clear(); }
        else if (ch != '\r') cur.push_back(ch);
    }
    cells.push_back(cur);
    return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || cell.empty())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": cannot parse '" + cell + "' as a number");
    if (!std::isfinite(v))
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": non-finite value");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

ForecastSet load_forecasts(const std::string& path, const TimeGrid& grid) {
    grid.validate();
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open forecast file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("forecast file '" + path + "' is empty");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();

    bool has_reserve;
    if (line == kHeaderFull) has_reserve = true;
    else if (line == kHeaderBase) has_reserve = false;
    else throw ParseError("row 1: unexpected header '" + line + "'");

    const size_t ncols = has_reserve ? 7 : 6;
    ForecastSet fs;
    int row = 1;
    int steps = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv(line);
        if (cells.size() != ncols)
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(ncols) +
                             " columns, found " + std::to_string(cells.size()));
        double hour = parse_cell(cells[0], row, 1);
        int expect = grid.hour(steps);
        if (hour != static_cast<double>(expect))
            throw ParseError("row " + std::to_string(row) + ", column 1: expected hour " +
                             std::to_string(expect) + ", found '" + cells[0] + "'");
        double de = parse_cell(cells[1], row, 2);
        double dh = parse_cell(cells[2], row, 3);
        double res = parse_cell(cells[3], row, 4);
        double cb = parse_cell(cells[4], row, 5);
        double cs = parse_cell(cells[5], row, 6);
        if (de < 0.0) throw DomainError("row " + std::to_string(row) + ": electrical demand is negative");
        if (dh < 0.0) throw DomainError("row " + std::to_string(row) + ": thermal demand is negative");
        if (res < 0.0) throw DomainError("row " + std::to_string(row) + ": renewable in-feed is negative");
        fs.elec_demand_mw.push_back(de);
        fs.thermal_demand_mw.push_back(dh);
        fs.res_mw.push_back(res);
        fs.buy_price.push_back(cb);
        fs.sell_price.push_back(cs);
        if (has_reserve) {
            double sr = parse_cell(cells[6], row, 7);
            if (sr < 0.0) throw DomainError("row " + std::to_string(row) + ": reserve requirement is negative");
            fs.spin_reserve_mw.push_back(sr);
        }
        ++steps;
        if (steps > grid.num_steps)
            throw InputLengthError("forecast file has more than " + std::to_string(grid.num_steps) + " data rows");
    }
    if (steps != grid.num_steps)
        throw InputLengthError("forecast file has " + std::to_string(steps) + " data rows, grid needs " +
                               std::to_string(grid.num_steps));
    return fs;
}

void write_forecasts(const std::string& path, const TimeGrid& grid, const ForecastSet& fs) {
    grid.validate();
    const size_t n = static_cast<size_t>(grid.num_steps);
    bool has_reserve = !fs.spin_reserve_mw.empty();
    if (fs.elec_demand_mw.size() != n || fs.thermal_demand_mw.size() != n || fs.res_mw.size() != n ||
        fs.buy_price.size() != n || fs.sell_price.size() != n ||
        (has_reserve && fs.spin_reserve_mw.size() != n))
        throw InputLengthError("forecast series lengths do not match the time grid");

    std::ofstream out(path);
    if (!out) throw ExportError("cannot open '" + path + "' for writing");
    out << (has_reserve ? kHeaderFull : kHeaderBase) << "\n";
    for (size_t k = 0; k < n; ++k) {
        out << grid.hour(static_cast<int>(k)) << ',' << fmt(fs.elec_demand_mw[k]) << ','
            << fmt(fs.thermal_demand_mw[k]) << ',' << fmt(fs.res_mw[k]) << ','
            << fmt(fs.buy_price[k]) << ',' << fmt(fs.sell_price[k]);
        if (has_reserve) out << ',' << fmt(fs.spin_reserve_mw[k]);
        out << "\n";
    }
    if (!out) throw ExportError("write to '" + path + "' failed");
}

std::vector<double> reserve_series(const ForecastSet& fs, double default_fraction) {
    if (!fs.spin_reserve_mw.empty()) return fs.spin_reserve_mw;
    if (default_fraction < 0.0) throw DomainError("reserve fraction cannot be negative");
    std::vector<double> sr;
    sr.reserve(fs.elec_demand_mw.size());
    for (double d : fs.elec_demand_mw) sr.push_back(default_fraction * d);
    return sr;
}

} // namespace meso
