#include "meso/mps.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "meso/errors.hpp"
#include "meso/num_io.hpp"

namespace meso::mps {

namespace {

bool name_fits(const std::string& s) {
    if (s.empty() || s.size() > 8) return false;
    for (char c : s)
        if (c <= ' ' || c > '~' || c == '\'' || c == '$') return false;
    return true;
}

std::string pad8(const std::string& s) {
    std::string r = s;
    if (r.size() < 8) r.append(8 - r.size(), ' ');
    return r;
}

std::string seq_name(char prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%07d", prefix, i);
    return buf;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> t;
    std::istringstream is(line);
    std::string w;
    while (is >> w) t.push_back(std::move(w));
    return t;
}

} // namespace

void write(const MilpProblem& p, const std::string& path, const std::string& problem_name) {
    p.validate();
    const int n = p.num_vars(), m = p.num_rows();

    // decide whether original names survive the 8-character fixed fields
    bool mangle = false;
    {
        std::unordered_set<std::string> seen;
        seen.insert("OBJ");
        for (const auto& r : p.rows)
            if (!name_fits(r.name) || !seen.insert(r.name).second) { mangle = true; break; }
        if (!mangle) {
            std::unordered_set<std::string> cseen;
            for (const auto& v : p.vars)
                if (!name_fits(v.name) || !cseen.insert(v.name).second) { mangle = true; break; }
        }
    }
    auto row_name = [&](int i) { return mangle ? seq_name('R', i) : p.rows[i].name; };
    auto col_name = [&](int j) { return mangle ? seq_name('C', j) : p.vars[j].name; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExportError("cannot open '" + path + "' for writing");

    out << "NAME          " << problem_name << "\n";
    out << "ROWS\n N  OBJ\n";
    for (int i = 0; i < m; ++i) {
        char s = p.rows[i].sense == Sense::le ? 'L' : (p.rows[i].sense == Sense::ge ? 'G' : 'E');
        out << ' ' << s << "  " << row_name(i) << "\n";
    }

    out << "COLUMNS\n";
    int marker = 0;
    bool in_int = false;
    // row-major terms regrouped per column
    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (int i = 0; i < m; ++i)
        for (auto [col, val] : p.rows[i].terms) by_col[col].emplace_back(i, val);
    for (int j = 0; j < n; ++j) {
        if (p.vars[j].integer != in_int) {
            out << "    " << pad8(seq_name('M', marker++)) << "  'MARKER'                 '"
                << (p.vars[j].integer ? "INTORG" : "INTEND") << "'\n";
            in_int = p.vars[j].integer;
        }
        // the objective entry also declares the column, so write it even at zero
        out << "    " << pad8(col_name(j)) << "  " << pad8("OBJ") << "  " << to_shortest(p.obj[j])
            << "\n";
        for (auto [row, val] : by_col[j])
            out << "    " << pad8(col_name(j)) << "  " << pad8(row_name(row)) << "  "
                << to_shortest(val) << "\n";
    }
    if (in_int)
        out << "    " << pad8(seq_name('M', marker++)) << "  'MARKER'                 'INTEND'\n";

    out << "RHS\n";
    if (p.obj_offset != 0.0)
        out << "    RHS       " << pad8("OBJ") << "  " << to_shortest(-p.obj_offset) << "\n";
    for (int i = 0; i < m; ++i)
        if (p.rows[i].rhs != 0.0)
            out << "    RHS       " << pad8(row_name(i)) << "  " << to_shortest(p.rows[i].rhs)
                << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const auto& v = p.vars[j];
        const std::string nm = pad8(col_name(j));
        if (v.integer && v.lb == 0.0 && v.ub == 1.0) {
            out << " BV BND       " << nm << "\n";
        } else if (v.lb == v.ub) {
            out << " FX BND       " << nm << "  " << to_shortest(v.lb) << "\n";
        } else if (v.lb == -kInf && v.ub == kInf) {
            out << " FR BND       " << nm << "\n";
        } else {
            if (v.lb == -kInf) out << " MI BND       " << nm << "\n";
            else if (v.lb != 0.0) out << " LO BND       " << nm << "  " << to_shortest(v.lb) << "\n";
            if (v.ub != kInf) out << " UP BND       " << nm << "  " << to_shortest(v.ub) << "\n";
        }
    }
    out << "ENDATA\n";
    if (!out) throw ExportError("write to '" + path + "' failed");
    out.close();

    if (mangle) {
        std::ofstream map(path + ".map", std::ios::binary);
        if (!map) throw ExportError("cannot open '" + path + ".map' for writing");
        for (int i = 0; i < m; ++i) map << "row " << seq_name('R', i) << ' ' << p.rows[i].name << "\n";
        for (int j = 0; j < n; ++j) map << "col " << seq_name('C', j) << ' ' << p.vars[j].name << "\n";
        if (!map) throw ExportError("write to '" + path + ".map' failed");
    }
}

namespace {

struct Parser {
    MilpProblem p;
    std::string obj_row;
    std::unordered_map<std::string, int> row_of, col_of;
    std::unordered_set<std::string> obj_seen;             // columns with an OBJ entry
    std::unordered_set<std::string> rhs_seen, range_seen;
    std::string current_col;
    bool int_mode = false;

    int need_row(const std::string& name, const char* ctx) {
        auto it = row_of.find(name);
        if (it == row_of.end())
            throw ParseError(std::string("mps: unknown row '") + name + "' in " + ctx);
        return it->second;
    }
    int need_col(const std::string& name, const char* ctx) {
        auto it = col_of.find(name);
        if (it == col_of.end())
            throw ParseError(std::string("mps: unknown column '") + name + "' in " + ctx);
        return it->second;
    }

    void rows_line(const std::vector<std::string>& t) {
        if (t.size() != 2) throw ParseError("mps: ROWS line needs a type and a name");
        const std::string& ty = t[0];
        if (ty == "N") {
            if (!obj_row.empty()) throw ParseError("mps: multiple objective rows");
            obj_row = t[1];
            return;
        }
        Sense s;
        if (ty == "L") s = Sense::le;
        else if (ty == "G") s = Sense::ge;
        else if (ty == "E") s = Sense::eq;
        else throw ParseError("mps: unknown row type '" + ty + "'");
        if (row_of.count(t[1]) || t[1] == obj_row)
            throw ParseError("mps: duplicate row name '" + t[1] + "'");
        row_of.emplace(t[1], static_cast<int>(p.rows.size()));
        MilpProblem::Row r;
        r.sense = s;
        r.name = t[1];
        p.rows.push_back(std::move(r));
    }

    void columns_line(const std::vector<std::string>& t) {
        if (t.size() >= 3 && t[1] == "'MARKER'") {
            const std::string& kind = t.back();
            if (kind == "'INTORG'") int_mode = true;
            else if (kind == "'INTEND'") int_mode = false;
            else throw ParseError("mps: unrecognized marker '" + kind + "'");
            return;
        }
        if (t.size() != 3 && t.size() != 5)
            throw ParseError("mps: COLUMNS line needs name/row/value pairs");
        const std::string& cname = t[0];
        int j;
        auto it = col_of.find(cname);
        if (it == col_of.end()) {
            j = static_cast<int>(p.vars.size());
            col_of.emplace(cname, j);
            MilpProblem::Var v;
            v.name = cname;
            v.integer = int_mode;
            v.lb = 0.0;
            v.ub = kInf;
            p.vars.push_back(std::move(v));
            p.obj.push_back(0.0);
            current_col = cname;
        } else {
            if (cname != current_col)
                throw ParseError("mps: column '" + cname + "' entries are not contiguous");
            j = it->second;
        }
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
            double val = parse_double(t[k + 1], "COLUMNS");
            if (t[k] == obj_row) {
                if (!obj_seen.insert(cname).second)
                    throw ParseError("mps: duplicate objective entry for '" + cname + "'");
                p.obj[j] = val;
                continue;
            }
            int i = need_row(t[k], "COLUMNS");
            auto& terms = p.rows[i].terms;
            if (!terms.empty() && terms.back().first == j)
                throw ParseError("mps: duplicate entry for column '" + cname + "' in row '" +
                                 t[k] + "'");
            terms.emplace_back(j, val);
        }
    }

    void rhs_line(const std::vector<std::string>& t) {
        if (t.size() != 3 && t.size() != 5)
            throw ParseError("mps: RHS line needs a set name and row/value pairs");
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
            double val = parse_double(t[k + 1], "RHS");
            if (t[k] == obj_row) {
                if (!rhs_seen.insert(t[k]).second)
                    throw ParseError("mps: duplicate objective rhs");
                p.obj_offset = -val;
                continue;
            }
            int i = need_row(t[k], "RHS");
            if (!rhs_seen.insert(t[k]).second)
                throw ParseError("mps: duplicate rhs for row '" + t[k] + "'");
            p.rows[i].rhs = val;
        }
    }

    // A range on row i with rhs b widens it to an interval; the far side
    // becomes a companion row so the single-sense row form is preserved.
    void ranges_line(const std::vector<std::string>& t) {
        if (t.size() != 3 && t.size() != 5)
            throw ParseError("mps: RANGES line needs a set name and row/value pairs");
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
            double r = parse_double(t[k + 1], "RANGES");
            int i = need_row(t[k], "RANGES");
            if (!range_seen.insert(t[k]).second)
                throw ParseError("mps: duplicate range for row '" + t[k] + "'");
            MilpProblem::Row far = p.rows[i];
            far.name += "__rng";
            double b = p.rows[i].rhs;
            switch (p.rows[i].sense) {
                case Sense::le: far.sense = Sense::ge; far.rhs = b - std::abs(r); break;
                case Sense::ge: far.sense = Sense::le; far.rhs = b + std::abs(r); break;
                case Sense::eq:
                    p.rows[i].sense = r >= 0.0 ? Sense::ge : Sense::le;
                    far.sense = r >= 0.0 ? Sense::le : Sense::ge;
                    far.rhs = b + r;
                    break;
            }
            p.rows.push_back(std::move(far));
        }
    }

    void bounds_line(const std::vector<std::string>& t) {
        if (t.size() < 3) throw ParseError("mps: BOUNDS line too short");
        const std::string& ty = t[0];
        int j = need_col(t[2], "BOUNDS");
        auto& v = p.vars[j];
        auto val = [&]() {
            if (t.size() < 4) throw ParseError("mps: bound type " + ty + " needs a value");
            return parse_double(t[3], "BOUNDS");
        };
        if (ty == "UP") v.ub = val();
        else if (ty == "LO") v.lb = val();
        else if (ty == "FX") { v.lb = v.ub = val(); }
        else if (ty == "FR") { v.lb = -kInf; v.ub = kInf; }
        else if (ty == "MI") v.lb = -kInf;
        else if (ty == "PL") v.ub = kInf;
        else if (ty == "BV") { v.integer = true; v.lb = 0.0; v.ub = 1.0; }
        else if (ty == "UI") { v.integer = true; v.ub = val(); }
        else if (ty == "LI") { v.integer = true; v.lb = val(); }
        else throw ParseError("mps: unknown bound type '" + ty + "'");
    }
};

} // namespace

MilpProblem read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");

    Parser ps;
    std::string section, line;
    bool ended = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        if (line[0] != ' ' && line[0] != '\t') {
            auto t = tokens_of(line);
            section = t[0];
            if (section == "ENDATA") { ended = true; break; }
            if (section != "NAME" && section != "OBJSENSE" && section != "ROWS" &&
                section != "COLUMNS" && section != "RHS" && section != "RANGES" &&
                section != "BOUNDS")
                throw ParseError("mps: unknown section '" + section + "'");
            continue;
        }
        auto t = tokens_of(line);
        if (t.empty()) continue;
        if (section == "OBJSENSE") {
            if (t[0] == "MIN" || t[0] == "MINIMIZE") continue;
            throw ParseError("mps: only minimization is supported");
        } else if (section == "ROWS") ps.rows_line(t);
        else if (section == "COLUMNS") ps.columns_line(t);
        else if (section == "RHS") ps.rhs_line(t);
        else if (section == "RANGES") ps.ranges_line(t);
        else if (section == "BOUNDS") ps.bounds_line(t);
        else if (section == "NAME") continue;
        else throw ParseError("mps: data line before any section");
    }
    if (!ended) throw ParseError("mps: missing ENDATA");
    if (ps.obj_row.empty()) throw ParseError("mps: no objective row declared");

    // restore long names if the writer left a sidecar
    std::ifstream map(path + ".map", std::ios::binary);
    if (map) {
        std::string kind, short_name;
        while (map >> kind >> short_name) {
            std::string original;
            std::getline(map, original);
            if (!original.empty() && original[0] == ' ') original.erase(0, 1);
            if (!original.empty() && original.back() == '\r') original.pop_back();
            if (kind == "row") {
                auto it = ps.row_of.find(short_name);
                if (it != ps.row_of.end()) ps.p.rows[it->second].name = original;
            } else if (kind == "col") {
                auto it = ps.col_of.find(short_name);
                if (it != ps.col_of.end()) ps.p.vars[it->second].name = original;
            } else {
                throw ParseError("mps: bad sidecar line kind '" + kind + "'");
            }
        }
    }

    ps.p.validate();
    return ps.p;
}

std::vector<double> import_solution(const std::string& path, const MilpProblem& p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::unordered_map<std::string, int> index;
    index.reserve(p.vars.size());
    for (int j = 0; j < p.num_vars(); ++j) index.emplace(p.vars[j].name, j);

    std::vector<double> x(p.num_vars(), 0.0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto t = tokens_of(line);
        if (t.empty()) continue;
        if (t.size() != 2)
            throw ParseError("solution line " + std::to_string(lineno) +
                             ": expected 'name value'");
        auto it = index.find(t[0]);
        if (it == index.end())
            throw ParseError("solution line " + std::to_string(lineno) + ": unknown variable '" +
                             t[0] + "'");
        x[it->second] = parse_double(t[1], "solution file");
    }
    return x;
}

} // namespace meso::mps
