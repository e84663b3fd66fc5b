#include "shipsched/mps.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

namespace shipsched {

namespace {

std::string col_name(int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", j + 1);
    return buf;
}
std::string row_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07d", i + 1);
    return buf;
}

// Shortest decimal form that parses back to exactly the same double.
std::string exact_number(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void pad_to(std::string& line, size_t column) {
    if (line.size() < column) line.append(column - line.size(), ' ');
    else line += ' ';
}

struct Entry {
    std::string row;
    double value;
};

void emit_pairs(std::string& out, const std::string& owner,
                const std::vector<Entry>& entries) {
    for (size_t k = 0; k < entries.size(); k += 2) {
        std::string line;
        pad_to(line, 4);
        line += owner;
        pad_to(line, 14);
        line += entries[k].row;
        pad_to(line, 24);
        line += exact_number(entries[k].value);
        if (k + 1 < entries.size()) {
            pad_to(line, 39);
            line += entries[k + 1].row;
            pad_to(line, 49);
            line += exact_number(entries[k + 1].value);
        }
        out += line;
        out += '\n';
    }
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (in >> f) out.push_back(f);
    return out;
}

double parse_value(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("MPS: bad numeric field '" + s + "'");
}

}  // namespace

std::string export_mps(const MilpModel& model) {
    int n = static_cast<int>(model.vars.size());
    int m = static_cast<int>(model.rows.size());

    // Column-major view, rows ascending within each column.
    std::vector<std::vector<Entry>> columns(n);
    for (int j = 0; j < n; ++j)
        if (model.obj[j] != 0.0) columns[j].push_back({"OBJ", model.obj[j]});
    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (int i = 0; i < m; ++i)
        for (const auto& [var, coef] : model.rows[i].terms)
            if (coef != 0.0) by_col[var].push_back({i, coef});
    for (int j = 0; j < n; ++j) {
        std::sort(by_col[j].begin(), by_col[j].end());
        for (const auto& [i, coef] : by_col[j]) columns[j].push_back({row_name(i), coef});
        if (columns[j].empty()) columns[j].push_back({"OBJ", 0.0});  // keep the column alive
    }

    std::string out;
    out += "NAME          SHIPSCHD\n";
    out += "OBJSENSE\n";
    out += model.maximize ? "    MAX\n" : "    MIN\n";
    out += "ROWS\n";
    out += " N  OBJ\n";
    for (int i = 0; i < m; ++i) {
        char sense = model.rows[i].sense == RowSense::LE   ? 'L'
                     : model.rows[i].sense == RowSense::GE ? 'G'
                                                           : 'E';
        out += ' ';
        out += sense;
        out += "  " + row_name(i) + "\n";
    }

    out += "COLUMNS\n";
    bool in_integers = false;
    int marker = 0;
    for (int j = 0; j < n; ++j) {
        bool integral = model.vars[j].is_binary;
        if (integral != in_integers) {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "    MARKER%02d  'MARKER'                 '%s'\n",
                          ++marker, integral ? "INTORG" : "INTEND");
            out += buf;
            in_integers = integral;
        }
        emit_pairs(out, col_name(j), columns[j]);
    }
    if (in_integers) {
        char buf[80];
        std::snprintf(buf, sizeof(buf), "    MARKER%02d  'MARKER'                 '%s'\n",
                      ++marker, "INTEND");
        out += buf;
    }

    out += "RHS\n";
    std::vector<Entry> rhs;
    for (int i = 0; i < m; ++i)
        if (model.rows[i].rhs != 0.0) rhs.push_back({row_name(i), model.rows[i].rhs});
    emit_pairs(out, "RHS", rhs);

    out += "RANGES\n";  // none produced by this model family

    out += "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const VarInfo& v = model.vars[j];
        auto bound_line = [&](const char* tag, bool with_value, double value) {
            std::string line = " ";
            line += tag;
            pad_to(line, 4);
            line += "BND";
            pad_to(line, 14);
            line += col_name(j);
            if (with_value) {
                pad_to(line, 24);
                line += exact_number(value);
            }
            out += line;
            out += '\n';
        };
        if (v.is_binary && v.lo == 0.0 && v.hi == 1.0) {
            bound_line("BV", false, 0.0);
        } else if (v.lo == v.hi) {
            bound_line("FX", true, v.lo);
        } else {
            if (v.lo != 0.0) bound_line("LO", true, v.lo);
            if (std::isfinite(v.hi)) bound_line("UP", true, v.hi);
        }
    }
    out += "ENDATA\n";
    return out;
}

std::string export_name_table(const MilpModel& model) {
    std::string out;
    for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
        out += col_name(j) + " " + model.var_name(j) + "\n";
    for (int i = 0; i < static_cast<int>(model.rows.size()); ++i) {
        out += row_name(i) + " family(" + std::to_string(model.rows[i].family) + ")";
        const LinRow& r = model.rows[i];
        if (model.inst) {
            if (r.vessel >= 0) out += " " + model.inst->vessels[r.vessel].id;
            if (r.vessel2 >= 0) out += " " + model.inst->vessels[r.vessel2].id;
            if (r.window >= 0) out += " " + model.inst->windows[r.window].id;
            if (r.contract >= 0) out += " " + model.inst->contracts[r.contract].id;
        }
        out += "\n";
    }
    return out;
}

MilpModel import_mps(const std::string& text) {
    MilpModel model;
    model.maximize = false;

    enum Section { None, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Done };
    Section section = None;
    std::map<std::string, int> row_id, col_id;
    bool integral = false;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        bool header = line[0] != ' ' && line[0] != '\t';
        auto f = fields(line);
        if (f.empty()) continue;
        if (header) {
            const std::string& tag = f[0];
            if (tag == "NAME") section = None;
            else if (tag == "OBJSENSE") section = ObjSense;
            else if (tag == "ROWS") section = Rows;
            else if (tag == "COLUMNS") section = Columns;
            else if (tag == "RHS") section = Rhs;
            else if (tag == "RANGES") section = Ranges;
            else if (tag == "BOUNDS") section = Bounds;
            else if (tag == "ENDATA") section = Done;
            else throw ParseError("MPS: unknown section '" + tag + "'");
            continue;
        }
        switch (section) {
            case ObjSense:
                model.maximize = f[0] == "MAX" || f[0] == "MAXIMIZE";
                break;
            case Rows: {
                if (f.size() != 2) throw ParseError("MPS: bad ROWS line: " + line);
                if (f[0] == "N") {
                    row_id[f[1]] = -1;  // the objective row
                    break;
                }
                LinRow row;
                row.sense = f[0] == "L" ? RowSense::LE
                            : f[0] == "G" ? RowSense::GE
                            : f[0] == "E" ? RowSense::EQ
                                          : throw ParseError("MPS: bad row sense " + f[0]);
                row_id[f[1]] = static_cast<int>(model.rows.size());
                model.rows.push_back(std::move(row));
                break;
            }
            case Columns: {
                if (f.size() >= 3 && f[1] == "'MARKER'") {
                    integral = f.back() == "'INTORG'";
                    break;
                }
                if (f.size() != 3 && f.size() != 5)
                    throw ParseError("MPS: bad COLUMNS line: " + line);
                auto it = col_id.find(f[0]);
                int j;
                if (it == col_id.end()) {
                    j = static_cast<int>(model.vars.size());
                    col_id[f[0]] = j;
                    VarInfo v;
                    v.lo = 0.0;
                    v.hi = std::numeric_limits<double>::infinity();
                    v.is_binary = integral;
                    model.vars.push_back(v);
                    model.obj.push_back(0.0);
                } else {
                    j = it->second;
                }
                for (size_t k = 1; k + 1 < f.size(); k += 2) {
                    double value = parse_value(f[k + 1]);
                    auto rit = row_id.find(f[k]);
                    if (rit == row_id.end())
                        throw ParseError("MPS: unknown row " + f[k]);
                    if (rit->second < 0) model.obj[j] = value;
                    else model.rows[rit->second].terms.push_back({j, value});
                }
                break;
            }
            case Rhs: {
                for (size_t k = 1; k + 1 < f.size(); k += 2) {
                    auto rit = row_id.find(f[k]);
                    if (rit == row_id.end() || rit->second < 0)
                        throw ParseError("MPS: unknown RHS row " + f[k]);
                    model.rows[rit->second].rhs = parse_value(f[k + 1]);
                }
                break;
            }
            case Ranges:
                throw ParseError("MPS: RANGES entries are not supported");
            case Bounds: {
                if (f.size() < 3) throw ParseError("MPS: bad BOUNDS line: " + line);
                auto cit = col_id.find(f[2]);
                if (cit == col_id.end()) throw ParseError("MPS: unknown column " + f[2]);
                VarInfo& v = model.vars[cit->second];
                const std::string& tag = f[0];
                if (tag == "BV") {
                    v.lo = 0.0;
                    v.hi = 1.0;
                    v.is_binary = true;
                } else if (tag == "FX") {
                    v.lo = v.hi = parse_value(f.at(3));
                } else if (tag == "UP") {
                    v.hi = parse_value(f.at(3));
                } else if (tag == "LO") {
                    v.lo = parse_value(f.at(3));
                } else if (tag == "PL") {
                    v.hi = std::numeric_limits<double>::infinity();
                } else if (tag == "MI") {
                    throw ParseError("MPS: free-below bounds are not supported");
                } else {
                    throw ParseError("MPS: unknown bound tag " + tag);
                }
                break;
            }
            case None:
            case Done:
                break;
        }
    }

    return model;
}

std::vector<double> import_solution(const std::string& text, const MilpModel& model) {
    std::vector<double> x(model.vars.size(), 0.0);
    std::vector<bool> seen(model.vars.size(), false);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == '*') continue;
        auto f = fields(line);
        if (f.empty()) continue;
        if (f.size() != 2) throw ParseError("solution file: expected 'name value': " + line);
        if (f[0].size() != 8 || f[0][0] != 'C')
            throw ParseError("solution file: unknown variable name " + f[0]);
        int j = 0;
        for (size_t k = 1; k < 8; ++k) {
            if (!std::isdigit(static_cast<unsigned char>(f[0][k])))
                throw ParseError("solution file: unknown variable name " + f[0]);
            j = j * 10 + (f[0][k] - '0');
        }
        j -= 1;
        if (j < 0 || j >= static_cast<int>(model.vars.size()))
            throw ParseError("solution file: unknown variable name " + f[0]);
        if (seen[j]) throw ParseError("solution file: duplicate variable " + f[0]);
        seen[j] = true;
        x[j] = parse_value(f[1]);
    }
    return x;
}

std::uint64_t model_checksum(const MilpModel& model) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix_bytes = [&](const void* data, size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    auto mix_double = [&](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof(bits));
        mix_bytes(&bits, sizeof(bits));
    };
    auto mix_int = [&](std::int64_t v) { mix_bytes(&v, sizeof(v)); };

    mix_int(static_cast<std::int64_t>(model.vars.size()));
    mix_int(static_cast<std::int64_t>(model.rows.size()));
    mix_int(model.maximize ? 1 : 0);
    for (size_t j = 0; j < model.vars.size(); ++j) {
        mix_double(model.vars[j].lo);
        mix_double(model.vars[j].hi);
        mix_int(model.vars[j].is_binary ? 1 : 0);
        mix_double(model.obj[j]);
    }
    for (const auto& row : model.rows) {
        mix_int(static_cast<int>(row.sense));
        mix_double(row.rhs);
        auto terms = row.terms;
        std::sort(terms.begin(), terms.end());
        mix_int(static_cast<std::int64_t>(terms.size()));
        for (const auto& [var, coef] : terms) {
            mix_int(var);
            mix_double(coef);
        }
    }
    return h;
}

}  // namespace shipsched
