#include "mgsched/milp/mps.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mgsched::milp {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out = s.empty() ? std::string("unnamed") : s;
    for (char& c : out)
        if (c == ' ' || c == '\t' || c == ',' ) c = '_';
    if (out.size() > 255) out.resize(255);
    return out;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

} // namespace

std::string export_mps(const MilpModel& model) {
    model.validate();
    std::ostringstream os;
    os << "* generated by mgsched\n";
    os << "NAME " << sanitize(model.name) << "\n";
    os << "OBJSENSE\n    " << (model.sense == Sense::Max ? "MAX" : "MIN") << "\n";

    std::vector<std::string> row_names(model.n_rows());
    {
        std::unordered_map<std::string, int> seen;
        for (int i = 0; i < model.n_rows(); ++i) {
            std::string nm = sanitize(model.rows[i].name);
            if (nm.empty()) nm = "r" + std::to_string(i);
            auto [it, fresh] = seen.emplace(nm, i);
            if (!fresh) throw Error("export_mps: duplicate row name " + nm);
            row_names[i] = nm;
        }
    }
    std::vector<std::string> var_names(model.n_vars());
    {
        std::unordered_map<std::string, int> seen;
        for (int j = 0; j < model.n_vars(); ++j) {
            std::string nm = sanitize(model.vars[j].name);
            if (nm.empty()) nm = "x" + std::to_string(j);
            auto [it, fresh] = seen.emplace(nm, j);
            if (!fresh) throw Error("export_mps: duplicate variable name " + nm);
            var_names[j] = nm;
        }
    }

    os << "ROWS\n";
    os << " N  OBJ\n";
    for (int i = 0; i < model.n_rows(); ++i) {
        const char* rel = model.rows[i].rel == Rel::Le ? "L" : model.rows[i].rel == Rel::Ge ? "G" : "E";
        os << " " << rel << "  " << row_names[i] << "\n";
    }

    // Column-major view of the row coefficients, keeping row order.
    std::vector<std::vector<std::pair<int, double>>> col_entries(model.n_vars());
    for (int i = 0; i < model.n_rows(); ++i) {
        std::map<int, double> merged;
        for (const auto& [j, a] : model.rows[i].coeffs) merged[j] += a;
        for (const auto& [j, a] : merged)
            if (a != 0.0) col_entries[j].emplace_back(i, a);
    }
    std::vector<double> obj_coef(model.n_vars(), 0.0);
    for (const auto& [j, a] : model.objective) obj_coef[j] += a;

    os << "COLUMNS\n";
    bool in_int = false;
    int marker_id = 0;
    for (int j = 0; j < model.n_vars(); ++j) {
        if (model.vars[j].integral != in_int) {
            os << "    MARKER" << marker_id++ << "  'MARKER'  "
               << (model.vars[j].integral ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = model.vars[j].integral;
        }
        bool emitted = false;
        if (obj_coef[j] != 0.0) {
            os << "    " << var_names[j] << "  OBJ  " << num(obj_coef[j]) << "\n";
            emitted = true;
        }
        for (const auto& [i, a] : col_entries[j]) {
            os << "    " << var_names[j] << "  " << row_names[i] << "  " << num(a) << "\n";
            emitted = true;
        }
        if (!emitted) // keep the variable known to any reader
            os << "    " << var_names[j] << "  OBJ  0\n";
    }
    if (in_int) os << "    MARKER" << marker_id++ << "  'MARKER'  'INTEND'\n";

    os << "RHS\n";
    if (model.obj_constant != 0.0)
        os << "    RHS  OBJ  " << num(-model.obj_constant) << "\n";
    for (int i = 0; i < model.n_rows(); ++i)
        if (model.rows[i].rhs != 0.0)
            os << "    RHS  " << row_names[i] << "  " << num(model.rows[i].rhs) << "\n";

    os << "RANGES\n";

    os << "BOUNDS\n";
    for (int j = 0; j < model.n_vars(); ++j) {
        const auto& v = model.vars[j];
        if (v.lb == v.ub) {
            os << " FX BND  " << var_names[j] << "  " << num(v.lb) << "\n";
            continue;
        }
        if (v.lb <= -kInf && v.ub >= kInf) {
            os << " FR BND  " << var_names[j] << "\n";
            continue;
        }
        if (v.lb <= -kInf) os << " MI BND  " << var_names[j] << "\n";
        else os << " LO BND  " << var_names[j] << "  " << num(v.lb) << "\n";
        if (v.ub >= kInf) os << " PL BND  " << var_names[j] << "\n";
        else os << " UP BND  " << var_names[j] << "  " << num(v.ub) << "\n";
    }
    os << "ENDATA\n";
    return os.str();
}

MilpModel import_mps(const std::string& text) {
    MilpModel m;
    m.sense = Sense::Min; // MPS default when OBJSENSE is absent

    enum class Section { None, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Done };
    Section sec = Section::None;

    std::unordered_map<std::string, int> row_of;   // constraint rows only
    std::vector<std::string> obj_rows;             // N rows; first is the objective
    std::unordered_map<std::string, int> var_of;
    bool in_int = false;
    std::unordered_map<std::string, double> obj_coef;
    std::unordered_map<std::string, double> rhs_obj;
    std::vector<std::pair<std::string, double>> ranges;
    // Track which bounds were explicitly set so UP does not clobber LO.
    std::vector<bool> saw_lb;

    auto var_index = [&](const std::string& name) {
        auto it = var_of.find(name);
        if (it != var_of.end()) return it->second;
        const int j = m.add_var(name, 0.0, kInf, in_int);
        var_of.emplace(name, j);
        saw_lb.push_back(false);
        return j;
    };
    auto parse_num = [](const std::string& s) {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw Error("import_mps: bad number '" + s + "'");
        return v;
    };

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        const bool section_header = line[0] != ' ' && line[0] != '\t';
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (section_header) {
            const std::string& h = toks[0];
            if (h == "NAME") { m.name = toks.size() > 1 ? toks[1] : "model"; continue; }
            if (h == "OBJSENSE") {
                sec = Section::ObjSense;
                if (toks.size() > 1) m.sense = toks[1] == "MAX" || toks[1] == "MAXIMIZE" ? Sense::Max : Sense::Min;
                continue;
            }
            if (h == "ROWS") { sec = Section::Rows; continue; }
            if (h == "COLUMNS") { sec = Section::Columns; continue; }
            if (h == "RHS") { sec = Section::Rhs; continue; }
            if (h == "RANGES") { sec = Section::Ranges; continue; }
            if (h == "BOUNDS") { sec = Section::Bounds; continue; }
            if (h == "ENDATA") { sec = Section::Done; break; }
            throw Error("import_mps: unknown section '" + h + "'");
        }

        switch (sec) {
        case Section::ObjSense:
            m.sense = toks[0] == "MAX" || toks[0] == "MAXIMIZE" ? Sense::Max : Sense::Min;
            break;
        case Section::Rows: {
            if (toks.size() < 2) throw Error("import_mps: bad ROWS line: " + line);
            const std::string& kind = toks[0];
            const std::string& name = toks[1];
            if (kind == "N") {
                obj_rows.push_back(name);
            } else {
                Rel rel = kind == "L" ? Rel::Le : kind == "G" ? Rel::Ge : kind == "E" ? Rel::Eq
                        : throw Error("import_mps: bad row type '" + kind + "'");
                row_of.emplace(name, m.add_row(name, {}, rel, 0.0));
            }
            break;
        }
        case Section::Columns: {
            if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                if (toks[2] == "'INTORG'") in_int = true;
                else if (toks[2] == "'INTEND'") in_int = false;
                break;
            }
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw Error("import_mps: bad COLUMNS line: " + line);
            const int j = var_index(toks[0]);
            for (size_t k = 1; k + 1 < toks.size(); k += 2) {
                const std::string& row = toks[k];
                const double a = parse_num(toks[k + 1]);
                if (!obj_rows.empty() && row == obj_rows.front()) {
                    obj_coef[toks[0]] += a;
                } else if (auto it = row_of.find(row); it != row_of.end()) {
                    if (a != 0.0) m.rows[it->second].coeffs.emplace_back(j, a);
                } else if (std::find(obj_rows.begin(), obj_rows.end(), row) != obj_rows.end()) {
                    // secondary free row: ignored
                } else {
                    throw Error("import_mps: unknown row '" + row + "'");
                }
            }
            break;
        }
        case Section::Rhs: {
            if (toks.size() < 3) throw Error("import_mps: bad RHS line: " + line);
            for (size_t k = 1; k + 1 < toks.size(); k += 2) {
                const std::string& row = toks[k];
                const double v = parse_num(toks[k + 1]);
                if (!obj_rows.empty() && row == obj_rows.front()) m.obj_constant = -v;
                else if (auto it = row_of.find(row); it != row_of.end()) m.rows[it->second].rhs = v;
                else throw Error("import_mps: RHS for unknown row '" + row + "'");
            }
            break;
        }
        case Section::Ranges: {
            if (toks.size() < 3) throw Error("import_mps: bad RANGES line: " + line);
            for (size_t k = 1; k + 1 < toks.size(); k += 2)
                ranges.emplace_back(toks[k], parse_num(toks[k + 1]));
            break;
        }
        case Section::Bounds: {
            if (toks.size() < 3) throw Error("import_mps: bad BOUNDS line: " + line);
            const std::string& kind = toks[0];
            const int j = var_index(toks[2]);
            const double v = toks.size() > 3 ? parse_num(toks[3]) : 0.0;
            if (kind == "LO") { m.vars[j].lb = v; saw_lb[j] = true; }
            else if (kind == "UP") {
                m.vars[j].ub = v;
                if (v < 0.0 && !saw_lb[j]) m.vars[j].lb = -kInf; // legacy MPS quirk
            }
            else if (kind == "FX") { m.vars[j].lb = v; m.vars[j].ub = v; saw_lb[j] = true; }
            else if (kind == "FR") { m.vars[j].lb = -kInf; m.vars[j].ub = kInf; saw_lb[j] = true; }
            else if (kind == "MI") { m.vars[j].lb = -kInf; saw_lb[j] = true; }
            else if (kind == "PL") { m.vars[j].ub = kInf; }
            else if (kind == "BV") { m.vars[j].lb = 0.0; m.vars[j].ub = 1.0; m.vars[j].integral = true; saw_lb[j] = true; }
            else if (kind == "LI") { m.vars[j].lb = v; m.vars[j].integral = true; saw_lb[j] = true; }
            else if (kind == "UI") { m.vars[j].ub = v; m.vars[j].integral = true; }
            else throw Error("import_mps: unknown bound type '" + kind + "'");
            break;
        }
        case Section::None:
        case Section::Done:
            throw Error("import_mps: data outside any section: " + line);
        }
    }

    // Expand RANGES into the equivalent extra rows.
    for (const auto& [rname, r] : ranges) {
        auto it = row_of.find(rname);
        if (it == row_of.end()) throw Error("import_mps: RANGES for unknown row '" + rname + "'");
        Constraint& c = m.rows[it->second];
        const double ar = std::abs(r);
        switch (c.rel) {
        case Rel::Le:
            m.add_row(c.name + "_rng", c.coeffs, Rel::Ge, c.rhs - ar);
            break;
        case Rel::Ge:
            m.add_row(c.name + "_rng", c.coeffs, Rel::Le, c.rhs + ar);
            break;
        case Rel::Eq:
            if (r >= 0.0) {
                m.add_row(c.name + "_rng", c.coeffs, Rel::Le, c.rhs + ar);
                c.rel = Rel::Ge;
            } else {
                m.add_row(c.name + "_rng", c.coeffs, Rel::Ge, c.rhs - ar);
                c.rel = Rel::Le;
            }
            break;
        }
    }

    if (obj_rows.empty()) throw Error("import_mps: no objective row");
    for (const auto& [name, a] : obj_coef) {
        if (a == 0.0) continue;
        m.objective.emplace_back(var_of.at(name), a);
    }
    std::sort(m.objective.begin(), m.objective.end());
    m.validate();
    return m;
}

} // namespace mgsched::milp
