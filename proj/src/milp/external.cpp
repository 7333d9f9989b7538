#include "mgsched/milp/external.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mgsched/milp/mps.hpp"

namespace mgsched::milp {

namespace fs = std::filesystem;

namespace {

std::string replace_all(std::string s, const std::string& what, const std::string& with) {
    size_t pos = 0;
    while ((pos = s.find(what, pos)) != std::string::npos) {
        s.replace(pos, what.size(), with);
        pos += with.size();
    }
    return s;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw BridgeError("external solver produced no readable file: " + p.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string tail_of(const std::string& s, size_t n = 2000) {
    return s.size() <= n ? s : s.substr(s.size() - n);
}

// Parses both supported layouts into (key, value-string) pairs.
std::vector<std::pair<std::string, std::string>> parse_solution_file(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is(text);
    std::string line;
    bool csv = false, checked = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!checked) {
            csv = line.find(',') != std::string::npos;
            checked = true;
            if (csv) {
                // Header row like "name,value" is skipped when non-numeric.
                const auto comma = line.find(',');
                const std::string second = line.substr(comma + 1);
                char* end = nullptr;
                std::strtod(second.c_str(), &end);
                if (end == second.c_str()) continue;
            }
        }
        std::string key, val;
        if (csv) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw BridgeError("bad solution line: " + line);
            key = line.substr(0, comma);
            val = line.substr(comma + 1);
        } else {
            std::istringstream ls(line);
            if (!(ls >> key >> val)) throw BridgeError("bad solution line: " + line);
        }
        out.emplace_back(std::move(key), std::move(val));
    }
    return out;
}

} // namespace

std::optional<std::string> external_solver_from_env() {
    const char* v = std::getenv(kExtSolverEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

Solution external_solve(const MilpModel& model, const std::string& command_template,
                        const ExternalOptions& opts) {
    if (command_template.find("{mps}") == std::string::npos
        || command_template.find("{sol}") == std::string::npos)
        throw BridgeError("solver command template needs both {mps} and {sol} placeholders");
    const auto t0 = std::chrono::steady_clock::now();

    const char* tmp_root = std::getenv("TMPDIR");
    std::string base = (tmp_root && *tmp_root) ? std::string(tmp_root) : std::string("/tmp");
    std::string dir_template = base + "/mgsched-XXXXXX";
    std::vector<char> dbuf(dir_template.begin(), dir_template.end());
    dbuf.push_back('\0');
    if (::mkdtemp(dbuf.data()) == nullptr)
        throw BridgeError("cannot create temp directory under " + base);
    const fs::path dir(dbuf.data());
    const bool keep = opts.keep_temp || std::getenv("MG_KEEP_TEMP") != nullptr;
    struct Cleanup {
        fs::path dir;
        bool keep;
        ~Cleanup() {
            if (!keep) {
                std::error_code ec;
                fs::remove_all(dir, ec);
            }
        }
    } cleanup{dir, keep};

    const fs::path mps_path = dir / "model.mps";
    const fs::path sol_path = dir / "solution.sol";
    const fs::path log_path = dir / "solver.log";
    {
        std::ofstream os(mps_path, std::ios::binary);
        os << export_mps(model);
        if (!os) throw BridgeError("cannot write " + mps_path.string());
    }

    std::string cmd = replace_all(command_template, "{mps}", mps_path.string());
    cmd = replace_all(cmd, "{sol}", sol_path.string());
    cmd += " > " + log_path.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        std::string log;
        try { log = read_file(log_path); } catch (...) {}
        throw BridgeError("external solver exited with code " + std::to_string(rc) + "\n"
                          + tail_of(log));
    }

    const auto entries = parse_solution_file(read_file(sol_path));
    std::string status_word = "optimal";
    double reported_obj = std::nan("");
    std::unordered_map<std::string, double> values;
    values.reserve(entries.size());
    for (const auto& [key, val] : entries) {
        if (key == "status") { status_word = val; continue; }
        if (key == "objective") { reported_obj = std::stod(val); continue; }
        try {
            values[key] = std::stod(val);
        } catch (const std::exception&) {
            throw BridgeError("unparseable value for '" + key + "': " + val);
        }
    }

    Solution sol;
    sol.wall_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (status_word == "infeasible") {
        sol.status = SolStatus::Infeasible;
        return sol;
    }
    if (status_word == "unbounded") {
        sol.status = SolStatus::Unbounded;
        return sol;
    }
    if (status_word != "optimal")
        throw BridgeError("external solver reported status '" + status_word + "'");

    sol.x.assign(model.n_vars(), 0.0);
    for (int j = 0; j < model.n_vars(); ++j) {
        auto it = values.find(model.vars[j].name);
        if (it == values.end())
            throw BridgeError("solution file is missing variable '" + model.vars[j].name + "'");
        sol.x[j] = it->second;
    }
    if (values.size() != static_cast<size_t>(model.n_vars()))
        throw BridgeError("solution file has " + std::to_string(values.size())
                          + " variables, model has " + std::to_string(model.n_vars()));

    // Snap integer dust and bound dust, then verify feasibility ourselves.
    for (int j = 0; j < model.n_vars(); ++j) {
        const auto& v = model.vars[j];
        double x = sol.x[j];
        if (v.integral) {
            const double r = std::round(x);
            if (std::abs(x - r) > opts.int_snap_tol)
                throw BridgeError("variable " + v.name + " = " + std::to_string(x)
                                  + " is not integral");
            x = r;
        }
        // Snap bound dust as well as violations; values this close to a bound
        // are solver noise and would otherwise trip the complementarity audit.
        if (v.lb > -kInf) {
            if (x < v.lb - opts.feas_check_tol)
                throw BridgeError("variable " + v.name + " below its lower bound");
            if (x - v.lb <= 1e-7) x = v.lb;
        }
        if (v.ub < kInf) {
            if (x > v.ub + opts.feas_check_tol)
                throw BridgeError("variable " + v.name + " above its upper bound");
            if (v.ub - x <= 1e-7) x = v.ub;
        }
        sol.x[j] = x;
    }
    const double viol = model.max_infeasibility(sol.x);
    if (viol > opts.feas_check_tol)
        throw BridgeError("external solution violates constraints by " + std::to_string(viol));

    sol.objective = model.eval_objective(sol.x);
    if (std::isfinite(reported_obj)
        && std::abs(reported_obj - sol.objective) > 1e-4 * (1.0 + std::abs(sol.objective)))
        throw BridgeError("reported objective " + std::to_string(reported_obj)
                          + " disagrees with the assignment's value "
                          + std::to_string(sol.objective));
    sol.status = SolStatus::Optimal;
    sol.bound = sol.objective; // external solvers prove optimality
    sol.gap = 0.0;
    sol.nodes = 0;
    return sol;
}

} // namespace mgsched::milp
