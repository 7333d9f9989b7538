#include "mgsched/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mgsched/csv.hpp"

namespace mgsched {

using nlohmann::json;

double ElasticityMatrix::at(int t, int k) const {
    if (!matrix.empty()) return matrix[t][k];
    return t == k ? diagonal : off_diagonal;
}

ElasticityMatrix ElasticityMatrix::from_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open elasticity csv: " + path.string());
    ElasticityMatrix e;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        e.matrix.push_back(std::move(row));
    }
    if (e.matrix.empty()) throw ConfigError("empty elasticity csv: " + path.string());
    for (const auto& row : e.matrix)
        if (row.size() != e.matrix.size())
            throw ConfigError("elasticity csv must be square: " + path.string());
    return e;
}

void ElasticityMatrix::validate(int horizon) const {
    if (!matrix.empty()) {
        if (static_cast<int>(matrix.size()) != horizon)
            throw ConfigError("elasticity matrix must be " + std::to_string(horizon) + "x"
                              + std::to_string(horizon));
        for (const auto& row : matrix)
            if (static_cast<int>(row.size()) != horizon)
                throw ConfigError("elasticity matrix is ragged");
    }
    for (int t = 0; t < horizon; ++t)
        for (int k = 0; k < horizon; ++k) {
            const double e = at(t, k);
            if (t == k && e > 0.0) throw ConfigError("self-elasticity must be <= 0");
            if (t != k && e < 0.0) throw ConfigError("cross elasticity must be >= 0");
        }
}

int MgConfig::n_pv_units() const {
    int n = 0;
    for (const auto& g : pv_groups) n += g.count;
    return n;
}

int MgConfig::n_wt_units() const { return wt_group.count; }

int MgConfig::pv_bus(int unit) const {
    int u = unit;
    for (const auto& g : pv_groups) {
        if (u < g.count) return g.bus;
        u -= g.count;
    }
    throw ConfigError("pv unit index out of range");
}

double MgConfig::pv_capacity(int unit) const {
    int u = unit;
    for (const auto& g : pv_groups) {
        if (u < g.count) return g.capacity_kw;
        u -= g.count;
    }
    throw ConfigError("pv unit index out of range");
}

double MgConfig::wt_capacity(int) const { return wt_group.capacity_kw; }

void MgConfig::validate() const {
    if (horizon < 1 || horizon > 24) throw ConfigError("horizon must lie in 1..24");
    if (n_scenarios < 1) throw ConfigError("n_scenarios must be >= 1");
    if (dgrs.size() != 3) throw ConfigError("expected exactly 3 DGRs (buses 4-6)");
    for (const auto& d : dgrs) {
        if (!(0.0 <= d.p_min && d.p_min <= d.p_max)) throw ConfigError("DGR: need 0 <= p_min <= p_max");
        if (d.up_rate < 0.0 || d.down_rate < 0.0) throw ConfigError("DGR: ramp rates must be >= 0");
        if (d.startup_cost < 0.0 || d.shutdown_cost < 0.0 || d.b_g < 0.0 || d.c_g < 0.0)
            throw ConfigError("DGR: costs must be >= 0");
    }
    if (!(0.0 <= bess.soc_min && bess.soc_min <= bess.soc_init && bess.soc_init <= bess.soc_max
          && bess.soc_max <= 1.0))
        throw ConfigError("BESS: need 0 <= soc_min <= soc_init <= soc_max <= 1");
    if (!(bess.eta_ch > 0.0 && bess.eta_ch <= 1.0 && bess.eta_disch > 0.0 && bess.eta_disch <= 1.0))
        throw ConfigError("BESS: efficiencies must lie in (0,1]");
    if (bess.p_ch_max < 0.0 || bess.p_disch_max < 0.0) throw ConfigError("BESS: power limits must be >= 0");
    if (!(bess.s_base > 0.0)) throw ConfigError("BESS: s_base must be > 0");
    if (!(grid.mctl > 0.0)) throw ConfigError("grid: mctl must be > 0");
    for (const auto& g : pv_groups) {
        if (g.bus != 1 && g.bus != 2) throw ConfigError("PV groups sit on bus 1 or 2");
        if (g.count < 0 || !(g.capacity_kw > 0.0)) throw ConfigError("bad PV group");
        if (static_cast<int>(g.hours.size()) != horizon) throw ConfigError("PV profile length != horizon");
        for (const auto& h : g.hours) h.validate();
    }
    if (wt_group.count < 0 || !(wt_group.capacity_kw > 0.0)) throw ConfigError("bad WT group");
    if (static_cast<int>(wt_group.hours.size()) != horizon) throw ConfigError("WT profile length != horizon");
    for (const auto& h : wt_group.hours) h.validate();
    auto check_profile = [&](const std::vector<DistributionSpec>& v, const char* what) {
        if (static_cast<int>(v.size()) != horizon)
            throw ConfigError(std::string(what) + " profile length != horizon");
        for (const auto& h : v) h.validate();
    };
    check_profile(load_hours, "load");
    check_profile(price_sell_hours, "price_sell");
    check_profile(price_buy_hours, "price_buy");
    if (!(drp.participation >= 0.0 && drp.participation <= 1.0))
        throw ConfigError("DRP participation must lie in [0,1]");
    auto check_drp_vec = [&](const std::vector<double>& v, const char* what) {
        if (static_cast<int>(v.size()) != horizon)
            throw ConfigError(std::string(what) + " length != horizon");
    };
    check_drp_vec(drp.incentive, "drp.incentive");
    check_drp_vec(drp.penalty, "drp.penalty");
    check_drp_vec(drp.rho0, "drp.rho0");
    drp.elasticity.validate(horizon);
    if (risk.lambda_grid.empty() || risk.participation_grid.empty())
        throw ConfigError("risk grids must be non-empty");
    for (double l : risk.lambda_grid)
        if (!(l > 0.0 && l <= 1.0)) throw ConfigError("lambda grid values must lie in (0,1]");
    for (double p : risk.participation_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("participation grid values must lie in [0,1]");
    if (!(solver.time_limit_sec > 0.0) || !(solver.rel_gap > 0.0) || !(solver.int_tol > 0.0))
        throw ConfigError("solver settings must be positive");
}

std::map<std::string, HourlyProfileSpec> MgConfig::profile_map() const {
    std::map<std::string, HourlyProfileSpec> m;
    m["load"] = HourlyProfileSpec{load_hours, 1.0};
    m["price_sell"] = HourlyProfileSpec{price_sell_hours, 1.0};
    m["price_buy"] = HourlyProfileSpec{price_buy_hours, 1.0};
    int u = 1;
    for (const auto& g : pv_groups)
        for (int c = 0; c < g.count; ++c, ++u)
            m["pv_" + std::to_string(u)] = HourlyProfileSpec{g.hours, g.capacity_kw};
    for (int j = 1; j <= wt_group.count; ++j)
        m["wt_" + std::to_string(j)] = HourlyProfileSpec{wt_group.hours, wt_group.capacity_kw};
    return m;
}

ScenarioSet MgConfig::make_scenarios() const {
    validate();
    return build_scenarios(profile_map(), n_scenarios, seed, price_mode);
}

MgConfig MgConfig::truncated(int T) const {
    if (T < 1 || T > horizon) throw ConfigError("truncated horizon out of range");
    MgConfig c = *this;
    c.horizon = T;
    auto cut = [T](std::vector<DistributionSpec>& v) { v.resize(T); };
    cut(c.load_hours);
    cut(c.price_sell_hours);
    cut(c.price_buy_hours);
    for (auto& g : c.pv_groups) cut(g.hours);
    cut(c.wt_group.hours);
    c.drp.incentive.resize(T);
    c.drp.penalty.resize(T);
    c.drp.rho0.resize(T);
    if (!c.drp.elasticity.matrix.empty()) {
        c.drp.elasticity.matrix.resize(T);
        for (auto& row : c.drp.elasticity.matrix) row.resize(T);
    }
    return c;
}

MgConfig MgConfig::with_participation(double participation) const {
    MgConfig c = *this;
    c.drp.participation = participation;
    return c;
}

namespace {

json dist_to_json(const DistributionSpec& d) {
    switch (d.kind) {
    case DistKind::Normal: return json{{"kind", "normal"}, {"mu", d.mu}, {"sigma2", d.sigma2}};
    case DistKind::Beta:
        return json{{"kind", "beta"}, {"alpha", d.alpha}, {"beta", d.beta}, {"a", d.a}, {"b", d.b}};
    case DistKind::Weibull: return json{{"kind", "weibull"}, {"k1", d.k1}, {"c1", d.c1}};
    }
    throw ConfigError("unknown distribution kind");
}

DistributionSpec dist_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "normal")
        return DistributionSpec::normal(j.at("mu").get<double>(), j.at("sigma2").get<double>());
    if (kind == "beta")
        return DistributionSpec::beta_ab(j.at("alpha").get<double>(), j.at("beta").get<double>(),
                                         j.value("a", 0.0), j.value("b", 1.0));
    if (kind == "weibull")
        return DistributionSpec::weibull(j.at("k1").get<double>(), j.at("c1").get<double>());
    throw ConfigError("unknown distribution kind: " + kind);
}

std::vector<DistributionSpec> dists_from_json(const json& j) {
    std::vector<DistributionSpec> v;
    for (const auto& e : j) v.push_back(dist_from_json(e));
    return v;
}

json dists_to_json(const std::vector<DistributionSpec>& v) {
    json a = json::array();
    for (const auto& d : v) a.push_back(dist_to_json(d));
    return a;
}

// Scalars broadcast to a full horizon vector.
std::vector<double> vec_from_json(const json& j, int horizon) {
    if (j.is_number()) return std::vector<double>(horizon, j.get<double>());
    auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != horizon)
        throw ConfigError("vector length != horizon");
    return v;
}

} // namespace

std::string config_to_json(const MgConfig& c) {
    json j;
    j["name"] = c.name;
    j["horizon"] = c.horizon;
    j["n_scenarios"] = c.n_scenarios;
    j["seed"] = c.seed;
    j["coupling"] = c.coupling == Coupling::SharedTrade ? "shared_trade" : "none";
    j["price_mode"] = c.price_mode == PriceMode::SharedDraw ? "shared_draw" : "independent";
    json dg = json::array();
    for (const auto& d : c.dgrs)
        dg.push_back(json{{"b_g", d.b_g},
                          {"c_g", d.c_g},
                          {"p_min_kw", d.p_min},
                          {"p_max_kw", d.p_max},
                          {"up_rate_kw", d.up_rate},
                          {"down_rate_kw", d.down_rate},
                          {"startup_cost", d.startup_cost},
                          {"shutdown_cost", d.shutdown_cost}});
    j["dgrs"] = dg;
    j["bess"] = json{{"soc_min", c.bess.soc_min},       {"soc_max", c.bess.soc_max},
                     {"soc_init", c.bess.soc_init},     {"p_ch_max_kw", c.bess.p_ch_max},
                     {"p_disch_max_kw", c.bess.p_disch_max}, {"eta_ch", c.bess.eta_ch},
                     {"eta_disch", c.bess.eta_disch},   {"s_base_kw", c.bess.s_base}};
    j["grid"] = json{{"mctl_kw", c.grid.mctl}};
    json pv = json::array();
    for (const auto& g : c.pv_groups)
        pv.push_back(json{{"bus", g.bus},
                          {"count", g.count},
                          {"capacity_kw", g.capacity_kw},
                          {"hours", dists_to_json(g.hours)}});
    j["pv_groups"] = pv;
    j["wt_group"] = json{{"count", c.wt_group.count},
                         {"capacity_kw", c.wt_group.capacity_kw},
                         {"hours", dists_to_json(c.wt_group.hours)}};
    j["profiles"] = json{{"load", dists_to_json(c.load_hours)},
                         {"price_sell", dists_to_json(c.price_sell_hours)},
                         {"price_buy", dists_to_json(c.price_buy_hours)}};
    json drp;
    drp["participation"] = c.drp.participation;
    drp["incentive"] = c.drp.incentive;
    drp["penalty"] = c.drp.penalty;
    drp["rho0"] = c.drp.rho0;
    if (c.drp.elasticity.matrix.empty())
        drp["elasticity"] = json{{"diagonal", c.drp.elasticity.diagonal},
                                 {"off_diagonal", c.drp.elasticity.off_diagonal}};
    else
        drp["elasticity"] = json{{"matrix", c.drp.elasticity.matrix}};
    j["drp"] = drp;
    j["risk"] = json{{"lambda_grid", c.risk.lambda_grid},
                     {"participation_grid", c.risk.participation_grid}};
    const char* choice = c.solver.choice == SolverChoice::Internal ? "internal"
                       : c.solver.choice == SolverChoice::External ? "external" : "auto";
    j["solver"] = json{{"choice", choice},
                       {"time_limit_sec", c.solver.time_limit_sec},
                       {"rel_gap", c.solver.rel_gap},
                       {"int_tol", c.solver.int_tol}};
    return j.dump(2) + "\n";
}

MgConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    try {
        MgConfig c;
        c.name = j.value("name", std::string("mg"));
        c.horizon = j.value("horizon", 24);
        c.n_scenarios = j.value("n_scenarios", 5);
        c.seed = j.value("seed", std::uint64_t{42});
        const std::string coupling = j.value("coupling", std::string("none"));
        if (coupling == "shared_trade") c.coupling = Coupling::SharedTrade;
        else if (coupling == "none") c.coupling = Coupling::None;
        else throw ConfigError("unknown coupling: " + coupling);
        const std::string pm = j.value("price_mode", std::string("shared_draw"));
        if (pm == "shared_draw") c.price_mode = PriceMode::SharedDraw;
        else if (pm == "independent") c.price_mode = PriceMode::Independent;
        else throw ConfigError("unknown price_mode: " + pm);

        for (const auto& d : j.at("dgrs")) {
            DgrParams g;
            g.b_g = d.at("b_g").get<double>();
            g.c_g = d.value("c_g", 0.0);
            g.p_min = d.value("p_min_kw", 0.0);
            g.p_max = d.at("p_max_kw").get<double>();
            g.up_rate = d.at("up_rate_kw").get<double>();
            g.down_rate = d.at("down_rate_kw").get<double>();
            g.startup_cost = d.value("startup_cost", 0.0);
            g.shutdown_cost = d.value("shutdown_cost", 0.0);
            c.dgrs.push_back(g);
        }
        if (j.contains("bess")) {
            const auto& b = j.at("bess");
            c.bess.soc_min = b.value("soc_min", c.bess.soc_min);
            c.bess.soc_max = b.value("soc_max", c.bess.soc_max);
            c.bess.soc_init = b.value("soc_init", c.bess.soc_init);
            c.bess.p_ch_max = b.value("p_ch_max_kw", c.bess.p_ch_max);
            c.bess.p_disch_max = b.value("p_disch_max_kw", c.bess.p_disch_max);
            c.bess.eta_ch = b.value("eta_ch", c.bess.eta_ch);
            c.bess.eta_disch = b.value("eta_disch", c.bess.eta_disch);
            c.bess.s_base = b.value("s_base_kw", c.bess.s_base);
        }
        if (j.contains("grid")) c.grid.mctl = j.at("grid").value("mctl_kw", c.grid.mctl);
        for (const auto& g : j.at("pv_groups")) {
            PvGroup p;
            p.bus = g.at("bus").get<int>();
            p.count = g.at("count").get<int>();
            p.capacity_kw = g.at("capacity_kw").get<double>();
            p.hours = dists_from_json(g.at("hours"));
            c.pv_groups.push_back(p);
        }
        {
            const auto& g = j.at("wt_group");
            c.wt_group.count = g.at("count").get<int>();
            c.wt_group.capacity_kw = g.at("capacity_kw").get<double>();
            c.wt_group.hours = dists_from_json(g.at("hours"));
        }
        const auto& prof = j.at("profiles");
        c.load_hours = dists_from_json(prof.at("load"));
        c.price_sell_hours = dists_from_json(prof.at("price_sell"));
        c.price_buy_hours = dists_from_json(prof.at("price_buy"));

        if (j.contains("drp")) {
            const auto& d = j.at("drp");
            c.drp.participation = d.value("participation", 0.25);
            c.drp.incentive = vec_from_json(d.value("incentive", json(0.0)), c.horizon);
            c.drp.penalty = vec_from_json(d.value("penalty", json(0.0)), c.horizon);
            c.drp.rho0 = vec_from_json(d.value("rho0", json(0.1)), c.horizon);
            if (d.contains("elasticity")) {
                const auto& e = d.at("elasticity");
                if (e.contains("csv")) {
                    const std::filesystem::path p = e.at("csv").get<std::string>();
                    c.drp.elasticity =
                        ElasticityMatrix::from_csv(p.is_absolute() ? p : base_dir / p);
                } else if (e.contains("matrix")) {
                    c.drp.elasticity.matrix = e.at("matrix").get<std::vector<std::vector<double>>>();
                } else {
                    c.drp.elasticity.diagonal = e.value("diagonal", -0.2);
                    c.drp.elasticity.off_diagonal = e.value("off_diagonal", 0.01);
                }
            }
        } else {
            c.drp.incentive.assign(c.horizon, 0.0);
            c.drp.penalty.assign(c.horizon, 0.0);
            c.drp.rho0.assign(c.horizon, 0.1);
        }

        if (j.contains("risk")) {
            const auto& r = j.at("risk");
            if (r.contains("lambda_grid")) c.risk.lambda_grid = r.at("lambda_grid").get<std::vector<double>>();
            if (r.contains("participation_grid"))
                c.risk.participation_grid = r.at("participation_grid").get<std::vector<double>>();
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            const std::string choice = s.value("choice", std::string("auto"));
            if (choice == "internal") c.solver.choice = SolverChoice::Internal;
            else if (choice == "external") c.solver.choice = SolverChoice::External;
            else if (choice == "auto") c.solver.choice = SolverChoice::Auto;
            else throw ConfigError("unknown solver choice: " + choice);
            c.solver.time_limit_sec = s.value("time_limit_sec", c.solver.time_limit_sec);
            c.solver.rel_gap = s.value("rel_gap", c.solver.rel_gap);
            c.solver.int_tol = s.value("int_tol", c.solver.int_tol);
        }
        c.validate();
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
}

MgConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return config_from_json(os.str(), path.has_parent_path() ? path.parent_path() : ".");
}

MgConfig default_config() {
    MgConfig c;
    c.name = "six-bus-mg";
    c.horizon = 24;
    c.n_scenarios = 5;
    c.seed = 42;
    // The study pipeline fixes the day-ahead trade schedule across scenarios;
    // with fully scenario-wise recourse the EDR budget cannot bind (each
    // scenario is already at its own maximum).
    c.coupling = Coupling::SharedTrade;

    c.dgrs = {
        DgrParams{0.7, 0.0, 0.0, 4.0, 3.0, 3.0, 0.0, 0.0},
        DgrParams{0.25, 0.0, 0.0, 6.0, 5.0, 5.0, 0.0, 0.0},
        DgrParams{0.5, 0.0, 0.0, 9.0, 8.0, 8.0, 0.0, 0.0},
    };
    c.bess = BessParams{};  // 20-100%, init 70%, +/-50 kW, unity efficiency, 50 kW base
    c.grid = GridParams{};  // 37.5 kW

    const std::vector<double> load_mu = {15, 14.5, 14, 14, 14.5, 16, 19, 23, 26, 27, 27.5, 28,
                                         27.5, 27, 26.5, 27, 29, 33, 36, 35, 31, 26, 21, 17};
    const std::vector<double> sell_mu = {0.10, 0.095, 0.09, 0.09, 0.095, 0.11, 0.16, 0.22,
                                         0.26, 0.28, 0.30, 0.31, 0.30, 0.29, 0.28, 0.30,
                                         0.38, 0.52, 0.60, 0.58, 0.48, 0.30, 0.20, 0.14};
    // Relative price spread: volatile at the evening peak, calm on the
    // shoulders, so a risk-averse trade schedule has somewhere to go.
    const std::vector<double> sell_cv = {0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.07, 0.07,
                                         0.07, 0.07, 0.07, 0.07, 0.07, 0.07, 0.07, 0.07,
                                         0.04, 0.26, 0.30, 0.26, 0.04, 0.05, 0.05, 0.05};
    const std::vector<double> pv_cf = {0, 0, 0, 0, 0, 0.02, 0.10, 0.25, 0.42, 0.58, 0.70, 0.75,
                                       0.74, 0.66, 0.54, 0.40, 0.25, 0.12, 0.03, 0, 0, 0, 0, 0};
    const std::vector<double> wt_mean = {10.5, 10.5, 10.5, 10, 10, 9.5, 9, 8.5, 8, 8, 8, 8,
                                         8, 8, 8.5, 8.5, 9, 9, 9.5, 9.5, 10, 10, 10.5, 10.5};

    for (int t = 0; t < 24; ++t) {
        const double ls = 0.02 * load_mu[t];
        c.load_hours.push_back(DistributionSpec::normal(load_mu[t], ls * ls));
        const double ss = sell_cv[t] * sell_mu[t];
        c.price_sell_hours.push_back(DistributionSpec::normal(sell_mu[t], ss * ss));
        const double bm = 1.25 * sell_mu[t];
        const double bs = sell_cv[t] * bm;
        c.price_buy_hours.push_back(DistributionSpec::normal(bm, bs * bs));
    }

    std::vector<DistributionSpec> pv_hours;
    for (int t = 0; t < 24; ++t) {
        const double m = pv_cf[t];
        if (m <= 0.0) {
            pv_hours.push_back(DistributionSpec::normal(0.0, 0.0));
        } else {
            const double kappa = 20.0;
            pv_hours.push_back(DistributionSpec::beta_ab(m * kappa, (1.0 - m) * kappa, 0.0, 1.0));
        }
    }
    // 32 kW on bus 1 over four units, 16 kW on bus 2 over two.
    c.pv_groups = {PvGroup{1, 4, 8.0, pv_hours}, PvGroup{2, 2, 8.0, pv_hours}};

    std::vector<DistributionSpec> wt_hours;
    const double wt_shape = 5.0;
    const double gamma_mean = std::exp(std::lgamma(1.0 + 1.0 / wt_shape));
    for (int t = 0; t < 24; ++t)
        wt_hours.push_back(DistributionSpec::weibull(wt_shape, wt_mean[t] / gamma_mean));
    c.wt_group = WtGroup{2, 21.0, wt_hours}; // 42 kW total on bus 3

    c.drp.participation = 0.25;
    c.drp.incentive.assign(24, 0.10);
    c.drp.penalty.assign(24, 0.0);
    c.drp.rho0 = sell_mu;

    c.validate();
    return c;
}

} // namespace mgsched
