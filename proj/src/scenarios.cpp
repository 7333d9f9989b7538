#include "mgsched/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mgsched/csv.hpp"

namespace mgsched {

void HourlyProfileSpec::validate(int horizon) const {
    if (static_cast<int>(hours.size()) != horizon)
        throw ConfigError("profile must have exactly " + std::to_string(horizon) + " hourly entries");
    if (!(scale > 0.0))
        throw ConfigError("profile scale must be > 0");
    for (const auto& h : hours) h.validate();
}

void ScenarioSet::validate() const {
    if (scenarios.empty()) throw ConfigError("scenario set is empty");
    const int T = horizon();
    const int npv = n_pv();
    const int nwt = n_wt();
    double psum = 0.0;
    for (const auto& sc : scenarios) {
        if (static_cast<int>(sc.load.size()) != T || static_cast<int>(sc.price_sell.size()) != T
            || static_cast<int>(sc.price_buy.size()) != T)
            throw ConfigError("scenario arrays disagree on horizon");
        if (static_cast<int>(sc.pv_max.size()) != npv || static_cast<int>(sc.wt_max.size()) != nwt)
            throw ConfigError("scenario unit counts disagree");
        auto nonneg = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && std::isfinite(x); });
        };
        if (!nonneg(sc.load) || !nonneg(sc.price_sell) || !nonneg(sc.price_buy))
            throw ConfigError("negative or non-finite load/price in scenario");
        for (const auto& u : sc.pv_max)
            if (static_cast<int>(u.size()) != T || !nonneg(u)) throw ConfigError("bad pv_max series");
        for (const auto& u : sc.wt_max)
            if (static_cast<int>(u.size()) != T || !nonneg(u)) throw ConfigError("bad wt_max series");
        if (!(sc.prob > 0.0 && sc.prob <= 1.0)) throw ConfigError("scenario prob outside (0,1]");
        psum += sc.prob;
    }
    if (std::abs(psum - 1.0) > 1e-12)
        throw ConfigError("scenario probabilities do not sum to 1");
}

namespace {

// RES cap semantics: a Weibull draw is the capacity in kW, clamped to
// [0, scale]; anything else is a capacity factor clamped to [0, 1].
double sample_res_cap(const DistributionSpec& spec, double scale, Rng& rng) {
    const double v = sample(spec, rng);
    if (spec.kind == DistKind::Weibull) return std::clamp(v, 0.0, scale);
    return std::clamp(v, 0.0, 1.0) * scale;
}

} // namespace

ScenarioSet build_scenarios(const std::map<std::string, HourlyProfileSpec>& profiles,
                            int n_scenarios, std::uint64_t seed, PriceMode price_mode) {
    if (n_scenarios < 1) throw ConfigError("n_scenarios must be >= 1");
    auto need = [&](const std::string& key) -> const HourlyProfileSpec& {
        auto it = profiles.find(key);
        if (it == profiles.end()) throw ConfigError("missing profile: " + key);
        return it->second;
    };
    const auto& load_p = need("load");
    const auto& sell_p = need("price_sell");
    const auto& buy_p = need("price_buy");
    const int T = static_cast<int>(load_p.hours.size());
    if (T < 1) throw ConfigError("empty load profile");
    load_p.validate(T);
    sell_p.validate(T);
    buy_p.validate(T);

    std::vector<const HourlyProfileSpec*> pv, wt;
    for (int i = 1;; ++i) {
        auto it = profiles.find("pv_" + std::to_string(i));
        if (it == profiles.end()) break;
        it->second.validate(T);
        pv.push_back(&it->second);
    }
    for (int j = 1;; ++j) {
        auto it = profiles.find("wt_" + std::to_string(j));
        if (it == profiles.end()) break;
        it->second.validate(T);
        wt.push_back(&it->second);
    }

    ScenarioSet set;
    set.seed = seed;
    set.scenarios.resize(n_scenarios);
    for (int s = 0; s < n_scenarios; ++s) {
        Rng rng(Rng::substream_seed(seed, static_cast<std::uint64_t>(s)));
        Scenario& sc = set.scenarios[s];
        sc.prob = 1.0 / n_scenarios;
        sc.load.resize(T);
        sc.price_sell.resize(T);
        sc.price_buy.resize(T);
        for (int t = 0; t < T; ++t)
            sc.load[t] = sample_nonnegative_normal(load_p.hours[t], rng) * load_p.scale;
        for (int t = 0; t < T; ++t) {
            const auto& ds = sell_p.hours[t];
            const auto& db = buy_p.hours[t];
            const bool shared = price_mode == PriceMode::SharedDraw
                              && ds.kind == DistKind::Normal && db.kind == DistKind::Normal;
            if (shared) {
                // One standard-normal draw moves both prices; redraw once if
                // either goes negative, then clamp.
                double z = (ds.sigma2 == 0.0 && db.sigma2 == 0.0) ? 0.0 : rng.normal();
                double sell = ds.mu + std::sqrt(ds.sigma2) * z;
                double buy = db.mu + std::sqrt(db.sigma2) * z;
                if (sell < 0.0 || buy < 0.0) {
                    z = rng.normal();
                    sell = ds.mu + std::sqrt(ds.sigma2) * z;
                    buy = db.mu + std::sqrt(db.sigma2) * z;
                }
                sc.price_sell[t] = std::max(sell, 0.0) * sell_p.scale;
                sc.price_buy[t] = std::max(buy, 0.0) * buy_p.scale;
            } else {
                sc.price_sell[t] = sample_nonnegative_normal(ds, rng) * sell_p.scale;
                sc.price_buy[t] = sample_nonnegative_normal(db, rng) * buy_p.scale;
            }
        }
        sc.pv_max.resize(pv.size());
        for (size_t i = 0; i < pv.size(); ++i) {
            sc.pv_max[i].resize(T);
            for (int t = 0; t < T; ++t)
                sc.pv_max[i][t] = sample_res_cap(pv[i]->hours[t], pv[i]->scale, rng);
        }
        sc.wt_max.resize(wt.size());
        for (size_t j = 0; j < wt.size(); ++j) {
            sc.wt_max[j].resize(T);
            for (int t = 0; t < T; ++t)
                sc.wt_max[j][t] = sample_res_cap(wt[j]->hours[t], wt[j]->scale, rng);
        }
    }
    set.validate();
    return set;
}

namespace {

csv::Table series_table(const ScenarioSet& set, const std::function<double(const Scenario&, int)>& get) {
    csv::Table t;
    t.header.push_back("hour");
    for (int s = 0; s < set.size(); ++s) t.header.push_back("s" + std::to_string(s + 1));
    for (int h = 0; h < set.horizon(); ++h) {
        std::vector<std::string> row;
        row.push_back(std::to_string(h + 1));
        for (const auto& sc : set.scenarios) row.push_back(csv::format_number(get(sc, h)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<std::vector<double>> read_series(const std::filesystem::path& p, int T_expected) {
    csv::Table t = csv::read_table(p);
    if (t.header.size() < 2) throw ConfigError("bad scenario csv: " + p.string());
    const int S = static_cast<int>(t.header.size()) - 1;
    if (T_expected > 0 && static_cast<int>(t.rows.size()) != T_expected)
        throw ConfigError("scenario csv horizon mismatch: " + p.string());
    std::vector<std::vector<double>> out(S);
    for (auto& col : out) col.resize(t.rows.size());
    for (size_t h = 0; h < t.rows.size(); ++h) {
        if (t.rows[h].size() != t.header.size()) throw ConfigError("ragged scenario csv: " + p.string());
        for (int s = 0; s < S; ++s) out[s][h] = std::stod(t.rows[h][s + 1]);
    }
    return out;
}

} // namespace

void write_scenario_bundle(const ScenarioSet& set, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    csv::write_table(dir / "load.csv", series_table(set, [](const Scenario& sc, int h) { return sc.load[h]; }));
    csv::write_table(dir / "price_sell.csv",
                     series_table(set, [](const Scenario& sc, int h) { return sc.price_sell[h]; }));
    csv::write_table(dir / "price_buy.csv",
                     series_table(set, [](const Scenario& sc, int h) { return sc.price_buy[h]; }));
    for (int i = 0; i < set.n_pv(); ++i)
        csv::write_table(dir / ("pv_max_" + std::to_string(i + 1) + ".csv"),
                         series_table(set, [i](const Scenario& sc, int h) { return sc.pv_max[i][h]; }));
    for (int j = 0; j < set.n_wt(); ++j)
        csv::write_table(dir / ("wt_max_" + std::to_string(j + 1) + ".csv"),
                         series_table(set, [j](const Scenario& sc, int h) { return sc.wt_max[j][h]; }));
}

ScenarioSet read_scenario_bundle(const std::filesystem::path& dir, int n_pv, int n_wt) {
    auto load = read_series(dir / "load.csv", 0);
    const int S = static_cast<int>(load.size());
    const int T = S > 0 ? static_cast<int>(load[0].size()) : 0;
    auto sell = read_series(dir / "price_sell.csv", T);
    auto buy = read_series(dir / "price_buy.csv", T);
    ScenarioSet set;
    set.scenarios.resize(S);
    for (int s = 0; s < S; ++s) {
        set.scenarios[s].load = load[s];
        set.scenarios[s].price_sell = sell[s];
        set.scenarios[s].price_buy = buy[s];
        set.scenarios[s].prob = 1.0 / S;
        set.scenarios[s].pv_max.resize(n_pv);
        set.scenarios[s].wt_max.resize(n_wt);
    }
    for (int i = 0; i < n_pv; ++i) {
        auto series = read_series(dir / ("pv_max_" + std::to_string(i + 1) + ".csv"), T);
        for (int s = 0; s < S; ++s) set.scenarios[s].pv_max[i] = series[s];
    }
    for (int j = 0; j < n_wt; ++j) {
        auto series = read_series(dir / ("wt_max_" + std::to_string(j + 1) + ".csv"), T);
        for (int s = 0; s < S; ++s) set.scenarios[s].wt_max[j] = series[s];
    }
    set.validate();
    return set;
}

} // namespace mgsched
