#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "mgsched/csv.hpp"
#include "mgsched/milp/mps.hpp"

using namespace mgsched;
namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* p = std::getenv("MGSCHED_BIN");
    REQUIRE_MESSAGE(p != nullptr, "MGSCHED_BIN must point at the built CLI");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("generate is deterministic per seed") {
    TempDir a("mgsched_cli_gen_a"), b("mgsched_cli_gen_b");
    REQUIRE(run("generate --horizon 6 --out " + a.path.string()) == 0);
    REQUIRE(run("generate --horizon 6 --out " + b.path.string()) == 0);
    for (const char* f : {"load.csv", "price_sell.csv", "price_buy.csv", "pv_max_1.csv",
                          "wt_max_2.csv"}) {
        CAPTURE(f);
        CHECK(slurp(a.path / f) == slurp(b.path / f));
    }
    // 5 scenarios -> 5 data columns; horizon 6 -> 6 rows.
    const auto t = csv::read_table(a.path / "load.csv");
    CHECK(t.header.size() == 6);
    CHECK(t.rows.size() == 6);
    TempDir c("mgsched_cli_gen_c");
    REQUIRE(run("generate --horizon 6 --seed 7 --out " + c.path.string()) == 0);
    CHECK(slurp(a.path / "load.csv") != slurp(c.path / "load.csv"));
}

TEST_CASE("solve produces a schedule, an audit and exit 0") {
    TempDir out("mgsched_cli_solve");
    REQUIRE(run("solve --horizon 6 --scenarios 2 --solver internal --out " + out.path.string()) == 0);
    CHECK(fs::exists(out.path / "schedule.csv"));
    CHECK(fs::exists(out.path / "audit.csv"));
    CHECK(fs::exists(out.path / "profit.csv"));
    const auto audit = csv::read_table(out.path / "audit.csv");
    CHECK(audit.rows.empty()); // clean audit: header only
    const auto sched = csv::read_table(out.path / "schedule.csv");
    CHECK(sched.rows.size() == 6u * 2u); // one row per (t, s)
}

TEST_CASE("bad config file exits with the config code") {
    TempDir out("mgsched_cli_bad");
    const fs::path cfg = out.path / "broken.json";
    std::ofstream(cfg) << "{ not json";
    CHECK(run("solve --config " + cfg.string() + " --out " + out.path.string()) == 2);
    CHECK(run("solve --config /nonexistent/nope.json --out " + out.path.string()) == 2);
}

TEST_CASE("infeasible instances exit with the infeasible code") {
    TempDir out("mgsched_cli_infeasible");
    // Load far beyond generation plus the trade cap.
    const fs::path cfg = out.path / "cfg.json";
    {
        std::ostringstream patch;
        patch << "import json,sys\n"
              << "d=json.load(open('" << MGSCHED_SOURCE_DIR << "/data/default_config.json'))\n"
              << "d['profiles']['load']=[{'kind':'normal','mu':500.0,'sigma2':0.0}]*24\n"
              << "json.dump(d,open('" << cfg.string() << "','w'))\n";
        std::ofstream(out.path / "patch.py") << patch.str();
    }
    REQUIRE(std::system(("python3 " + (out.path / "patch.py").string()).c_str()) == 0);
    CHECK(run("solve --horizon 3 --solver internal --config " + cfg.string() + " --out "
              + out.path.string()) == 3);
}

TEST_CASE("export-mps writes a deterministic, importable model") {
    TempDir out("mgsched_cli_mps");
    const fs::path f1 = out.path / "m1.mps";
    const fs::path f2 = out.path / "m2.mps";
    REQUIRE(run("export-mps --horizon 4 --scenarios 2 --mps-out " + f1.string()) == 0);
    REQUIRE(run("export-mps --horizon 4 --scenarios 2 --mps-out " + f2.string()) == 0);
    const std::string text = slurp(f1);
    CHECK(text == slurp(f2));
    const auto model = milp::import_mps(text);
    CHECK(model.n_vars() > 0);
    CHECK(model.n_rows() > 0);
    CHECK(model.sense == milp::Sense::Max);
}

TEST_CASE("cdrc export carries the risk block") {
    TempDir out("mgsched_cli_mps_cdrc");
    const fs::path base = out.path / "wcdrc.mps";
    const fs::path cdrc = out.path / "cdrc.mps";
    REQUIRE(run("export-mps --horizon 4 --scenarios 2 --solver internal --risk wcdrc --mps-out "
                + base.string()) == 0);
    REQUIRE(run("export-mps --horizon 4 --scenarios 2 --solver internal --risk cdrc --lambda 0.9 "
                "--mps-out " + cdrc.string()) == 0);
    const auto m_base = milp::import_mps(slurp(base));
    const auto m_cdrc = milp::import_mps(slurp(cdrc));
    // S risk variables and flags, 3S big-M rows plus one coupling row.
    CHECK(m_cdrc.n_vars() == m_base.n_vars() + 2 * 2);
    CHECK(m_cdrc.n_rows() == m_base.n_rows() + 3 * 2 + 1);
    CHECK(slurp(cdrc).find("eq31_edr") != std::string::npos);
}

TEST_CASE("a broken external solver maps to the solver-failure exit code") {
    TempDir out("mgsched_cli_badsolver");
    const std::string cmd = "MG_EXT_SOLVER='definitely-not-a-solver {mps} {sol}' " + binary()
                          + " solve --horizon 3 --scenarios 1 --solver external --out "
                          + out.path.string() + " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 4);
}

TEST_CASE("usage errors do not crash") {
    CHECK(run("definitely-not-a-command") != 0);
    CHECK(run("solve --risk bogus") != 0);
}
