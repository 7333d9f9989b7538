#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "mgsched/milp/branch_bound.hpp"
#include "mgsched/milp/external.hpp"
#include "mgsched/milp/mps.hpp"
#include "test_util.hpp"

using namespace mgsched::milp;
namespace fs = std::filesystem;

namespace {

MilpModel knapsack() {
    MilpModel m;
    m.name = "knap";
    m.sense = Sense::Max;
    const int x = m.add_var("x", 0.0, 1.0, true);
    const int y = m.add_var("y", 0.0, 1.0, true);
    m.add_row("w", {{x, 6.0}, {y, 5.0}}, Rel::Le, 10.0);
    m.objective = {{x, 5.0}, {y, 4.0}};
    return m;
}

std::string scipy_bridge_cmd() {
    return std::string("python3 ") + MGSCHED_SOURCE_DIR + "/tools/mps_solve.py --mps {mps} --out {sol}";
}

bool scipy_available() {
    static const int rc = std::system("python3 -c 'import scipy.optimize' >/dev/null 2>&1");
    return rc == 0;
}

} // namespace

TEST_CASE("mps text is deterministic and carries the format sections") {
    const MilpModel m = knapsack();
    const std::string a = export_mps(m);
    const std::string b = export_mps(m);
    CHECK(a == b);
    for (const char* needle : {"NAME", "OBJSENSE", "MAX", "ROWS", "COLUMNS", "'INTORG'",
                               "'INTEND'", "RHS", "RANGES", "BOUNDS", "ENDATA"})
        CHECK(a.find(needle) != std::string::npos);
}

TEST_CASE("knapsack round trips through MPS with the same optimum") {
    const MilpModel m = knapsack();
    const MilpModel back = import_mps(export_mps(m));
    CHECK(back.n_vars() == m.n_vars());
    CHECK(back.n_integer() == m.n_integer());
    const auto s1 = branch_and_bound(m);
    const auto s2 = branch_and_bound(back);
    REQUIRE(s1.status == SolStatus::Optimal);
    REQUIRE(s2.status == SolStatus::Optimal);
    CHECK(s1.objective == doctest::Approx(s2.objective).epsilon(1e-12));
}

TEST_CASE("objective constants survive the round trip") {
    MilpModel m = knapsack();
    m.obj_constant = 3.25;
    const MilpModel back = import_mps(export_mps(m));
    CHECK(back.obj_constant == doctest::Approx(3.25));
    const auto s1 = branch_and_bound(m);
    const auto s2 = branch_and_bound(back);
    CHECK(s1.objective == doctest::Approx(s2.objective).epsilon(1e-12));
}

TEST_CASE("random models round trip with identical optima") {
    std::mt19937_64 rng(99);
    SolveOptions opts;
    opts.rel_gap = 1e-9;
    int compared = 0;
    for (int it = 0; it < 50; ++it) {
        CAPTURE(it);
        const MilpModel m = mgtest::random_milp(rng, 6, 5);
        MilpModel back;
        try {
            back = import_mps(export_mps(m));
        } catch (const mgsched::Error& e) {
            CAPTURE(e.what());
            CHECK(false);
            continue;
        }
        const auto s1 = branch_and_bound(m, opts);
        const auto s2 = branch_and_bound(back, opts);
        CHECK(s1.status == s2.status);
        if (s1.status == SolStatus::Optimal && s2.status == SolStatus::Optimal) {
            CHECK(s1.objective == doctest::Approx(s2.objective).epsilon(1e-6));
            ++compared;
        }
    }
    CHECK(compared > 20);
}

TEST_CASE("one-sided and free bounds survive the round trip") {
    MilpModel m;
    m.name = "bounds";
    m.sense = Sense::Min;
    const int free_var = m.add_var("f", -kInf, kInf);
    const int neg = m.add_var("neg", -kInf, -2.0);
    const int fixed = m.add_var("fx", 3.5, 3.5);
    const int plain = m.add_var("x", 1.0, 10.0);
    m.add_row("tie", {{free_var, 1.0}, {neg, 1.0}, {fixed, 1.0}, {plain, 1.0}}, Rel::Ge, 0.0);
    m.objective = {{free_var, 1.0}, {neg, -1.0}, {plain, 2.0}};
    const MilpModel back = import_mps(export_mps(m));
    REQUIRE(back.n_vars() == 4);
    CHECK(back.vars[0].lb == -kInf);
    CHECK(back.vars[0].ub == kInf);
    CHECK(back.vars[1].lb == -kInf);
    CHECK(back.vars[1].ub == doctest::Approx(-2.0));
    CHECK(back.vars[2].lb == doctest::Approx(3.5));
    CHECK(back.vars[2].ub == doctest::Approx(3.5));
    CHECK(back.vars[3].lb == doctest::Approx(1.0));
    CHECK(back.vars[3].ub == doctest::Approx(10.0));
    const auto a = solve_lp(m);
    const auto b = solve_lp(back);
    REQUIRE(a.status == b.status);
    if (a.status == SolStatus::Optimal)
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("ranges expand into two-sided rows on import") {
    const char* text = R"(NAME ranged
ROWS
 N  OBJ
 L  r1
COLUMNS
    x  OBJ  1  r1  1
RHS
    RHS  r1  10
RANGES
    RNG  r1  4
BOUNDS
 LO BND  x  0
 PL BND  x
ENDATA
)";
    MilpModel m = import_mps(text);
    m.sense = Sense::Max;
    const auto up = solve_lp(m);
    REQUIRE(up.status == SolStatus::Optimal);
    CHECK(up.objective == doctest::Approx(10.0));
    m.sense = Sense::Min;
    const auto dn = solve_lp(m);
    REQUIRE(dn.status == SolStatus::Optimal);
    CHECK(dn.objective == doctest::Approx(6.0));
}

TEST_CASE("external bridge requires both placeholders and a working command") {
    const MilpModel m = knapsack();
    CHECK_THROWS_AS(external_solve(m, "solver --in {mps}"), mgsched::BridgeError);
    CHECK_THROWS_AS(external_solve(m, "definitely-not-a-solver {mps} {sol}"),
                    mgsched::BridgeError);
}

TEST_CASE("external bridge solves via the scipy front end") {
    if (!scipy_available()) return; // bridge exercised only where scipy exists
    const MilpModel m = knapsack();
    const auto sol = external_solve(m, scipy_bridge_cmd());
    REQUIRE(sol.status == SolStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-9));
    const auto internal = branch_and_bound(m);
    CHECK(sol.objective == doctest::Approx(internal.objective).epsilon(1e-6));
}

TEST_CASE("external bridge agrees with the internal solver on random models") {
    if (!scipy_available()) return;
    std::mt19937_64 rng(7);
    SolveOptions opts;
    opts.rel_gap = 1e-9;
    int agreed = 0;
    for (int it = 0; it < 8; ++it) {
        CAPTURE(it);
        const MilpModel m = mgtest::random_milp(rng, 6, 5);
        const auto internal = branch_and_bound(m, opts);
        if (internal.status == SolStatus::Infeasible) {
            const auto ext = external_solve(m, scipy_bridge_cmd());
            CHECK(ext.status == SolStatus::Infeasible);
            continue;
        }
        if (internal.status != SolStatus::Optimal) continue;
        const auto ext = external_solve(m, scipy_bridge_cmd());
        REQUIRE(ext.status == SolStatus::Optimal);
        CHECK(ext.objective == doctest::Approx(internal.objective).epsilon(1e-6));
        ++agreed;
    }
    CHECK(agreed >= 3);
}

TEST_CASE("csv solution files are parsed too") {
    // A stand-in solver that answers in the two-column CSV layout.
    const fs::path script = fs::temp_directory_path() / "mgsched_fake_solver.sh";
    {
        std::ofstream os(script);
        os << "#!/bin/sh\n"
           << "# args: mps-file sol-file\n"
           << "printf 'name,value\\nstatus,optimal\\nx,1\\ny,0\\n' > \"$2\"\n";
    }
    fs::permissions(script, fs::perms::owner_all);
    const MilpModel m = knapsack();
    const auto sol = external_solve(m, std::string("sh ") + script.string() + " {mps} {sol}");
    REQUIRE(sol.status == SolStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(5.0));
    fs::remove(script);
}

TEST_CASE("claimed-optimal but infeasible output is a bridge error") {
    const fs::path script = fs::temp_directory_path() / "mgsched_lying_solver.sh";
    {
        std::ofstream os(script);
        os << "#!/bin/sh\nprintf 'status optimal\\nx 1\\ny 1\\n' > \"$2\"\n";
    }
    fs::permissions(script, fs::perms::owner_all);
    const MilpModel m = knapsack(); // x=1,y=1 violates the weight row
    CHECK_THROWS_AS(external_solve(m, std::string("sh ") + script.string() + " {mps} {sol}"),
                    mgsched::BridgeError);
    fs::remove(script);
}
