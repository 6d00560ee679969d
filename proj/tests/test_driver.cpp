#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rept/driver.hpp"
#include "rept/snapshot.hpp"

using namespace rept;

namespace {

SimulationParams small_params() {
    SimulationParams p;
    p.n = 8;
    p.n_t = 20;
    p.n_s = 8;
    p.n_q = 32;
    p.t_max = 1.0;
    p.dt = 0.05;  // = weissenberg * t_max / n_t
    p.t_end = 1.0;
    p.output_every = 5;
    return p;
}

}  // namespace

TEST_CASE("nondimensionalize reference cases") {
    DimensionalInputs d;
    d.rho = d.eta_s = d.length = d.velocity = 1.0;
    d.g_e = 1.0;  // eta_e = L G_e / V = 1, symmetric split
    d.ell = 1.0;
    d.d_e = 1.0;
    NondimensionalTriple t = nondimensionalize(d);
    CHECK(t.reynolds == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.omega == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.weissenberg == doctest::Approx(1.0).epsilon(1e-15));

    d.g_e = 0.0;  // eta_e = 0 would give omega = 0, outside (0,1)
    CHECK_THROWS_AS(nondimensionalize(d), std::invalid_argument);
    d.g_e = 1.0;
    d.ell = 2.0;
    d.d_e = 0.5;
    CHECK(nondimensionalize(d).weissenberg == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("config parsing, overrides, and lockstep validation") {
    std::istringstream in(
        "# sample run\n"
        "[flow]\n"
        "reynolds = 2.5\n"
        "omega = 0.3   # inline comment\n"
        "[polymer]\n"
        "weissenberg = 2.0\n"
        "mode = \"ia\"\n"
        "p_max = 99\n"
        "[grids]\n"
        "n = 16\n"
        "n_t = 40\n"
        "t_max = 2.0\n"
        "dt = 0.1\n"
        "[scenario]\n"
        "name = startup_shear\n"
        "amplitude = 0.02\n"
        "t_end = 3.0\n"
        "[output]\n"
        "every = 2\n"
        "abort_on_violation = false\n");
    SimulationParams p = parse_config(in);
    CHECK(p.reynolds == 2.5);
    CHECK(p.omega == 0.3);
    CHECK(p.weissenberg == 2.0);
    CHECK(p.mode == "ia");
    CHECK(p.p_max == 99);
    CHECK(p.n == 16);
    CHECK(p.scenario == "startup_shear");
    CHECK(p.t_end == 3.0);
    CHECK(p.output_every == 2);
    CHECK(!p.abort_on_violation);
    CHECK_NOTHROW(p.validate());  // dt = 2.0 * 2.0/40 holds

    apply_override(p, "flow.reynolds=4");
    CHECK(p.reynolds == 4.0);
    CHECK_THROWS_AS(apply_override(p, "flow.bogus=1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(p, "grids.n=8.5"), std::invalid_argument);

    p.dt = 0.07;  // breaks dt = We * t_max / n_t
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    std::istringstream bad("reynolds = 1\n");
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);  // key outside section
}

TEST_CASE("snapshot roundtrip") {
    const std::string path = "/tmp/rept_test_snapshot.bin";
    std::vector<double> data{1.0, -2.5, 3.25e-8, 0.0};
    write_snapshot(path, "rept test dims 2 2", data);
    Snapshot s = read_snapshot(path);
    CHECK(s.header == "rept test dims 2 2");
    REQUIRE(s.data.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.data[i] == data[i]);

    KernelField k = uniform_kernel(3, 2, 4, 0.25);
    write_kernel_snapshot(path, k);
    Snapshot ks = read_snapshot(path);
    CHECK(ks.header.find("rept kernel dims 3 2 2 4") == 0);
    CHECK(ks.data.size() == k.v.size());
    CHECK(ks.data == k.v);
    std::remove(path.c_str());
}

TEST_CASE("rest scenario is a fixed point with an identically quiet CSV") {
    SimulationParams p = small_params();
    p.t_end = 2.0;  // 40 steps
    std::ostringstream csv;
    RunResult r = run_simulation(p, csv);
    CHECK(r.steps == 40);
    CHECK(r.all_green);
    CHECK(r.worst.sigma_max <= 1e-12);
    CHECK(r.worst.energy <= 1e-24);
    CHECK(r.worst.k_low_margin == 0.0);
    CHECK(r.worst.k_high_margin == 0.0);
    CHECK(r.worst.min_det == 1.0);
    CHECK(r.final_monitors.decay_ratio <= 1.0 + 1e-12);
    // every emitted row keeps the sigma column at rounding level
    std::istringstream rows(csv.str());
    std::string line;
    std::getline(rows, line);
    CHECK(line == csv_header());
    int nrows = 0;
    while (std::getline(rows, line)) {
        ++nrows;
        std::istringstream cells(line);
        std::string cell;
        for (int c = 0; c < 4; ++c) std::getline(cells, cell, ',');
        CHECK(std::abs(std::stod(cell)) <= 1e-12);  // sigma_max column
    }
    CHECK(nrows == 9);  // initial row + every 5th of 40
}

TEST_CASE("startup shear runs with every monitor green") {
    SimulationParams p = small_params();
    p.scenario = "startup_shear";
    p.amplitude = 0.05;
    std::ostringstream csv;
    RunResult r = run_simulation(p, csv);
    CHECK(r.all_green);
    CHECK(r.worst.sigma_max > 0.0);
    CHECK(r.worst.sigma_max <= p.omega * (1.0 + 1.0 / std::sqrt(2.0)) + 1e-6);
    CHECK(std::abs(r.worst.min_det - 1.0) < 1e-10);
    CHECK(r.worst.m_min >= -1e-10);
    CHECK(r.worst.decay_ratio <= 1.0 + 1e-6);
}

TEST_CASE("identical configs produce bit-identical CSVs") {
    SimulationParams p = small_params();
    p.scenario = "startup_shear";
    p.amplitude = 0.08;
    std::ostringstream a, b;
    run_simulation(p, a);
    run_simulation(p, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("nan") == std::string::npos);
}

TEST_CASE("newtonian taylor_green decays analytically with zero stress") {
    SimulationParams p = small_params();
    p.mode = "newtonian";
    p.scenario = "taylor_green";
    p.amplitude = 0.3;
    p.n = 16;
    p.dt = 0.01;
    p.t_max = 0.2;  // keeps the age lockstep, kernel unused in this mode
    p.t_end = 0.5;
    p.output_every = 10;
    std::ostringstream csv;
    RunResult r = run_simulation(p, csv);
    CHECK(r.worst.sigma_max == 0.0);
    const double nu = (1.0 - p.omega) / p.reynolds;
    const double expect = r.worst.energy * std::exp(-4.0 * nu * p.t_end);
    CHECK(r.final_monitors.energy == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("ia mode runs and stresses stay bounded") {
    SimulationParams p = small_params();
    p.mode = "ia";
    p.scenario = "startup_shear";
    p.amplitude = 0.05;
    p.p_max = 99;
    std::ostringstream csv;
    RunResult r = run_simulation(p, csv);
    CHECK(r.all_green);
    CHECK(r.worst.sigma_max > 0.0);
    CHECK(r.worst.sigma_max <= p.omega * (1.0 + 1.0 / std::sqrt(2.0)) + 1e-6);
    // short age horizon t_max = 1: the truncated mass is e^{-1}-sized
    CHECK(r.worst.tail_budget == doctest::Approx(0.509).epsilon(1e-2));
}

TEST_CASE("validate_scenario") {
    SimulationParams p = small_params();
    ValidationReport ok = Simulation::validate_scenario(p);
    CHECK(ok.all_pass());
    // the monotone-memory precondition fails for the equilibrium kernel
    // (transient rise near s = 0) and is downgraded to informational
    REQUIRE(ok.find("memory_monotone") != nullptr);
    CHECK(ok.find("memory_monotone")->where.find("informational") != std::string::npos);

    SimulationParams tight = p;
    tight.gamma = 2.0;  // identity data has det 1 < 2
    ValidationReport bad = Simulation::validate_scenario(tight);
    REQUIRE(bad.find("det_floor") != nullptr);
    CHECK(!bad.find("det_floor")->pass);
    CHECK(bad.find("det_floor")->value == doctest::Approx(1.0));

    SimulationParams broken = p;
    broken.dt = 0.03;
    ValidationReport rep = Simulation::validate_scenario(broken);
    CHECK(!rep.find("params")->pass);
    CHECK(rep.checks.size() == 1);
}

TEST_CASE("invariant violations abort or are recorded") {
    SimulationParams p = small_params();
    p.gamma = 1.5;  // gamma_tilde = sqrt(3) > sqrt(2), so norm_floor trips
    std::ostringstream csv;
    CHECK_THROWS_AS(run_simulation(p, csv), std::runtime_error);

    p.abort_on_violation = false;
    std::ostringstream csv2;
    RunResult r = run_simulation(p, csv2);
    CHECK(!r.all_green);
    bool norm_red = false;
    for (const CheckResult& c : r.verdicts)
        if (c.name == "norm_floor") norm_red = !c.pass;
    CHECK(norm_red);
}

TEST_CASE("run_to_disk writes csv, manifest and snapshots") {
    namespace fs = std::filesystem;
    SimulationParams p = small_params();
    p.scenario = "startup_shear";
    p.amplitude = 0.05;
    p.t_end = 0.5;
    p.snapshot_every = 5;
    p.output_dir = "/tmp/rept_test_run";
    fs::remove_all(p.output_dir);
    RunResult r = run_to_disk(p);
    CHECK(r.all_green);
    CHECK(fs::exists(p.output_dir + "/run.csv"));
    CHECK(fs::exists(p.output_dir + "/manifest.json"));
    CHECK(fs::exists(p.output_dir + "/velocity_000005.bin"));
    CHECK(fs::exists(p.output_dir + "/kernel_000010.bin"));
    Snapshot v = read_snapshot(p.output_dir + "/velocity_000005.bin");
    CHECK(v.data.size() == static_cast<std::size_t>(2 * p.n * p.n));
    std::ifstream man(p.output_dir + "/manifest.json");
    std::stringstream buf;
    buf << man.rdbuf();
    CHECK(buf.str().find("\"all_green\": true") != std::string::npos);
    CHECK(buf.str().find("\"scenario\": \"startup_shear\"") != std::string::npos);
    fs::remove_all(p.output_dir);
}

TEST_CASE("csv rows carry 17 significant digits") {
    Monitors m;
    m.t = 1.0 / 3.0;
    m.energy = 2.0 / 3.0;
    const std::string row = csv_row(m);
    CHECK(row.find("0.33333333333333331") == 0);
    CHECK(row.find("0.66666666666666663") != std::string::npos);
}
