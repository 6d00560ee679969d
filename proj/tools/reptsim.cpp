#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rept/driver.hpp"
#include "rept/memory_kernel.hpp"
#include "rept/ode.hpp"
#include "rept/orientation.hpp"
#include "rept/params.hpp"

namespace {

using namespace rept;

SimulationParams load(const std::string& config, const std::vector<std::string>& sets) {
    SimulationParams p = parse_config_file(config);
    for (const std::string& s : sets) apply_override(p, s);
    return p;
}

void print_verdicts(const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks) {
        std::printf("  %-20s %s  value=%.6g", c.name.c_str(), c.pass ? "pass" : "FAIL",
                    c.value);
        if (!c.where.empty()) std::printf("  (%s)", c.where.c_str());
        std::printf("\n");
    }
}

int cmd_run(const std::string& config, const std::vector<std::string>& sets) {
    SimulationParams p = load(config, sets);
    RunResult r = run_to_disk(p);
    std::printf("run: %ld steps to t = %.17g, artifacts in %s\n", r.steps,
                r.final_monitors.t, p.output_dir.c_str());
    print_verdicts(r.verdicts);
    std::printf("overall: %s\n", r.all_green ? "all monitors green" : "violations recorded");
    return r.all_green ? 0 : 1;
}

int cmd_validate(const std::string& config, const std::vector<std::string>& sets) {
    SimulationParams p = load(config, sets);
    ValidationReport rep = Simulation::validate_scenario(p);
    print_verdicts(rep.checks);
    std::printf("overall: %s\n", rep.all_pass() ? "valid" : "invalid");
    return rep.all_pass() ? 0 : 1;
}

// reference tables recomputed from scratch at higher resolution than the
// production paths use; intended for eyeballing and freezing into tests
int cmd_oracle(const std::string& name) {
    const double pi = std::numbers::pi;
    if (name == "orientation") {
        OrientationMap fine(SphereQuadrature::circle(1 << 20));
        const Tensor cases[] = {matrix2(2, 0, 0, 0.5), matrix2(1, 1, 0, 1),
                                matrix2(1.5, 0.2, -0.3, 0.9)};
        std::printf("# S(G) and S_IA(G) by 2^20-node circle quadrature\n");
        for (const Tensor& g : cases) {
            Tensor s = fine.s_of_g(g);
            Tensor si = fine.s_ia(g);
            std::printf("G=[%g %g; %g %g]\n", g.at(0, 0), g.at(0, 1), g.at(1, 0),
                        g.at(1, 1));
            std::printf("  S    = [% .15e % .15e % .15e]\n", s.at(0, 0), s.at(0, 1),
                        s.at(1, 1));
            std::printf("  S_IA = [% .15e % .15e % .15e]\n", si.at(0, 0), si.at(0, 1),
                        si.at(1, 1));
        }
        return 0;
    }
    if (name == "ia-series") {
        std::printf("# truncated-series mass int_0^inf m dT and analytic tail\n");
        for (int p_max : {99, 999, 1999}) {
            double mass = 0.0;
            for (int p = 1; p <= p_max; p += 2) mass += 8.0 / (pi * pi * p * p);
            const double quad = ia_memory_integral(1e-12, 50.0, p_max, 1e-12);
            std::printf("p_max=%5d  partial=%.15e  quad[0,50]=%.15e  tail=%.15e  sum=%.15e\n",
                        p_max, mass, quad, ia_memory_tail(p_max), mass + ia_memory_tail(p_max));
        }
        return 0;
    }
    if (name == "taylor-green") {
        std::printf("# Taylor-Green energy decay factors e^{-4 nu t}, t = 1\n");
        for (double nu : {0.1, 0.25, 0.5, 1.0})
            std::printf("nu=%.3f  factor=%.15e\n", nu, std::exp(-4.0 * nu));
        return 0;
    }
    if (name == "cauchy") {
        std::printf("# closed form vs adaptive RK for y'' = xi0 (y+xi2)^k (y')^2\n");
        const CauchyParams sets[] = {{1, 1, 1, 1}, {0, 2, 1, 1}, {0.5, 1, 2, 2},
                                     {2, 0.5, 0.5, 1.5}, {1, 3, 1, 3}};
        for (const CauchyParams& cp : sets) {
            const double xstar = cauchy_blowup(cp);
            const double xmax = std::isfinite(xstar) ? 0.9 * xstar : 5.0;
            double worst = 0.0;
            for (int i = 1; i <= 20; ++i) {
                const double x = xmax * i / 20.0;
                const double a = cauchy_solution(x, cp);
                const double b = cauchy_ode_rk(x, cp);
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
            }
            std::printf("xi=(%g, %g, %g, %g)  x*=%.15g  max_rel_diff=%.3e\n", cp.xi0,
                        cp.xi1, cp.xi2, cp.k, xstar, worst);
        }
        return 0;
    }
    std::fprintf(stderr, "unknown oracle '%s' (orientation, ia-series, taylor-green, cauchy)\n",
                 name.c_str());
    return 2;
}

int cmd_convergence(const std::string& config, const std::vector<std::string>& sets) {
    SimulationParams base = load(config, sets);
    base.validate();
    // dt halving with the age grid slaved (n_t doubles, t_max fixed)
    std::vector<VectorField> v;
    std::vector<double> smax;
    for (int level = 0; level < 3; ++level) {
        SimulationParams p = base;
        p.dt = base.dt / (1 << level);
        p.n_t = base.n_t * (1 << level);
        Simulation sim(p);
        const long nsteps = std::lround(p.t_end / p.dt);
        for (long i = 0; i < nsteps; ++i) sim.step();
        v.push_back(sim.velocity().to_real());
        smax.push_back(sim.monitors().sigma_max);
    }
    auto supdiff = [](const VectorField& a, const VectorField& b) {
        double w = 0.0;
        for (std::size_t i = 0; i < a.x.size(); ++i)
            w = std::max({w, std::abs(a.x[i] - b.x[i]), std::abs(a.y[i] - b.y[i])});
        return w;
    };
    const double e1 = supdiff(v[0], v[1]), e2 = supdiff(v[1], v[2]);
    std::printf("velocity sup diffs: dt vs dt/2 = %.6e, dt/2 vs dt/4 = %.6e\n", e1, e2);
    if (e2 > 0.0)
        std::printf("observed velocity order: %.3f\n", std::log2(e1 / e2));
    const double s1 = std::abs(smax[0] - smax[2]), s2 = std::abs(smax[1] - smax[2]);
    if (s2 > 0.0)
        std::printf("observed |sigma| order (vs dt/4 reference): %.3f\n", std::log2(s1 / s2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic viscoelastic flow simulator (tube model with memory)"};
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> sets;
    std::string oracle_name;

    auto* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("config", config)->required()->check(CLI::ExistingFile);
    run->add_option("--set", sets, "override section.key=value");

    auto* val = app.add_subcommand("validate", "check initial data and parameters");
    val->add_option("config", config)->required()->check(CLI::ExistingFile);
    val->add_option("--set", sets, "override section.key=value");

    auto* ora = app.add_subcommand("oracle", "print independent reference tables");
    ora->add_option("name", oracle_name)->required();

    auto* con = app.add_subcommand("convergence", "dt-halving study on a config");
    con->add_option("config", config)->required()->check(CLI::ExistingFile);
    con->add_option("--set", sets, "override section.key=value");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(config, sets);
        if (val->parsed()) return cmd_validate(config, sets);
        if (ora->parsed()) return cmd_oracle(oracle_name);
        if (con->parsed()) return cmd_convergence(config, sets);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
