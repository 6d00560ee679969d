#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rept/deformation.hpp"
#include "rept/memory_kernel.hpp"
#include "rept/orientation.hpp"
#include "rept/params.hpp"
#include "rept/report.hpp"
#include "rept/spectral.hpp"
#include "rept/stress.hpp"

namespace rept {

// One row of the diagnostics time series; the CSV column order is fixed
struct Monitors {
    double t = 0.0;
    double energy = 0.0;
    double grad_v_max = 0.0;
    double sigma_max = 0.0;      // sup over x of the Frobenius norm
    double min_det = 0.0;
    double min_norm = 0.0;
    double k_low_margin = 0.0;   // how far K undershot its initial bracket
    double k_high_margin = 0.0;  // how far K overshot it
    double m_min = 0.0;
    double decay_ratio = 0.0;    // decay monitor relative to the initial C0
    double tail_budget = 0.0;
};

// Pass/fail view of the invariant suite on one Monitors row
std::vector<CheckResult> monitor_verdicts(const Monitors& m, const SimulationParams& p);

const char* csv_header();
std::string csv_row(const Monitors& m);  // 17 significant digits

class Simulation {
public:
    explicit Simulation(const SimulationParams& p);

    void step();
    Monitors monitors();  // evaluates the invariant suite on the current state

    double time() const { return t_; }
    long steps_taken() const { return steps_; }
    const SimulationParams& params() const { return p_; }
    const SpectralVelocity& velocity() const { return vel_; }
    const DeformationField& deformation() const { return g_; }
    const KernelField& kernel() const;            // full mode only
    const Tensor2Field& stress();                 // stress of the current state
    const OrientationField& orientation();        // full mode only

    // initial-data checks of the configured scenario (det floor, kernel
    // wall/positivity/monotonicity/decay, parameter ranges)
    static ValidationReport validate_scenario(const SimulationParams& p);

private:
    void ensure_stress();

    SimulationParams p_;
    OrientationMap map_;
    TruncationProfile prof_;
    FlowStepper flow_;
    DeformationStepper def_stepper_;

    SpectralVelocity vel_;
    DeformationField g_;
    KernelField kernel_;
    MemoryField m_;
    OrientationField s_field_;
    Tensor2Field sigma_;
    bool stress_fresh_ = false;

    double t_ = 0.0;
    long steps_ = 0;
    double k_lo_ = 0.0, k_hi_ = 1.0;  // initial kernel bracket, widened to [min(1,.), max(1,.)]
    double c0_ = 0.0;                 // decay-envelope constant of the initial memory
};

struct RunResult {
    long steps = 0;
    Monitors final_monitors;
    Monitors worst;                      // componentwise worst values over the run
    std::vector<CheckResult> verdicts;   // invariant suite on the worst values
    bool all_green = false;
};

// Step to t_end writing CSV rows every output_every steps (plus the initial
// and final states).  Throws on invariant violation when abort_on_violation
// is set.  snapshot_dir, when nonempty, receives field snapshots every
// snapshot_every steps.
RunResult run_simulation(const SimulationParams& p, std::ostream& csv,
                         const std::string& snapshot_dir = "");

// run_simulation plus artifacts: <dir>/run.csv, <dir>/manifest.json and
// snapshots under <dir>
RunResult run_to_disk(const SimulationParams& p);

}  // namespace rept
