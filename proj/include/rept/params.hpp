#pragma once

#include <istream>
#include <string>

namespace rept {

// Run-level configuration.  The age grid is slaved to the time step:
// dt = We * (t_max / n_t), so the material derivative in (t, T) is an exact
// index shift.
struct SimulationParams {
    double reynolds = 1.0;
    double omega = 0.5;        // elastic viscosity fraction
    double weissenberg = 1.0;
    double mu = 0.5;           // decay-envelope rate of the initial memory
    double gamma = 0.32;       // det floor assumed of the initial deformation

    int n = 64;                // spatial grid
    int n_t = 200;             // age slices
    int n_s = 32;              // arc-length intervals (even)
    int n_q = 64;              // circle quadrature nodes
    int p_max = 199;           // IA series truncation (odd)
    double t_max = 10.0;       // age horizon
    double dt = 0.05;
    double t_end = 1.0;

    std::string mode = "full";      // full | ia | newtonian
    std::string scenario = "rest";  // rest | startup_shear | taylor_green
    double amplitude = 0.1;

    std::string output_dir = "out";
    int output_every = 10;    // CSV cadence in steps
    int snapshot_every = 0;   // 0 disables field snapshots
    bool abort_on_violation = true;

    double age_dt() const { return t_max / n_t; }
    // det G >= gamma forces |G| >= sqrt(2 gamma), so truncating below that
    // radius never touches admissible states
    double gamma_tilde() const;

    void validate() const;  // throws std::invalid_argument
};

// Physical inputs of the nondimensionalization map
struct DimensionalInputs {
    double rho = 0.0;       // density
    double eta_s = 0.0;     // solvent viscosity
    double g_e = 0.0;       // elastic modulus
    double ell = 0.0;       // tube contour length
    double d_e = 0.0;       // curvilinear diffusion coefficient
    double length = 0.0;    // reference length L
    double velocity = 0.0;  // reference velocity V
};

struct NondimensionalTriple {
    double reynolds = 0.0;
    double omega = 0.0;
    double weissenberg = 0.0;
};

// Re = rho V L / (eta_s + eta_e), omega = eta_e / (eta_s + eta_e) with
// eta_e = L G_e / V, We = (ell^2 / D_e) (V / L)
NondimensionalTriple nondimensionalize(const DimensionalInputs& d);

// TOML-style key/value config with sections [flow], [polymer], [grids],
// [scenario], [output]; see parse_config for the key list
SimulationParams parse_config(std::istream& in);
SimulationParams parse_config_file(const std::string& path);

// CLI override "section.key=value", applied on top of a parsed config
void apply_override(SimulationParams& p, const std::string& assignment);

}  // namespace rept
