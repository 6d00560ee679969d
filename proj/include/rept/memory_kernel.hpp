#pragma once

#include <cstddef>
#include <vector>

#include "rept/report.hpp"
#include "rept/spectral.hpp"

namespace rept {

// Tube-segment orientation tensor over (x, s); symmetric, so three
// components suffice.  Node k of the arc-length grid sits at
// s_k = -1/2 + k / n_s, k = 0..n_s, with n_s even so s = 0 is a node.
struct OrientationField {
    int n = 0;    // spatial grid
    int n_s = 0;  // arc-length intervals
    std::vector<double> xx, xy, yy;  // layout (iy, ix, k), k fastest

    OrientationField() = default;
    OrientationField(int n_, int n_s_)
        : n(n_),
          n_s(n_s_),
          xx(static_cast<std::size_t>(n_) * n_ * (n_s_ + 1), 0.0),
          xy(xx.size(), 0.0),
          yy(xx.size(), 0.0) {}
    std::size_t idx(int iy, int ix, int k) const {
        return (static_cast<std::size_t>(iy) * n + ix) * (n_s + 1) + k;
    }
};

// Retraction drift g(x, s) = grad v : int_0^s S ds'
struct DriftField {
    int n = 0, n_s = 0;
    std::vector<double> v;  // layout (iy, ix, k)

    DriftField() = default;
    DriftField(int n_, int n_s_)
        : n(n_), n_s(n_s_), v(static_cast<std::size_t>(n_) * n_ * (n_s_ + 1), 0.0) {}
    std::size_t idx(int iy, int ix, int k) const {
        return (static_cast<std::size_t>(iy) * n + ix) * (n_s + 1) + k;
    }
    double max_abs() const;
};

// Configurational kernel K over (age j, y, x, s); slice j holds age
// T_j = j * dT.  Slice 0 is the inflow datum: 1 at interior s-nodes,
// 0 at the walls s = -1/2, 1/2.
struct KernelField {
    int n_t = 0;  // age intervals; slices 0..n_t
    int n = 0;    // spatial grid
    int n_s = 0;  // arc-length intervals (even)
    double dT = 0.0;
    std::vector<double> v;  // layout (j, iy, ix, k), k fastest

    KernelField() = default;
    KernelField(int n_t_, int n_, int n_s_, double dT_);

    double ds() const { return 1.0 / n_s; }
    std::size_t slice_size() const {
        return static_cast<std::size_t>(n) * n * (n_s + 1);
    }
    std::size_t idx(int j, int iy, int ix, int k) const {
        return (static_cast<std::size_t>(j) * n * n +
                static_cast<std::size_t>(iy) * n + ix) * (n_s + 1) + k;
    }
    double& at(int j, int iy, int ix, int k) { return v[idx(j, iy, ix, k)]; }
    double at(int j, int iy, int ix, int k) const { return v[idx(j, iy, ix, k)]; }

    void set_inflow_slice(int j);  // writes the T=0 datum into slice j
    double min_value() const;
    double max_value() const;
};

// Memory m = -d_T K by backward difference; slice 0 is identically zero
// (m vanishes at T = 0).  Shares the KernelField layout.
struct MemoryField {
    int n_t = 0, n = 0, n_s = 0;
    double dT = 0.0;
    std::vector<double> v;
    std::size_t idx(int j, int iy, int ix, int k) const {
        return (static_cast<std::size_t>(j) * n * n +
                static_cast<std::size_t>(iy) * n + ix) * (n_s + 1) + k;
    }
    double at(int j, int iy, int ix, int k) const { return v[idx(j, iy, ix, k)]; }
    double min_value() const;
};

// All slices equal to the inflow datum (zero memory everywhere)
KernelField uniform_kernel(int n_t, int n, int n_s, double dT);

// Discrete rest-state equilibrium: slice j is j backward-Euler diffusion
// steps applied to the inflow datum, the exact fixed point of step_kernel
// at v = 0, g = 0.
KernelField equilibrium_kernel(int n_t, int n, int n_s, double dT);

// Separable relaxation kernel built from the sine series
// K(T, s) = sum_{p odd} (4 / pi p) sin(p pi (s + 1/2)) e^{-p^2 T}
KernelField ia_equilibrium_kernel(int n_t, int n, int n_s, double dT, int p_max);

DriftField compute_drift(const Tensor2Field& grad_v, const OrientationField& s_field);

// One step of d_t K + (1/We) d_T K + g d_s K - (1/We) d_s^2 K = 0 by the
// four-stage split: exact age shift, semi-Lagrangian x-advection,
// s-upwind for the drift, implicit tridiagonal s-diffusion.
// Requires dt = We * dT; throws on CFL violation quoting the admissible dt.
void step_kernel(KernelField& kf, const VectorField& vel, const DriftField& g,
                 double dt, double we);

MemoryField memory(const KernelField& kf);

// Truncated IA memory series m(T) = sum_{p odd <= p_max} (8/pi^2) e^{-T p^2}.
// Divergent at T = 0 (the truncation is what keeps it finite there).
double ia_memory(double T, int p_max);
bool ia_memory_singular(double T);  // true iff T == 0 (integrable singularity)

// int_a^b of the truncated series by adaptive quadrature
double ia_memory_integral(double a, double b, int p_max, double abs_tol = 1e-12);

// exact per-term integral of the truncated series over [t0, t1]
double ia_memory_cell_average(double t0, double t1, int p_max);

// sum_{p odd > p_max} 8/(pi^2 p^2), the analytic tail of the normalization
double ia_memory_tail(int p_max);

// Checks of the initial-data assumptions: nonnegative memory, memory
// nonincreasing in age, wall values, exponential decay at rate 2 We mu.
ValidationReport validate_initial_kernel(const KernelField& k0, double mu, double we);

// max over (T, x, s) of e^{mu (2 We T - t)} m
double decay_monitor(const KernelField& kf, double t, double mu, double we);
double decay_monitor(const MemoryField& m, double t, double mu, double we);

// C0 = sup m0 e^{2 We mu T}, the envelope constant measured from the data
double decay_constant_c0(const KernelField& k0, double mu, double we);

}  // namespace rept
