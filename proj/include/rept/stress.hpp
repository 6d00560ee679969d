#pragma once

#include "rept/deformation.hpp"
#include "rept/memory_kernel.hpp"
#include "rept/orientation.hpp"
#include "rept/spectral.hpp"

namespace rept {

// S(t, x, s) = int_0^Tmax m(T, x, s) F(G(T, x)) dT by trapezoid over the
// age slices; F is the truncated orientation map in full mode.  F(G) is
// evaluated once per (age, x) and reused across the arc-length grid, which
// is where the quadrature cost concentrates.
OrientationField orientation_field(const MemoryField& m, const DeformationField& g,
                                   const OrientationMap& map, const TruncationProfile& prof,
                                   int n_s);

// sigma = omega int_{-1/2}^{1/2} S ds, trapezoid on the s-grid
Tensor2Field stress_tensor(const OrientationField& s, double omega);

// spectral divergence forcing, (div sigma)_j = d_i sigma_{ij}
VectorField stress_divergence(const Tensor2Field& sigma);

// IA closed form: sigma = omega int_0^Tmax m(T) S_IA(G(T, x)) dT with the
// exact per-cell integral of the truncated series as product-integration
// weights (the series is integrably singular at T = 0).
Tensor2Field ia_stress(const DeformationField& g, const OrientationMap& map,
                       double omega, int p_max);

// analytic bound on the neglected T > T_max stress contribution via the
// decay envelope: S_inf * c0 e^{mu t} e^{-2 We mu T_max} / (2 We mu) per
// unit s, integrated over the unit s-interval
double stress_tail_budget(double t, double t_max, double c0, double mu, double we);

// worst |trace| and asymmetry over a stress field, for the monitors
double max_trace_residual(const Tensor2Field& sigma);
double max_asymmetry(const Tensor2Field& sigma);

}  // namespace rept
