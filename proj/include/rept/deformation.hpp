#pragma once

#include <vector>

#include "rept/report.hpp"
#include "rept/spectral.hpp"
#include "rept/tensor.hpp"

namespace rept {

// Age-structured deformation gradient G(T, x); slice j holds age T_j = j dT
// and the T=0 slice is the identity (freshly created tube segments are
// undeformed).  Components stored point-wise as (xx, xy, yx, yy).
struct DeformationField {
    int n_t = 0, n = 0;
    double dT = 0.0;
    std::vector<double> v;  // layout (j, iy, ix, c), c = 4 components fastest

    DeformationField() = default;
    DeformationField(int n_t_, int n_, double dT_);

    std::size_t idx(int j, int iy, int ix) const {
        return ((static_cast<std::size_t>(j) * n + iy) * n + ix) * 4;
    }
    Tensor get(int j, int iy, int ix) const;
    void set(int j, int iy, int ix, const Tensor& g);
    void set_identity_slice(int j);
    std::size_t slice_doubles() const { return static_cast<std::size_t>(n) * n * 4; }
};

// All slices identity (quiescent past)
DeformationField identity_deformation(int n_t, int n, double dT);

// One step of d_t G + (1/We) d_T G = G . grad v: exact age shift, then
// semi-Lagrangian x-advection, then the local source G <- G exp(dt A) with
// A the average of the previous and current velocity gradients (midpoint
// Magnus, second order; det exact since tr A = 0 for divergence-free v).
class DeformationStepper {
public:
    DeformationStepper(int n, double dt, double we);

    void step(DeformationField& g, const VectorField& vel, const Tensor2Field& grad_v);
    void reset();  // drop gradient history (next step uses endpoint sampling)

private:
    int n_;
    double dt_, we_;
    bool have_prev_ = false;
    Tensor2Field prev_grad_;
};

struct DetDiagnostics {
    double min_det = 0.0;
    double min_norm = 0.0;       // min Frobenius |G|
    double max_unit_drift = 0.0; // max |det G - 1|; valid when det G0 = 1
};

DetDiagnostics det_diagnostics(const DeformationField& g);

// Assumption check: det G0 >= gamma at every (T, x)
ValidationReport validate_initial_deformation(const DeformationField& g0, double gamma);

}  // namespace rept
