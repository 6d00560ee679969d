#pragma once

#include <complex>
#include <vector>

namespace rept {

// Flat real-space fields on the N x N grid of [0, 2pi)^2, row-major with
// index iy * n + ix, node (ix, iy) at (2pi ix / n, 2pi iy / n).
struct ScalarField {
    int n = 0;
    std::vector<double> v;
    explicit ScalarField(int n_ = 0) : n(n_), v(static_cast<std::size_t>(n_) * n_, 0.0) {}
    double& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * n + ix]; }
    double at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * n + ix]; }
};

struct VectorField {
    int n = 0;
    std::vector<double> x, y;
    explicit VectorField(int n_ = 0)
        : n(n_),
          x(static_cast<std::size_t>(n_) * n_, 0.0),
          y(static_cast<std::size_t>(n_) * n_, 0.0) {}
};

struct Tensor2Field {
    int n = 0;
    // component (i, j), i row / j column
    std::vector<double> xx, xy, yx, yy;
    explicit Tensor2Field(int n_ = 0)
        : n(n_),
          xx(static_cast<std::size_t>(n_) * n_, 0.0),
          xy(static_cast<std::size_t>(n_) * n_, 0.0),
          yx(static_cast<std::size_t>(n_) * n_, 0.0),
          yy(static_cast<std::size_t>(n_) * n_, 0.0) {}
};

struct FlowParams {
    double reynolds = 1.0;
    double omega = 0.5;  // elastic viscosity fraction, strictly in (0, 1)
    void validate() const;
};

// Divergence-free velocity in spectral representation: coefficients vhat(k)
// with v(x) = sum_k vhat(k) e^{i k.x}, k components in [-n/2, n/2).
class SpectralVelocity {
public:
    explicit SpectralVelocity(int n);

    static SpectralVelocity from_real(const VectorField& f);
    VectorField to_real() const;

    // (grad v)_{ij} = d_i v_j by exact spectral differentiation
    Tensor2Field gradient() const;

    void project_divfree();  // mode-wise Leray projection
    void dealias();          // 2/3 rule: zero modes with |k_i| > n/3

    double divergence_residual() const;  // max_k |k.vhat| relative to max |vhat|
    double max_abs() const;              // sup norm of the real-space field
    double energy() const;               // int |v|^2 dx over the torus, by Parseval

    int n() const { return n_; }
    std::vector<std::complex<double>>& u() { return u_; }
    std::vector<std::complex<double>>& v() { return v_; }
    const std::vector<std::complex<double>>& u() const { return u_; }
    const std::vector<std::complex<double>>& v() const { return v_; }

private:
    int n_;
    std::vector<std::complex<double>> u_, v_;
};

// Semi-implicit integrator: viscous term handled exactly by integrating
// factor, advection and stress forcing explicit (AB2 after an Euler start).
class FlowStepper {
public:
    FlowStepper(int n, FlowParams params, double dt);

    // advances vel by one step forced by div sigma (real space)
    void step(SpectralVelocity& vel, const VectorField& div_sigma);
    void reset();  // forget AB2 history (restart with Euler)

    const FlowParams& params() const { return params_; }
    double dt() const { return dt_; }

private:
    int n_;
    FlowParams params_;
    double dt_;
    bool have_prev_ = false;
    std::vector<std::complex<double>> prev_u_, prev_v_;
};

// Backward-trajectory bilinear interpolation stencil for semi-Lagrangian
// advection: departure point of node (ix, iy) is (x, y) - dt v(x, y), with
// periodic wrap.  Zero velocity yields weight 0 on exact nodes, so applying
// the stencil is then a bitwise copy.
struct AdvectionWeights {
    int n = 0;
    std::vector<int> x0, y0;      // lower-left cell corner of the departure point
    std::vector<double> wx, wy;   // fractional offsets in [0, 1)
    static AdvectionWeights from(const VectorField& vel, double dt);
};

// p solving Delta p = div div (sigma - Re v (x) v), zero-mean convention
ScalarField pressure_recovery(const SpectralVelocity& vel, const Tensor2Field& sigma,
                              const FlowParams& params);

// (div s)_j = d_i s_{ij} by spectral differentiation
VectorField tensor_divergence(const Tensor2Field& s);

double max_abs(const Tensor2Field& f);
double max_abs(const VectorField& f);

}  // namespace rept
