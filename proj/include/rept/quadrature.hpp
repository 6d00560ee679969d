#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rept/tensor.hpp"

namespace rept {

// Quadrature on the unit sphere S^{d-1}.  Weights sum to the surface
// measure (2*pi for d=2, 4*pi for d=3): the bracket convention is the
// unnormalized surface integral, <1> = |S^{d-1}|.
class SphereQuadrature {
  public:
    // Uniform angles with equal weights 2*pi/n: the trapezoid rule on the
    // circle, spectrally accurate for smooth periodic integrands.
    static SphereQuadrature circle(int n);

    // Product rule on S^2: Gauss-Legendre in cos(theta) x uniform in phi.
    // Exact for polynomial integrands of degree <= 2*n_theta - 1 in cos(theta).
    static SphereQuadrature sphere(int n_theta, int n_phi);

    int dim() const { return dim_; }
    int count() const { return static_cast<int>(weights_.size()); }
    double surface() const { return surface_; }
    const std::vector<double>& weights() const { return weights_; }
    // node i, component c (flat [i*dim + c])
    const std::vector<double>& nodes() const { return nodes_; }

    double node(int i, int c) const { return nodes_[static_cast<std::size_t>(i * dim_ + c)]; }
    double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

    // Sum_i w_i f(u_i); throws if f returns a non-finite value at a node.
    Tensor average(const std::function<Tensor(const Tensor&)>& f) const;

  private:
    SphereQuadrature() = default;
    void validate() const;

    int dim_ = 2;
    double surface_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Smooth cutoff chi(|G|) used to truncate the orientation map near G = 0.
// chi = 0 on [0, gamma_tilde/2], chi = 1 on [gamma_tilde, inf),
// monotone, C^2, with max slope <= 3/gamma_tilde.
class TruncationProfile {
  public:
    explicit TruncationProfile(double gamma_tilde);

    // gamma_tilde = sqrt(2*min(gamma,1)) given the initial-data determinant floor.
    static TruncationProfile from_gamma(double gamma) {
        return TruncationProfile(std::sqrt(2.0 * std::min(gamma, 1.0)));
    }

    double gamma_tilde() const { return gamma_tilde_; }
    double chi(double r) const;
    double chi_prime(double r) const;

  private:
    double gamma_tilde_;
    // ramp of chi' on the unit interval: smooth rise over [0,eps], plateau,
    // smooth fall over [1-eps,1]; plateau height 1/(1-eps)
    static constexpr double eps_ = 0.2;
    double unit_value(double t) const;
    double unit_slope(double t) const;
};

}  // namespace rept
