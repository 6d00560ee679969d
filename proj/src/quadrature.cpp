#include "rept/quadrature.hpp"

#include <cassert>

namespace rept {

SphereQuadrature SphereQuadrature::circle(int n) {
    if (n < 4) throw std::invalid_argument("circle quadrature: need at least 4 nodes");
    SphereQuadrature q;
    q.dim_ = 2;
    q.surface_ = 2.0 * std::numbers::pi;
    q.nodes_.resize(static_cast<std::size_t>(2 * n));
    q.weights_.assign(static_cast<std::size_t>(n), q.surface_ / n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n;
        q.nodes_[static_cast<std::size_t>(2 * i)] = std::cos(th);
        q.nodes_[static_cast<std::size_t>(2 * i + 1)] = std::sin(th);
    }
    q.validate();
    return q;
}

namespace {

// Golub-Welsch is overkill for the node counts used here; Newton on the
// Legendre recurrence converges to machine precision in a few iterations.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

}  // namespace

SphereQuadrature SphereQuadrature::sphere(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 4)
        throw std::invalid_argument("sphere quadrature: node counts too small");
    SphereQuadrature q;
    q.dim_ = 3;
    q.surface_ = 4.0 * std::numbers::pi;
    std::vector<double> ct, wt;
    gauss_legendre(n_theta, ct, wt);
    q.nodes_.reserve(static_cast<std::size_t>(3 * n_theta * n_phi));
    q.weights_.reserve(static_cast<std::size_t>(n_theta * n_phi));
    const double wphi = 2.0 * std::numbers::pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double c = ct[static_cast<std::size_t>(i)];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phi;
            q.nodes_.push_back(s * std::cos(phi));
            q.nodes_.push_back(s * std::sin(phi));
            q.nodes_.push_back(c);
            q.weights_.push_back(wt[static_cast<std::size_t>(i)] * wphi);
        }
    }
    q.validate();
    return q;
}

void SphereQuadrature::validate() const {
    double wsum = 0.0;
    for (int i = 0; i < count(); ++i) {
        double n2 = 0.0;
        for (int c = 0; c < dim_; ++c) n2 += node(i, c) * node(i, c);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-14)
            throw std::logic_error("sphere quadrature: node off the unit sphere");
        if (weight(i) <= 0.0) throw std::logic_error("sphere quadrature: nonpositive weight");
        wsum += weight(i);
    }
    if (std::abs(wsum - surface_) > 1e-12 * surface_)
        throw std::logic_error("sphere quadrature: weights do not sum to the surface");
    // second moment: <u (x) u> = (|S^{d-1}|/d) * delta
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) {
            double m = 0.0;
            for (int i = 0; i < count(); ++i) m += weight(i) * node(i, a) * node(i, b);
            const double want = (a == b) ? surface_ / dim_ : 0.0;
            if (std::abs(m - want) > 1e-12 * surface_)
                throw std::logic_error("sphere quadrature: degree-2 exactness failed");
        }
}

Tensor SphereQuadrature::average(const std::function<Tensor(const Tensor&)>& f) const {
    Tensor acc;
    bool first = true;
    Tensor u(1, dim_);
    for (int i = 0; i < count(); ++i) {
        for (int c = 0; c < dim_; ++c) u.at(c) = node(i, c);
        Tensor fi = f(u);
        if (!fi.finite())
            throw std::runtime_error("sphere_average: non-finite integrand value at a node");
        fi *= weight(i);
        if (first) {
            acc = fi;
            first = false;
        } else {
            acc += fi;
        }
    }
    return acc;
}

TruncationProfile::TruncationProfile(double gamma_tilde) : gamma_tilde_(gamma_tilde) {
    if (!(gamma_tilde > 0.0))
        throw std::invalid_argument("TruncationProfile: gamma_tilde must be positive");
    // construction-time verification of the three defining properties
    const double bound = 3.0 / gamma_tilde_ * (1.0 + 1e-12);
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double r = 1.5 * gamma_tilde_ * i / 2000.0;
        const double c = chi(r);
        if (c < -1e-15 || c > 1.0 + 1e-15 || c < prev - 1e-15)
            throw std::logic_error("TruncationProfile: chi not monotone in [0,1]");
        if (chi_prime(r) > bound)
            throw std::logic_error("TruncationProfile: chi' exceeds 3/gamma_tilde");
        prev = c;
    }
    if (chi(0.5 * gamma_tilde_) != 0.0 || chi(gamma_tilde_) != 1.0)
        throw std::logic_error("TruncationProfile: endpoint values wrong");
}

namespace {
// cubic smoothstep and its integral
inline double s3(double x) { return x * x * (3.0 - 2.0 * x); }
inline double s3_int(double x) { return x * x * x * (1.0 - 0.5 * x); }
}  // namespace

// chi' on the unit interval is a trapezoid with smoothstep shoulders of
// width eps and plateau height h = 1/(1-eps); this keeps the peak slope at
// 2.5/gamma_tilde after rescaling, inside the 3/gamma_tilde bound, while the
// quintic smoothstep (peak 3.75/gamma_tilde) would violate it.
double TruncationProfile::unit_slope(double t) const {
    const double h = 1.0 / (1.0 - eps_);
    if (t <= 0.0 || t >= 1.0) return 0.0;
    if (t < eps_) return h * s3(t / eps_);
    if (t > 1.0 - eps_) return h * s3((1.0 - t) / eps_);
    return h;
}

double TruncationProfile::unit_value(double t) const {
    const double h = 1.0 / (1.0 - eps_);
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t < eps_) return h * eps_ * s3_int(t / eps_);
    if (t > 1.0 - eps_) return 1.0 - h * eps_ * s3_int((1.0 - t) / eps_);
    return h * eps_ * 0.5 + h * (t - eps_);
}

double TruncationProfile::chi(double r) const {
    const double half = 0.5 * gamma_tilde_;
    return unit_value((r - half) / half);
}

double TruncationProfile::chi_prime(double r) const {
    const double half = 0.5 * gamma_tilde_;
    return unit_slope((r - half) / half) / half;
}

}  // namespace rept
