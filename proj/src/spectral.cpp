#include "rept/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rept {

namespace {

struct FftPlan {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~FftPlan() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

FftPlan& plan_for(int n) {
    static std::map<int, FftPlan> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    FftPlan& p = cache[n];
    p.buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    p.fwd = fftw_plan_dft_2d(n, n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_2d(n, n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    return p;
}

// forward: real samples -> coefficients (normalized by 1/n^2)
std::vector<std::complex<double>> fft_forward(const std::vector<double>& real, int n) {
    FftPlan& p = plan_for(n);
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    for (std::size_t i = 0; i < sz; ++i) {
        p.buf[i][0] = real[i];
        p.buf[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    std::vector<std::complex<double>> out(sz);
    const double norm = 1.0 / (static_cast<double>(n) * n);
    for (std::size_t i = 0; i < sz; ++i)
        out[i] = std::complex<double>(p.buf[i][0] * norm, p.buf[i][1] * norm);
    return out;
}

std::vector<double> fft_backward(const std::vector<std::complex<double>>& hat, int n) {
    FftPlan& p = plan_for(n);
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    for (std::size_t i = 0; i < sz; ++i) {
        p.buf[i][0] = hat[i].real();
        p.buf[i][1] = hat[i].imag();
    }
    fftw_execute(p.bwd);
    std::vector<double> out(sz);
    for (std::size_t i = 0; i < sz; ++i) out[i] = p.buf[i][0];
    return out;
}

inline double wavenum(int i, int n) { return i <= n / 2 ? i : i - n; }

void dealias_modes(std::vector<std::complex<double>>& hat, int n) {
    const double kmax = n / 3.0;
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            if (std::abs(kx) > kmax || std::abs(ky) > kmax)
                hat[static_cast<std::size_t>(iy) * n + ix] = 0.0;
        }
    }
}

std::vector<std::complex<double>> spectral_derive(
    const std::vector<std::complex<double>>& hat, int n, int axis) {
    std::vector<std::complex<double>> out(hat.size());
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            const double k = axis == 0 ? kx : ky;
            out[idx] = std::complex<double>(0.0, k) * hat[idx];
        }
    }
    return out;
}

}  // namespace

void FlowParams::validate() const {
    if (!(reynolds > 0.0)) throw std::invalid_argument("FlowParams: Re must be positive");
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("FlowParams: omega must lie strictly in (0, 1)");
}

SpectralVelocity::SpectralVelocity(int n)
    : n_(n),
      u_(static_cast<std::size_t>(n) * n, 0.0),
      v_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 4) throw std::invalid_argument("SpectralVelocity: grid too small");
}

SpectralVelocity SpectralVelocity::from_real(const VectorField& f) {
    SpectralVelocity s(f.n);
    s.u_ = fft_forward(f.x, f.n);
    s.v_ = fft_forward(f.y, f.n);
    s.dealias();
    return s;
}

VectorField SpectralVelocity::to_real() const {
    VectorField f(n_);
    f.x = fft_backward(u_, n_);
    f.y = fft_backward(v_, n_);
    return f;
}

Tensor2Field SpectralVelocity::gradient() const {
    Tensor2Field g(n_);
    g.xx = fft_backward(spectral_derive(u_, n_, 0), n_);
    g.yx = fft_backward(spectral_derive(u_, n_, 1), n_);
    g.xy = fft_backward(spectral_derive(v_, n_, 0), n_);
    g.yy = fft_backward(spectral_derive(v_, n_, 1), n_);
    return g;
}

void SpectralVelocity::project_divfree() {
    for (int iy = 0; iy < n_; ++iy) {
        const double ky = wavenum(iy, n_);
        for (int ix = 0; ix < n_; ++ix) {
            const double kx = wavenum(ix, n_);
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            const std::size_t idx = static_cast<std::size_t>(iy) * n_ + ix;
            const std::complex<double> kdotv = kx * u_[idx] + ky * v_[idx];
            u_[idx] -= kx * kdotv / k2;
            v_[idx] -= ky * kdotv / k2;
        }
    }
}

void SpectralVelocity::dealias() {
    dealias_modes(u_, n_);
    dealias_modes(v_, n_);
}

double SpectralVelocity::divergence_residual() const {
    double worst = 0.0, scale = 0.0;
    for (int iy = 0; iy < n_; ++iy) {
        const double ky = wavenum(iy, n_);
        for (int ix = 0; ix < n_; ++ix) {
            const double kx = wavenum(ix, n_);
            const std::size_t idx = static_cast<std::size_t>(iy) * n_ + ix;
            worst = std::max(worst, std::abs(kx * u_[idx] + ky * v_[idx]));
            scale = std::max({scale, std::abs(u_[idx]), std::abs(v_[idx])});
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

double SpectralVelocity::max_abs() const {
    VectorField f = to_real();
    double m = 0.0;
    for (std::size_t i = 0; i < f.x.size(); ++i)
        m = std::max(m, std::hypot(f.x[i], f.y[i]));
    return m;
}

double SpectralVelocity::energy() const {
    const double area = 4.0 * std::acos(-1.0) * std::acos(-1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i)
        s += std::norm(u_[i]) + std::norm(v_[i]);
    return area * s;
}

FlowStepper::FlowStepper(int n, FlowParams params, double dt)
    : n_(n),
      params_(params),
      dt_(dt),
      prev_u_(static_cast<std::size_t>(n) * n, 0.0),
      prev_v_(static_cast<std::size_t>(n) * n, 0.0) {
    params_.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("FlowStepper: dt must be positive");
}

void FlowStepper::reset() { have_prev_ = false; }

void FlowStepper::step(SpectralVelocity& vel, const VectorField& div_sigma) {
    const int n = n_;
    if (vel.n() != n || div_sigma.n != n)
        throw std::invalid_argument("FlowStepper: grid mismatch");
    const double pi = std::acos(-1.0);
    const double vmax = vel.max_abs();
    if (dt_ * vmax * n / (2.0 * pi) > 0.5)
        throw std::runtime_error("FlowStepper: CFL violation, dt too large for |v|");

    // explicit right-hand side R = P(-v . grad v + div sigma / Re)
    VectorField vr = vel.to_real();
    Tensor2Field g = vel.gradient();
    VectorField rhs(n);
    const double inv_re = 1.0 / params_.reynolds;
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    for (std::size_t i = 0; i < sz; ++i) {
        rhs.x[i] = -(vr.x[i] * g.xx[i] + vr.y[i] * g.yx[i]) + inv_re * div_sigma.x[i];
        rhs.y[i] = -(vr.x[i] * g.xy[i] + vr.y[i] * g.yy[i]) + inv_re * div_sigma.y[i];
    }
    std::vector<std::complex<double>> ru = fft_forward(rhs.x, n);
    std::vector<std::complex<double>> rv = fft_forward(rhs.y, n);
    dealias_modes(ru, n);
    dealias_modes(rv, n);
    // Leray projection of the rhs, mode-wise
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            const double k2 = kx * kx + ky * ky;
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            if (k2 > 0.0) {
                const std::complex<double> kdot = kx * ru[idx] + ky * rv[idx];
                ru[idx] -= kx * kdot / k2;
                rv[idx] -= ky * kdot / k2;
            }
        }
    }

    const double nu = (1.0 - params_.omega) * inv_re;
    auto& uh = vel.u();
    auto& vh = vel.v();
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            const double k2 = kx * kx + ky * ky;
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            const double e1 = std::exp(-nu * k2 * dt_);
            if (have_prev_) {
                const double e2 = e1 * e1;
                uh[idx] = e1 * (uh[idx] + 1.5 * dt_ * ru[idx]) - 0.5 * dt_ * e2 * prev_u_[idx];
                vh[idx] = e1 * (vh[idx] + 1.5 * dt_ * rv[idx]) - 0.5 * dt_ * e2 * prev_v_[idx];
            } else {
                uh[idx] = e1 * (uh[idx] + dt_ * ru[idx]);
                vh[idx] = e1 * (vh[idx] + dt_ * rv[idx]);
            }
        }
    }
    prev_u_ = std::move(ru);
    prev_v_ = std::move(rv);
    have_prev_ = true;
    vel.dealias();
    vel.project_divfree();
}

AdvectionWeights AdvectionWeights::from(const VectorField& vel, double dt) {
    const int n = vel.n;
    AdvectionWeights w;
    w.n = n;
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    w.x0.resize(sz);
    w.y0.resize(sz);
    w.wx.resize(sz);
    w.wy.resize(sz);
    const double h = 2.0 * std::acos(-1.0) / n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            const double xd = (ix * h - dt * vel.x[p]) / h;
            const double yd = (iy * h - dt * vel.y[p]) / h;
            const double fx = std::floor(xd), fy = std::floor(yd);
            w.wx[p] = xd - fx;
            w.wy[p] = yd - fy;
            int i0 = static_cast<int>(fx) % n;
            int j0 = static_cast<int>(fy) % n;
            if (i0 < 0) i0 += n;
            if (j0 < 0) j0 += n;
            w.x0[p] = i0;
            w.y0[p] = j0;
        }
    return w;
}

ScalarField pressure_recovery(const SpectralVelocity& vel, const Tensor2Field& sigma,
                              const FlowParams& params) {
    params.validate();
    const int n = vel.n();
    if (sigma.n != n) throw std::invalid_argument("pressure_recovery: grid mismatch");
    VectorField vr = vel.to_real();
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    // q_{ij} = sigma_{ij} - Re v_i v_j
    std::vector<double> qxx(sz), qxy(sz), qyx(sz), qyy(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        qxx[i] = sigma.xx[i] - params.reynolds * vr.x[i] * vr.x[i];
        qxy[i] = sigma.xy[i] - params.reynolds * vr.x[i] * vr.y[i];
        qyx[i] = sigma.yx[i] - params.reynolds * vr.y[i] * vr.x[i];
        qyy[i] = sigma.yy[i] - params.reynolds * vr.y[i] * vr.y[i];
    }
    auto hxx = fft_forward(qxx, n);
    auto hxy = fft_forward(qxy, n);
    auto hyx = fft_forward(qyx, n);
    auto hyy = fft_forward(qyy, n);
    std::vector<std::complex<double>> ph(sz, 0.0);
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            const double k2 = kx * kx + ky * ky;
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            if (k2 == 0.0) continue;  // zero-mean pressure
            // Delta p = d_i d_j q_{ij}  ->  -k^2 ph = -(k_i k_j) qh_{ij}
            const std::complex<double> dd = kx * kx * hxx[idx] + kx * ky * (hxy[idx] + hyx[idx]) +
                                            ky * ky * hyy[idx];
            ph[idx] = dd / k2;
        }
    }
    dealias_modes(ph, n);
    ScalarField p(n);
    p.v = fft_backward(ph, n);
    return p;
}

VectorField tensor_divergence(const Tensor2Field& s) {
    const int n = s.n;
    auto hxx = fft_forward(s.xx, n);
    auto hxy = fft_forward(s.xy, n);
    auto hyx = fft_forward(s.yx, n);
    auto hyy = fft_forward(s.yy, n);
    // (div s)_j = d_i s_{ij}
    std::vector<std::complex<double>> dx(hxx.size()), dy(hxx.size());
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenum(iy, n);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenum(ix, n);
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            const std::complex<double> ik_x(0.0, kx), ik_y(0.0, ky);
            dx[idx] = ik_x * hxx[idx] + ik_y * hyx[idx];
            dy[idx] = ik_x * hxy[idx] + ik_y * hyy[idx];
        }
    }
    dealias_modes(dx, n);
    dealias_modes(dy, n);
    VectorField out(n);
    out.x = fft_backward(dx, n);
    out.y = fft_backward(dy, n);
    return out;
}

double max_abs(const Tensor2Field& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.xx.size(); ++i) {
        const double fr = std::sqrt(f.xx[i] * f.xx[i] + f.xy[i] * f.xy[i] +
                                    f.yx[i] * f.yx[i] + f.yy[i] * f.yy[i]);
        m = std::max(m, fr);
    }
    return m;
}

double max_abs(const VectorField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.x.size(); ++i) m = std::max(m, std::hypot(f.x[i], f.y[i]));
    return m;
}

}  // namespace rept
