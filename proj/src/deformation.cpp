#include "rept/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rept {

DeformationField::DeformationField(int n_t_, int n_, double dT_)
    : n_t(n_t_), n(n_), dT(dT_) {
    if (n_t < 1 || n < 1) throw std::invalid_argument("DeformationField: grid too small");
    if (!(dT > 0.0)) throw std::invalid_argument("DeformationField: dT must be positive");
    v.assign(static_cast<std::size_t>(n_t + 1) * slice_doubles(), 0.0);
}

Tensor DeformationField::get(int j, int iy, int ix) const {
    const std::size_t b = idx(j, iy, ix);
    return matrix2(v[b], v[b + 1], v[b + 2], v[b + 3]);
}

void DeformationField::set(int j, int iy, int ix, const Tensor& g) {
    const std::size_t b = idx(j, iy, ix);
    v[b] = g.at(0, 0);
    v[b + 1] = g.at(0, 1);
    v[b + 2] = g.at(1, 0);
    v[b + 3] = g.at(1, 1);
}

void DeformationField::set_identity_slice(int j) {
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t b = idx(j, iy, ix);
            v[b] = 1.0;
            v[b + 1] = 0.0;
            v[b + 2] = 0.0;
            v[b + 3] = 1.0;
        }
}

DeformationField identity_deformation(int n_t, int n, double dT) {
    DeformationField g(n_t, n, dT);
    for (int j = 0; j <= n_t; ++j) g.set_identity_slice(j);
    return g;
}

DeformationStepper::DeformationStepper(int n, double dt, double we)
    : n_(n), dt_(dt), we_(we), prev_grad_(n) {
    if (!(dt > 0.0) || !(we > 0.0))
        throw std::invalid_argument("DeformationStepper: dt, We must be positive");
}

void DeformationStepper::reset() { have_prev_ = false; }

void DeformationStepper::step(DeformationField& g, const VectorField& vel,
                              const Tensor2Field& grad_v) {
    const int n = n_, n_t = g.n_t;
    if (g.n != n || vel.n != n || grad_v.n != n)
        throw std::invalid_argument("DeformationStepper: grid mismatch");
    if (std::abs(g.dT - dt_ / we_) > 1e-12 * std::max(1.0, g.dT))
        throw std::invalid_argument("DeformationStepper: requires dt = We * dT");

    // (i) exact age shift, identity injected at T=0
    const std::size_t ss = g.slice_doubles();
    for (int j = n_t; j >= 1; --j)
        std::copy_n(g.v.begin() + (j - 1) * ss, ss, g.v.begin() + j * ss);
    g.set_identity_slice(0);

    // (ii) semi-Lagrangian x-advection, component-wise bilinear
    double vmax = 0.0;
    for (std::size_t i = 0; i < vel.x.size(); ++i)
        vmax = std::max({vmax, std::abs(vel.x[i]), std::abs(vel.y[i])});
    if (vmax > 0.0) {
        const AdvectionWeights adv = AdvectionWeights::from(vel, dt_);
        std::vector<double> buf(ss);
        for (int j = 1; j <= n_t; ++j) {
            double* slice = g.v.data() + static_cast<std::size_t>(j) * ss;
            std::copy_n(slice, ss, buf.data());
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
                    const int x0 = adv.x0[p], y0 = adv.y0[p];
                    const int x1 = x0 + 1 == n ? 0 : x0 + 1;
                    const int y1 = y0 + 1 == n ? 0 : y0 + 1;
                    const double ax = adv.wx[p], ay = adv.wy[p];
                    const double* c00 = buf.data() + (static_cast<std::size_t>(y0) * n + x0) * 4;
                    const double* c01 = buf.data() + (static_cast<std::size_t>(y0) * n + x1) * 4;
                    const double* c10 = buf.data() + (static_cast<std::size_t>(y1) * n + x0) * 4;
                    const double* c11 = buf.data() + (static_cast<std::size_t>(y1) * n + x1) * 4;
                    double* out = slice + p * 4;
                    for (int c = 0; c < 4; ++c)
                        out[c] = (1.0 - ay) * ((1.0 - ax) * c00[c] + ax * c01[c]) +
                                 ay * ((1.0 - ax) * c10[c] + ax * c11[c]);
                }
        }
    }

    // (iii) source: right-multiply by exp(dt A), A the gradient midpoint
    std::vector<double> ex(static_cast<std::size_t>(n) * n * 4);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            double axx = grad_v.xx[p], axy = grad_v.xy[p];
            double ayx = grad_v.yx[p], ayy = grad_v.yy[p];
            if (have_prev_) {
                axx = 0.5 * (axx + prev_grad_.xx[p]);
                axy = 0.5 * (axy + prev_grad_.xy[p]);
                ayx = 0.5 * (ayx + prev_grad_.yx[p]);
                ayy = 0.5 * (ayy + prev_grad_.yy[p]);
            }
            const Tensor e = expm2(matrix2(dt_ * axx, dt_ * axy, dt_ * ayx, dt_ * ayy));
            ex[p * 4] = e.at(0, 0);
            ex[p * 4 + 1] = e.at(0, 1);
            ex[p * 4 + 2] = e.at(1, 0);
            ex[p * 4 + 3] = e.at(1, 1);
        }
    const bool trivial = vmax == 0.0 && max_abs(grad_v) == 0.0 &&
                         (!have_prev_ || max_abs(prev_grad_) == 0.0);
    if (!trivial) {
        for (int j = 1; j <= n_t; ++j)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
                    double* gp = g.v.data() + g.idx(j, iy, ix);
                    const double* e = ex.data() + p * 4;
                    const double gxx = gp[0], gxy = gp[1], gyx = gp[2], gyy = gp[3];
                    gp[0] = gxx * e[0] + gxy * e[2];
                    gp[1] = gxx * e[1] + gxy * e[3];
                    gp[2] = gyx * e[0] + gyy * e[2];
                    gp[3] = gyx * e[1] + gyy * e[3];
                }
    }
    prev_grad_ = grad_v;
    have_prev_ = true;
}

DetDiagnostics det_diagnostics(const DeformationField& g) {
    DetDiagnostics d;
    d.min_det = std::numeric_limits<double>::infinity();
    d.min_norm = std::numeric_limits<double>::infinity();
    d.max_unit_drift = 0.0;
    for (std::size_t b = 0; b < g.v.size(); b += 4) {
        const double det = g.v[b] * g.v[b + 3] - g.v[b + 1] * g.v[b + 2];
        const double norm = std::sqrt(g.v[b] * g.v[b] + g.v[b + 1] * g.v[b + 1] +
                                      g.v[b + 2] * g.v[b + 2] + g.v[b + 3] * g.v[b + 3]);
        d.min_det = std::min(d.min_det, det);
        d.min_norm = std::min(d.min_norm, norm);
        d.max_unit_drift = std::max(d.max_unit_drift, std::abs(det - 1.0));
    }
    return d;
}

ValidationReport validate_initial_deformation(const DeformationField& g0, double gamma) {
    ValidationReport rep;
    CheckResult c{"det_floor", true, std::numeric_limits<double>::infinity(), ""};
    for (int j = 0; j <= g0.n_t; ++j)
        for (int iy = 0; iy < g0.n; ++iy)
            for (int ix = 0; ix < g0.n; ++ix) {
                const std::size_t b = g0.idx(j, iy, ix);
                const double det =
                    g0.v[b] * g0.v[b + 3] - g0.v[b + 1] * g0.v[b + 2];
                if (det < c.value) {
                    c.value = det;
                    std::ostringstream os;
                    os << "(j=" << j << ", iy=" << iy << ", ix=" << ix << ")";
                    c.where = os.str();
                }
            }
    c.pass = c.value >= gamma;
    rep.checks.push_back(c);
    return rep;
}

}  // namespace rept
