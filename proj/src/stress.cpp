#include "rept/stress.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rept {

OrientationField orientation_field(const MemoryField& m, const DeformationField& g,
                                   const OrientationMap& map, const TruncationProfile& prof,
                                   int n_s) {
    if (m.n != g.n || m.n_t != g.n_t) throw std::invalid_argument("orientation_field: grid mismatch");
    if (m.n_s != n_s) throw std::invalid_argument("orientation_field: s-grid mismatch");
    if (std::abs(m.dT - g.dT) > 1e-14)
        throw std::invalid_argument("orientation_field: age grid mismatch");
    const int n = g.n, n_t = g.n_t;
    OrientationField out(n, n_s);
    // Stieltjes trapezoid: the backward-difference memory slice j is a
    // midpoint sample of -d_T K on cell (T_{j-1}, T_j), so pair the cell
    // mass dT*m_j with the average of the map values at the cell endpoints.
    // This is the trapezoidal rule for int S dK and keeps the age
    // quadrature second order; a plain node trapezoid against m would
    // degrade to first.
    const std::size_t np = static_cast<std::size_t>(n) * n;
    std::vector<double> fprev(np * 3), fcur(np * 3);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Tensor f = map.s_truncated(g.get(0, iy, ix), prof);
            const std::size_t p = (static_cast<std::size_t>(iy) * n + ix) * 3;
            fprev[p] = f.at(0, 0);
            fprev[p + 1] = f.at(0, 1);
            fprev[p + 2] = f.at(1, 1);
        }
    for (int j = 1; j <= n_t; ++j) {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Tensor f = map.s_truncated(g.get(j, iy, ix), prof);
                const std::size_t p = (static_cast<std::size_t>(iy) * n + ix) * 3;
                fcur[p] = f.at(0, 0);
                fcur[p + 1] = f.at(0, 1);
                fcur[p + 2] = f.at(1, 1);
                const double fxx = 0.5 * (fprev[p] + fcur[p]);
                const double fxy = 0.5 * (fprev[p + 1] + fcur[p + 1]);
                const double fyy = 0.5 * (fprev[p + 2] + fcur[p + 2]);
                if (fxx == 0.0 && fxy == 0.0 && fyy == 0.0) continue;
                const std::size_t base = out.idx(iy, ix, 0);
                const double* mrow = m.v.data() + m.idx(j, iy, ix, 0);
                for (int k = 0; k <= n_s; ++k) {
                    const double wm = m.dT * mrow[k];
                    out.xx[base + k] += wm * fxx;
                    out.xy[base + k] += wm * fxy;
                    out.yy[base + k] += wm * fyy;
                }
            }
        std::swap(fprev, fcur);
    }
    return out;
}

Tensor2Field stress_tensor(const OrientationField& s, double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("stress_tensor: omega must lie in (0, 1)");
    const int n = s.n, n_s = s.n_s;
    const double ds = 1.0 / n_s;
    Tensor2Field sigma(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t base = s.idx(iy, ix, 0);
            double axx = 0.0, axy = 0.0, ayy = 0.0;
            for (int k = 0; k <= n_s; ++k) {
                const double w = (k == 0 || k == n_s) ? 0.5 * ds : ds;
                axx += w * s.xx[base + k];
                axy += w * s.xy[base + k];
                ayy += w * s.yy[base + k];
            }
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            sigma.xx[p] = omega * axx;
            sigma.xy[p] = omega * axy;
            sigma.yx[p] = omega * axy;
            sigma.yy[p] = omega * ayy;
        }
    return sigma;
}

VectorField stress_divergence(const Tensor2Field& sigma) { return tensor_divergence(sigma); }

Tensor2Field ia_stress(const DeformationField& g, const OrientationMap& map,
                       double omega, int p_max) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("ia_stress: omega must lie in (0, 1)");
    const int n = g.n, n_t = g.n_t;
    Tensor2Field sigma(n);
    // product integration: exact series integral per age cell against the
    // trapezoid of the smooth factor S_IA(G)
    std::vector<double> wcell(n_t + 1, 0.0);
    for (int j = 1; j <= n_t; ++j)
        wcell[j] = ia_memory_cell_average((j - 1) * g.dT, j * g.dT, p_max) * g.dT;
    std::vector<double> sxx(n_t + 1), sxy(n_t + 1), syy(n_t + 1);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            for (int j = 0; j <= n_t; ++j) {
                const Tensor s = map.s_ia(g.get(j, iy, ix));
                sxx[j] = s.at(0, 0);
                sxy[j] = s.at(0, 1);
                syy[j] = s.at(1, 1);
            }
            double axx = 0.0, axy = 0.0, ayy = 0.0;
            for (int j = 1; j <= n_t; ++j) {
                axx += wcell[j] * 0.5 * (sxx[j - 1] + sxx[j]);
                axy += wcell[j] * 0.5 * (sxy[j - 1] + sxy[j]);
                ayy += wcell[j] * 0.5 * (syy[j - 1] + syy[j]);
            }
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            sigma.xx[p] = omega * axx;
            sigma.xy[p] = omega * axy;
            sigma.yx[p] = omega * axy;
            sigma.yy[p] = omega * ayy;
        }
    return sigma;
}

double stress_tail_budget(double t, double t_max, double c0, double mu, double we) {
    if (!(mu > 0.0) || !(we > 0.0))
        throw std::invalid_argument("stress_tail_budget: mu, We must be positive");
    const double s_inf = 1.0 + 1.0 / std::sqrt(2.0);
    return s_inf * c0 * std::exp(mu * t) * std::exp(-2.0 * we * mu * t_max) /
           (2.0 * we * mu);
}

double max_trace_residual(const Tensor2Field& sigma) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sigma.xx.size(); ++i)
        worst = std::max(worst, std::abs(sigma.xx[i] + sigma.yy[i]));
    return worst;
}

double max_asymmetry(const Tensor2Field& sigma) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sigma.xy.size(); ++i)
        worst = std::max(worst, std::abs(sigma.xy[i] - sigma.yx[i]));
    return worst;
}

}  // namespace rept
