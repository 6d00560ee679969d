#include "rept/memory_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rept/ode.hpp"

namespace rept {

namespace {

const double pi = std::acos(-1.0);

// Backward-Euler solve of (I - alpha D2) x = rhs on the interior s-nodes
// with zero Dirichlet walls; coefficients precomputed once, applied per line.
struct DiffusionSolver {
    int n_s;
    double alpha;
    std::vector<double> cp;   // modified upper-diagonal factors
    std::vector<double> inv;  // pivot inverses

    DiffusionSolver(int n_s_, double alpha_) : n_s(n_s_), alpha(alpha_) {
        const int m = n_s - 1;  // unknowns at k = 1..n_s-1
        cp.assign(m + 1, 0.0);
        inv.assign(m + 1, 0.0);
        const double a = -alpha, b = 1.0 + 2.0 * alpha, c = -alpha;
        double prev_cp = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double denom = b - a * prev_cp;
            inv[i] = 1.0 / denom;
            cp[i] = c * inv[i];
            prev_cp = cp[i];
        }
    }

    // line has n_s + 1 entries; walls are forced to zero
    void apply(double* line) const {
        const int m = n_s - 1;
        const double a = -alpha;
        line[0] = 0.0;
        line[n_s] = 0.0;
        double prev = 0.0;
        for (int i = 1; i <= m; ++i) {
            line[i] = (line[i] - a * prev) * inv[i];
            prev = line[i];
        }
        for (int i = m - 1; i >= 1; --i) line[i] -= cp[i] * line[i + 1];
    }
};

}  // namespace

double DriftField::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

KernelField::KernelField(int n_t_, int n_, int n_s_, double dT_)
    : n_t(n_t_), n(n_), n_s(n_s_), dT(dT_) {
    if (n_t < 1 || n < 1 || n_s < 2) throw std::invalid_argument("KernelField: grid too small");
    if (n_s % 2 != 0) throw std::invalid_argument("KernelField: n_s must be even (s=0 node)");
    if (!(dT > 0.0)) throw std::invalid_argument("KernelField: dT must be positive");
    v.assign(static_cast<std::size_t>(n_t + 1) * slice_size(), 0.0);
}

void KernelField::set_inflow_slice(int j) {
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            for (int k = 0; k <= n_s; ++k)
                at(j, iy, ix, k) = (k == 0 || k == n_s) ? 0.0 : 1.0;
}

double KernelField::min_value() const { return *std::min_element(v.begin(), v.end()); }
double KernelField::max_value() const { return *std::max_element(v.begin(), v.end()); }

double MemoryField::min_value() const { return *std::min_element(v.begin(), v.end()); }

KernelField uniform_kernel(int n_t, int n, int n_s, double dT) {
    KernelField kf(n_t, n, n_s, dT);
    for (int j = 0; j <= n_t; ++j) kf.set_inflow_slice(j);
    return kf;
}

KernelField equilibrium_kernel(int n_t, int n, int n_s, double dT) {
    KernelField kf(n_t, n, n_s, dT);
    kf.set_inflow_slice(0);
    const double ds = kf.ds();
    DiffusionSolver solver(n_s, dT / (ds * ds));
    std::vector<double> line(n_s + 1);
    for (int k = 0; k <= n_s; ++k) line[k] = kf.at(0, 0, 0, k);
    for (int j = 1; j <= n_t; ++j) {
        solver.apply(line.data());
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                for (int k = 0; k <= n_s; ++k) kf.at(j, iy, ix, k) = line[k];
    }
    return kf;
}

KernelField ia_equilibrium_kernel(int n_t, int n, int n_s, double dT, int p_max) {
    KernelField kf(n_t, n, n_s, dT);
    kf.set_inflow_slice(0);
    for (int j = 1; j <= n_t; ++j) {
        const double T = j * dT;
        std::vector<double> line(n_s + 1, 0.0);
        for (int k = 1; k < n_s; ++k) {
            const double s = -0.5 + static_cast<double>(k) / n_s;
            double sum = 0.0;
            for (int p = 1; p <= p_max; p += 2) {
                const double decay = std::exp(-static_cast<double>(p) * p * T);
                if (decay < 1e-300) break;
                sum += 4.0 / (pi * p) * std::sin(p * pi * (s + 0.5)) * decay;
            }
            line[k] = sum;
        }
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                for (int k = 0; k <= n_s; ++k) kf.at(j, iy, ix, k) = line[k];
    }
    return kf;
}

DriftField compute_drift(const Tensor2Field& grad_v, const OrientationField& s_field) {
    const int n = s_field.n, n_s = s_field.n_s;
    if (grad_v.n != n) throw std::invalid_argument("compute_drift: grid mismatch");
    if (n_s % 2 != 0) throw std::invalid_argument("compute_drift: n_s must be even");
    const int mid = n_s / 2;
    const double ds = 1.0 / n_s;
    DriftField g(n, n_s);
    std::vector<double> ixx(n_s + 1), ixy(n_s + 1), iyy(n_s + 1);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t base = s_field.idx(iy, ix, 0);
            ixx[mid] = ixy[mid] = iyy[mid] = 0.0;
            for (int k = mid + 1; k <= n_s; ++k) {
                ixx[k] = ixx[k - 1] + 0.5 * ds * (s_field.xx[base + k - 1] + s_field.xx[base + k]);
                ixy[k] = ixy[k - 1] + 0.5 * ds * (s_field.xy[base + k - 1] + s_field.xy[base + k]);
                iyy[k] = iyy[k - 1] + 0.5 * ds * (s_field.yy[base + k - 1] + s_field.yy[base + k]);
            }
            for (int k = mid - 1; k >= 0; --k) {
                ixx[k] = ixx[k + 1] - 0.5 * ds * (s_field.xx[base + k] + s_field.xx[base + k + 1]);
                ixy[k] = ixy[k + 1] - 0.5 * ds * (s_field.xy[base + k] + s_field.xy[base + k + 1]);
                iyy[k] = iyy[k + 1] - 0.5 * ds * (s_field.yy[base + k] + s_field.yy[base + k + 1]);
            }
            const std::size_t gi = static_cast<std::size_t>(iy) * n + ix;
            const double gxx = grad_v.xx[gi], gxy = grad_v.xy[gi];
            const double gyx = grad_v.yx[gi], gyy = grad_v.yy[gi];
            for (int k = 0; k <= n_s; ++k)
                g.v[g.idx(iy, ix, k)] =
                    gxx * ixx[k] + (gxy + gyx) * ixy[k] + gyy * iyy[k];
        }
    return g;
}

void step_kernel(KernelField& kf, const VectorField& vel, const DriftField& g,
                 double dt, double we) {
    const int n = kf.n, n_s = kf.n_s, n_t = kf.n_t;
    if (vel.n != n || g.n != n || g.n_s != n_s)
        throw std::invalid_argument("step_kernel: grid mismatch");
    if (!(we > 0.0)) throw std::invalid_argument("step_kernel: We must be positive");
    if (std::abs(kf.dT - dt / we) > 1e-12 * std::max(1.0, kf.dT))
        throw std::invalid_argument("step_kernel: requires dt = We * dT (age alignment)");
    const double ds = kf.ds();
    const double gmax = g.max_abs();
    if (gmax * dt / ds > 1.0) {
        std::ostringstream msg;
        msg << "step_kernel: s-advection CFL violated, admissible dt = " << ds / gmax;
        throw std::runtime_error(msg.str());
    }

    // (i) exact age shift; the oldest slice leaves the window
    const std::size_t ss = kf.slice_size();
    for (int j = n_t; j >= 1; --j)
        std::copy_n(kf.v.begin() + (j - 1) * ss, ss, kf.v.begin() + j * ss);
    kf.set_inflow_slice(0);

    // (ii) semi-Lagrangian x-advection with bilinear weights
    double vmax = 0.0;
    for (std::size_t i = 0; i < vel.x.size(); ++i)
        vmax = std::max({vmax, std::abs(vel.x[i]), std::abs(vel.y[i])});
    if (vmax > 0.0) {
        const AdvectionWeights adv = AdvectionWeights::from(vel, dt);
        std::vector<double> buf(ss);
        const int nk = n_s + 1;
        for (int j = 1; j <= n_t; ++j) {
            double* slice = kf.v.data() + static_cast<std::size_t>(j) * ss;
            std::copy_n(slice, ss, buf.data());
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
                    const int x0 = adv.x0[p], y0 = adv.y0[p];
                    const int x1 = x0 + 1 == n ? 0 : x0 + 1;
                    const int y1 = y0 + 1 == n ? 0 : y0 + 1;
                    const double ax = adv.wx[p], ay = adv.wy[p];
                    const double* c00 = buf.data() + (static_cast<std::size_t>(y0) * n + x0) * nk;
                    const double* c01 = buf.data() + (static_cast<std::size_t>(y0) * n + x1) * nk;
                    const double* c10 = buf.data() + (static_cast<std::size_t>(y1) * n + x0) * nk;
                    const double* c11 = buf.data() + (static_cast<std::size_t>(y1) * n + x1) * nk;
                    double* out = slice + p * static_cast<std::size_t>(nk);
                    for (int k = 0; k < nk; ++k)
                        out[k] = (1.0 - ay) * ((1.0 - ax) * c00[k] + ax * c01[k]) +
                                 ay * ((1.0 - ax) * c10[k] + ax * c11[k]);
                }
        }
    }

    // (iii) first-order upwind for g d_s K, (iv) implicit s-diffusion
    DiffusionSolver solver(n_s, (dt / we) / (ds * ds));
    std::vector<double> line(n_s + 1);
    for (int j = 1; j <= n_t; ++j)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double* kline = kf.v.data() + kf.idx(j, iy, ix, 0);
                const double* gline = g.v.data() + g.idx(iy, ix, 0);
                std::copy_n(kline, n_s + 1, line.data());
                for (int k = 1; k < n_s; ++k) {
                    const double gv = gline[k];
                    const double diff = gv > 0.0 ? line[k] - line[k - 1] : line[k + 1] - line[k];
                    kline[k] = line[k] - dt * gv * diff / ds;
                }
                solver.apply(kline);
            }
}

MemoryField memory(const KernelField& kf) {
    MemoryField m;
    m.n_t = kf.n_t;
    m.n = kf.n;
    m.n_s = kf.n_s;
    m.dT = kf.dT;
    m.v.assign(kf.v.size(), 0.0);
    const std::size_t ss = kf.slice_size();
    const double inv_dT = 1.0 / kf.dT;
    for (int j = 1; j <= kf.n_t; ++j) {
        const double* prev = kf.v.data() + (static_cast<std::size_t>(j) - 1) * ss;
        const double* cur = kf.v.data() + static_cast<std::size_t>(j) * ss;
        double* out = m.v.data() + static_cast<std::size_t>(j) * ss;
        for (std::size_t i = 0; i < ss; ++i) out[i] = (prev[i] - cur[i]) * inv_dT;
    }
    return m;
}

double ia_memory(double T, int p_max) {
    if (T < 0.0) throw std::domain_error("ia_memory: T must be nonnegative");
    if (p_max < 1) throw std::invalid_argument("ia_memory: p_max must be >= 1");
    double sum = 0.0;
    for (int p = 1; p <= p_max; p += 2) {
        const double term = std::exp(-T * static_cast<double>(p) * p);
        if (term < 1e-300) break;
        sum += term;
    }
    return 8.0 / (pi * pi) * sum;
}

bool ia_memory_singular(double T) { return T == 0.0; }

double ia_memory_integral(double a, double b, int p_max, double abs_tol) {
    return adaptive_integrate([p_max](double t) { return ia_memory(t, p_max); }, a, b,
                              abs_tol);
}

double ia_memory_cell_average(double t0, double t1, int p_max) {
    if (!(t1 > t0)) throw std::invalid_argument("ia_memory_cell_average: need t1 > t0");
    double sum = 0.0;
    for (int p = 1; p <= p_max; p += 2) {
        const double p2 = static_cast<double>(p) * p;
        const double term = (std::exp(-t0 * p2) - std::exp(-t1 * p2)) / p2;
        sum += term;
        if (std::exp(-t0 * p2) < 1e-300) break;
    }
    return 8.0 / (pi * pi) * sum / (t1 - t0);
}

double ia_memory_tail(int p_max) {
    // direct sum to q, then Euler-Maclaurin closure of sum_{odd p >= q} p^-2
    const int q = 100001;
    double sum = 0.0;
    for (int p = p_max + 2; p < q; p += 2) sum += 1.0 / (static_cast<double>(p) * p);
    const double qd = q;
    sum += 1.0 / (2.0 * qd) + 1.0 / (2.0 * qd * qd) + 1.0 / (3.0 * qd * qd * qd);
    return 8.0 / (pi * pi) * sum;
}

ValidationReport validate_initial_kernel(const KernelField& k0, double mu, double we) {
    ValidationReport rep;
    MemoryField m = memory(k0);
    auto loc = [](int j, int iy, int ix, int k) {
        std::ostringstream os;
        os << "(j=" << j << ", iy=" << iy << ", ix=" << ix << ", k=" << k << ")";
        return os.str();
    };

    {
        CheckResult c{"wall_values", true, 0.0, ""};
        for (int j = 0; j <= k0.n_t; ++j)
            for (int iy = 0; iy < k0.n; ++iy)
                for (int ix = 0; ix < k0.n; ++ix)
                    for (int k : {0, k0.n_s}) {
                        const double val = std::abs(k0.at(j, iy, ix, k));
                        if (val > std::abs(c.value)) {
                            c.value = val;
                            c.where = loc(j, iy, ix, k);
                        }
                    }
        c.pass = std::abs(c.value) <= 1e-12;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"memory_nonnegative", true, 0.0, ""};
        c.value = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= k0.n_t; ++j)
            for (int iy = 0; iy < k0.n; ++iy)
                for (int ix = 0; ix < k0.n; ++ix)
                    for (int k = 0; k <= k0.n_s; ++k) {
                        const double val = m.at(j, iy, ix, k);
                        if (val < c.value) {
                            c.value = val;
                            c.where = loc(j, iy, ix, k);
                        }
                    }
        c.pass = c.value >= -1e-10;
        rep.checks.push_back(c);
    }
    {
        // age monotonicity of the memory: m_{j} - m_{j-1} <= tol for j >= 2
        CheckResult c{"memory_monotone", true, 0.0, ""};
        c.value = -std::numeric_limits<double>::infinity();
        for (int j = 2; j <= k0.n_t; ++j)
            for (int iy = 0; iy < k0.n; ++iy)
                for (int ix = 0; ix < k0.n; ++ix)
                    for (int k = 0; k <= k0.n_s; ++k) {
                        const double d = m.at(j, iy, ix, k) - m.at(j - 1, iy, ix, k);
                        if (d > c.value) {
                            c.value = d;
                            c.where = loc(j, iy, ix, k);
                        }
                    }
        c.pass = c.value <= 1e-10;
        rep.checks.push_back(c);
    }
    {
        // the weighted memory m0 e^{2 We mu T} must peak away from the
        // age horizon, otherwise the configured mu exceeds the decay rate
        CheckResult c{"decay_envelope", true, 0.0, ""};
        int argmax = 0;
        double best = 0.0;
        std::vector<double> sup_m(k0.n_t + 1, 0.0);
        for (int j = 1; j <= k0.n_t; ++j) {
            double s = 0.0;
            for (int iy = 0; iy < k0.n; ++iy)
                for (int ix = 0; ix < k0.n; ++ix)
                    for (int k = 0; k <= k0.n_s; ++k)
                        s = std::max(s, m.at(j, iy, ix, k));
            sup_m[j] = s;
            const double w = s * std::exp(2.0 * we * mu * j * k0.dT);
            if (w > best) {
                best = w;
                argmax = j;
            }
        }
        c.value = best;  // this is C0
        c.pass = best == 0.0 || argmax <= (9 * k0.n_t) / 10;
        if (!c.pass) {
            const int ja = k0.n_t / 2, jb = k0.n_t;
            std::ostringstream os;
            os << "peak at j=" << argmax;
            if (sup_m[ja] > 0.0 && sup_m[jb] > 0.0 && jb > ja) {
                const double rate =
                    std::log(sup_m[ja] / sup_m[jb]) / ((jb - ja) * k0.dT);
                os << ", admissible mu ~ " << rate / (2.0 * we);
            }
            c.where = os.str();
        }
        rep.checks.push_back(c);
    }
    return rep;
}

double decay_monitor(const MemoryField& m, double t, double mu, double we) {
    double worst = 0.0;
    const std::size_t ss = static_cast<std::size_t>(m.n) * m.n * (m.n_s + 1);
    for (int j = 1; j <= m.n_t; ++j) {
        const double w = std::exp(mu * (2.0 * we * j * m.dT - t));
        const double* slab = m.v.data() + static_cast<std::size_t>(j) * ss;
        double smax = 0.0;
        for (std::size_t i = 0; i < ss; ++i) smax = std::max(smax, slab[i]);
        worst = std::max(worst, w * smax);
    }
    return worst;
}

double decay_monitor(const KernelField& kf, double t, double mu, double we) {
    MemoryField m = memory(kf);
    return decay_monitor(m, t, mu, we);
}

double decay_constant_c0(const KernelField& k0, double mu, double we) {
    return decay_monitor(k0, 0.0, mu, we);
}

}  // namespace rept
