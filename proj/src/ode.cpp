#include "rept/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rept {

namespace {

// QUADPACK 7-15 Gauss-Kronrod pair on [-1, 1]
constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double value;
    double error;
};

template <class F>
GkResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk_nodes[i]);
        fv[14 - i] = f(c + h * gk_nodes[i]);
    }
    fv[7] = f(c);
    double kron = gk_wk[7] * fv[7];
    double gauss = gk_wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) kron += gk_wk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 4; ++i) {
        const int j = 2 * i + 1;  // Gauss points sit at odd Kronrod indices
        if (j < 7) gauss += gk_wg[i] * (fv[j] + fv[14 - j]);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

template <class F>
double adaptive_gk(const F& f, double a, double b, double tol, int depth = 0) {
    GkResult r = gk15(f, a, b);
    // the relative floor keeps boundary layers from recursing past the
    // precision the integrand itself can deliver
    if (r.error < tol || r.error < 1e-14 * std::abs(r.value) || depth > 30)
        return r.value;
    const double c = 0.5 * (a + b);
    return adaptive_gk(f, a, c, 0.5 * tol, depth + 1) +
           adaptive_gk(f, c, b, 0.5 * tol, depth + 1);
}

double exponent_arg(double x, const CauchyParams& p) {
    return p.xi0 * std::pow(x + p.xi2, p.k + 1.0) / (p.k + 1.0);
}

double F_integrand(double x, const CauchyParams& p) {
    return std::exp(-exponent_arg(x, p));
}

// abscissa beyond which the integrand underflows to zero
double F_cutoff(const CauchyParams& p) {
    const double arg = 745.0;  // exp(-745) ~ 5e-324
    return std::pow(arg * (p.k + 1.0) / p.xi0, 1.0 / (p.k + 1.0));
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_integrate: tolerance");
    if (a == b) return 0.0;
    return adaptive_gk(f, a, b, abs_tol);
}

void CauchyParams::validate() const {
    if (!(xi0 >= 0.0) || !(xi1 > 0.0) || !(xi2 > 0.0) || !(k > 0.0))
        throw std::invalid_argument("CauchyParams: need xi0 >= 0 and xi1, xi2, k > 0");
}

double F_of(double X, const CauchyParams& p) {
    p.validate();
    if (X < 0.0) throw std::domain_error("F_of: X must be nonnegative");
    if (p.xi0 == 0.0) return X;
    const double hi = std::min(X, F_cutoff(p));
    if (hi <= 0.0) return 0.0;
    double total = 0.0;
    // split long intervals so the local Kronrod estimate stays honest
    const double chunk = std::max(1.0, p.xi2);
    double a = 0.0;
    while (a < hi) {
        const double b = std::min(a + chunk, hi);
        total += adaptive_gk([&p](double x) { return F_integrand(x, p); }, a, b, 1e-13);
        a = b;
    }
    return total;
}

double F_limit(const CauchyParams& p) {
    p.validate();
    if (p.xi0 == 0.0) return std::numeric_limits<double>::infinity();
    return F_of(F_cutoff(p), p);
}

double F_inverse(double y, const CauchyParams& p) {
    p.validate();
    if (y < 0.0) throw std::domain_error("F_inverse: y must be nonnegative");
    if (p.xi0 == 0.0) return y;
    const double ell = F_limit(p);
    if (y >= ell) {
        std::ostringstream msg;
        msg << "F_inverse: y = " << y << " outside [0, ell), ell = " << ell;
        throw std::domain_error(msg.str());
    }
    if (y == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (F_of(hi, p) < y) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (F_of(mid, p) < y ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double fp = F_integrand(x, p);
        if (fp <= 0.0) break;
        x -= (F_of(x, p) - y) / fp;
        x = std::max(x, 0.0);
    }
    return x;
}

double cauchy_blowup(const CauchyParams& p) {
    p.validate();
    if (p.xi0 == 0.0) return std::numeric_limits<double>::infinity();
    const double c = p.xi0 * std::pow(p.xi2, p.k + 1.0) / (p.k + 1.0);
    return F_limit(p) * std::exp(c) / p.xi1;
}

double cauchy_solution(double x, const CauchyParams& p) {
    p.validate();
    if (x < 0.0) throw std::domain_error("cauchy_solution: x must be nonnegative");
    if (p.xi0 == 0.0) return p.xi1 * x;
    const double xstar = cauchy_blowup(p);
    if (x >= xstar) {
        std::ostringstream msg;
        msg << "cauchy_solution: x = " << x << " at or past blowup x* = " << xstar;
        throw std::domain_error(msg.str());
    }
    const double c = p.xi0 * std::pow(p.xi2, p.k + 1.0) / (p.k + 1.0);
    return F_inverse(p.xi1 * std::exp(-c) * x, p);
}

double cauchy_ode_rk(double x, const CauchyParams& p, double tol) {
    p.validate();
    if (x < 0.0) throw std::domain_error("cauchy_ode_rk: x must be nonnegative");
    auto rhs = [&p](const double s[2], double out[2]) {
        out[0] = s[1];
        out[1] = p.xi0 * std::pow(s[0] + p.xi2, p.k) * s[1] * s[1];
    };
    auto rk4 = [&rhs](const double s[2], double h, double out[2]) {
        double k1[2], k2[2], k3[2], k4[2], tmp[2];
        rhs(s, k1);
        for (int i = 0; i < 2; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
        rhs(tmp, k2);
        for (int i = 0; i < 2; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (int i = 0; i < 2; ++i) tmp[i] = s[i] + h * k3[i];
        rhs(tmp, k4);
        for (int i = 0; i < 2; ++i)
            out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };
    double s[2] = {0.0, p.xi1};
    double pos = 0.0;
    double h = std::min(1e-2, x > 0.0 ? x : 1e-2);
    int guard = 0;
    while (pos < x) {
        if (++guard > 2000000) throw std::runtime_error("cauchy_ode_rk: step limit");
        h = std::min(h, x - pos);
        double full[2], half[2], two[2];
        rk4(s, h, full);
        rk4(s, 0.5 * h, half);
        rk4(half, 0.5 * h, two);
        const double err = std::max(std::abs(two[0] - full[0]), std::abs(two[1] - full[1]));
        const double scale = 1.0 + std::abs(two[0]) + std::abs(two[1]);
        if (err < tol * scale) {
            // accept with 5th-order local extrapolation
            for (int i = 0; i < 2; ++i) s[i] = two[i] + (two[i] - full[i]) / 15.0;
            pos += h;
            if (err < 0.01 * tol * scale) h *= 2.0;
        } else {
            h *= 0.5;
            if (h < 1e-14) throw std::runtime_error("cauchy_ode_rk: step underflow (blowup?)");
        }
    }
    return s[0];
}

double characteristic_value(double t, double T, const CharacteristicData& data) {
    if (!(data.we > 0.0)) throw std::invalid_argument("characteristic_value: We must be positive");
    if (t < 0.0 || T < 0.0) throw std::domain_error("characteristic_value: t, T must be nonnegative");
    if (t <= data.we * T) return data.trace_t0(T - t / data.we);
    return data.trace_T0(t - data.we * T);
}

}  // namespace rept
