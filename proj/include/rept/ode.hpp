#pragma once

#include <functional>
#include <vector>

namespace rept {

// Adaptive Gauss-Kronrod (7-15 pair) integration to an absolute tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol);

// Parameters of the comparison ODE  y'' = xi0 (y + xi2)^k (y')^2,
// y(0) = 0, y'(0) = xi1.  xi0 = 0 degenerates to the linear case.
struct CauchyParams {
    double xi0 = 1.0;
    double xi1 = 1.0;
    double xi2 = 1.0;
    double k = 1.0;

    void validate() const;
};

// F(X) = int_0^X exp(-xi0 (x + xi2)^{k+1} / (k+1)) dx, strictly increasing
// from R+ onto [0, ell).  Evaluated by adaptive Gauss-Kronrod quadrature
// with absolute tolerance 1e-13.
double F_of(double X, const CauchyParams& p);

// Total length ell = lim_{X->inf} F(X).  Infinite when xi0 = 0.
double F_limit(const CauchyParams& p);

// Inverse of F on [0, ell): bracketing bisection to 1e-10 followed by two
// Newton steps with the closed-form F'.  Throws std::domain_error (quoting
// ell) for y >= ell.
double F_inverse(double y, const CauchyParams& p);

// Explicit solution y(x) = F^{-1}(xi1 e^{-c} x), c = xi0 xi2^{k+1}/(k+1),
// valid on [0, x*) with x* = (ell / xi1) e^{c}.  Throws std::domain_error
// at or beyond the blowup boundary.
double cauchy_solution(double x, const CauchyParams& p);

// Blowup abscissa x* of the explicit solution (infinite when xi0 = 0).
double cauchy_blowup(const CauchyParams& p);

// Independent check value: integrates y'' = xi0 (y + xi2)^k (y')^2 from
// (y, y') = (0, xi1) with adaptive step-doubled RK4 (5th order by local
// extrapolation) to the requested abscissa.  Used as an oracle against
// the closed form; shares no code path with it.
double cauchy_ode_rk(double x, const CauchyParams& p, double tol = 1e-12);

// Boundary traces for the two-time transport problem
//   d_t y + (1/We) d_T y = 0,
// whose solution is constant along characteristics dT/dt = 1/We.
struct CharacteristicData {
    std::function<double(double)> trace_t0;  // y(0, T), trace on {t = 0}
    std::function<double(double)> trace_T0;  // y(t, 0), trace on {T = 0}
    double we = 1.0;                         // Weissenberg number, > 0
};

// Value at (t, T) by tracing the characteristic back to the boundary it
// entered through.  The corner t = We T resolves to the {t = 0} trace.
double characteristic_value(double t, double T, const CharacteristicData& data);

}  // namespace rept
