#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rept/memory_kernel.hpp"
#include "rept/stress.hpp"

using namespace rept;

namespace {

const double pi = std::numbers::pi;

const OrientationMap& production_map() {
    static OrientationMap m(SphereQuadrature::circle(64));
    return m;
}

const TruncationProfile& production_profile() {
    static TruncationProfile p(0.8);
    return p;
}

MemoryField zero_memory(int n_t, int n, int n_s, double dT) {
    MemoryField m;
    m.n_t = n_t;
    m.n = n;
    m.n_s = n_s;
    m.dT = dT;
    m.v.assign(static_cast<std::size_t>(n_t + 1) * n * n * (n_s + 1), 0.0);
    return m;
}

Tensor rotation(double th) {
    return matrix2(std::cos(th), -std::sin(th), std::sin(th), std::cos(th));
}

// sum_{p odd <= p_max} (8/pi^2 p^2) e^{-p^2 t}, the IA relaxation modulus
double relaxation_modulus(double t, int p_max) {
    double s = 0.0;
    for (int p = 1; p <= p_max; p += 2)
        s += 8.0 / (pi * pi * p * p) * std::exp(-t * static_cast<double>(p) * p);
    return s;
}

}  // namespace

TEST_CASE("zero memory gives exactly zero orientation field and stress") {
    const int n_t = 6, n = 4, n_s = 8;
    KernelField k = uniform_kernel(n_t, n, n_s, 0.1);
    MemoryField m = memory(k);
    DeformationField g = identity_deformation(n_t, n, 0.1);
    for (int j = 0; j <= n_t; ++j) g.set(j, 1, 2, matrix2(2, 0.3, 0.1, 0.8));
    OrientationField s = orientation_field(m, g, production_map(), production_profile(), n_s);
    for (double v : s.xx) CHECK(v == 0.0);
    for (double v : s.xy) CHECK(v == 0.0);
    for (double v : s.yy) CHECK(v == 0.0);
    Tensor2Field sig = stress_tensor(s, 0.5);
    CHECK(max_abs(sig) == 0.0);
}

TEST_CASE("identity deformation gives vanishing stress for any memory") {
    const int n_t = 20, n = 4, n_s = 8;
    const double dT = 0.05;
    KernelField k = ia_equilibrium_kernel(n_t, n, n_s, dT, 99);
    MemoryField m = memory(k);
    DeformationField g = identity_deformation(n_t, n, dT);
    OrientationField s = orientation_field(m, g, production_map(), production_profile(), n_s);
    double worst = 0.0;
    for (double v : s.xx) worst = std::max(worst, std::abs(v));
    for (double v : s.xy) worst = std::max(worst, std::abs(v));
    for (double v : s.yy) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-13);
    Tensor2Field sig = stress_tensor(s, 0.9);
    CHECK(max_abs(sig) < 1e-13);
    CHECK(max_trace_residual(sig) < 1e-13);
    CHECK(max_asymmetry(sig) == 0.0);
}

TEST_CASE("single-age-slice memory collapses to the map value") {
    const int n_t = 10, n = 2, n_s = 6;
    const double dT = 0.07, mstar = 1.3;
    const int j0 = 4;
    MemoryField m = zero_memory(n_t, n, n_s, dT);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            for (int k = 0; k <= n_s; ++k) m.v[m.idx(j0, iy, ix, k)] = mstar;
    DeformationField g = identity_deformation(n_t, n, dT);
    const Tensor D = matrix2(2, 0, 0, 0.5);
    // the memory cell (j0-1, j0) sees the map average of its endpoints;
    // put D at both so the collapse is exact
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            g.set(j0 - 1, iy, ix, D);
            g.set(j0, iy, ix, D);
        }
    OrientationField s = orientation_field(m, g, production_map(), production_profile(), n_s);
    const Tensor F = production_map().s_truncated(D, production_profile());
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            for (int k = 0; k <= n_s; ++k) {
                const std::size_t b = s.idx(iy, ix, k);
                CHECK(s.xx[b] == doctest::Approx(dT * mstar * F.at(0, 0)).epsilon(1e-14));
                CHECK(s.yy[b] == doctest::Approx(dT * mstar * F.at(1, 1)).epsilon(1e-14));
                CHECK(std::abs(s.xy[b]) < 1e-14);
            }
    // frozen oracle for diag(2, 0.5) carried through the whole assembly
    const double omega = 0.6;
    Tensor2Field sig = stress_tensor(s, omega);
    CHECK(sig.xx[0] == doctest::Approx(omega * dT * mstar * 0.392511488).epsilon(2e-8));
    CHECK(sig.yy[0] == doctest::Approx(-omega * dT * mstar * 0.392511488).epsilon(2e-8));
}

TEST_CASE("constant-in-s orientation field integrates to omega S0") {
    const int n = 3, n_s = 10;
    OrientationField s(n, n_s);
    for (double& v : s.xx) v = 0.21;
    for (double& v : s.xy) v = -0.07;
    for (double& v : s.yy) v = -0.21;
    Tensor2Field sig = stress_tensor(s, 0.4);
    for (std::size_t p = 0; p < sig.xx.size(); ++p) {
        CHECK(sig.xx[p] == doctest::Approx(0.4 * 0.21).epsilon(1e-14));
        CHECK(sig.xy[p] == doctest::Approx(-0.4 * 0.07).epsilon(1e-14));
        CHECK(sig.yx[p] == sig.xy[p]);
        CHECK(sig.yy[p] == doctest::Approx(-0.4 * 0.21).epsilon(1e-14));
    }
}

TEST_CASE("stress bound omega (1 + 1/sqrt(2)) / 2 holds for random deformations") {
    const int n_t = 40, n = 4, n_s = 16;
    const double dT = 0.05, omega = 0.85;
    KernelField k = equilibrium_kernel(n_t, n, n_s, dT);
    MemoryField m = memory(k);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> sv(0.6, 1.6), an(0.0, 2.0 * pi);
    DeformationField g = identity_deformation(n_t, n, dT);
    for (int j = 1; j <= n_t; ++j)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                g.set(j, iy, ix,
                      dot(dot(rotation(an(rng)), matrix2(sv(rng), 0, 0, sv(rng))),
                          rotation(an(rng))));
    OrientationField s = orientation_field(m, g, production_map(), production_profile(), n_s);
    Tensor2Field sig = stress_tensor(s, omega);
    const double bound = omega * 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
    for (std::size_t p = 0; p < sig.xx.size(); ++p) {
        const double fro = std::sqrt(sig.xx[p] * sig.xx[p] + 2.0 * sig.xy[p] * sig.xy[p] +
                                     sig.yy[p] * sig.yy[p]);
        CHECK(fro <= bound * (1.0 + 1e-9));
    }
    CHECK(max_trace_residual(sig) < 1e-12);
    CHECK(max_asymmetry(sig) == 0.0);
}

TEST_CASE("stress divergence: constant, single mode, finite-difference oracle") {
    const int n = 64;
    Tensor2Field sig(n);
    for (double& v : sig.xx) v = 0.7;
    for (double& v : sig.xy) v = -0.2;
    for (double& v : sig.yx) v = -0.2;
    for (double& v : sig.yy) v = -0.7;
    VectorField d = stress_divergence(sig);
    CHECK(max_abs(d) < 1e-14);

    // single mode sigma_xx = cos(2x + y): (div sigma)_x = -2 sin(2x + y)
    Tensor2Field one(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = 2.0 * pi * ix / n, y = 2.0 * pi * iy / n;
            one.xx[static_cast<std::size_t>(iy) * n + ix] = std::cos(2.0 * x + y);
        }
    d = stress_divergence(one);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = 2.0 * pi * ix / n, y = 2.0 * pi * iy / n;
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            CHECK(d.x[p] == doctest::Approx(-2.0 * std::sin(2.0 * x + y)).epsilon(1e-11));
            CHECK(std::abs(d.y[p]) < 1e-11);
        }

    // smooth multimode field differentiated by a 4th-order stencil on the
    // analytic formula (h well below the grid spacing)
    auto sxx = [](double x, double y) { return 0.4 * std::sin(x + 2.0 * y) + 0.1 * std::cos(3.0 * x); };
    auto sxy = [](double x, double y) { return 0.3 * std::cos(2.0 * x - y); };
    auto syy = [](double x, double y) { return -0.4 * std::sin(x + 2.0 * y) + 0.2 * std::sin(y); };
    Tensor2Field sm(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = 2.0 * pi * ix / n, y = 2.0 * pi * iy / n;
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            sm.xx[p] = sxx(x, y);
            sm.xy[p] = sxy(x, y);
            sm.yx[p] = sxy(x, y);
            sm.yy[p] = syy(x, y);
        }
    d = stress_divergence(sm);
    const double h = 0.01;
    auto d4 = [h](auto f, double x, double y, bool in_x) {
        auto at = [&](double o) { return in_x ? f(x + o, y) : f(x, y + o); };
        return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
    };
    double worst = 0.0, scale = 0.0;
    for (int iy = 0; iy < n; iy += 7)
        for (int ix = 0; ix < n; ix += 7) {
            const double x = 2.0 * pi * ix / n, y = 2.0 * pi * iy / n;
            const std::size_t p = static_cast<std::size_t>(iy) * n + ix;
            const double ox = d4(sxx, x, y, true) + d4(sxy, x, y, false);
            const double oy = d4(sxy, x, y, true) + d4(syy, x, y, false);
            worst = std::max({worst, std::abs(d.x[p] - ox), std::abs(d.y[p] - oy)});
            scale = std::max({scale, std::abs(ox), std::abs(oy)});
        }
    CHECK(worst < 1e-6 * scale);
}

TEST_CASE("ia_stress: identity gives zero, uniform shear matches the series") {
    const int n_t = 60, n = 3;
    const double dT = 0.05, omega = 0.7;
    const int p_max = 199;
    DeformationField id = identity_deformation(n_t, n, dT);
    Tensor2Field sig = ia_stress(id, production_map(), omega, p_max);
    CHECK(max_abs(sig) < 1e-14);

    const Tensor sheared = matrix2(1, 1.5, 0, 1);
    DeformationField g(n_t, n, dT);
    for (int j = 0; j <= n_t; ++j)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) g.set(j, iy, ix, sheared);
    sig = ia_stress(g, production_map(), omega, p_max);
    // total truncated-series mass over [0, T_max], exact per term
    const double t_max = n_t * dT;
    double mass = 0.0;
    for (int p = 1; p <= p_max; p += 2)
        mass += 8.0 / (pi * pi * p * p) * (1.0 - std::exp(-t_max * static_cast<double>(p) * p));
    const Tensor S = production_map().s_ia(sheared);
    CHECK(sig.xy[0] == doctest::Approx(omega * mass * S.at(0, 1)).epsilon(1e-12));
    CHECK(sig.xx[0] == doctest::Approx(omega * mass * S.at(0, 0)).epsilon(1e-12));
    CHECK(max_trace_residual(sig) < 1e-13);
}

TEST_CASE("ia_stress step shear relaxes like the modulus series") {
    // segments older than the step carry the strain, younger ones are fresh;
    // sliding the step age J sweeps out the relaxation modulus
    const int n_t = 80, n = 2;
    const double dT = 0.05, omega = 1.0 - 1e-9;
    const int p_max = 199;
    const Tensor sheared = matrix2(1, 0.8, 0, 1);
    const double sxy = production_map().s_ia(sheared).at(0, 1);
    const double tail = relaxation_modulus(n_t * dT, p_max) + ia_memory_tail(p_max);
    double prev = 1e300;
    for (int J : {4, 10, 20, 40}) {
        DeformationField g = identity_deformation(n_t, n, dT);
        for (int j = J; j <= n_t; ++j)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) g.set(j, iy, ix, sheared);
        Tensor2Field sig = ia_stress(g, production_map(), omega, p_max);
        const double got = sig.xy[0] / (omega * sxy);
        const double want = relaxation_modulus(J * dT, p_max);
        // half the step cell is smeared by the product trapezoid, and the
        // grid stops at T_max
        const double slack =
            0.51 * dT * ia_memory_cell_average((J - 1) * dT, J * dT, p_max) + tail + 1e-12;
        CHECK(std::abs(got - want) <= slack);
        CHECK(got < prev);
        prev = got;
    }
}

TEST_CASE("weak shear: full and IA maps have 3:2 linear responses") {
    // small-strain oracles: S(delta + c E)_xy -> 3c/8 for the full map and
    // c/4 for the IA map, so the modes agree only up to this modulus ratio
    const auto& map = production_map();
    for (double c : {1e-3, 1e-4}) {
        const Tensor g = matrix2(1, c, 0, 1);
        CHECK(map.s_of_g(g).at(0, 1) == doctest::Approx(3.0 * c / 8.0).epsilon(5e-3));
        CHECK(map.s_ia(g).at(0, 1) == doctest::Approx(c / 4.0).epsilon(5e-3));
    }
    // the ratio persists through assembly: same deformation history, kernel
    // sampled from the same series, stresses come out 3:2 as strain -> 0
    const int n_t = 60, n = 2, n_s = 32;
    const double dT = 0.05, omega = 0.5, c = 1e-3;
    const int p_max = 199;
    KernelField k = ia_equilibrium_kernel(n_t, n, n_s, dT, p_max);
    MemoryField m = memory(k);
    DeformationField g(n_t, n, dT);
    const Tensor sheared = matrix2(1, c, 0, 1);
    for (int j = 0; j <= n_t; ++j)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) g.set(j, iy, ix, sheared);
    OrientationField s = orientation_field(m, g, production_map(), production_profile(), n_s);
    Tensor2Field full = stress_tensor(s, omega);
    Tensor2Field ia = ia_stress(g, production_map(), omega, p_max);
    CHECK(full.xy[0] / ia.xy[0] == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("age quadrature self-convergence is second order") {
    // pure transport: prescribed smooth history G(T), kernel sampled from
    // the separable series; halving dT must shrink the stress error by 4
    const int n = 2, n_s = 8;
    const double t_max = 2.0, omega = 0.6;
    const int p_max = 199;
    auto sigma_at = [&](int n_t) {
        const double dT = t_max / n_t;
        KernelField k = ia_equilibrium_kernel(n_t, n, n_s, dT, p_max);
        MemoryField m = memory(k);
        DeformationField g(n_t, n, dT);
        for (int j = 0; j <= n_t; ++j) {
            const double T = j * dT;
            const Tensor gt = matrix2(1, 0.3 * std::sin(T), 0, 1);
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) g.set(j, iy, ix, gt);
        }
        OrientationField s =
            orientation_field(m, g, production_map(), production_profile(), n_s);
        return stress_tensor(s, omega);
    };
    Tensor2Field c0 = sigma_at(50), c1 = sigma_at(100), ref = sigma_at(400);
    const double e1 = std::abs(c0.xy[0] - ref.xy[0]);
    const double e2 = std::abs(c1.xy[0] - ref.xy[0]);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.2);
}

TEST_CASE("tail budget formula and monotonicity") {
    const double v = stress_tail_budget(0.0, 10.0, 1.0, 0.5, 1.0);
    const double want = (1.0 + 1.0 / std::sqrt(2.0)) * std::exp(-10.0) / 1.0;
    CHECK(v == doctest::Approx(want).epsilon(1e-14));
    CHECK(stress_tail_budget(1.0, 10.0, 1.0, 0.5, 1.0) > v);
    CHECK(stress_tail_budget(0.0, 20.0, 1.0, 0.5, 1.0) < v);
    CHECK_THROWS_AS(stress_tail_budget(0.0, 10.0, 1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("grid mismatch is rejected") {
    KernelField k = uniform_kernel(4, 4, 8, 0.1);
    MemoryField m = memory(k);
    DeformationField g = identity_deformation(4, 4, 0.2);
    CHECK_THROWS_AS(orientation_field(m, g, production_map(), production_profile(), 8),
                    std::invalid_argument);
    DeformationField g2 = identity_deformation(6, 4, 0.1);
    CHECK_THROWS_AS(orientation_field(m, g2, production_map(), production_profile(), 8),
                    std::invalid_argument);
}
