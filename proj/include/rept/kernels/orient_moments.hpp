#pragma once

#include <string>
#include <vector>

namespace rept {
class SphereQuadrature;
}

namespace rept::kernels {

// Node table for the d=2 circle rule in structure-of-arrays form, the
// layout the vector kernels consume.
struct CircleTable {
    int n = 0;
    double w = 0.0;  // equal weight per node
    std::vector<double> cs;
    std::vector<double> sn;

    static CircleTable from(const SphereQuadrature& q);
};

enum class Backend { scalar, avx2 };

// Pick the widest variant the CPU supports.  force_backend overrides the
// choice (tests use it for scalar/SIMD equivalence checks).
Backend active_backend();
void force_backend(Backend b);
void reset_backend();
std::string backend_name(Backend b);

// Quadrature moments of the orientation integrand for one 2x2 tensor
// g = {g00,g01,g10,g11}:
//   out[0..2] = < (Gu (x) Gu)_{xx,xy,yy} / |Gu| >,  out[3] = < |Gu| >.
void orient_moments(const double g[4], const CircleTable& tab, double out[4]);

// Same with the IA integrand (Gu (x) Gu)/|Gu|^2; out[3] = <1> = 2*pi.
void orient_moments_ia(const double g[4], const CircleTable& tab, double out[4]);

// reference kernels (always available; the dispatchers fall back to these)
void orient_moments_scalar(const double g[4], const CircleTable& tab, double out[4]);
void orient_moments_ia_scalar(const double g[4], const CircleTable& tab, double out[4]);
#if defined(__x86_64__)
void orient_moments_avx2(const double g[4], const CircleTable& tab, double out[4]);
void orient_moments_ia_avx2(const double g[4], const CircleTable& tab, double out[4]);
#endif

}  // namespace rept::kernels
