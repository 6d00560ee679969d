#include "rept/kernels/orient_moments.hpp"

#include <cmath>

namespace rept::kernels {

void orient_moments_scalar(const double g[4], const CircleTable& tab, double out[4]) {
    double axx = 0.0, axy = 0.0, ayy = 0.0, b = 0.0;
    for (int i = 0; i < tab.n; ++i) {
        const double c = tab.cs[static_cast<std::size_t>(i)];
        const double s = tab.sn[static_cast<std::size_t>(i)];
        const double x = g[0] * c + g[1] * s;
        const double y = g[2] * c + g[3] * s;
        const double r = std::sqrt(x * x + y * y);
        const double inv = 1.0 / r;
        axx += x * x * inv;
        axy += x * y * inv;
        ayy += y * y * inv;
        b += r;
    }
    out[0] = tab.w * axx;
    out[1] = tab.w * axy;
    out[2] = tab.w * ayy;
    out[3] = tab.w * b;
}

void orient_moments_ia_scalar(const double g[4], const CircleTable& tab, double out[4]) {
    double axx = 0.0, axy = 0.0, ayy = 0.0;
    for (int i = 0; i < tab.n; ++i) {
        const double c = tab.cs[static_cast<std::size_t>(i)];
        const double s = tab.sn[static_cast<std::size_t>(i)];
        const double x = g[0] * c + g[1] * s;
        const double y = g[2] * c + g[3] * s;
        const double inv = 1.0 / (x * x + y * y);
        axx += x * x * inv;
        axy += x * y * inv;
        ayy += y * y * inv;
    }
    out[0] = tab.w * axx;
    out[1] = tab.w * axy;
    out[2] = tab.w * ayy;
    out[3] = tab.w * tab.n;
}

}  // namespace rept::kernels
