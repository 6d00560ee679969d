#include "rept/kernels/orient_moments.hpp"

#include <optional>

#include "rept/quadrature.hpp"

namespace rept::kernels {

CircleTable CircleTable::from(const SphereQuadrature& q) {
    if (q.dim() != 2)
        throw std::invalid_argument("CircleTable: d=2 quadrature required");
    CircleTable t;
    t.n = q.count();
    t.w = q.weight(0);
    t.cs.resize(static_cast<std::size_t>(t.n));
    t.sn.resize(static_cast<std::size_t>(t.n));
    for (int i = 0; i < t.n; ++i) {
        t.cs[static_cast<std::size_t>(i)] = q.node(i, 0);
        t.sn[static_cast<std::size_t>(i)] = q.node(i, 1);
    }
    return t;
}

namespace {

Backend detect() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::avx2;
#endif
    return Backend::scalar;
}

std::optional<Backend>& override_slot() {
    static std::optional<Backend> slot;
    return slot;
}

}  // namespace

Backend active_backend() {
    if (override_slot()) return *override_slot();
    static const Backend detected = detect();
    return detected;
}

void force_backend(Backend b) {
#if !defined(__x86_64__)
    if (b == Backend::avx2)
        throw std::invalid_argument("force_backend: avx2 unavailable on this target");
#endif
    override_slot() = b;
}

void reset_backend() { override_slot().reset(); }

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void orient_moments(const double g[4], const CircleTable& tab, double out[4]) {
#if defined(__x86_64__)
    if (active_backend() == Backend::avx2) {
        orient_moments_avx2(g, tab, out);
        return;
    }
#endif
    orient_moments_scalar(g, tab, out);
}

void orient_moments_ia(const double g[4], const CircleTable& tab, double out[4]) {
#if defined(__x86_64__)
    if (active_backend() == Backend::avx2) {
        orient_moments_ia_avx2(g, tab, out);
        return;
    }
#endif
    orient_moments_ia_scalar(g, tab, out);
}

}  // namespace rept::kernels
