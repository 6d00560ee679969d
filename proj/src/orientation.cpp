#include "rept/orientation.hpp"

namespace rept {

OrientationMap::OrientationMap(SphereQuadrature quad) : quad_(std::move(quad)) {
    if (quad_.dim() == 2) table_ = kernels::CircleTable::from(quad_);
}

void OrientationMap::require_nondegenerate(const Tensor& G) const {
    if (G.order != 2 || G.dim != quad_.dim())
        throw std::invalid_argument("orientation: order-2 tensor of matching dim required");
    if (frobenius(G) < 1e-12)
        throw std::domain_error("orientation: |G| below 1e-12, map undefined at G = 0");
}

Tensor OrientationMap::s_of_g(const Tensor& G) const {
    require_nondegenerate(G);
    const int d = G.dim;
    Tensor S(2, d);
    if (d == 2) {
        double mom[4];
        kernels::orient_moments(G.v.data(), table_, mom);
        const double inv_b = 1.0 / mom[3];
        S.at(0, 0) = mom[0] * inv_b - 0.5;
        S.at(0, 1) = mom[1] * inv_b;
        S.at(1, 0) = mom[1] * inv_b;
        S.at(1, 1) = mom[2] * inv_b - 0.5;
        return S;
    }
    double b = 0.0;
    Tensor A(2, d);
    for (int q = 0; q < quad_.count(); ++q) {
        double gu[3] = {0, 0, 0};
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) gu[i] += G.at(i, k) * quad_.node(q, k);
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) r2 += gu[i] * gu[i];
        const double r = std::sqrt(r2);
        const double w = quad_.weight(q);
        b += w * r;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A.at(i, j) += w * gu[i] * gu[j] / r;
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S.at(i, j) = A.at(i, j) / b - (i == j ? 1.0 / d : 0.0);
    return S;
}

Tensor OrientationMap::s_prime(const Tensor& G) const {
    require_nondegenerate(G);
    const int d = G.dim;
    double b = 0.0;
    Tensor A(2, d);  // <(Gu)_k (Gu)_l / |Gu|>
    Tensor P(2, d);  // <(Gu)_i u_j / |Gu|>
    Tensor R(4, d);  // <(Gu)_k (Gu)_l (Gu)_i u_j / |Gu|^3>, stored at (i,j,k,l)
    for (int q = 0; q < quad_.count(); ++q) {
        double u[3] = {0, 0, 0}, gu[3] = {0, 0, 0};
        for (int k = 0; k < d; ++k) u[k] = quad_.node(q, k);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) gu[i] += G.at(i, k) * u[k];
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) r2 += gu[i] * gu[i];
        const double r = std::sqrt(r2);
        const double w = quad_.weight(q);
        const double wr = w / r;
        const double wr3 = w / (r2 * r);
        b += w * r;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                A.at(i, j) += wr * gu[i] * gu[j];
                P.at(i, j) += wr * gu[i] * u[j];
            }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        R.at(i, j, k, l) += wr3 * gu[k] * gu[l] * gu[i] * u[j];
    }
    const double inv_b = 1.0 / b;
    Tensor D(4, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double t = -inv_b * inv_b * P.at(i, j) * A.at(k, l);
                    if (i == k) t += inv_b * P.at(l, j);  // <u_j (Gu)_l/|Gu|> = P_{lj}
                    if (i == l) t += inv_b * P.at(k, j);
                    t -= inv_b * R.at(i, j, k, l);
                    D.at(i, j, k, l) = t;
                }
    return D;
}

Tensor OrientationMap::s_truncated(const Tensor& G, const TruncationProfile& prof) const {
    const double r = frobenius(G);
    if (r <= 0.5 * prof.gamma_tilde()) return Tensor(2, G.dim);
    return s_of_g(G) * prof.chi(r);
}

Tensor OrientationMap::s_truncated_prime(const Tensor& G, const TruncationProfile& prof) const {
    const int d = G.dim;
    const double r = frobenius(G);
    if (r <= 0.5 * prof.gamma_tilde()) return Tensor(4, d);
    const double c = prof.chi(r);
    const double cp = prof.chi_prime(r);
    Tensor D = s_prime(G) * c;
    if (cp != 0.0) {
        const Tensor S = s_of_g(G);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        D.at(i, j, k, l) += S.at(k, l) * G.at(i, j) / r * cp;
    }
    return D;
}

Tensor OrientationMap::s_ia(const Tensor& G) const {
    require_nondegenerate(G);
    const int d = G.dim;
    Tensor S(2, d);
    if (d == 2) {
        double mom[4];
        kernels::orient_moments_ia(G.v.data(), table_, mom);
        const double inv = 1.0 / mom[3];
        S.at(0, 0) = mom[0] * inv - 0.5;
        S.at(0, 1) = mom[1] * inv;
        S.at(1, 0) = mom[1] * inv;
        S.at(1, 1) = mom[2] * inv - 0.5;
        return S;
    }
    Tensor A(2, d);
    for (int q = 0; q < quad_.count(); ++q) {
        double gu[3] = {0, 0, 0};
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) gu[i] += G.at(i, k) * quad_.node(q, k);
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) r2 += gu[i] * gu[i];
        const double w = quad_.weight(q);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A.at(i, j) += w * gu[i] * gu[j] / r2;
    }
    const double inv = 1.0 / quad_.surface();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S.at(i, j) = A.at(i, j) * inv - (i == j ? 1.0 / d : 0.0);
    return S;
}

}  // namespace rept
