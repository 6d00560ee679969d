#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rept {

// Small dense tensors of order 1..4 in dimension d <= 3.
// Storage is a fixed stack array; component (i1,...,ip) lives at
// index i1*d^(p-1) + ... + ip.
struct Tensor {
    static constexpr int max_dim = 3;
    static constexpr std::size_t max_size = 81;  // 3^4

    int order = 0;
    int dim = 0;
    std::array<double, max_size> v{};

    Tensor() = default;
    Tensor(int order_, int dim_) : order(order_), dim(dim_) {
        if (order_ < 0 || order_ > 4 || dim_ < 1 || dim_ > max_dim)
            throw std::invalid_argument("Tensor: order must be 0..4, dim 1..3");
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (int k = 0; k < order; ++k) n *= static_cast<std::size_t>(dim);
        return n;
    }

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    double& at(int i) { return v[static_cast<std::size_t>(i)]; }
    double& at(int i, int j) { return v[static_cast<std::size_t>(i * dim + j)]; }
    double& at(int i, int j, int k) {
        return v[static_cast<std::size_t>((i * dim + j) * dim + k)];
    }
    double& at(int i, int j, int k, int l) {
        return v[static_cast<std::size_t>(((i * dim + j) * dim + k) * dim + l)];
    }
    double at(int i) const { return v[static_cast<std::size_t>(i)]; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(i * dim + j)]; }
    double at(int i, int j, int k) const {
        return v[static_cast<std::size_t>((i * dim + j) * dim + k)];
    }
    double at(int i, int j, int k, int l) const {
        return v[static_cast<std::size_t>(((i * dim + j) * dim + k) * dim + l)];
    }

    bool finite() const {
        for (std::size_t i = 0; i < size(); ++i)
            if (!std::isfinite(v[i])) return false;
        return true;
    }

    Tensor& operator+=(const Tensor& o) {
        for (std::size_t i = 0; i < size(); ++i) v[i] += o.v[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        for (std::size_t i = 0; i < size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    Tensor& operator*=(double c) {
        for (std::size_t i = 0; i < size(); ++i) v[i] *= c;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double c) { return a *= c; }
    friend Tensor operator*(double c, Tensor a) { return a *= c; }
};

using Tensor2 = Tensor;

inline Tensor vector(double x, double y) {
    Tensor t(1, 2);
    t.at(0) = x;
    t.at(1) = y;
    return t;
}

inline Tensor identity2(int dim = 2) {
    Tensor t(2, dim);
    for (int i = 0; i < dim; ++i) t.at(i, i) = 1.0;
    return t;
}

inline Tensor matrix2(double a, double b, double c, double d) {
    Tensor t(2, 2);
    t.at(0, 0) = a;
    t.at(0, 1) = b;
    t.at(1, 0) = c;
    t.at(1, 1) = d;
    return t;
}

inline void check_dims(const Tensor& a, const Tensor& b, const char* op) {
    if (a.dim != b.dim)
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

// (A (x) B)_{i...,j...} = a_{i...} b_{j...}
inline Tensor outer(const Tensor& a, const Tensor& b) {
    check_dims(a, b, "outer");
    if (a.order + b.order > 4)
        throw std::invalid_argument("outer: resulting order exceeds 4");
    Tensor r(a.order + b.order, a.dim);
    const std::size_t na = a.size(), nb = b.size();
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) r.v[i * nb + j] = a.v[i] * b.v[j];
    return r;
}

// (A . B)_{i...,j...} = a_{i...,k} b_{k,j...}  (single-index contraction)
inline Tensor dot(const Tensor& a, const Tensor& b) {
    check_dims(a, b, "dot");
    if (a.order < 1 || b.order < 1)
        throw std::invalid_argument("dot: both operands need order >= 1");
    Tensor r(a.order + b.order - 2, a.dim);
    const std::size_t d = static_cast<std::size_t>(a.dim);
    const std::size_t na = a.size() / d;  // leading multi-index of a
    const std::size_t nb = b.size() / d;  // trailing multi-index of b
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += a.v[i * d + k] * b.v[k * nb + j];
            r.v[i * nb + j] = s;
        }
    return r;
}

// (A : B)_{i...,j...} = a_{i...,k,l} b_{k,l,j...}  (two-index contraction)
inline Tensor double_dot(const Tensor& a, const Tensor& b) {
    check_dims(a, b, "double_dot");
    if (a.order < 2 || b.order < 2)
        throw std::invalid_argument("double_dot: both operands need order >= 2");
    Tensor r(a.order + b.order - 4, a.dim);
    const std::size_t d = static_cast<std::size_t>(a.dim);
    const std::size_t dd = d * d;
    const std::size_t na = a.size() / dd;
    const std::size_t nb = b.size() / dd;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            double s = 0.0;
            for (std::size_t kl = 0; kl < dd; ++kl)
                s += a.v[i * dd + kl] * b.v[kl * nb + j];
            r.v[i * nb + j] = s;
        }
    return r;
}

inline double frobenius(const Tensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.v[i] * a.v[i];
    return std::sqrt(s);
}

inline double trace(const Tensor& a) {
    if (a.order != 2) throw std::invalid_argument("trace: order-2 tensor required");
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a.at(i, i);
    return s;
}

inline double det(const Tensor& a) {
    if (a.order != 2) throw std::invalid_argument("det: order-2 tensor required");
    if (a.dim == 2) return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    return a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) -
           a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0)) +
           a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
}

inline Tensor transpose(const Tensor& a) {
    if (a.order != 2) throw std::invalid_argument("transpose: order-2 tensor required");
    Tensor r(2, a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) r.at(i, j) = a.at(j, i);
    return r;
}

// exp(A) for a 2x2 matrix via Cayley-Hamilton.  With mu = tr(A)/2 and
// delta^2 = mu^2 - det(A):  exp(A) = e^mu [cosh(delta) I + sinh(delta)/delta (A - mu I)].
// The series form of sinh(delta)/delta handles delta^2 of either sign.
inline Tensor expm2(const Tensor& a) {
    if (a.order != 2 || a.dim != 2)
        throw std::invalid_argument("expm2: 2x2 tensor required");
    const double mu = 0.5 * trace(a);
    const double d2 = mu * mu - det(a);
    double c, s;  // c = cosh(delta), s = sinh(delta)/delta
    if (d2 > 1e-12) {
        const double dl = std::sqrt(d2);
        c = std::cosh(dl);
        s = std::sinh(dl) / dl;
    } else if (d2 < -1e-12) {
        const double dl = std::sqrt(-d2);
        c = std::cos(dl);
        s = std::sin(dl) / dl;
    } else {
        // cosh x = 1 + x^2/2 + x^4/24, sinh(x)/x = 1 + x^2/6 + x^4/120
        c = 1.0 + d2 / 2.0 + d2 * d2 / 24.0;
        s = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
    }
    const double e = std::exp(mu);
    Tensor r(2, 2);
    r.at(0, 0) = e * (c + s * (a.at(0, 0) - mu));
    r.at(0, 1) = e * s * a.at(0, 1);
    r.at(1, 0) = e * s * a.at(1, 0);
    r.at(1, 1) = e * (c + s * (a.at(1, 1) - mu));
    return r;
}

}  // namespace rept
