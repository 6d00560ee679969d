#pragma once

#include "rept/kernels/orient_moments.hpp"
#include "rept/quadrature.hpp"
#include "rept/tensor.hpp"

namespace rept {

// Orientation map evaluated by unit-sphere quadrature.  d=2 goes through
// the vector kernels; d=3 through the generic node loop.
class OrientationMap {
  public:
    explicit OrientationMap(SphereQuadrature quad);

    const SphereQuadrature& quadrature() const { return quad_; }

    // S(G) = <(Gu (x) Gu)/|Gu|> / <|Gu|> - delta/d.  Throws on |G| < 1e-12.
    Tensor s_of_g(const Tensor& G) const;

    // 4-tensor of partials d S(G)_{kl} / d G_{ij}, stored at (i,j,k,l)
    Tensor s_prime(const Tensor& G) const;

    // truncated map S(G)*chi(|G|), defined for every G including 0
    Tensor s_truncated(const Tensor& G, const TruncationProfile& prof) const;
    Tensor s_truncated_prime(const Tensor& G, const TruncationProfile& prof) const;

    // IA variant, normalized so the bracket is a mean: S_IA(delta) = 0
    Tensor s_ia(const Tensor& G) const;

  private:
    void require_nondegenerate(const Tensor& G) const;

    SphereQuadrature quad_;
    kernels::CircleTable table_;  // populated for d=2 only
};

}  // namespace rept
