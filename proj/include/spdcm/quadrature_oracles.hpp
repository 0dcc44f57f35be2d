#pragma once

#include "spdcm/kernels.hpp"

namespace spdcm {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    unsigned max_depth = 15;
    int omega_nodes = 65;  // trapezoid nodes across ±8σ of the ω₂ Gaussian
};

/// ∫H*(k₁,k₂,z₁)H(k₂,k₃,z₂)d̄k₂ with the K₂ Gaussian done analytically and ω₂
/// by trapezoid quadrature. No thin-crystal expansion.
cd numeric_hh_contraction(const Kernels& kernels, const WaveVector& k1, const WaveVector& k3,
                          double z1, double z2, const QuadratureOptions& opt = {});

/// Same contraction as a plain 3-D trapezoid sum over K₂ and ω₂.
cd brute_force_hh_contraction(const Kernels& kernels, const WaveVector& k1, const WaveVector& k3,
                              double z1, double z2, int n_k = 161, int n_omega = 81);

/// ½∫₀ᴸ∫H*(k₁,k₂,z)ξ*(k₂)d̄k₂dz with the K₂ integral analytic and z adaptive.
cd oracle_zeta2(const Kernels& kernels, const WaveVector& k1, const QuadratureOptions& opt = {});

/// (K_D/4)∫₀ᴸ∫₀ᴸ (H*(z₁)⋄H(z₂))(k,k) dz₂dz₁ at k = (k_d X₀/f, ω_d).
double oracle_background(const Kernels& kernels, const Vec2& X0, const QuadratureOptions& opt = {});

}  // namespace spdcm
