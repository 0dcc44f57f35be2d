#pragma once

#include "spdcm/kernels.hpp"

namespace spdcm {

struct BackgroundParams {
    double Omega3 = 0;
    double r0 = 0, R = 0, beta0 = 0;
    double Xi = 0, waist = 0, bandwidth = 0, K_D = 0;
};

/// Spontaneous background ½tr{(A−1)⋄D} under the thin-crystal approximation.
class Background {
public:
    explicit Background(const ExperimentConfig& cfg);
    explicit Background(const Kernels& kernels);

    const BackgroundParams& params() const { return p_; }
    const Kernels& kernels() const { return kernels_; }

    /// ∫H*(k₁,k₂,z₁)H(k₂,k₃,z₂)d̄k₂ in closed form.
    cd hh_contraction(const WaveVector& k1, const WaveVector& k3, double z1, double z2) const;

    double intensity(const Vec2& X0) const;
    double intensity_r(double r) const;
    /// Limit at r = r₀, Ω₃β₀²/R⁴.
    double peak_limit() const;

    /// Dimensionless shape g(s), s = (r²−r₀²)β₀/R², with g(0) = 1.
    static double shape(double s, double beta0);

private:
    Kernels kernels_;
    BackgroundParams p_;
};

}  // namespace spdcm
