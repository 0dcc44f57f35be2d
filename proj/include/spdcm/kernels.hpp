#pragma once

#include "spdcm/config.hpp"

#include <complex>

namespace spdcm {

using cd = std::complex<double>;

struct WaveVector {
    Vec2 K = Vec2::Zero();  // transverse wave vector [1/m]
    double omega = 0.0;     // [rad/s]
};

/// Normalized Gaussian spectrum √(2√π/δ)·exp(−ω²/(2δ²)); ∫h² dω = 2π.
double spectral_h(double omega_offset, double delta);

enum class Parity { odd, even };

/// One closed-form contraction of m bilinear kernels in the thin-crystal limit.
struct ContractedKernelTerm {
    int order = 1;
    Parity parity = Parity::odd;
    double M0 = 0, M1 = 0, waist = 0, bandwidth = 0, omega_p = 0;

    cd operator()(const WaveVector& k1, const WaveVector& k2) const;
    /// Value at K₁ = ∓K₂ (sum/difference zero) and ω₁ = ω₂ = ω_p/2.
    double peak() const;
};

struct ThinCrystalUV {
    cd u_minus_identity;  // U − 1 (the identity is a delta kernel and is not evaluated)
    cd v;
    double last_term = 0;  // on-peak magnitude of the last included term
    int terms = 0;         // n values summed
};

class Kernels {
public:
    explicit Kernels(const ExperimentConfig& cfg);

    const ExperimentConfig& config() const { return cfg_; }
    const DerivedQuantities& derived() const { return d_; }

    double k(double omega) const;
    double kz(double omega) const;
    double chi(double omega) const;

    cd pump_profile(const WaveVector& k) const;
    cd seed_profile(const WaveVector& k) const;
    double delta_kz(const Vec2& K1, const Vec2& K2, double w1, double w2) const;
    cd bilinear_H(const WaveVector& k1, const WaveVector& k2, double z) const;

    /// −iΩ₀ with the pump phase, i.e. the constant in front of H.
    cd coupling() const;

    ContractedKernelTerm contracted_H(int m, Parity parity) const;

    /// Closed-form U, V sums truncated when the last on-peak term falls below
    /// 1e-10 of the running sum, or after n_max terms (never more than 32).
    ThinCrystalUV thin_crystal_UV(const WaveVector& k1, const WaveVector& k2, int n_max = 32) const;

private:
    ExperimentConfig cfg_;
    DerivedQuantities d_;
};

}  // namespace spdcm
