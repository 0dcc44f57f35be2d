#pragma once

#include "spdcm/kernels.hpp"

#include <optional>
#include <vector>

namespace spdcm {

enum class Branch { signal, idler };

/// One order of ζ in the thin-crystal limit. prefactor is the coefficient of
/// the term's contribution to ζ = ζ₁ − ζ₂, so idler terms include the minus sign.
struct OrderTerm {
    int order = 0;
    Branch branch = Branch::signal;
    double width = 0;      // w_e or w_o [m]
    double bandwidth = 0;  // δ_e or δ_o [rad/s]
    cd prefactor;
    Vec2 center = Vec2::Zero();  // +K_ξ for signal, −K_ξ for idler
    double omega_center = 0;

    cd amplitude(const WaveVector& k) const;
};

/// f(a) = |B(a)|² with B the TCA bracket; series below |a| < 1e-3.
double efficiency_f(double a, double beta);

/// The TCA bracket (κ−β)(1−e^{−iκ})/κ² + iβe^{−iκ}/κ; series below |κ| < 1e-3.
cd tca_bracket(double kappa, double beta);

struct SeedGeometry {
    double a_peak = 0;
    std::optional<double> K_xi_opt;  // |K_ξ| at a = a_peak, absent if no real solution
    std::optional<double> X_peak;    // absent when r₀² < R²/2
};

struct ZetaFields {
    cd zeta1;  // signal branch
    cd zeta2;  // idler branch; ζ = ζ₁ − ζ₂
};

class Stimulated {
public:
    explicit Stimulated(const ExperimentConfig& cfg);
    explicit Stimulated(const Kernels& kernels);

    const Kernels& kernels() const { return kernels_; }

    /// Orders n = 0…m_max; even n feed ζ₁ (centered at +K_ξ), odd n feed ζ₂.
    std::vector<OrderTerm> zeta_orders(int m_max) const;

    /// Leading idler order in the thin-crystal approximation.
    cd zeta2_tca(const WaveVector& k) const;
    double kappa(const Vec2& K1) const;

    SeedGeometry optimal_seed_geometry() const;

    ZetaFields fields(const WaveVector& k, IdlerModel model, int m_max) const;

    /// K_D|ζ(k_d X₀/f, ω_d)|² using the run settings of the config.
    double intensity(const Vec2& X0) const;
    double intensity(const Vec2& X0, IdlerModel model, Combination mode, int m_max) const;
    /// Intensity of one branch alone.
    double branch_intensity(const Vec2& X0, Branch branch, IdlerModel model, int m_max) const;

    WaveVector detector_mode(const Vec2& X0) const;

private:
    const std::vector<OrderTerm>& cached_terms(int m_max) const;

    Kernels kernels_;
    std::vector<OrderTerm> terms_;
    int cached_m_ = -1;
};

}  // namespace spdcm
