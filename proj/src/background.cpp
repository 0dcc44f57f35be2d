#include "spdcm/background.hpp"

#include <cmath>

namespace spdcm {

namespace {
constexpr double kSeriesCrossover = 1e-3;  // in units of R²
}

Background::Background(const ExperimentConfig& cfg) : Background(Kernels(cfg)) {}

Background::Background(const Kernels& kernels) : kernels_(kernels) {
    const auto& d = kernels_.derived();
    const auto& cfg = kernels_.config();
    p_.r0 = d.r0;
    p_.R = d.R;
    p_.beta0 = d.beta0;
    p_.Xi = d.Xi;
    p_.waist = cfg.pump.waist;
    p_.bandwidth = cfg.pump.bandwidth;
    p_.K_D = d.K_D;
    double R4 = std::pow(d.R, 4);
    p_.Omega3 = 2 * d.K_D * std::pow(kPi, 1.5) * d.Xi * d.Xi * p_.waist * p_.waist * R4 /
                (d.beta0 * d.beta0 * p_.bandwidth);
}

cd Background::hh_contraction(const WaveVector& k1, const WaveVector& k3, double z1,
                              double z2) const {
    const auto& d = kernels_.derived();
    const double wp = p_.waist, dp = p_.bandwidth, L = kernels_.config().crystal.length;
    // slowly varying factors at the mean frequency keep the swap symmetry exact
    const double w1 = 0.5 * (k1.omega + k3.omega), wpump = d.omega_p, w2 = wpump - w1;
    const double kp = kernels_.k(wpump);
    const double kz1 = kernels_.kz(w1), kz2 = kernels_.kz(w2);
    const cd I(0.0, 1.0);
    const double dz = z1 - z2, sz = z1 + z2;
    cd tau = 1.0 + I * dz * kz1 / (wp * wp * kp * kz2);
    cd Omega2 = 16 * std::pow(kPi, 1.25) * std::pow(2.0, 0.75) * d.Xi * d.Xi * wp * wp * w1 * w2 /
                (L * L * wpump * wpump * std::sqrt(dp) * tau);
    cd R1 = wp * wp / 8 + I * dz * kz2 / (8 * kp * kz1) + sz * sz / (8 * wp * wp * kp * kp * tau);
    cd R2 = I * dz * kp / (8 * kz1 * kz2 * tau);
    cd R3 = I * sz / (4 * kz1 * tau);
    // reduces to ½i·Δz·(χ(ω₂)+χ(ω₁)) when ω₁ = ω₃
    cd R4 = I * 0.5 * (dz * kernels_.chi(w2) + z1 * kernels_.chi(k1.omega) - z2 * kernels_.chi(k3.omega));
    double dsum = (k1.K + k3.K).squaredNorm(), ddif = (k1.K - k3.K).squaredNorm();
    double dsq = k1.K.squaredNorm() - k3.K.squaredNorm();
    return Omega2 * spectral_h(k1.omega - k3.omega, std::sqrt(2.0) * dp) *
           std::exp(-R1 * ddif - R2 * dsum - R3 * dsq + R4);
}

double Background::shape(double s, double beta0) {
    if (std::abs(s) < kSeriesCrossover * beta0) {
        // g(s) = Σ_j (−1)^j [2 s^{2j}/((2j)!(2j+1)(2j+2)) − β₀ s^{2j+1}/((2j+1)!(2j+3)(2j+4))]
        double sum = 0, fe = 1, fo = 1, sp = 1;
        for (int j = 0; j <= 3; ++j) {
            if (j > 0) fe *= (2.0 * j - 1) * (2.0 * j);
            fo = fe * (2.0 * j + 1);
            double sign = (j % 2) ? -1.0 : 1.0;
            sum += sign * (2 * sp / (fe * (2 * j + 1) * (2 * j + 2)) -
                           beta0 * sp * s / (fo * (2 * j + 3) * (2 * j + 4)));
            sp *= s * s;
        }
        return sum;
    }
    double half = std::sin(0.5 * s);
    double one_minus_c = 2 * half * half;
    return beta0 * std::sin(s) / (s * s) + 2 * (s - beta0) * one_minus_c / (s * s * s);
}

double Background::intensity_r(double r) const {
    const double R2 = p_.R * p_.R;
    const double u = r * r - p_.r0 * p_.r0;
    if (std::abs(u) < kSeriesCrossover * R2) {
        double s = u * p_.beta0 / R2;
        return peak_limit() * shape(s, p_.beta0);
    }
    const double s = u * p_.beta0 / R2;
    double half = std::sin(0.5 * s);
    double one_minus_c = 2 * half * half;
    return p_.Omega3 * (p_.beta0 * std::sin(s) / (u * u) + 2 * (u - R2) * one_minus_c / (u * u * u));
}

double Background::intensity(const Vec2& X0) const { return intensity_r(X0.norm()); }

double Background::peak_limit() const {
    return p_.Omega3 * p_.beta0 * p_.beta0 / std::pow(p_.R, 4);
}

}  // namespace spdcm
