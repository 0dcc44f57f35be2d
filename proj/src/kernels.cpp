#include "spdcm/kernels.hpp"

#include "spdcm/error.hpp"

#include <algorithm>
#include <cmath>

namespace spdcm {

double spectral_h(double omega_offset, double delta) {
    if (!(delta > 0)) throw DomainError("spectral_h: bandwidth must be positive");
    double x = omega_offset / delta;
    return std::sqrt(2 * std::sqrt(kPi) / delta) * std::exp(-0.5 * x * x);
}

namespace {

// log of the order-dependent prefactor M₀M₁^m/(m^{5/4}m!) times the ω powers
double log_prefactor(const ContractedKernelTerm& t, double omega_product) {
    double m = t.order;
    return std::log(t.M0) + m * std::log(t.M1) - 1.25 * std::log(m) - std::lgamma(m + 1) +
           0.5 * m * std::log(omega_product);
}

}  // namespace

cd ContractedKernelTerm::operator()(const WaveVector& k1, const WaveVector& k2) const {
    const double m = order;
    if (M1 == 0.0) return 0.0;
    if (parity == Parity::odd) {
        Vec2 s = k1.K + k2.K;
        double e = -waist * waist * s.squaredNorm() / (4 * m);
        double lp = log_prefactor(*this, k1.omega * k2.omega);
        double v = std::exp(lp + e) *
                   spectral_h(omega_p - k1.omega - k2.omega, std::sqrt(m) * bandwidth);
        return cd(0.0, -v);
    }
    Vec2 dlt = k1.K - k2.K;
    double e = -waist * waist * dlt.squaredNorm() / (4 * m);
    double lp = log_prefactor(*this, k1.omega * (omega_p - k1.omega));
    return std::exp(lp + e) * spectral_h(k1.omega - k2.omega, std::sqrt(m) * bandwidth);
}

double ContractedKernelTerm::peak() const {
    if (M1 == 0.0) return 0.0;
    double wd = 0.5 * omega_p;
    double lp = log_prefactor(*this, wd * wd);
    return std::exp(lp) * spectral_h(0.0, std::sqrt(double(order)) * bandwidth);
}

Kernels::Kernels(const ExperimentConfig& cfg) : cfg_(cfg), d_(derive_quantities(cfg)) {}

double Kernels::k(double omega) const {
    return omega * cfg_.crystal.dispersion.index(omega) / kSpeedOfLight;
}

double Kernels::kz(double omega) const { return k(omega) * std::cos(cfg_.crystal.pdc_angle); }

double Kernels::chi(double omega) const {
    double kk = k(omega), kzz = kz(omega);
    return kk * kk / kzz - kzz;
}

cd Kernels::pump_profile(const WaveVector& kv) const {
    const auto& p = cfg_.pump;
    double zeta0 = d_.zeta0.value_or(0.0);
    double mag = std::sqrt(2 * kPi) * zeta0 * p.waist *
                 spectral_h(kv.omega - p.center_frequency, p.bandwidth) *
                 std::exp(-0.25 * p.waist * p.waist * kv.K.squaredNorm());
    return std::polar(mag, p.phase);
}

cd Kernels::seed_profile(const WaveVector& kv) const {
    const auto& s = cfg_.seed;
    double mag = std::sqrt(2 * kPi) * s.amplitude * s.waist *
                 spectral_h(kv.omega - d_.omega_d, s.bandwidth) *
                 std::exp(-0.25 * s.waist * s.waist * (kv.K - d_.K_xi).squaredNorm());
    return std::polar(mag, s.phase);
}

double Kernels::delta_kz(const Vec2& K1, const Vec2& K2, double w1, double w2) const {
    double a1 = kz(w1), a2 = kz(w2);
    double k1 = k(w1), k2 = k(w2);
    double q = a1 * a2 / (a1 + a2);
    Vec2 dv = K1 / a1 - K2 / a2;
    return 0.5 * q * dv.squaredNorm() - k1 * k1 / (2 * a1) - k2 * k2 / (2 * a2) + 0.5 * a1 +
           0.5 * a2;
}

cd Kernels::coupling() const {
    // Ω₀ ∝ ζ₀*, so H carries e^{−iφ}
    return cd(0.0, -1.0) * std::polar(d_.Omega0, -d_.phase);
}

cd Kernels::bilinear_H(const WaveVector& k1, const WaveVector& k2, double z) const {
    const auto& p = cfg_.pump;
    double amp = std::sqrt(k1.omega * k2.omega) *
                 spectral_h(k1.omega + k2.omega - p.center_frequency, p.bandwidth) *
                 std::exp(-0.25 * p.waist * p.waist * (k1.K + k2.K).squaredNorm());
    double phase = delta_kz(k1.K, k2.K, k1.omega, k2.omega) * z;
    return coupling() * amp * std::polar(1.0, phase);
}

ContractedKernelTerm Kernels::contracted_H(int m, Parity parity) const {
    if (m < 1) throw DomainError("contracted_H: order must be >= 1");
    if ((m % 2 == 1) != (parity == Parity::odd))
        throw DomainError("contracted_H: parity does not match order " + std::to_string(m));
    ContractedKernelTerm t;
    t.order = m;
    t.parity = parity;
    t.M0 = d_.M0;
    t.M1 = d_.M1;
    t.waist = cfg_.pump.waist;
    t.bandwidth = cfg_.pump.bandwidth;
    t.omega_p = d_.omega_p;
    return t;
}

ThinCrystalUV Kernels::thin_crystal_UV(const WaveVector& k1, const WaveVector& k2,
                                       int n_max) const {
    if (n_max < 1) throw DomainError("thin_crystal_UV: n_max must be >= 1");
    n_max = std::min(n_max, 32);
    ThinCrystalUV out;
    double sum_u = 0, sum_v = 0;
    cd v_sum = 0;
    for (int n = 1; n <= n_max; ++n) {
        double scale = std::pow(4.0, -n);
        auto te = contracted_H(2 * n, Parity::even);
        auto to = contracted_H(2 * n - 1, Parity::odd);
        out.u_minus_identity += scale * te(k1, k2);
        v_sum += 2 * scale * to(k1, k2);
        double pu = scale * te.peak(), pv = 2 * scale * to.peak();
        sum_u += pu;
        sum_v += pv;
        out.last_term = std::max(pu, pv);
        out.terms = n;
        if (pu <= 1e-10 * sum_u && pv <= 1e-10 * sum_v) break;
        if (sum_u == 0 && sum_v == 0) break;
    }
    out.v = std::polar(1.0, -d_.phase) * v_sum;
    return out;
}

}  // namespace spdcm
