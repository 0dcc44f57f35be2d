#include "spdcm/stimulated.hpp"

#include "spdcm/error.hpp"

#include <cmath>

namespace spdcm {

namespace {
constexpr double kSeriesCrossover = 1e-3;
const cd I(0.0, 1.0);
}  // namespace

cd tca_bracket(double kappa, double beta) {
    if (std::abs(kappa) < kSeriesCrossover) {
        // B = i Σ_j (−iκ)^j/j! [1/(j+1) − iβ/(j+2)]
        cd sum = 0, p = 1;
        double fact = 1;
        for (int j = 0; j <= 4; ++j) {
            if (j > 0) {
                p *= cd(0.0, -kappa);
                fact *= j;
            }
            sum += p / fact * (1.0 / (j + 1) - I * beta / double(j + 2));
        }
        return I * sum;
    }
    cd e = std::exp(-I * kappa);
    cd one_minus_e = 2.0 * I * std::sin(0.5 * kappa) * std::exp(-0.5 * I * kappa);
    return (kappa - beta) * one_minus_e / (kappa * kappa) + I * beta * e / kappa;
}

double efficiency_f(double a, double beta) {
    if (!(beta >= 0)) throw DomainError("efficiency_f: beta must be non-negative");
    if (std::abs(a) < kSeriesCrossover) return std::norm(tca_bracket(a, beta));
    double a2 = a * a;
    return beta * beta / a2 + 2 * (a - beta) * beta * std::sin(a) / (a2 * a) +
           4 * (a - beta) * (a - beta) * std::pow(std::sin(0.5 * a), 2) / (a2 * a2);
}

cd OrderTerm::amplitude(const WaveVector& k) const {
    return prefactor * spectral_h(k.omega - omega_center, bandwidth) *
           std::exp(-0.25 * width * width * (k.K - center).squaredNorm());
}

Stimulated::Stimulated(const ExperimentConfig& cfg) : Stimulated(Kernels(cfg)) {}

Stimulated::Stimulated(const Kernels& kernels) : kernels_(kernels) {
    cached_m_ = kernels_.config().run.orders;
    terms_ = zeta_orders(cached_m_);
}

std::vector<OrderTerm> Stimulated::zeta_orders(int m_max) const {
    if (m_max < 0) throw DomainError("zeta_orders: m_max must be >= 0");
    const auto& cfg = kernels_.config();
    const auto& d = kernels_.derived();
    const double wx = cfg.seed.waist, wp = cfg.pump.waist, eta = d.eta;
    const cd xi0 = std::polar(cfg.seed.amplitude, cfg.seed.phase);
    std::vector<OrderTerm> out;
    for (int n = 0; n <= m_max; ++n) {
        OrderTerm t;
        t.order = n;
        t.branch = (n % 2 == 0) ? Branch::signal : Branch::idler;
        t.width = wx * wp / std::sqrt(wp * wp + n * wx * wx);
        t.bandwidth = cfg.seed.bandwidth * std::sqrt(1 + n * eta);
        t.omega_center = d.omega_d;
        // (2Ξ)^n/n! evaluated in log space; Ξ = 0 leaves only n = 0
        double gain = (n == 0) ? 1.0
                      : (d.Xi == 0.0)
                          ? 0.0
                          : std::exp(n * std::log(2 * d.Xi) - std::lgamma(n + 1.0));
        double mag = std::sqrt(2 * kPi) * t.width * t.width * gain /
                     (wx * std::pow(1 + n * eta, 0.25));
        if (t.branch == Branch::signal) {
            t.center = d.K_xi;
            t.prefactor = mag * xi0;
        } else {
            t.center = -d.K_xi;
            cd zeta2 = I * std::polar(1.0, -d.phase) * std::conj(xi0) * mag;
            t.prefactor = -zeta2;
        }
        out.push_back(t);
    }
    return out;
}

double Stimulated::kappa(const Vec2& K1) const {
    const auto& cfg = kernels_.config();
    const auto& d = kernels_.derived();
    const double wp2 = cfg.pump.waist * cfg.pump.waist, wx2 = cfg.seed.waist * cfg.seed.waist;
    Vec2 Kb = (2 * wp2 + wx2) * K1 - wx2 * d.K_xi;
    double w04 = d.w0 * d.w0 * d.w0 * d.w0;
    return cfg.crystal.length * Kb.squaredNorm() / (4 * d.kz_d * w04) -
           cfg.crystal.length * d.chi_d;
}

cd Stimulated::zeta2_tca(const WaveVector& k) const {
    const auto& cfg = kernels_.config();
    const auto& d = kernels_.derived();
    const double wp = cfg.pump.waist, wx = cfg.seed.waist, dx = cfg.seed.bandwidth,
                 dp = cfg.pump.bandwidth;
    const double D = std::sqrt(dp * dp + dx * dx);
    const cd xi0c = std::polar(cfg.seed.amplitude, -cfg.seed.phase);
    cd Omega1 = 2 * d.Xi * xi0c * wx * wp * wp * std::sqrt(2 * kPi * dx) /
                (std::sqrt(D) * d.w0 * d.w0);
    Vec2 Ka = k.K + d.K_xi;
    double env = std::exp(-wp * wp * wx * wx * Ka.squaredNorm() / (4 * d.w0 * d.w0));
    return Omega1 * spectral_h(k.omega - d.omega_d, D) * env * tca_bracket(kappa(k.K), d.beta);
}

SeedGeometry Stimulated::optimal_seed_geometry() const {
    const auto& d = kernels_.derived();
    const double L = kernels_.config().crystal.length;
    SeedGeometry g;
    g.a_peak = -6 * d.beta / (6 + d.beta * d.beta);
    double k2 = d.kz_d * (g.a_peak + L * d.chi_d) / L;
    if (k2 >= 0) g.K_xi_opt = std::sqrt(k2);
    g.X_peak = d.X_peak;
    return g;
}

const std::vector<OrderTerm>& Stimulated::cached_terms(int m_max) const {
    if (m_max == cached_m_) return terms_;
    thread_local std::vector<OrderTerm> scratch;
    scratch = zeta_orders(m_max);
    return scratch;
}

ZetaFields Stimulated::fields(const WaveVector& k, IdlerModel model, int m_max) const {
    ZetaFields f;
    if (model == IdlerModel::tca) {
        f.zeta1 = kernels_.seed_profile(k);
        f.zeta2 = zeta2_tca(k);
        return f;
    }
    for (const auto& t : cached_terms(m_max)) {
        if (t.branch == Branch::signal)
            f.zeta1 += t.amplitude(k);
        else
            f.zeta2 -= t.amplitude(k);
    }
    return f;
}

WaveVector Stimulated::detector_mode(const Vec2& X0) const {
    const auto& d = kernels_.derived();
    WaveVector k;
    k.K = X0 * (d.k_d / kernels_.config().detector.focal_length);
    k.omega = d.omega_d;
    return k;
}

double Stimulated::intensity(const Vec2& X0) const {
    const auto& run = kernels_.config().run;
    return intensity(X0, run.idler_model, run.combination, run.orders);
}

double Stimulated::intensity(const Vec2& X0, IdlerModel model, Combination mode,
                             int m_max) const {
    ZetaFields f = fields(detector_mode(X0), model, m_max);
    double KD = kernels_.derived().K_D;
    if (mode == Combination::coherent) return KD * std::norm(f.zeta1 - f.zeta2);
    return KD * (std::norm(f.zeta1) + std::norm(f.zeta2));
}

double Stimulated::branch_intensity(const Vec2& X0, Branch branch, IdlerModel model,
                                    int m_max) const {
    ZetaFields f = fields(detector_mode(X0), model, m_max);
    return kernels_.derived().K_D * std::norm(branch == Branch::signal ? f.zeta1 : f.zeta2);
}

}  // namespace spdcm
