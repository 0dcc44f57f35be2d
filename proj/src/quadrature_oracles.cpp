#include "spdcm/quadrature_oracles.hpp"

#include "spdcm/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace spdcm {

namespace {

const cd I(0.0, 1.0);

double mismatch_offset(const Kernels& kernels, double w) {
    double a = kernels.kz(w), k = kernels.k(w);
    return 0.5 * a - k * k / (2 * a);
}

// ∫exp(−A|K|² + B·K + C) d²K/(2π)², Re A > 0
cd gaussian_2d(cd A, const cd Bx, const cd By, cd C) {
    return kPi / A * std::exp((Bx * Bx + By * By) / (4.0 * A) + C) / std::pow(2 * kPi, 2);
}

template <class F>
cd adaptive(F&& f, double a, double b, const QuadratureOptions& opt, const char* what) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0, l1 = 0;
    cd r = gauss_kronrod<double, 15>::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
    double scale = std::max(std::abs(r), 1e-300);
    if (err > 100 * opt.rel_tol * std::max(scale, l1) && err > 1e-280)
        throw NumericError(std::string(what) + ": quadrature did not converge (relative error " +
                               std::to_string(err / scale) + ")",
                           err / scale);
    return r;
}

}  // namespace

cd numeric_hh_contraction(const Kernels& kernels, const WaveVector& k1, const WaveVector& k3,
                          double z1, double z2, const QuadratureOptions& opt) {
    const auto& cfg = kernels.config();
    const double wp = cfg.pump.waist, dp = cfg.pump.bandwidth, omega_p = kernels.derived().omega_p;
    const double Om2 = std::norm(kernels.coupling());
    const double center = omega_p - 0.5 * (k1.omega + k3.omega);
    const double sigma = dp / std::sqrt(2.0);
    const int n = std::max(opt.omega_nodes, 9);
    const double span = 8 * sigma, h = 2 * span / (n - 1);
    const double a1 = kernels.kz(k1.omega), a3 = kernels.kz(k3.omega);
    const double c1 = mismatch_offset(kernels, k1.omega), c3 = mismatch_offset(kernels, k3.omega);
    cd total = 0;
    for (int i = 0; i < n; ++i) {
        const double w2 = center - span + i * h;
        const double wt = (i == 0 || i == n - 1) ? 0.5 * h : h;
        const double a2 = kernels.kz(w2), c2 = mismatch_offset(kernels, w2);
        const double q12 = a1 * a2 / (a1 + a2), q23 = a2 * a3 / (a2 + a3);
        cd A = 0.5 * wp * wp + I * (z1 * q12 - z2 * q23) / (2 * a2 * a2);
        cd Bx = -0.5 * wp * wp * (k1.K.x() + k3.K.x()) + I * z1 * q12 * k1.K.x() / (a1 * a2) -
                I * z2 * q23 * k3.K.x() / (a2 * a3);
        cd By = -0.5 * wp * wp * (k1.K.y() + k3.K.y()) + I * z1 * q12 * k1.K.y() / (a1 * a2) -
                I * z2 * q23 * k3.K.y() / (a2 * a3);
        cd C = -0.25 * wp * wp * (k1.K.squaredNorm() + k3.K.squaredNorm()) -
               I * z1 * (0.5 * q12 * k1.K.squaredNorm() / (a1 * a1) + c1 + c2) +
               I * z2 * (0.5 * q23 * k3.K.squaredNorm() / (a3 * a3) + c2 + c3);
        double pre = Om2 * std::sqrt(k1.omega * w2) * std::sqrt(w2 * k3.omega) *
                     spectral_h(k1.omega + w2 - omega_p, dp) * spectral_h(w2 + k3.omega - omega_p, dp);
        total += wt / (2 * kPi) * pre * gaussian_2d(A, Bx, By, C);
    }
    return total;
}

cd brute_force_hh_contraction(const Kernels& kernels, const WaveVector& k1, const WaveVector& k3,
                              double z1, double z2, int n_k, int n_omega) {
    const auto& cfg = kernels.config();
    const double wp = cfg.pump.waist, dp = cfg.pump.bandwidth, omega_p = kernels.derived().omega_p;
    const Vec2 c0 = -0.5 * (k1.K + k3.K);
    const double kext = 7.0 / wp, wext = 6.0 * dp;
    const double hk = 2 * kext / (n_k - 1), hw = 2 * wext / (n_omega - 1);
    const double wc = omega_p - 0.5 * (k1.omega + k3.omega);
    cd total = 0;
    for (int io = 0; io < n_omega; ++io) {
        WaveVector k2;
        k2.omega = wc - wext + io * hw;
        for (int ix = 0; ix < n_k; ++ix)
            for (int iy = 0; iy < n_k; ++iy) {
                k2.K = c0 + Vec2(-kext + ix * hk, -kext + iy * hk);
                total += std::conj(kernels.bilinear_H(k1, k2, z1)) * kernels.bilinear_H(k2, k3, z2);
            }
    }
    return total * hk * hk * hw / std::pow(2 * kPi, 3);
}

cd oracle_zeta2(const Kernels& kernels, const WaveVector& k1, const QuadratureOptions& opt) {
    const auto& cfg = kernels.config();
    const auto& d = kernels.derived();
    if (cfg.seed.amplitude == 0.0 || d.Xi == 0.0) return 0.0;
    const double wp = cfg.pump.waist, wx = cfg.seed.waist, dp = cfg.pump.bandwidth,
                 dx = cfg.seed.bandwidth, L = cfg.crystal.length;
    const cd coupling_c = std::conj(kernels.coupling());
    const cd xi0c = std::polar(cfg.seed.amplitude, -cfg.seed.phase);
    const Vec2& Kx = d.K_xi;
    // ω₂ Gaussian from h(ω₁+ω₂−ω_p,δ_p)·h(ω₂−ω_d,δ_ξ)
    const double s2 = dp * dp * dx * dx / (dp * dp + dx * dx);
    const double center = (dx * dx * (d.omega_p - k1.omega) + dp * dp * d.omega_d) / (dp * dp + dx * dx);
    const double span = 8 * std::sqrt(s2);
    const int n = std::max(opt.omega_nodes, 9);
    const double h = 2 * span / (n - 1);
    const double a1 = kernels.kz(k1.omega), c1 = mismatch_offset(kernels, k1.omega);

    struct Node {
        double wt, a2, c2, pre_re;
    };
    std::vector<Node> nodes(n);
    for (int i = 0; i < n; ++i) {
        double w2 = center - span + i * h;
        nodes[i].wt = ((i == 0 || i == n - 1) ? 0.5 * h : h) / (2 * kPi);
        nodes[i].a2 = kernels.kz(w2);
        nodes[i].c2 = mismatch_offset(kernels, w2);
        nodes[i].pre_re = std::sqrt(k1.omega * w2) * spectral_h(k1.omega + w2 - d.omega_p, dp) *
                          std::sqrt(2 * kPi) * wx * spectral_h(w2 - d.omega_d, dx);
    }
    auto integrand = [&](double z) -> cd {
        cd tot = 0;
        for (const auto& nd : nodes) {
            const double q = a1 * nd.a2 / (a1 + nd.a2);
            cd A = 0.25 * (wp * wp + wx * wx) + I * z * q / (2 * nd.a2 * nd.a2);
            cd Bx = -0.5 * wp * wp * k1.K.x() + 0.5 * wx * wx * Kx.x() + I * z * q * k1.K.x() / (a1 * nd.a2);
            cd By = -0.5 * wp * wp * k1.K.y() + 0.5 * wx * wx * Kx.y() + I * z * q * k1.K.y() / (a1 * nd.a2);
            cd C = -0.25 * wp * wp * k1.K.squaredNorm() - 0.25 * wx * wx * Kx.squaredNorm() -
                   I * z * (0.5 * q * k1.K.squaredNorm() / (a1 * a1) + c1 + nd.c2);
            tot += nd.wt * nd.pre_re * gaussian_2d(A, Bx, By, C);
        }
        return 0.5 * coupling_c * xi0c * tot;
    };
    return adaptive(integrand, 0.0, L, opt, "oracle_zeta2");
}

double oracle_background(const Kernels& kernels, const Vec2& X0, const QuadratureOptions& opt) {
    const auto& d = kernels.derived();
    const double L = kernels.config().crystal.length;
    if (d.Xi == 0.0) return 0.0;
    WaveVector k;
    k.K = X0 * (d.k_d / kernels.config().detector.focal_length);
    k.omega = d.omega_d;
    QuadratureOptions inner = opt;
    auto outer = [&](double z1) -> cd {
        auto f = [&](double z2) { return numeric_hh_contraction(kernels, k, k, z1, z2, opt); };
        return adaptive(f, 0.0, L, inner, "oracle_background (inner)");
    };
    cd total = adaptive(outer, 0.0, L, opt, "oracle_background (outer)");
    return 0.25 * d.K_D * total.real();
}

}  // namespace spdcm
