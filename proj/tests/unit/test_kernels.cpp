#include "support.hpp"

#include "spdcm/error.hpp"
#include "spdcm/kernels.hpp"
#include "spdcm/quadrature_oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

using namespace spdcm;
using spdcm::test::preset;
using spdcm::test::rel;

namespace {

struct Sampler {
    std::mt19937_64 rng{2024};
    const DerivedQuantities& d;
    double waist, delta;

    WaveVector operator()() {
        std::uniform_real_distribution<double> uk(-1.5 / waist, 1.5 / waist), uw(-delta, delta);
        WaveVector k;
        k.K = Vec2(uk(rng), uk(rng));
        k.omega = d.omega_d + uw(rng);
        return k;
    }
};

ExperimentConfig with_phase(ExperimentConfig c, double phi) {
    c.pump.phase = phi;
    return c;
}

}  // namespace

TEST_CASE("spectral function h") {
    const double delta = 1e12;
    CHECK(rel(spectral_h(0, delta), 1.8827925275534296e-6) < 1e-14);
    for (double w : {0.1, 0.7, 2.3, 5.0}) CHECK(spectral_h(w * delta, delta) == spectral_h(-w * delta, delta));
    auto f = [&](double x) {
        double h = spectral_h(x * delta, delta);
        return h * h * delta;
    };
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -8.0, 8.0, 15, 1e-14);
    CHECK(rel(v, 2 * kPi) < 1e-6);
    CHECK_THROWS_AS(spectral_h(0, 0), DomainError);
}

TEST_CASE("pump and seed profiles") {
    ExperimentConfig c = preset("fig5");
    c.crystal.cross_section = 1e-14;
    c.pump.amplitude = amplitude_from_squeezing(c, 1.0);
    c.pump.squeezing.reset();
    Kernels k(c);
    const auto& d = k.derived();

    WaveVector on;
    on.omega = d.omega_p;
    WaveVector off = on;
    off.K = Vec2(2 / c.pump.waist, 0);
    CHECK(rel(std::abs(k.pump_profile(off)), std::exp(-1.0) * std::abs(k.pump_profile(on))) < 1e-12);

    WaveVector s;
    s.K = d.K_xi;
    s.omega = d.omega_d;
    double expect = std::sqrt(2 * kPi) * c.seed.amplitude * c.seed.waist * spectral_h(0, c.seed.bandwidth);
    CHECK(rel(std::abs(k.seed_profile(s)), expect) < 1e-14);

    // ∫|ζ|² d²K dω/(2π)³ = |ζ₀|², radial K integral analytic
    auto fw = [&](double x) {
        double h = spectral_h(x * c.pump.bandwidth, c.pump.bandwidth);
        return h * h * c.pump.bandwidth;
    };
    double omega_int = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fw, -8.0, 8.0, 15, 1e-14);
    double w = c.pump.waist;
    double k_int = kPi * 2 / (w * w);  // ∫exp(−w²K²/2)d²K
    double norm = 2 * kPi * std::pow(*d.zeta0 * w, 2) * k_int * omega_int / std::pow(2 * kPi, 3);
    CHECK(rel(norm, *d.zeta0 * *d.zeta0) < 1e-6);
}

TEST_CASE("phase mismatch") {
    ExperimentConfig c = preset("fig4");
    Kernels k0(c);
    const double wd = k0.derived().omega_d;
    CHECK(std::abs(k0.delta_kz(Vec2::Zero(), Vec2::Zero(), wd, wd)) < 1e-9);

    c.crystal.pdc_angle = spdcm::test::deg(1);
    Kernels k1(c);
    const auto& d = k1.derived();
    Vec2 Kxi(3.1e4, -1.2e4);
    double a_over_L = Kxi.squaredNorm() / d.kz_d - d.chi_d;
    CHECK(rel(k1.delta_kz(Kxi, -Kxi, wd, wd), a_over_L) < 1e-9);

    Sampler draw{std::mt19937_64(7), d, c.pump.waist, c.pump.bandwidth};
    for (int i = 0; i < 32; ++i) {
        WaveVector a = draw(), b = draw();
        double x = k1.delta_kz(a.K, b.K, a.omega, b.omega), y = k1.delta_kz(b.K, a.K, b.omega, a.omega);
        CHECK(std::abs(x - y) <= 1e-12 * std::abs(x));
    }
}

TEST_CASE("bilinear kernel H") {
    ExperimentConfig c = with_phase(preset("fig5"), 0.4);
    Kernels k(c);
    const auto& d = k.derived();
    const double L = c.crystal.length;
    CHECK(rel(d.M0 * d.M1, L * d.Omega0) < 1e-12);

    Sampler draw{std::mt19937_64(11), d, c.pump.waist, c.pump.bandwidth};
    for (int i = 0; i < 16; ++i) {
        WaveVector a = draw(), b = draw();
        cd h0 = k.bilinear_H(a, b, 0);
        for (double z : {0.3 * L, L}) CHECK(std::abs(std::abs(k.bilinear_H(a, b, z)) - std::abs(h0)) <= 1e-12 * std::abs(h0));
        CHECK(rel(k.bilinear_H(a, b, 0.7 * L), k.bilinear_H(b, a, 0.7 * L)) < 1e-12);
        // first odd term against L·H at z = 0, pump phase factored out
        cd h1 = k.contracted_H(1, Parity::odd)(a, b);
        CHECK(rel(h1, L * h0 * std::polar(1.0, d.phase)) < 1e-9);
    }
}

TEST_CASE("second even term against a numeric H*<>H contraction") {
    ExperimentConfig c = preset("fig5");
    Kernels k(c);
    const auto& d = k.derived();
    const double L = c.crystal.length;
    auto h2 = k.contracted_H(2, Parity::even);
    Sampler draw{std::mt19937_64(3), d, c.pump.waist, c.pump.bandwidth};
    for (int i = 0; i < 3; ++i) {
        WaveVector a = draw(), b = draw();
        b.omega = a.omega + 0.3 * (b.omega - d.omega_d);
        cd numeric = numeric_hh_contraction(k, a, b, 0, 0);
        CHECK(rel(h2(a, b), 0.5 * L * L * numeric) < 1e-4);
    }
}

TEST_CASE("contracted kernel prefactors decay factorially") {
    Kernels k(preset("fig2"));
    const double M1 = k.derived().M1;
    for (int m = 1; m < 8; ++m) {
        auto a = k.contracted_H(m, m % 2 ? Parity::odd : Parity::even);
        auto b = k.contracted_H(m + 1, (m + 1) % 2 ? Parity::odd : Parity::even);
        // the peaks also carry the h(0, √m δ) normalization and one factor ω_d
        double ratio = b.peak() / a.peak();
        double h_ratio = spectral_h(0, std::sqrt(m + 1.0) * a.bandwidth) / spectral_h(0, std::sqrt(double(m)) * a.bandwidth);
        double wd = 0.5 * a.omega_p;
        double expect = M1 * wd / ((m + 1) * std::pow(1 + 1.0 / m, 1.25)) * h_ratio;
        CHECK(rel(ratio, expect) < 1e-12);
    }
    CHECK_THROWS_AS(k.contracted_H(2, Parity::odd), DomainError);
    CHECK_THROWS_AS(k.contracted_H(0, Parity::odd), DomainError);
}

TEST_CASE("thin-crystal U and V") {
    ExperimentConfig c = with_phase(preset("fig4"), 0.0);
    c.pump.squeezing = 0.0;
    Kernels zero(c);
    WaveVector a;
    a.omega = zero.derived().omega_d;
    ThinCrystalUV uv = zero.thin_crystal_UV(a, a);
    CHECK(uv.u_minus_identity == cd(0));
    CHECK(uv.v == cd(0));

    c.pump.squeezing = 0.8;
    c.pump.phase = 0.6;
    Kernels k(c);
    WaveVector p, q;
    p.omega = q.omega = k.derived().omega_d;
    p.K = Vec2(2e3, -1e3);
    q.K = -p.K;
    cd v = k.thin_crystal_UV(p, q).v;
    cd unit = v / (cd(0, -1) * std::polar(1.0, -0.6));
    CHECK(unit.real() > 0);
    CHECK(std::abs(unit.imag()) <= 1e-12 * unit.real());
}
