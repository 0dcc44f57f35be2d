#include "support.hpp"

#include "spdcm/background.hpp"
#include "spdcm/quadrature_oracles.hpp"

#include <random>
#include <vector>

using namespace spdcm;
using spdcm::test::deg;
using spdcm::test::preset;
using spdcm::test::rel;

namespace {

std::vector<double> radial_scan(const Background& bg, double r_max, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = bg.intensity_r(r_max * i / (n - 1));
    return v;
}

ExperimentConfig tilted(double degrees) {
    ExperimentConfig c = preset("fig4");
    c.crystal.pdc_angle = deg(degrees);
    return c;
}

}  // namespace

TEST_CASE("no squeezing, no background") {
    ExperimentConfig c = preset("fig4");
    c.pump.squeezing = 0.0;
    Background bg(c);
    for (double r : {0.0, 1e-4, 1e-3}) CHECK(bg.intensity_r(r) == 0.0);
}

TEST_CASE("value on the ring equals the closed limit") {
    for (double a : {0.0, 0.5, 1.0}) {
        ExperimentConfig c = tilted(a);
        Background bg(c);
        const auto& p = bg.params();
        double limit = 2 * p.K_D * std::pow(kPi, 1.5) * p.Xi * p.Xi * c.pump.waist * c.pump.waist / c.pump.bandwidth;
        CHECK(rel(bg.peak_limit(), limit) < 1e-12);
        CHECK(rel(bg.peak_limit(), p.Omega3 * p.beta0 * p.beta0 / std::pow(p.R, 4)) < 1e-12);
        CHECK(rel(bg.intensity_r(p.r0), limit) < 1e-4);
        // approached from both sides through the series/direct crossover
        double dr = 1e-3 * p.R * p.R / (2 * std::max(p.r0, p.R));
        CHECK(rel(bg.intensity_r(p.r0 + dr), limit) < 1e-4);
        if (p.r0 > dr) CHECK(rel(bg.intensity_r(p.r0 - dr), limit) < 1e-4);
    }
    CHECK(Background::shape(0.0, 0.01) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collinear configuration gives a single central maximum") {
    Background bg(tilted(0));
    auto v = radial_scan(bg, 8 * bg.params().R, 801);
    CHECK(std::max_element(v.begin(), v.end()) == v.begin());
    // first lobe decays monotonically
    std::size_t i = 1;
    while (i < v.size() && v[i] < v[i - 1]) ++i;
    CHECK(i > 50);
}

TEST_CASE("tilted configuration gives a ring with a central dip") {
    // r = 0 is a stationary point of the fringe phase, so its min/max character alternates with the angle
    Background dip(tilted(2));
    CHECK(dip.intensity_r(dip.params().r0 / 4000) > dip.intensity_r(0));
    for (double a : {1.0, 2.0, 3.0}) {
        Background bg(tilted(a));
        const auto& p = bg.params();
        auto v = radial_scan(bg, 2 * p.r0, 4001);
        auto peak = std::max_element(v.begin(), v.end());
        double r_peak = 2 * p.r0 * (peak - v.begin()) / 4000.0;
        CAPTURE(a);
        CHECK(std::abs(r_peak - p.r0) < 2 * p.R);
        CHECK(v[0] < 0.05 * *peak);
    }
}

TEST_CASE("background is non-negative on a dense radial scan") {
    for (double a : {0.0, 0.2, 0.5, 1.0, 2.0}) {
        Background bg(tilted(a));
        const auto& p = bg.params();
        auto v = radial_scan(bg, 4 * p.r0 + 8 * p.R, 20001);
        CAPTURE(a);
        CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
    }
}

TEST_CASE("hh contraction structure") {
    ExperimentConfig c = tilted(1);
    Background bg(c);
    const auto& d = bg.kernels().derived();
    const double L = c.crystal.length;

    WaveVector zero;
    zero.omega = d.omega_d;
    cd v = bg.hh_contraction(zero, zero, 0.4 * L, 0.4 * L);
    CHECK(v.real() > 0);
    CHECK(std::abs(v.imag()) <= 1e-12 * v.real());

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uk(-1.5 / c.pump.waist, 1.5 / c.pump.waist);
    std::uniform_real_distribution<double> uw(-c.pump.bandwidth, c.pump.bandwidth), uz(0, L);
    for (int i = 0; i < 16; ++i) {
        WaveVector a, b;
        a.K = Vec2(uk(rng), uk(rng));
        b.K = Vec2(uk(rng), uk(rng));
        a.omega = d.omega_d + uw(rng);
        b.omega = d.omega_d + uw(rng);
        double z1 = uz(rng), z2 = uz(rng);
        CHECK(rel(bg.hh_contraction(a, b, z1, z2), std::conj(bg.hh_contraction(b, a, z2, z1))) < 1e-10);
    }
}

TEST_CASE("hh contraction against brute-force summation") {
    ExperimentConfig c = tilted(1);
    Background bg(c);
    const auto& d = bg.kernels().derived();
    const double L = c.crystal.length, w = c.pump.waist;
    struct Point {
        Vec2 K1, K3;
        double dw1, dw3, z1, z2;
    };
    const Point pts[] = {{Vec2(0.3 / w, -0.2 / w), Vec2(0.1 / w, 0.4 / w), 0.2, -0.1, 0.1, 0.8},
                         {Vec2(-0.5 / w, 0), Vec2(-0.4 / w, 0.1 / w), 0.0, 0.3, 0.5, 0.5},
                         {Vec2(0.2 / w, 0.2 / w), Vec2(0, 0), -0.4, -0.2, 0.9, 0.2}};
    for (const Point& p : pts) {
        WaveVector a, b;
        a.K = p.K1;
        b.K = p.K3;
        a.omega = d.omega_d + p.dw1 * c.pump.bandwidth;
        b.omega = d.omega_d + p.dw3 * c.pump.bandwidth;
        cd closed = bg.hh_contraction(a, b, p.z1 * L, p.z2 * L);
        cd brute = brute_force_hh_contraction(bg.kernels(), a, b, p.z1 * L, p.z2 * L);
        CHECK(rel(closed, brute) < 1e-4);
    }
}

TEST_CASE("closed form against double z quadrature on the collinear config") {
    Background bg(tilted(0));
    const double R = bg.params().R;
    for (double r : {0.0, R, 2 * R}) {
        double oracle = oracle_background(bg.kernels(), Vec2(r, 0));
        CAPTURE(r);
        CHECK(rel(bg.intensity_r(r), oracle) < 0.05);
    }
}
