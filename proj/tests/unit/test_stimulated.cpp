#include "support.hpp"

#include "spdcm/error.hpp"
#include "spdcm/quadrature_oracles.hpp"
#include "spdcm/stimulated.hpp"

#include <vector>

using namespace spdcm;
using spdcm::test::preset;
using spdcm::test::rel;

namespace {

// RMS radius of K_D|term|² on the output plane, by summation over a square grid.
double rms_width(const Stimulated& s, const OrderTerm& t, double half, int n) {
    double sum = 0, mx = 0, my = 0, m2 = 0;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = -half + 2 * half * i / (n - 1);
    for (double x : xs)
        for (double y : xs) {
            WaveVector k = s.detector_mode(Vec2(x, y));
            double v = std::norm(t.amplitude(k));
            sum += v;
            mx += v * x;
            my += v * y;
        }
    mx /= sum;
    my /= sum;
    for (double x : xs)
        for (double y : xs) {
            double v = std::norm(t.amplitude(s.detector_mode(Vec2(x, y))));
            m2 += v * ((x - mx) * (x - mx) + (y - my) * (y - my));
        }
    return std::sqrt(m2 / sum);
}

}  // namespace

TEST_CASE("efficiency function against a high-precision evaluation") {
    struct Row {
        double a, beta, f;
    };
    const Row rows[] = {{-0.3896, 0.4, 1.0527903525939639}, {1.0, 0.4, 0.89488841248272973},
                        {-5.0, 0.4, 0.1063833370824135},    {2.5, 0.0, 0.57636595697501879},
                        {0.01, 0.4, 1.0393247822505436},    {-16, 0.4, 0.017615674619901819},
                        {7.3, 1.3, 0.077832370359044897}};
    for (const Row& r : rows) CHECK(rel(efficiency_f(r.a, r.beta), r.f) < 1e-10);
}

TEST_CASE("efficiency limits and peak") {
    // the approach to 1 + β²/4 is linear in a, with slope ≈ −β/6
    for (double a : {1e-3, 1e-4, 1e-5, 1e-6}) CHECK(std::abs(efficiency_f(a, 0.4) - 1.04) < 0.1 * a);
    CHECK(std::abs(efficiency_f(1e-9, 0.0) - 1.0) < 1e-6);
    for (double a : {0.5, 2.0, -3.0, 11.0}) CHECK(rel(efficiency_f(a, 0.0), 2 * (1 - std::cos(a)) / (a * a)) < 1e-12);

    double best_a = 0, best = -1, lowest = 1;
    for (int i = 0; i <= 100000; ++i) {
        double a = -5 + 10.0 * i / 100000;
        double v = efficiency_f(a, 0.4);
        if (v > best) {
            best = v;
            best_a = a;
        }
        lowest = std::min(lowest, v);
    }
    CHECK(best_a >= -0.45);
    CHECK(best_a <= -0.33);
    CHECK(lowest >= 0);
    CHECK_THROWS_AS(efficiency_f(1.0, -0.1), DomainError);
}

TEST_CASE("peak seed geometry") {
    ExperimentConfig c = preset("fig5");
    Stimulated s(c);
    const auto& d = s.kernels().derived();
    SeedGeometry g = s.optimal_seed_geometry();
    CHECK(rel(g.a_peak, -6 * d.beta / (6 + d.beta * d.beta)) < 1e-15);
    REQUIRE(g.X_peak.has_value());
    CHECK(rel(*g.X_peak, std::sqrt(d.r0 * d.r0 - 0.5 * d.R * d.R)) < 1e-12);

    // β = 0.4
    CHECK(std::abs(-6 * 0.4 / (6 + 0.16) + 0.38961038961038961) < 1e-15);

    ExperimentConfig flat = preset("fig4");
    flat.seed.amplitude = 1;
    flat.seed.waist = flat.pump.waist;
    flat.seed.bandwidth = flat.pump.bandwidth;
    CHECK_FALSE(Stimulated(flat).optimal_seed_geometry().X_peak.has_value());
}

TEST_CASE("orders without interaction reduce to the seed") {
    ExperimentConfig c = preset("fig2");
    c.pump.squeezing = 0.0;
    Stimulated s(c);
    auto terms = s.zeta_orders(4);
    CHECK(std::abs(terms[0].prefactor) > 0);
    for (std::size_t n = 1; n < terms.size(); ++n) CHECK(terms[n].prefactor == cd(0));
    Vec2 X(0.2e-3, 0.05e-3);
    WaveVector k = s.detector_mode(X);
    CHECK(rel(terms[0].amplitude(k), s.kernels().seed_profile(k)) < 1e-12);
}

TEST_CASE("order widths, bandwidths and phases") {
    ExperimentConfig c = preset("fig2");
    c.pump.phase = 0.3;
    Stimulated s(c);
    auto t = s.zeta_orders(4);
    CHECK(rel(t[1].width, 0.51449575542752651e-3) < 1e-12);
    CHECK(rel(t[2].width, 0.457495710997814e-3) < 1e-12);
    for (int n = 0; n <= 4; ++n) CHECK((t[n].branch == Branch::idler) == (n % 2 == 1));

    ExperimentConfig eq = c;
    eq.seed.bandwidth = eq.pump.bandwidth;
    auto te = Stimulated(eq).zeta_orders(2);
    CHECK(rel(te[1].bandwidth, eq.seed.bandwidth * std::sqrt(2.0)) < 1e-12);
    CHECK(rel(te[2].bandwidth, eq.seed.bandwidth * std::sqrt(3.0)) < 1e-12);

    // odd terms enter ζ = ζ₁ − ζ₂ with −i·e^{−iφ} relative to even terms
    for (int n = 1; n <= 3; n += 2) {
        cd ratio = t[n].prefactor / t[n - 1].prefactor;
        cd unit = ratio / std::abs(ratio);
        CHECK(std::abs(unit - cd(0, -1) * std::polar(1.0, -0.3)) < 1e-12);
    }
}

TEST_CASE("order centres and broadening in the output plane") {
    ExperimentConfig c = preset("fig2");
    Stimulated s(c);
    const auto& d = s.kernels().derived();
    const double f = c.detector.focal_length;
    auto t = s.zeta_orders(5);
    double prev = 0;
    for (int n = 0; n <= 5; ++n) {
        Vec2 X = t[n].center * f / d.k_d;
        CHECK(std::abs(std::abs(X.x()) - 0.3e-3) < 1e-12);
        CHECK((X.x() > 0) == (n % 2 == 0));
        double w = rms_width(s, t[n], 0.6e-3, 161);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("idler amplitude vanishes without a seed") {
    ExperimentConfig c = preset("fig5");
    c.seed.amplitude = 0;
    Stimulated s(c);
    WaveVector k = s.detector_mode(Vec2(-1.7e-3, 0));
    CHECK(s.zeta2_tca(k) == cd(0));
    CHECK(s.intensity(Vec2(-1.7e-3, 0)) == 0.0);
}

TEST_CASE("TCA idler against z quadrature on the combined-output config") {
    ExperimentConfig c = preset("fig5");
    Stimulated s(c);
    const auto& d = s.kernels().derived();
    const double wl = c.pump.waist * c.seed.waist / d.w0;
    double num = 0, den = 0;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; j += 5) {
            WaveVector k;
            k.omega = d.omega_d;
            k.K = -d.K_xi + Vec2(i, j) * (0.25 / wl);
            cd t = s.zeta2_tca(k), o = oracle_zeta2(s.kernels(), k);
            num += std::norm(t - o);
            den += std::norm(o);
        }
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("idler peak sits at -K_xi within one grid cell") {
    ExperimentConfig c = preset("fig5");
    Stimulated s(c);
    const auto& d = s.kernels().derived();
    const double f = c.detector.focal_length;
    const double cell = 0.01e-3;
    double best = -1, best_x = 0;
    for (int i = -400; i <= 0; ++i) {
        double x = i * cell;
        double v = s.branch_intensity(Vec2(x, 0), Branch::idler, IdlerModel::tca, 1);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    CHECK(std::abs(best_x + d.K_xi.x() * f / d.k_d) <= cell);
}

TEST_CASE("separate and coherent combination agree for well separated orders") {
    ExperimentConfig c = preset("fig2");
    REQUIRE(c.seed.placement == SeedConfig::Placement::offset);
    c.seed.offset = Vec2(3e-3, 0);
    Stimulated s(c);
    double worst = 0, peak = 0;
    for (int i = -400; i <= 400; ++i) {
        Vec2 X(i * 0.01e-3, 0);
        double a = s.intensity(X, IdlerModel::series, Combination::coherent, 5);
        double b = s.intensity(X, IdlerModel::series, Combination::separate, 5);
        worst = std::max(worst, std::abs(a - b));
        peak = std::max(peak, b);
    }
    CHECK(worst < 1e-6 * peak);
}
