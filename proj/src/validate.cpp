#include "spdcm/validate.hpp"

#include "spdcm/background.hpp"
#include "spdcm/bogoliubov.hpp"
#include "spdcm/error.hpp"
#include "spdcm/quadrature_oracles.hpp"
#include "spdcm/stimulated.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace spdcm {

ValidationOptions ValidationOptions::full() {
    ValidationOptions o;
    o.ode_n_k = o.thin_n_k = 17;
    o.ode_n_omega = o.thin_n_omega = 9;
    return o;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass || c.informational; });
}

std::string ValidationReport::text() const {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %13s %11s  %s\n", "check", "value", "tolerance", "status");
    out += line;
    for (const auto& c : checks) {
        const char* status = c.informational ? "info" : (c.pass ? "PASS" : "FAIL");
        std::snprintf(line, sizeof line, "%-34s %13.4e %11.1e  %s", c.name.c_str(), c.value,
                      c.tolerance, status);
        out += line;
        if (!c.note.empty()) out += "  (" + c.note + ")";
        out += "\n";
    }
    out += passed() ? "all checks passed\n" : "some checks FAILED\n";
    return out;
}

namespace {

ExperimentConfig with_squeezing(ExperimentConfig c, double Xi) {
    c.pump.squeezing = Xi;
    c.pump.amplitude.reset();
    return c;
}

// Seed placement that stays valid when the geometry is altered.
ExperimentConfig pin_seed(ExperimentConfig c) {
    const DerivedQuantities d = derive_quantities(c);
    c.seed.placement = SeedConfig::Placement::shift;
    c.seed.shift = d.K_xi;
    return c;
}

KernelMatrix::Basis make_basis(const Kernels& k, int n_k, int n_omega) {
    auto grid = std::make_shared<ModeGrid>(GridSpec::for_model(k, n_k, n_omega), k);
    return std::make_shared<SymmetryBasis>(grid, Symmetry::d4);
}

// Modes well inside the grid, where truncation of the ⋄ integral is negligible.
auto interior(const Kernels& k) {
    const double wp = k.config().pump.waist, dp = k.config().pump.bandwidth;
    const double wd = k.derived().omega_d;
    return [=](const WaveVector& m) {
        return m.K.norm() * wp <= 2.0 + 1e-9 && std::abs(m.omega - wd) <= dp * (1 + 1e-9);
    };
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Suite {
public:
    void add(std::string name, double value, double tol, std::string note = {}) {
        checks_.push_back({std::move(name), value, tol, value < tol, false, std::move(note)});
    }
    void at_least(std::string name, double value, double bound, std::string note = {}) {
        checks_.push_back({std::move(name), value, bound, value >= bound, false, std::move(note)});
    }
    void info(std::string name, double value, double tol, std::string note) {
        checks_.push_back({std::move(name), value, tol, value < tol, true, std::move(note)});
    }
    template <class F>
    void guarded(const std::string& name, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            checks_.push_back({name, std::nan(""), 0, false, false, e.what()});
        }
    }
    std::vector<ValidationCheck> take() { return std::move(checks_); }

private:
    std::vector<ValidationCheck> checks_;
};

}  // namespace

ValidationReport run_validation(const ExperimentConfig& cfg_in, const ValidationOptions& opt) {
    validate(cfg_in);
    const ExperimentConfig cfg = pin_seed(cfg_in);
    const Kernels kernels(cfg);
    const DerivedQuantities& d = kernels.derived();
    const double L = cfg.crystal.length, wp = cfg.pump.waist, dp = cfg.pump.bandwidth;
    Suite s;

    // kernels
    s.guarded("h_normalization", [&] {
        using boost::math::quadrature::gauss_kronrod;
        // in units of δ_p; the quadrature misbehaves on the raw ±8e12 interval
        auto f = [&](double x) { double h = spectral_h(x * dp, dp); return h * h * dp; };
        double v = gauss_kronrod<double, 31>::integrate(f, -8.0, 8.0, 15, 1e-13);
        s.add("h_normalization", rel(v, 2 * kPi), 1e-6);
    });
    s.add("m0_m1_identity", rel(d.M0 * d.M1, L * d.Omega0), 1e-12);

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uk(-1.5 / wp, 1.5 / wp), uw(-dp, dp);
    auto random_mode = [&] {
        WaveVector k;
        k.K = Vec2(uk(rng), uk(rng));
        k.omega = d.omega_d + uw(rng);
        return k;
    };
    {
        double sym = 0, swap = 0;
        for (int i = 0; i < 16; ++i) {
            WaveVector a = random_mode(), b = random_mode();
            double z = L * (i + 0.5) / 16;
            cd h1 = kernels.bilinear_H(a, b, z), h2 = kernels.bilinear_H(b, a, z);
            sym = std::max(sym, std::abs(h1 - h2) / std::abs(h1));
            double k1 = kernels.delta_kz(a.K, b.K, a.omega, b.omega);
            double k2 = kernels.delta_kz(b.K, a.K, b.omega, a.omega);
            swap = std::max(swap, rel(k1, k2));
        }
        s.add("bilinear_symmetry", sym, 1e-12);
        s.add("delta_kz_swap", swap, 1e-12);
    }
    s.guarded("h2_contraction", [&] {
        double worst = 0;
        const ContractedKernelTerm H2 = kernels.contracted_H(2, Parity::even);
        for (int i = 0; i < 3; ++i) {
            WaveVector a = random_mode(), b = random_mode();
            cd closed = H2(a, b);
            cd numeric = numeric_hh_contraction(kernels, a, b, 0, 0) * (0.5 * L * L);
            worst = std::max(worst, std::abs(closed - numeric) / std::abs(numeric));
        }
        s.add("h2_contraction", worst, 1e-4, "3 random pairs, H2 vs (L^2/2) H*<>H");
    });

    // Bogoliubov machinery on grids
    s.guarded("ode_conservation", [&] {
        const double Xi = std::min(d.Xi, 0.5);
        Kernels k(with_squeezing(cfg, Xi));
        auto basis = make_basis(k, opt.ode_n_k, opt.ode_n_omega);
        OdeResult r = solve_UV_ode(k, basis, L, opt.ode_steps);
        double canon = 0, stated = 0, uv = 0;
        for (const auto& st : r.stations) {
            canon = std::max({canon, st.defects.canonical, st.defects.rows});
            stated = std::max(stated, st.defects.stated);
            uv = std::max(uv, st.defects.uv_symmetric);
        }
        char note[64];
        std::snprintf(note, sizeof note, "Xi = %.3g, 8 stations", Xi);
        s.add("ode_canonical_relation", canon, 1e-10, note);
        s.info("ode_literal_relation", stated, 1e-6,
               "U'U - V'V - 1; not conserved by the ODE unless V is normal");
        s.add("uv_symmetry", uv, 1e-3);
    });
    s.guarded("ode_richardson", [&] {
        Kernels k(with_squeezing(cfg, std::min(d.Xi, 0.5)));
        auto basis = make_basis(k, opt.ode_n_k, opt.ode_n_omega);
        const int n0 = std::max(64, opt.ode_steps);
        UVPair a = solve_UV_ode(k, basis, L, n0, 0).uv;
        UVPair b = solve_UV_ode(k, basis, L, 2 * n0, 0).uv;
        UVPair c = solve_UV_ode(k, basis, L, 4 * n0, 0).uv;
        double e1 = std::max((a.U - b.U).max_abs(), (a.V - b.V).max_abs());
        double e2 = std::max((b.U - c.U).max_abs(), (b.V - c.V).max_abs());
        s.at_least("ode_step_halving_ratio", e2 > 0 ? e1 / e2 : 1e300, 8.0, "need >= 8 for 4th order");
    });
    s.guarded("series_vs_ode", [&] {
        Kernels k(with_squeezing(cfg, 0.2));
        auto basis = make_basis(k, opt.ode_n_k, opt.ode_n_omega);
        UVPair ode = solve_UV_ode(k, basis, L, opt.ode_steps, 0).uv;
        UVPair ser = series_UV(k, basis, L, 4);
        s.add("series_vs_ode", std::max((ode.U - ser.U).max_abs(), (ode.V - ser.V).max_abs()), 1e-5,
              "Xi = 0.2, order 4");
    });
    s.guarded("ab_consistency", [&] {
        Kernels k(with_squeezing(cfg, 0.3));
        auto basis = make_basis(k, opt.ode_n_k, opt.ode_n_omega);
        s.add("ab_defect", ab_defect(k, basis, L, 256), 1e-4, "Xi = 0.3, 256 steps");
        ABPair ab = build_AB(solve_UV_ode(k, basis, L, opt.ode_steps, 0).uv);
        s.add("a_hermitian", ab.A.hermitian_defect(), 1e-10);
        s.at_least("a_min_eigenvalue", ab.A.min_eigenvalue(), 1 - 1e-6);
    });
    s.guarded("thin_crystal", [&] {
        Kernels k(with_squeezing(cfg, 0.2));
        auto basis = make_basis(k, opt.thin_n_k, opt.thin_n_omega);
        auto keep = interior(k);
        UVPair closed = thin_crystal_matrices(k, basis);
        UVPair mf = thin_crystal_matrix_functions(k, basis);
        s.add("thin_uv_vs_cosh_sinh",
              std::max((closed.U - mf.U).max_abs_where(keep), (closed.V - mf.V).max_abs_where(keep)),
              1e-6, "Xi = 0.2, interior modes");
        KernelMatrix I = KernelMatrix::identity(basis);
        KernelMatrix C = mf.U + I;
        s.add("cosh2_minus_sinh2",
              (diamond(C.adjoint(), C) - diamond(mf.V.adjoint(), mf.V) - I).max_abs(), 1e-8);

        // thin regime: short crystal, collinear, same Ξ
        ExperimentConfig tc = with_squeezing(cfg, 0.2);
        tc.crystal.length = L / 100;
        tc.crystal.pdc_angle = 0;
        Kernels kt(pin_seed(tc));
        auto bt = make_basis(kt, opt.thin_n_k, opt.thin_n_omega);
        UVPair ser = series_UV(kt, bt, tc.crystal.length, 4);
        UVPair cl = thin_crystal_matrices(kt, bt);
        auto kt_keep = interior(kt);
        double du = ((ser.U - I).conjugate() - cl.U).max_abs_where(kt_keep) / cl.U.max_abs_where(kt_keep);
        double dv = (ser.V.conjugate() - cl.V).max_abs_where(kt_keep) / cl.V.max_abs_where(kt_keep);
        s.add("series_vs_thin_crystal", std::max(du, dv), 1e-3, "L/100, collinear, interior modes");
    });

    // stimulated
    s.add("efficiency_limit", std::abs(efficiency_f(0.0, 0.0) - 1.0), 1e-6);
    {
        double best = -1, arg = 0, mn = 1e300;
        for (int i = 0; i <= 100000; ++i) {
            double a = -5 + 1e-4 * i, f = efficiency_f(a, 0.4);
            mn = std::min(mn, f);
            if (f > best) best = f, arg = a;
        }
        s.add("efficiency_argmax_offset", std::abs(arg + 0.39), 0.06, "argmax in [-0.45, -0.33]");
        s.at_least("efficiency_nonnegative", mn, 0.0);
        double worst = 0;
        for (double beta : {0.0, 0.4, 2.0})
            for (double a : {-2e-3, 2e-3}) {
                double lo = efficiency_f(a * 0.4999, beta), hi = efficiency_f(a * 0.5001, beta);
                worst = std::max(worst, rel(lo, hi));
            }
        s.add("efficiency_crossover", worst, 1e-6, "continuity at |a| = 1e-3");
    }
    if (cfg.seed.amplitude > 0 && d.Xi > 0) {
        s.guarded("zeta2_tca_vs_oracle", [&] {
            Stimulated st(kernels);
            const double wl = cfg.pump.waist * cfg.seed.waist / d.w0;
            double num = 0, den = 0;
            for (int i = -12; i <= 12; ++i)
                for (int j = -12; j <= 12; j += 6) {
                    WaveVector k;
                    k.omega = d.omega_d;
                    k.K = -d.K_xi + Vec2(i, j) * (0.25 / wl);
                    cd t = st.zeta2_tca(k), o = oracle_zeta2(kernels, k);
                    num += std::norm(t - o);
                    den += std::norm(o);
                }
            s.add("zeta2_tca_vs_oracle", std::sqrt(num / den), opt.rel_tol_oracle, "relative L2 over the idler lobe");
        });
    } else {
        s.info("zeta2_tca_vs_oracle", 0, opt.rel_tol_oracle, "skipped: no seed or no squeezing");
    }

    // background
    if (d.Xi > 0) {
        s.guarded("background_vs_oracle", [&] {
            Background bg(kernels);
            double worst = 0;
            for (double r : {d.r0, d.r0 + d.R, d.r0 + 2 * d.R}) {
                double closed = bg.intensity(Vec2(r, 0));
                double oracle = oracle_background(kernels, Vec2(r, 0));
                worst = std::max(worst, rel(closed, oracle));
            }
            s.add("background_vs_oracle", worst, opt.rel_tol_oracle, "r in {r0, r0+R, r0+2R}");
            s.add("background_peak_limit", rel(bg.intensity_r(d.r0), bg.peak_limit()), 1e-4);
            double worst_c = 0;
            for (double sgn : {-1.0, 1.0}) {
                double u = sgn * 1e-3 * d.R * d.R;
                double r_in = std::sqrt(std::max(0.0, d.r0 * d.r0 + 0.9999 * u));
                double r_out = std::sqrt(std::max(0.0, d.r0 * d.r0 + 1.0001 * u));
                worst_c = std::max(worst_c, rel(bg.intensity_r(r_in), bg.intensity_r(r_out)));
            }
            s.add("background_crossover", worst_c, 1e-6, "continuity at |r^2-r0^2| = 1e-3 R^2");
            double ratio = Background(with_squeezing(cfg, 2 * d.Xi)).intensity_r(d.r0) / bg.intensity_r(d.r0);
            s.add("background_xi_squared", rel(ratio, 4.0), 1e-12);
        });
    } else {
        s.info("background_vs_oracle", 0, opt.rel_tol_oracle, "skipped: no squeezing");
    }

    ValidationReport rep;
    rep.checks = s.take();
    return rep;
}

}  // namespace spdcm
