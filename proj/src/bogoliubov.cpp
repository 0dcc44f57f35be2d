#include "spdcm/bogoliubov.hpp"

#include "spdcm/error.hpp"

#include <algorithm>
#include <cmath>

namespace spdcm {

namespace {

// c(ω) = k_z/2 − k²/(2k_z): the ω-only part of Δk_z
double mismatch_offset(const Kernels& kernels, double w) {
    double a = kernels.kz(w), k = kernels.k(w);
    return 0.5 * a - k * k / (2 * a);
}

// The RK4 state is stored per block as S = [V; Ū] (2d × d). Then
// ∂zS = ½·[conj((S·H)_bottom); conj((S·H)_top)], one product per stage.
using Stacked = std::vector<Eigen::MatrixXcd>;

UVPair unpack(const KernelMatrix::Basis& basis, const Stacked& S) {
    UVPair uv{KernelMatrix::zero(basis), KernelMatrix::zero(basis)};
    for (std::size_t b = 0; b < S.size(); ++b) {
        const Eigen::Index d = S[b].cols();
        uv.V.blocks()[b] = S[b].topRows(d);
        uv.U.blocks()[b] = S[b].bottomRows(d).conjugate();
    }
    return uv;
}

void stacked_rhs(const Stacked& S, const KernelMatrix& H, Stacked& D) {
    for (std::size_t b = 0; b < S.size(); ++b) {
        const Eigen::Index d = S[b].cols();
        D[b].noalias() = S[b] * H.blocks()[b];
        D[b].topRows(d).swap(D[b].bottomRows(d));
        D[b] = 0.5 * D[b].conjugate();
    }
}

// a += s·b blockwise
void stacked_axpy(Stacked& a, double s, const Stacked& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

// t = a + s·b blockwise
void stacked_set(Stacked& t, const Stacked& a, double s, const Stacked& b) {
    t.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] + s * b[i];
}

// Walks the RK4 trajectory, calling cb(step, z, S, H(z)) at every node.
template <class Callback>
void rk4_trajectory(const Kernels& kernels, const KernelMatrix::Basis& basis, double L, int steps,
                    Callback&& cb) {
    if (steps < 64) throw DomainError("solve_UV_ode: at least 64 steps are required");
    if (!(L > 0)) throw DomainError("solve_UV_ode: L must be positive");
    const double h = L / steps;
    const auto& sectors = basis->sectors();
    Stacked s(sectors.size()), acc, t, k(sectors.size());
    for (std::size_t b = 0; b < sectors.size(); ++b) {
        const int d = sectors[b].dim;
        s[b] = Eigen::MatrixXcd::Zero(2 * d, d);
        s[b].bottomRows(d).setIdentity();
        k[b].resize(2 * d, d);
    }
    KernelMatrix H0 = bilinear_kernel_matrix(kernels, basis, 0.0);
    cb(0, 0.0, s, H0);
    for (int j = 0; j < steps; ++j) {
        const double z = j * h;
        KernelMatrix Hm = bilinear_kernel_matrix(kernels, basis, z + 0.5 * h);
        KernelMatrix H1 = bilinear_kernel_matrix(kernels, basis, z + h);

        stacked_rhs(s, H0, k);
        stacked_set(acc, s, h / 6, k);
        stacked_set(t, s, h / 2, k);
        stacked_rhs(t, Hm, k);
        stacked_axpy(acc, h / 3, k);
        stacked_set(t, s, h / 2, k);
        stacked_rhs(t, Hm, k);
        stacked_axpy(acc, h / 3, k);
        stacked_set(t, s, h, k);
        stacked_rhs(t, H1, k);
        stacked_axpy(acc, h / 6, k);

        std::swap(s, acc);
        H0 = std::move(H1);
        cb(j + 1, (j + 1) == steps ? L : z + h, s, H0);
    }
}

}  // namespace

KernelMatrix bilinear_kernel_matrix(const Kernels& kernels, const KernelMatrix::Basis& basis,
                                    double z) {
    const ModeGrid& g = basis->grid();
    const auto& om = g.omega_nodes();
    const auto& kn = g.k_nodes();
    const int n = g.n_k();
    const double wp = kernels.config().pump.waist, dp = kernels.config().pump.bandwidth;
    const double omega_p = kernels.derived().omega_p;
    const cd coupling = kernels.coupling();
    return KernelMatrix::from_separable(basis, [&](int io, int jo, Eigen::MatrixXcd& G) -> cd {
        const double w1 = om[io], w2 = om[jo];
        const double a1 = kernels.kz(w1), a2 = kernels.kz(w2);
        const double q = a1 * a2 / (a1 + a2);
        G.resize(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double s = kn[i] + kn[j];
                double d = kn[i] / a1 - kn[j] / a2;
                G(i, j) = std::exp(cd(-0.25 * wp * wp * s * s, 0.5 * z * q * d * d));
            }
        double phase = z * (mismatch_offset(kernels, w1) + mismatch_offset(kernels, w2));
        return coupling * std::sqrt(w1 * w2) * spectral_h(w1 + w2 - omega_p, dp) *
               std::polar(1.0, phase);
    });
}

KernelMatrix contracted_kernel_matrix(const Kernels& kernels, const KernelMatrix::Basis& basis,
                                      int m) {
    const ModeGrid& g = basis->grid();
    const auto& om = g.omega_nodes();
    const auto& kn = g.k_nodes();
    const int n = g.n_k();
    const Parity par = (m % 2) ? Parity::odd : Parity::even;
    const ContractedKernelTerm term = kernels.contracted_H(m, par);
    const double wp = kernels.config().pump.waist;
    const double sign = (par == Parity::odd) ? 1.0 : -1.0;
    return KernelMatrix::from_separable(basis, [&](int io, int jo, Eigen::MatrixXcd& G) -> cd {
        G.resize(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double s = kn[i] + sign * kn[j];
                G(i, j) = std::exp(-wp * wp * s * s / (4.0 * m));
            }
        WaveVector k1, k2;
        k1.omega = om[io];
        k2.omega = om[jo];
        return term(k1, k2);
    });
}

BogoliubovDefects bogoliubov_defects(const UVPair& uv) {
    const auto& U = uv.U;
    const auto& V = uv.V;
    KernelMatrix I = KernelMatrix::identity(U.basis());
    KernelMatrix Ud = U.adjoint();
    KernelMatrix UdU = diamond(Ud, U);
    BogoliubovDefects d;
    KernelMatrix VdV = diamond(V.adjoint(), V);
    d.stated = (UdU - VdV - I).max_abs();
    // Vᵀ⋄V* = conj(V†⋄V) on a real basis
    d.canonical = (UdU - VdV.conjugate() - I).max_abs();
    d.rows = (diamond(U, Ud) - diamond(V, V.adjoint()) - I).max_abs();
    d.u_hermitian = (U - Ud).max_abs();
    d.v_symmetric = (V - V.transpose()).max_abs();
    KernelMatrix UV = diamond(U, V);
    d.uv_symmetric = (UV - UV.transpose()).max_abs();
    return d;
}

OdeResult solve_UV_ode(const Kernels& kernels, const KernelMatrix::Basis& basis, double L,
                       int steps, int n_stations) {
    OdeResult out;
    std::vector<int> marks;
    for (int s = 1; s <= n_stations; ++s)
        marks.push_back(static_cast<int>(std::lround(double(s) * steps / n_stations)));
    rk4_trajectory(kernels, basis, L, steps, [&](int j, double z, const Stacked& S, const KernelMatrix&) {
        if (std::find(marks.begin(), marks.end(), j) != marks.end())
            out.stations.push_back({z, bogoliubov_defects(unpack(basis, S))});
        if (j == steps) out.uv = unpack(basis, S);
    });
    return out;
}

UVPair series_UV(const Kernels& kernels, const KernelMatrix::Basis& basis, double L, int order,
                 int z_nodes) {
    if (order < 1 || order > 6) throw DomainError("series_UV: order must lie in [1, 6]");
    if (z_nodes < 5) throw DomainError("series_UV: at least 5 z nodes are required");
    if (!(L > 0)) throw DomainError("series_UV: L must be positive");
    const int n = z_nodes;
    const double h = L / (n - 1);
    UVPair out{KernelMatrix::identity(basis), KernelMatrix::zero(basis)};

    auto Hz = [&](int j, bool conj) {
        KernelMatrix H = bilinear_kernel_matrix(kernels, basis, j * h);
        return conj ? H.conjugate() : H;
    };
    // cumulative ∫₀^{z_j} f with a 4th-order local cubic rule
    auto cumulate = [&](std::vector<KernelMatrix>& f) {
        std::vector<KernelMatrix> c;
        c.reserve(n);
        c.push_back(KernelMatrix::zero(basis));
        for (int j = 0; j + 1 < n; ++j) {
            KernelMatrix next = c.back();
            if (j == 0) {
                next.axpy(9 * h / 24, f[0]);
                next.axpy(19 * h / 24, f[1]);
                next.axpy(-5 * h / 24, f[2]);
                next.axpy(h / 24, f[3]);
            } else if (j == n - 2) {
                next.axpy(h / 24, f[n - 4]);
                next.axpy(-5 * h / 24, f[n - 3]);
                next.axpy(19 * h / 24, f[n - 2]);
                next.axpy(9 * h / 24, f[n - 1]);
            } else {
                next.axpy(-h / 24, f[j - 1]);
                next.axpy(13 * h / 24, f[j]);
                next.axpy(13 * h / 24, f[j + 1]);
                next.axpy(-h / 24, f[j + 2]);
            }
            c.push_back(std::move(next));
        }
        return c;
    };

    // level 1: V₁' = ½H*
    std::vector<KernelMatrix> level(n);
    for (int j = 0; j < n; ++j) level[j] = Hz(j, true) * 0.5;
    level = cumulate(level);
    out.V += level.back();
    for (int k = 2; k <= order; ++k) {
        // even levels feed U (U' = ½V⋄H), odd levels feed V (V' = ½U⋄H*)
        const bool feeds_u = (k % 2 == 0);
        for (int j = 0; j < n; ++j) level[j] = diamond(level[j], Hz(j, !feeds_u)) * 0.5;
        level = cumulate(level);
        (feeds_u ? out.U : out.V) += level.back();
    }
    return out;
}

ABPair build_AB(const UVPair& uv) {
    const auto& U = uv.U;
    const auto& V = uv.V;
    KernelMatrix Ud = U.adjoint(), Vt = V.transpose();
    return {diamond(Ud, U) + diamond(Vt, V.conjugate()), diamond(Ud, V) + diamond(Vt, U.conjugate())};
}

double ab_defect(const Kernels& kernels, const KernelMatrix::Basis& basis, double L, int steps) {
    const double h = L / steps;
    // five-point stencil; a three-point one leaves O((hΔk_z)²) ~ 1e-4 at 256 steps
    std::vector<ABPair> ring;
    std::vector<KernelMatrix> hring;
    double worst_a = 0, worst_b = 0, scale_a = 0, scale_b = 0;
    rk4_trajectory(kernels, basis, L, steps, [&](int, double, const Stacked& S, const KernelMatrix& H) {
        ring.push_back(build_AB(unpack(basis, S)));
        hring.push_back(H);
        if (ring.size() > 5) {
            ring.erase(ring.begin());
            hring.erase(hring.begin());
        }
        if (ring.size() < 5) return;
        const ABPair& mid = ring[2];
        const KernelMatrix& Hj = hring[2];
        KernelMatrix Hd = Hj.adjoint();
        KernelMatrix rhs_a = (diamond(Hd, mid.B.conjugate()) + diamond(mid.B, Hj)) * 0.5;
        KernelMatrix rhs_b = (diamond(Hd, mid.A.transpose()) + diamond(mid.A, Hj.conjugate())) * 0.5;
        auto derivative = [&](auto member) {
            KernelMatrix d = ring[0].*member;
            d.axpy(-8.0, ring[1].*member);
            d.axpy(8.0, ring[3].*member);
            d.axpy(-1.0, ring[4].*member);
            return d * (1.0 / (12 * h));
        };
        KernelMatrix fd_a = derivative(&ABPair::A);
        KernelMatrix fd_b = derivative(&ABPair::B);
        worst_a = std::max(worst_a, (fd_a - rhs_a).max_abs());
        worst_b = std::max(worst_b, (fd_b - rhs_b).max_abs());
        scale_a = std::max(scale_a, rhs_a.max_abs());
        scale_b = std::max(scale_b, rhs_b.max_abs());
    });
    double ra = scale_a > 0 ? worst_a / scale_a : worst_a;
    double rb = scale_b > 0 ? worst_b / scale_b : worst_b;
    return std::max(ra, rb);
}

UVPair thin_crystal_matrices(const Kernels& kernels, const KernelMatrix::Basis& basis, int n_max) {
    n_max = std::max(1, std::min(n_max, 32));
    UVPair out{KernelMatrix::zero(basis), KernelMatrix::zero(basis)};
    double sum_u = 0, sum_v = 0;
    for (int n = 1; n <= n_max; ++n) {
        double scale = std::pow(4.0, -n);
        out.U.axpy(scale, contracted_kernel_matrix(kernels, basis, 2 * n));
        out.V.axpy(2 * scale, contracted_kernel_matrix(kernels, basis, 2 * n - 1));
        double pu = scale * kernels.contracted_H(2 * n, Parity::even).peak();
        double pv = 2 * scale * kernels.contracted_H(2 * n - 1, Parity::odd).peak();
        sum_u += pu;
        sum_v += pv;
        if ((pu <= 1e-10 * sum_u && pv <= 1e-10 * sum_v) || (sum_u == 0 && sum_v == 0)) break;
    }
    out.V *= std::polar(1.0, -kernels.derived().phase);
    return out;
}

UVPair thin_crystal_matrix_functions(const Kernels& kernels, const KernelMatrix::Basis& basis) {
    // |H| = i·e^{iφ}·H(z=0)
    KernelMatrix X = bilinear_kernel_matrix(kernels, basis, 0.0) *
                     (cd(0.0, 1.0) * std::polar(1.0, kernels.derived().phase) *
                      (0.5 * kernels.config().crystal.length));
    // V carries the same −i·e^{−iφ} as the closed-form odd sums
    return {X.hermitian_function([](double x) { return std::cosh(x) - 1.0; }),
            X.hermitian_function([](double x) { return std::sinh(x); }) *
                (cd(0.0, -1.0) * std::polar(1.0, -kernels.derived().phase))};
}

}  // namespace spdcm
