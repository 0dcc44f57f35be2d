#include "spdcm/mode_grid.hpp"

#include "spdcm/error.hpp"

#include <cmath>

namespace spdcm {

namespace {

void trapezoid(double center, double extent, int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, center);
    w.assign(n, 1.0);
    if (n == 1) return;
    double h = 2 * extent / (n - 1);
    for (int i = 0; i < n; ++i) {
        x[i] = center - extent + i * h;
        w[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    // exact symmetry of the nodes about the center
    for (int i = 0; i < n / 2; ++i) {
        double off = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = center - off;
        x[n - 1 - i] = center + off;
    }
    if (n % 2 == 1) x[n / 2] = center;
}

}  // namespace

GridSpec GridSpec::for_model(const Kernels& kernels, int n_k, int n_omega) {
    GridSpec s;
    s.k_extent = 6.0 / kernels.config().pump.waist;
    s.n_k = n_k;
    s.omega_center = kernels.derived().omega_d;
    s.omega_extent = 3.5 * kernels.config().pump.bandwidth;
    s.n_omega = n_omega;
    return s;
}

ModeGrid::ModeGrid(const GridSpec& spec) : spec_(spec) {
    if (spec.n_k < 1 || spec.n_omega < 1) throw DomainError("ModeGrid: counts must be >= 1");
    if (spec.n_k > 1 && !(spec.k_extent > 0)) throw DomainError("ModeGrid: k_extent must be > 0");
    if (spec.n_omega > 1 && !(spec.omega_extent > 0))
        throw DomainError("ModeGrid: omega_extent must be > 0");
    if (spec.n_omega > 1 && spec.omega_center - spec.omega_extent <= 0)
        throw DomainError("ModeGrid: frequencies must stay positive");
    if (spec.n_k == 1) spec_.k_extent = 0;
    if (spec.n_omega == 1) spec_.omega_extent = 0;
    trapezoid(0.0, spec_.k_extent, spec.n_k, k_, wk_);
    trapezoid(spec.omega_center, spec_.omega_extent, spec.n_omega, om_, wom_);
    if (spec.n_k > 1 && spec.n_k < 8) warnings_.push_back("fewer than 8 K samples per axis");
    if (spec.n_omega > 1 && spec.n_omega < 8) warnings_.push_back("fewer than 8 ω samples");
}

ModeGrid::ModeGrid(const GridSpec& spec, const Kernels& kernels) : ModeGrid(spec) {
    if (spec.n_k > 1) {
        double widths = 2 * spec_.k_extent / (2.0 / kernels.config().pump.waist);
        if (widths < 6.0)
            warnings_.push_back("K extent covers only " + std::to_string(widths) +
                                " pump widths (< 6)");
    }
    if (spec.n_omega > 1) {
        double widths = 2 * spec_.omega_extent / kernels.config().pump.bandwidth;
        if (widths < 6.0)
            warnings_.push_back("ω extent covers only " + std::to_string(widths) +
                                " bandwidths (< 6)");
    }
}

void ModeGrid::decompose(int p, int& ix, int& iy, int& io) const {
    iy = p % n_k();
    ix = (p / n_k()) % n_k();
    io = p / (n_k() * n_k());
}

WaveVector ModeGrid::mode(int p) const {
    int ix, iy, io;
    decompose(p, ix, iy, io);
    WaveVector k;
    k.K = Vec2(k_[ix], k_[iy]);
    k.omega = om_[io];
    return k;
}

double ModeGrid::weight(int p) const {
    int ix, iy, io;
    decompose(p, ix, iy, io);
    return wk_[ix] * wk_[iy] * wom_[io] / std::pow(2 * kPi, 3);
}

double ModeGrid::total_weight() const {
    double sk = 0, so = 0;
    for (double w : wk_) sk += w;
    for (double w : wom_) so += w;
    return sk * sk * so / std::pow(2 * kPi, 3);
}

bool ModeGrid::operator==(const ModeGrid& o) const {
    return k_ == o.k_ && wk_ == o.wk_ && om_ == o.om_ && wom_ == o.wom_;
}

}  // namespace spdcm
