#pragma once

#include "spdcm/kernels.hpp"

#include <string>
#include <vector>

namespace spdcm {

struct GridSpec {
    double k_extent = 0;     // K nodes span [−k_extent, k_extent] on both axes [1/m]
    int n_k = 17;
    double omega_center = 0;  // [rad/s]
    double omega_extent = 0;  // ω nodes span omega_center ± omega_extent
    int n_omega = 9;

    /// ±6/w_p in K and ±3.5δ_p around ω_d, i.e. 6 pump widths and 7 bandwidths.
    static GridSpec for_model(const Kernels& kernels, int n_k = 17, int n_omega = 9);
};

/// Tensor grid over (K_x, K_y, ω) with trapezoid weights for d̄k = d²K dω/(2π)³.
/// An axis with a single node carries unit weight (degenerate grid).
class ModeGrid {
public:
    explicit ModeGrid(const GridSpec& spec);
    ModeGrid(const GridSpec& spec, const Kernels& kernels);

    const GridSpec& spec() const { return spec_; }
    int n_k() const { return spec_.n_k; }
    int n_omega() const { return spec_.n_omega; }
    int size() const { return spec_.n_k * spec_.n_k * spec_.n_omega; }

    int index(int ix, int iy, int io) const { return (io * n_k() + ix) * n_k() + iy; }
    void decompose(int p, int& ix, int& iy, int& io) const;

    const std::vector<double>& k_nodes() const { return k_; }
    const std::vector<double>& k_weights() const { return wk_; }
    const std::vector<double>& omega_nodes() const { return om_; }
    const std::vector<double>& omega_weights() const { return wom_; }

    WaveVector mode(int p) const;
    /// Weight including the 1/(2π)³ of the measure.
    double weight(int p) const;
    double total_weight() const;

    const std::vector<std::string>& warnings() const { return warnings_; }
    bool operator==(const ModeGrid& o) const;

private:
    GridSpec spec_;
    std::vector<double> k_, wk_, om_, wom_;
    std::vector<std::string> warnings_;
};

}  // namespace spdcm
