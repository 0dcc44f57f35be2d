#pragma once

#include "spdcm/config.hpp"

#include <vector>

namespace spdcm {

/// Regular pixel grid on the output plane; centres span [min, max] inclusive.
struct ImageGrid {
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;  // [m]
    int nx = 1, ny = 1;

    static ImageGrid from_run(const RunConfig& run);
    double x(int i) const { return nx > 1 ? x_min + (x_max - x_min) * i / (nx - 1) : x_min; }
    double y(int j) const { return ny > 1 ? y_min + (y_max - y_min) * j / (ny - 1) : y_min; }
    int size() const { return nx * ny; }
    bool operator==(const ImageGrid&) const = default;
};

/// Pixel values in row-major order (index j·nx + i for pixel (x_i, y_j)).
struct IntensityImage {
    ImageGrid grid;
    std::vector<double> values;
    double exposure = 1.0;  // counts per mean photon number
    bool poisson = false;
    unsigned long long noise_seed = 0;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double total() const;
};

}  // namespace spdcm
