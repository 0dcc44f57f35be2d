#pragma once

#include "spdcm/image.hpp"

#include <string>
#include <vector>

namespace spdcm {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);

std::string to_csv(const Table& t);
Table parse_csv(const std::string& text, const std::string& origin = "<string>");
void write_csv(const Table& t, const std::string& path);
Table read_csv(const std::string& path);

/// Columns x_mm,y_mm,intensity, one row per pixel in row-major order.
Table image_table(const IntensityImage& img);
IntensityImage image_from_table(const Table& t, const std::string& origin = "<table>");
void write_image_csv(const IntensityImage& img, const std::string& path);
IntensityImage read_image_csv(const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct Plot {
    std::string title;
    std::string x_label = "x (mm)";
    std::string y_label = "mean photon count";
    std::vector<PlotSeries> series;
};

std::string render_svg(const Plot& plot);
void write_svg(const Plot& plot, const std::string& path);

/// Writes text to path, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace spdcm
