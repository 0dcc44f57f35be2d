#pragma once

#include "spdcm/config.hpp"
#include "spdcm/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>

namespace spdcm::test {

inline ExperimentConfig preset(const std::string& name) { return load_config(preset_text(name)); }

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

inline double deg(double d) { return d * kPi / 180; }

}  // namespace spdcm::test
