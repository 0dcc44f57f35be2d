#pragma once

#include "spdcm/background.hpp"
#include "spdcm/image.hpp"
#include "spdcm/stimulated.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spdcm {

struct IntensityComponents {
    double signal = 0, idler = 0, background = 0;
    double stimulated = 0;  // signal and idler combined per the run's combination mode
    double total() const { return stimulated + background; }
};

/// Combined output: stimulated intensity plus spontaneous background.
class IntensityModel {
public:
    explicit IntensityModel(const ExperimentConfig& cfg);

    const ExperimentConfig& config() const { return cfg_; }
    double operator()(const Vec2& X0) const;
    IntensityComponents components(const Vec2& X0) const;

private:
    ExperimentConfig cfg_;
    Stimulated stim_;
    Background bg_;
};

double combined_intensity(const ExperimentConfig& cfg, const Vec2& X0);

enum class Noise { none, poisson };

/// Model image scaled by the run exposure; Poisson draws use mt19937_64(seed).
IntensityImage synthesize_image(const ExperimentConfig& cfg, const ImageGrid& grid, Noise noise,
                                unsigned long long seed);

enum class FitParameter { photons, squeezing, peak_fraction, seed_waist, pdc_angle };

const char* parameter_name(FitParameter p);
std::optional<FitParameter> parameter_from_name(const std::string& name);

double get_parameter(const ExperimentConfig& cfg, FitParameter p);
/// Returns a copy with the parameter set (photons sets |ξ₀|², squeezing sets Ξ).
ExperimentConfig set_parameter(ExperimentConfig cfg, FitParameter p, double value);

struct FitBounds {
    double lo, hi;
};
FitBounds default_bounds(FitParameter p);

struct FitOptions {
    std::vector<FitParameter> free = {FitParameter::photons, FitParameter::squeezing};
    std::vector<std::pair<FitParameter, double>> init;  // unset parameters start at the config value
    std::vector<std::pair<FitParameter, FitBounds>> bounds;
    int max_iterations = 200;
    double tolerance = 1e-12;  // on relative parameter steps
};

enum class FitStatus { converged, max_iterations, not_identifiable };
const char* status_name(FitStatus s);

struct FitResult {
    std::vector<FitParameter> parameters;
    std::vector<double> values;
    std::vector<double> std_errors;
    double residual_norm = 0;  // weighted, √Σ w(d−m)²
    int iterations = 0;
    FitStatus status = FitStatus::converged;
    ExperimentConfig fitted;

    double value(FitParameter p) const;
};

/// Weighted least squares with weights 1/max(model, 1), solved by
/// Levenberg–Marquardt with central-difference Jacobians. Geometry not in the
/// free set is taken from cfg; the idler model follows cfg.run.idler_model.
FitResult fit_parameters(const IntensityImage& image, const ExperimentConfig& cfg,
                         const FitOptions& opt = {});

/// Seed-blocked image fixes Ξ, the seeded image then fixes |ξ₀|².
FitResult fit_separate(const IntensityImage& background_only, const IntensityImage& combined,
                       const ExperimentConfig& cfg, const FitOptions& opt = {});

}  // namespace spdcm
