#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spdcm {

using Vec2 = Eigen::Vector2d;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Refractive index n(ω). Constant unless a table is supplied; tables are
/// interpolated linearly in ω and clamped at their ends.
class Dispersion {
public:
    Dispersion() = default;
    explicit Dispersion(double n) : n_(n) {}
    Dispersion(std::vector<std::pair<double, double>> table);

    double index(double omega) const;
    bool tabulated() const { return !table_.empty(); }
    double constant_index() const { return n_; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }

private:
    double n_ = 1.0;
    std::vector<std::pair<double, double>> table_;
};

struct PumpConfig {
    double center_frequency = 0.0;  // ω_p [rad/s]
    double bandwidth = 0.0;         // δ_p [rad/s]
    double waist = 0.0;             // w_p [m]
    std::optional<double> amplitude;  // |ζ₀|
    std::optional<double> squeezing;  // Ξ given directly
    double phase = 0.0;               // φ [rad]
};

struct SeedConfig {
    double amplitude = 0.0;  // |ξ₀| [√photons]
    double phase = 0.0;      // [rad]
    double waist = 0.0;      // w_ξ [m]
    double bandwidth = 0.0;  // δ_ξ [rad/s]
    std::optional<double> center_frequency;  // ω_ξ, must equal ω_d when given

    enum class Placement { shift, offset, peak_fraction };
    Placement placement = Placement::shift;
    Vec2 shift = Vec2::Zero();   // K_ξ [1/m] when placement == shift
    Vec2 offset = Vec2::Zero();  // X_ξ [m] when placement == offset
    double peak_fraction = 1.0;  // G: K_ξ = G·X_peak·k_d/f along +x
};

struct CrystalConfig {
    double length = 0.0;                    // L [m]
    std::optional<double> cross_section;    // σ_ooe [m²]
    Dispersion dispersion;
    double pdc_angle = 0.0;                 // θ_d [rad]
};

struct DetectorConfig {
    double focal_length = 0.0;  // f [m]
    double aperture = 0.0;      // w_D [m]
    double bandwidth = 0.0;     // δ_D [rad/s]
};

enum class Combination { coherent, separate };
enum class IdlerModel { tca, series };

struct RunConfig {
    Combination combination = Combination::coherent;
    IdlerModel idler_model = IdlerModel::tca;
    int orders = 5;
    unsigned long long noise_seed = 1;
    double exposure = 1.0;
    double x_min = -2.5e-3, x_max = 2.5e-3;
    double y_min = -0.3e-3, y_max = 0.3e-3;
    int nx = 101, ny = 13;
};

struct ExperimentConfig {
    PumpConfig pump;
    SeedConfig seed;
    CrystalConfig crystal;
    DetectorConfig detector;
    RunConfig run;
};

struct DerivedQuantities {
    double omega_p, omega_d;
    double k_d;        // vacuum wavenumber at ω_d
    double k_med;      // k(ω_d) in the crystal
    double kz_d;       // k_z(ω_d)
    double chi_d;
    double Xi;
    std::optional<double> zeta0;  // |ζ₀|, known only when σ_ooe is given
    double phase;                 // φ
    double Omega0;                // |Ω₀|
    double M0, M1;
    double eta;
    double area;  // A
    double K_D;
    double w0;
    double beta, beta0;
    double r0, R;
    std::optional<double> X_peak;
    Vec2 K_xi;
    Vec2 X_xi;
};

/// Parses a TOML-style document. Numeric quantities are strings carrying a
/// unit ("3 mm", "1e12 rad/s", "1 deg"); dimensionless keys take bare numbers.
ExperimentConfig load_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Range and consistency checks; throws ValidationError.
void validate(const ExperimentConfig& cfg);

DerivedQuantities derive_quantities(const ExperimentConfig& cfg);

/// Converts "<number> <unit>" to SI. kind is one of length, area, frequency,
/// angle, inverse_length.
double parse_quantity(const std::string& text, const std::string& kind);

/// Ξ from |ζ₀| and σ_ooe, and the inverse.
double squeezing_from_amplitude(const ExperimentConfig& cfg, double zeta0);
double amplitude_from_squeezing(const ExperimentConfig& cfg, double Xi);

}  // namespace spdcm
