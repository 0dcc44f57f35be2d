#pragma once

#include "spdcm/config.hpp"

#include <string>
#include <vector>

namespace spdcm {

struct ValidationCheck {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
    bool informational = false;  // reported, never fails the run
    std::string note;
};

struct ValidationOptions {
    int ode_n_k = 9, ode_n_omega = 9;   // grid for ODE, series and A/B checks
    int thin_n_k = 13, thin_n_omega = 9;  // grid for closed-form vs matrix-function checks
    int ode_steps = 64;
    double rel_tol_oracle = 0.05;

    /// The 17×17×9 grid everywhere.
    static ValidationOptions full();
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
    std::string text() const;
};

/// Runs the oracle suite against the closed forms for this configuration.
ValidationReport run_validation(const ExperimentConfig& cfg, const ValidationOptions& opt = {});

}  // namespace spdcm
