#include "spdcm/fitting.hpp"

#include "spdcm/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace spdcm {

double IntensityImage::total() const {
    double t = 0;
    for (double v : values) t += v;
    return t;
}

ImageGrid ImageGrid::from_run(const RunConfig& run) {
    return {run.x_min, run.x_max, run.y_min, run.y_max, run.nx, run.ny};
}

IntensityModel::IntensityModel(const ExperimentConfig& cfg) : cfg_(cfg), stim_(cfg), bg_(stim_.kernels()) {}

IntensityComponents IntensityModel::components(const Vec2& X0) const {
    IntensityComponents c;
    const IdlerModel model = cfg_.run.idler_model;
    const int m = cfg_.run.orders;
    if (cfg_.seed.amplitude > 0) {
        c.signal = stim_.branch_intensity(X0, Branch::signal, model, m);
        c.idler = stim_.branch_intensity(X0, Branch::idler, model, m);
        c.stimulated = cfg_.run.combination == Combination::separate
                           ? c.signal + c.idler
                           : stim_.intensity(X0, model, Combination::coherent, m);
    }
    c.background = bg_.intensity(X0);
    return c;
}

double IntensityModel::operator()(const Vec2& X0) const {
    double stim = 0;
    if (cfg_.seed.amplitude > 0)
        stim = stim_.intensity(X0, cfg_.run.idler_model, cfg_.run.combination, cfg_.run.orders);
    return stim + bg_.intensity(X0);
}

double combined_intensity(const ExperimentConfig& cfg, const Vec2& X0) {
    return IntensityModel(cfg)(X0);
}

namespace {

std::vector<double> model_values(const ExperimentConfig& cfg, const ImageGrid& grid, double exposure) {
    IntensityModel model(cfg);
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            v[static_cast<std::size_t>(j) * grid.nx + i] = exposure * model(Vec2(grid.x(i), grid.y(j)));
    return v;
}

}  // namespace

IntensityImage synthesize_image(const ExperimentConfig& cfg, const ImageGrid& grid, Noise noise,
                                unsigned long long seed) {
    if (grid.nx < 1 || grid.ny < 1) throw DomainError("synthesize_image: empty grid");
    if (!(cfg.run.exposure > 0)) throw DomainError("synthesize_image: exposure must be positive");
    IntensityImage img;
    img.grid = grid;
    img.exposure = cfg.run.exposure;
    img.values = model_values(cfg, grid, cfg.run.exposure);
    if (noise == Noise::poisson) {
        img.poisson = true;
        img.noise_seed = seed;
        std::mt19937_64 rng(seed);
        for (double& v : img.values) {
            if (!(v > 0)) {
                v = 0;
                continue;
            }
            std::poisson_distribution<long long> draw(v);
            v = static_cast<double>(draw(rng));
        }
    }
    return img;
}

const char* parameter_name(FitParameter p) {
    switch (p) {
        case FitParameter::photons: return "photons";
        case FitParameter::squeezing: return "squeezing";
        case FitParameter::peak_fraction: return "G";
        case FitParameter::seed_waist: return "seed_waist";
        case FitParameter::pdc_angle: return "pdc_angle";
    }
    return "";
}

std::optional<FitParameter> parameter_from_name(const std::string& name) {
    for (auto p : {FitParameter::photons, FitParameter::squeezing, FitParameter::peak_fraction,
                   FitParameter::seed_waist, FitParameter::pdc_angle})
        if (name == parameter_name(p)) return p;
    return std::nullopt;
}

double get_parameter(const ExperimentConfig& cfg, FitParameter p) {
    switch (p) {
        case FitParameter::photons: return cfg.seed.amplitude * cfg.seed.amplitude;
        case FitParameter::squeezing: return derive_quantities(cfg).Xi;
        case FitParameter::peak_fraction: return cfg.seed.peak_fraction;
        case FitParameter::seed_waist: return cfg.seed.waist;
        case FitParameter::pdc_angle: return cfg.crystal.pdc_angle;
    }
    return 0;
}

ExperimentConfig set_parameter(ExperimentConfig cfg, FitParameter p, double value) {
    switch (p) {
        case FitParameter::photons:
            if (value < 0) throw ValidationError("seed.photons", "must be non-negative");
            cfg.seed.amplitude = std::sqrt(value);
            break;
        case FitParameter::squeezing:
            if (value < 0) throw ValidationError("pump.squeezing", "must be non-negative");
            cfg.pump.squeezing = value;
            cfg.pump.amplitude.reset();
            break;
        case FitParameter::peak_fraction:
            if (cfg.seed.placement != SeedConfig::Placement::peak_fraction)
                throw ValidationError("seed.G", "the seed is not placed by G");
            cfg.seed.peak_fraction = value;
            break;
        case FitParameter::seed_waist: cfg.seed.waist = value; break;
        case FitParameter::pdc_angle: cfg.crystal.pdc_angle = value; break;
    }
    return cfg;
}

FitBounds default_bounds(FitParameter p) {
    switch (p) {
        case FitParameter::photons: return {0.0, 1e15};
        case FitParameter::squeezing: return {0.0, 50.0};
        case FitParameter::peak_fraction: return {0.05, 5.0};
        case FitParameter::seed_waist: return {1e-7, 0.1};
        case FitParameter::pdc_angle: return {0.0, 1.4};
    }
    return {0, 0};
}

const char* status_name(FitStatus s) {
    switch (s) {
        case FitStatus::converged: return "converged";
        case FitStatus::max_iterations: return "max_iterations";
        case FitStatus::not_identifiable: return "not_identifiable";
    }
    return "";
}

double FitResult::value(FitParameter p) const {
    for (std::size_t i = 0; i < parameters.size(); ++i)
        if (parameters[i] == p) return values[i];
    return get_parameter(fitted, p);
}

namespace {

class Problem {
public:
    Problem(const IntensityImage& img, const ExperimentConfig& cfg, const FitOptions& opt)
        : img_(img), cfg_(cfg), free_(opt.free) {
        for (auto p : free_) {
            FitBounds b = default_bounds(p);
            for (const auto& [q, qb] : opt.bounds)
                if (q == p) b = qb;
            bounds_.push_back(b);
        }
    }

    int n() const { return static_cast<int>(free_.size()); }

    ExperimentConfig config_at(const Eigen::VectorXd& x) const {
        ExperimentConfig c = cfg_;
        for (int i = 0; i < n(); ++i) c = set_parameter(c, free_[i], x[i]);
        return c;
    }

    Eigen::VectorXd model(const Eigen::VectorXd& x) const {
        auto v = model_values(config_at(x), img_.grid, img_.exposure);
        return Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
    }

    Eigen::VectorXd clamp(Eigen::VectorXd x) const {
        for (int i = 0; i < n(); ++i) x[i] = std::clamp(x[i], bounds_[i].lo, bounds_[i].hi);
        return x;
    }

    // central differences, step 1e-4 relative, kept inside the bounds
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        Eigen::MatrixXd J(img_.grid.size(), n());
        for (int i = 0; i < n(); ++i) {
            double h = 1e-4 * std::max(std::abs(x[i]), scale(i));
            Eigen::VectorXd xp = x, xm = x;
            xp[i] = std::min(x[i] + h, bounds_[i].hi);
            xm[i] = std::max(x[i] - h, bounds_[i].lo);
            J.col(i) = (model(xp) - model(xm)) / (xp[i] - xm[i]);
        }
        return J;
    }

    double scale(int i) const {
        switch (free_[i]) {
            case FitParameter::photons: return 1.0;
            case FitParameter::squeezing: return 0.1;
            case FitParameter::peak_fraction: return 0.1;
            case FitParameter::seed_waist: return 1e-5;
            case FitParameter::pdc_angle: return 1e-3;
        }
        return 1.0;
    }

private:
    const IntensityImage& img_;
    const ExperimentConfig& cfg_;
    std::vector<FitParameter> free_;
    std::vector<FitBounds> bounds_;
};

}  // namespace

FitResult fit_parameters(const IntensityImage& image, const ExperimentConfig& cfg, const FitOptions& opt) {
    if (opt.free.empty()) throw DomainError("fit: the free parameter set is empty");
    if (image.values.size() != static_cast<std::size_t>(image.grid.size()))
        throw DomainError("fit: image values do not match its grid");
    if (std::none_of(image.values.begin(), image.values.end(), [](double v) { return v != 0; }))
        throw DomainError("fit: image contains no counts");
    for (std::size_t i = 0; i < opt.free.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (opt.free[i] == opt.free[j]) throw DomainError("fit: parameter listed twice");

    Problem prob(image, cfg, opt);
    const int np = prob.n();
    const Eigen::Map<const Eigen::VectorXd> data(image.values.data(), image.values.size());

    Eigen::VectorXd x(np);
    for (int i = 0; i < np; ++i) {
        x[i] = get_parameter(cfg, opt.free[i]);
        for (const auto& [p, v] : opt.init)
            if (p == opt.free[i]) x[i] = v;
    }
    x = prob.clamp(x);

    auto weights = [](const Eigen::VectorXd& m) { return (1.0 / m.array().max(1.0)).matrix().eval(); };
    auto cost = [&](const Eigen::VectorXd& m, const Eigen::VectorXd& w) {
        return (w.array() * (data - m).array().square()).sum();
    };

    FitResult res;
    res.parameters = opt.free;
    res.status = FitStatus::max_iterations;
    Eigen::VectorXd m = prob.model(x);
    double lambda = 1e-3;
    Eigen::MatrixXd JtWJ;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        // weights follow the current model and are frozen within an iteration
        Eigen::VectorXd w = weights(m);
        Eigen::MatrixXd J = prob.jacobian(x);
        JtWJ = J.transpose() * w.asDiagonal() * J;
        Eigen::VectorXd g = J.transpose() * (w.array() * (data - m).array()).matrix();
        Eigen::VectorXd diag = JtWJ.diagonal();
        if ((diag.array() <= 0).any()) {
            res.status = FitStatus::not_identifiable;
            break;
        }
        const double c0 = cost(m, w);
        bool accepted = false, small = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd A = JtWJ;
            A.diagonal() += lambda * diag;
            Eigen::VectorXd step = A.ldlt().solve(g);
            Eigen::VectorXd xn = prob.clamp(x + step);
            Eigen::VectorXd mn = prob.model(xn);
            double c1 = cost(mn, w);
            small = true;
            for (int i = 0; i < np; ++i)
                if (std::abs(xn[i] - x[i]) > opt.tolerance * std::max(std::abs(x[i]), prob.scale(i)))
                    small = false;
            if (c1 <= c0) {
                x = xn;
                m = mn;
                lambda = std::max(lambda / 10, 1e-12);
                accepted = true;
                break;
            }
            if (small) break;
            lambda *= 10;
        }
        if (small || !accepted) {
            res.status = FitStatus::converged;
            ++it;
            break;
        }
    }
    res.iterations = it;

    // final curvature at the solution
    Eigen::VectorXd w = weights(m);
    Eigen::MatrixXd J = prob.jacobian(x);
    JtWJ = J.transpose() * w.asDiagonal() * J;
    // conditioning of the scaled curvature decides identifiability
    Eigen::VectorXd sc = JtWJ.diagonal().cwiseSqrt();
    bool degenerate = !(sc.array() > 0).all();
    if (!degenerate) {
        Eigen::MatrixXd Cn = sc.cwiseInverse().asDiagonal() * JtWJ * sc.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(Cn);
        degenerate = en.eigenvalues().minCoeff() < 1e-10 * en.eigenvalues().maxCoeff();
    }
    if (degenerate) res.status = FitStatus::not_identifiable;

    res.values.assign(x.data(), x.data() + np);
    res.std_errors.assign(np, std::nan(""));
    if (!degenerate) {
        Eigen::MatrixXd cov = JtWJ.inverse();
        for (int i = 0; i < np; ++i) res.std_errors[i] = std::sqrt(std::max(cov(i, i), 0.0));
    }
    res.residual_norm = std::sqrt(cost(m, w));
    res.fitted = prob.config_at(x);
    return res;
}

FitResult fit_separate(const IntensityImage& background_only, const IntensityImage& combined,
                       const ExperimentConfig& cfg, const FitOptions& opt) {
    FitOptions bg_opt = opt;
    bg_opt.free = {FitParameter::squeezing};
    ExperimentConfig blocked = set_parameter(cfg, FitParameter::photons, 0.0);
    FitResult bg = fit_parameters(background_only, blocked, bg_opt);

    FitOptions seed_opt = opt;
    seed_opt.free.clear();
    for (auto p : opt.free)
        if (p != FitParameter::squeezing) seed_opt.free.push_back(p);
    if (seed_opt.free.empty()) seed_opt.free = {FitParameter::photons};
    ExperimentConfig fixed = set_parameter(cfg, FitParameter::squeezing, bg.value(FitParameter::squeezing));
    FitResult out = fit_parameters(combined, fixed, seed_opt);

    // report Ξ alongside, with its error from the seed-blocked exposure
    out.parameters.insert(out.parameters.begin(), FitParameter::squeezing);
    out.values.insert(out.values.begin(), bg.values[0]);
    out.std_errors.insert(out.std_errors.begin(), bg.std_errors[0]);
    if (bg.status != FitStatus::converged && out.status == FitStatus::converged) out.status = bg.status;
    out.iterations += bg.iterations;
    return out;
}

}  // namespace spdcm
