#include "spdcm/spdcm.h"

#include "spdcm/background.hpp"
#include "spdcm/error.hpp"
#include "spdcm/fitting.hpp"
#include "spdcm/io.hpp"
#include "spdcm/presets.hpp"
#include "spdcm/stimulated.hpp"
#include "spdcm/validate.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>

using namespace spdcm;

struct spdcm_model {
    ExperimentConfig cfg;
    // rebuilt lazily after a parameter change
    mutable std::shared_ptr<const IntensityModel> model;
    mutable std::shared_ptr<const Stimulated> stim;

    const IntensityModel& intensity() const {
        if (!model) model = std::make_shared<IntensityModel>(cfg);
        return *model;
    }
    const Stimulated& stimulated() const {
        if (!stim) stim = std::make_shared<Stimulated>(cfg);
        return *stim;
    }
    void reset() {
        model.reset();
        stim.reset();
    }
};

struct spdcm_image {
    IntensityImage img;
};

struct spdcm_report {
    ValidationReport rep;
    std::string text;
};

namespace {

thread_local std::string g_last_error;

spdcm_status fail(spdcm_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
spdcm_status guard(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const ParseError& e) {
        return fail(SPDCM_ERR_PARSE, e.what());
    } catch (const ValidationError& e) {
        return fail(SPDCM_ERR_VALIDATION, e.what());
    } catch (const DomainError& e) {
        return fail(SPDCM_ERR_DOMAIN, e.what());
    } catch (const NumericError& e) {
        return fail(SPDCM_ERR_NUMERIC, e.what());
    } catch (const IoError& e) {
        return fail(SPDCM_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SPDCM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SPDCM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SPDCM_ERR_INTERNAL, "unknown error");
    }
}

#define SPDCM_REQUIRE(ptr)                                                   \
    do {                                                                     \
        if (!(ptr)) return fail(SPDCM_ERR_ARGUMENT, #ptr " must not be null"); \
    } while (0)

void copy_str(char* dst, std::size_t n, const std::string& src) {
    std::size_t k = std::min(n - 1, src.size());
    std::memcpy(dst, src.data(), k);
    dst[k] = '\0';
}

std::vector<FitParameter> parse_free(const char* text) {
    if (!text) return {FitParameter::photons, FitParameter::squeezing};
    std::vector<FitParameter> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(' ');
        auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) continue;
        item = item.substr(b, e - b + 1);
        auto p = parameter_from_name(item);
        if (!p) throw ValidationError("fit.free", "unknown parameter '" + item + "'");
        out.push_back(*p);
    }
    if (out.empty()) throw ValidationError("fit.free", "no free parameters");
    if (out.size() > SPDCM_FIT_MAX_PARAMS) throw ValidationError("fit.free", "too many parameters");
    return out;
}

void fill_result(const FitResult& r, spdcm_fit_result* out) {
    std::memset(out, 0, sizeof *out);
    out->count = static_cast<int>(r.parameters.size());
    for (std::size_t i = 0; i < r.parameters.size() && i < SPDCM_FIT_MAX_PARAMS; ++i) {
        copy_str(out->names[i], sizeof out->names[i], parameter_name(r.parameters[i]));
        out->values[i] = r.values[i];
        out->std_errors[i] = r.std_errors[i];
    }
    out->residual_norm = r.residual_norm;
    out->iterations = r.iterations;
    out->status = static_cast<int>(r.status);
}

spdcm_status make_model(ExperimentConfig cfg, spdcm_model** out) {
    auto m = std::make_unique<spdcm_model>();
    m->cfg = std::move(cfg);
    *out = m.release();
    return SPDCM_OK;
}

IntensityImage with_exposure(IntensityImage img, const ExperimentConfig& cfg) {
    img.exposure = cfg.run.exposure;
    return img;
}

}  // namespace

extern "C" {

const char* spdcm_version(void) { return "1.0.0"; }

const char* spdcm_last_error(void) { return g_last_error.c_str(); }

const char* spdcm_status_string(spdcm_status s) {
    switch (s) {
        case SPDCM_OK: return "ok";
        case SPDCM_ERR_PARSE: return "parse error";
        case SPDCM_ERR_VALIDATION: return "validation error";
        case SPDCM_ERR_DOMAIN: return "domain error";
        case SPDCM_ERR_NUMERIC: return "numeric error";
        case SPDCM_ERR_IO: return "i/o error";
        case SPDCM_ERR_ARGUMENT: return "invalid argument";
        case SPDCM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

spdcm_status spdcm_model_from_file(const char* path, spdcm_model** out) {
    SPDCM_REQUIRE(path);
    SPDCM_REQUIRE(out);
    return guard([&] { return make_model(load_config_file(path), out); });
}

spdcm_status spdcm_model_from_string(const char* text, spdcm_model** out) {
    SPDCM_REQUIRE(text);
    SPDCM_REQUIRE(out);
    return guard([&] { return make_model(load_config(text), out); });
}

spdcm_status spdcm_model_from_preset(const char* name, spdcm_model** out) {
    SPDCM_REQUIRE(name);
    SPDCM_REQUIRE(out);
    return guard([&] { return make_model(load_config(preset_text(name)), out); });
}

spdcm_status spdcm_model_clone(const spdcm_model* m, spdcm_model** out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] { return make_model(m->cfg, out); });
}

void spdcm_model_free(spdcm_model* m) { delete m; }

spdcm_status spdcm_model_set(spdcm_model* m, const char* name, double value) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(name);
    return guard([&] {
        ExperimentConfig c = m->cfg;
        const std::string n = name;
        if (auto p = parameter_from_name(n)) {
            c = set_parameter(c, *p, value);
        } else if (n == "pump_phase") {
            c.pump.phase = value;
        } else if (n == "seed_phase") {
            c.seed.phase = value;
        } else if (n == "exposure") {
            c.run.exposure = value;
        } else if (n == "orders") {
            if (value != std::floor(value)) throw ValidationError("run.orders", "must be an integer");
            c.run.orders = static_cast<int>(value);
        } else if (n == "combination") {
            c.run.combination = value != 0 ? Combination::separate : Combination::coherent;
        } else if (n == "idler_model") {
            c.run.idler_model = value != 0 ? IdlerModel::series : IdlerModel::tca;
        } else {
            return fail(SPDCM_ERR_ARGUMENT, "unknown or read-only parameter '" + n + "'");
        }
        validate(c);
        m->cfg = std::move(c);
        m->reset();
        return SPDCM_OK;
    });
}

spdcm_status spdcm_model_get(const spdcm_model* m, const char* name, double* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(name);
    SPDCM_REQUIRE(out);
    return guard([&] {
        const std::string n = name;
        const ExperimentConfig& c = m->cfg;
        if (auto p = parameter_from_name(n)) {
            *out = get_parameter(c, *p);
            return SPDCM_OK;
        }
        const DerivedQuantities d = derive_quantities(c);
        const std::pair<const char*, double> table[] = {
            {"pump_phase", c.pump.phase}, {"seed_phase", c.seed.phase},
            {"exposure", c.run.exposure}, {"orders", double(c.run.orders)},
            {"noise_seed", double(c.run.noise_seed)},
            {"combination", c.run.combination == Combination::separate ? 1.0 : 0.0},
            {"idler_model", c.run.idler_model == IdlerModel::series ? 1.0 : 0.0},
            {"omega_p", d.omega_p}, {"omega_d", d.omega_d}, {"k_d", d.k_d}, {"kz_d", d.kz_d},
            {"chi_d", d.chi_d}, {"Xi", d.Xi}, {"M0", d.M0}, {"M1", d.M1}, {"Omega0", d.Omega0},
            {"eta", d.eta}, {"area", d.area}, {"K_D", d.K_D}, {"w0", d.w0}, {"beta", d.beta},
            {"beta0", d.beta0}, {"r0", d.r0}, {"R", d.R}, {"K_xi_x", d.K_xi.x()},
            {"K_xi_y", d.K_xi.y()}, {"X_xi_x", d.X_xi.x()}, {"X_xi_y", d.X_xi.y()},
            {"x_min", c.run.x_min}, {"x_max", c.run.x_max}, {"y_min", c.run.y_min},
            {"y_max", c.run.y_max}, {"nx", double(c.run.nx)}, {"ny", double(c.run.ny)},
            {"length", c.crystal.length}, {"focal_length", c.detector.focal_length}};
        for (const auto& [key, v] : table)
            if (n == key) {
                *out = v;
                return SPDCM_OK;
            }
        if (n == "X_peak") {
            if (!d.X_peak) return fail(SPDCM_ERR_DOMAIN, "no idler peak location: r0^2 < R^2/2");
            *out = *d.X_peak;
            return SPDCM_OK;
        }
        if (n == "a_peak") {
            *out = m->stimulated().optimal_seed_geometry().a_peak;
            return SPDCM_OK;
        }
        if (n == "Omega3" || n == "background_peak") {
            Background bg(c);
            *out = n == "Omega3" ? bg.params().Omega3 : bg.peak_limit();
            return SPDCM_OK;
        }
        return fail(SPDCM_ERR_ARGUMENT, "unknown quantity '" + n + "'");
    });
}

spdcm_status spdcm_intensity(const spdcm_model* m, double x, double y, spdcm_components* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] {
        IntensityComponents c = m->intensity().components(Vec2(x, y));
        *out = {c.signal, c.idler, c.stimulated, c.background, c.total()};
        return SPDCM_OK;
    });
}

spdcm_status spdcm_order_info_get(const spdcm_model* m, int order, spdcm_order_info* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] {
        if (order < 0 || order > 64) return fail(SPDCM_ERR_ARGUMENT, "order must lie in [0, 64]");
        const Stimulated& s = m->stimulated();
        const OrderTerm t = s.zeta_orders(order).back();
        const DerivedQuantities& d = s.kernels().derived();
        const double scale = m->cfg.detector.focal_length / d.k_d;
        *out = {t.order, t.branch == Branch::idler ? 1 : 0, t.width, t.bandwidth,
                t.center.x() * scale, t.center.y() * scale};
        return SPDCM_OK;
    });
}

spdcm_status spdcm_order_intensity(const spdcm_model* m, int order, double x, double y, double* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] {
        if (order < 0 || order > 64) return fail(SPDCM_ERR_ARGUMENT, "order must lie in [0, 64]");
        const Stimulated& s = m->stimulated();
        const OrderTerm t = s.zeta_orders(order).back();
        *out = s.kernels().derived().K_D * std::norm(t.amplitude(s.detector_mode(Vec2(x, y))));
        return SPDCM_OK;
    });
}

spdcm_status spdcm_efficiency(double a, double beta, double* out) {
    SPDCM_REQUIRE(out);
    return guard([&] {
        *out = efficiency_f(a, beta);
        return SPDCM_OK;
    });
}

spdcm_status spdcm_image_synthesize(const spdcm_model* m, int poisson, unsigned long long seed,
                                    spdcm_image** out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] {
        auto img = std::make_unique<spdcm_image>();
        img->img = synthesize_image(m->cfg, ImageGrid::from_run(m->cfg.run),
                                    poisson ? Noise::poisson : Noise::none, seed);
        *out = img.release();
        return SPDCM_OK;
    });
}

spdcm_status spdcm_image_read(const char* path, spdcm_image** out) {
    SPDCM_REQUIRE(path);
    SPDCM_REQUIRE(out);
    return guard([&] {
        auto img = std::make_unique<spdcm_image>();
        img->img = read_image_csv(path);
        *out = img.release();
        return SPDCM_OK;
    });
}

spdcm_status spdcm_image_write(const spdcm_image* img, const char* path) {
    SPDCM_REQUIRE(img);
    SPDCM_REQUIRE(path);
    return guard([&] {
        write_image_csv(img->img, path);
        return SPDCM_OK;
    });
}

spdcm_status spdcm_image_info_get(const spdcm_image* img, spdcm_image_info* out) {
    SPDCM_REQUIRE(img);
    SPDCM_REQUIRE(out);
    const ImageGrid& g = img->img.grid;
    *out = {g.nx, g.ny, g.x_min, g.x_max, g.y_min, g.y_max, img->img.total()};
    return SPDCM_OK;
}

spdcm_status spdcm_image_values(const spdcm_image* img, double* buffer, size_t count) {
    SPDCM_REQUIRE(img);
    SPDCM_REQUIRE(buffer);
    if (count < img->img.values.size()) return fail(SPDCM_ERR_ARGUMENT, "buffer too small");
    std::copy(img->img.values.begin(), img->img.values.end(), buffer);
    return SPDCM_OK;
}

void spdcm_image_free(spdcm_image* img) { delete img; }

spdcm_status spdcm_fit(const spdcm_model* m, const spdcm_image* img, const char* free_params,
                       const double* init, spdcm_fit_result* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(img);
    SPDCM_REQUIRE(out);
    return guard([&] {
        FitOptions opt;
        opt.free = parse_free(free_params);
        if (init)
            for (std::size_t i = 0; i < opt.free.size(); ++i) opt.init.emplace_back(opt.free[i], init[i]);
        fill_result(fit_parameters(with_exposure(img->img, m->cfg), m->cfg, opt), out);
        return SPDCM_OK;
    });
}

spdcm_status spdcm_fit_separate(const spdcm_model* m, const spdcm_image* background_only,
                                const spdcm_image* combined, const char* free_params,
                                spdcm_fit_result* out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(background_only);
    SPDCM_REQUIRE(combined);
    SPDCM_REQUIRE(out);
    return guard([&] {
        FitOptions opt;
        opt.free = parse_free(free_params);
        fill_result(fit_separate(with_exposure(background_only->img, m->cfg),
                                 with_exposure(combined->img, m->cfg), m->cfg, opt),
                    out);
        return SPDCM_OK;
    });
}

spdcm_status spdcm_validate(const spdcm_model* m, int full, spdcm_report** out) {
    SPDCM_REQUIRE(m);
    SPDCM_REQUIRE(out);
    return guard([&] {
        auto r = std::make_unique<spdcm_report>();
        r->rep = run_validation(m->cfg, full ? ValidationOptions::full() : ValidationOptions{});
        r->text = r->rep.text();
        *out = r.release();
        return SPDCM_OK;
    });
}

size_t spdcm_report_count(const spdcm_report* r) { return r ? r->rep.checks.size() : 0; }

spdcm_status spdcm_report_check(const spdcm_report* r, size_t index, spdcm_check* out) {
    SPDCM_REQUIRE(r);
    SPDCM_REQUIRE(out);
    if (index >= r->rep.checks.size()) return fail(SPDCM_ERR_ARGUMENT, "check index out of range");
    const ValidationCheck& c = r->rep.checks[index];
    std::memset(out, 0, sizeof *out);
    copy_str(out->name, sizeof out->name, c.name);
    copy_str(out->note, sizeof out->note, c.note);
    out->value = c.value;
    out->tolerance = c.tolerance;
    out->pass = c.pass ? 1 : 0;
    out->informational = c.informational ? 1 : 0;
    return SPDCM_OK;
}

int spdcm_report_passed(const spdcm_report* r) { return r && r->rep.passed() ? 1 : 0; }

const char* spdcm_report_text(const spdcm_report* r) { return r ? r->text.c_str() : ""; }

void spdcm_report_free(spdcm_report* r) { delete r; }

spdcm_status spdcm_write_table(const char* path, const char* const* columns, size_t ncols,
                               const double* data, size_t nrows) {
    SPDCM_REQUIRE(path);
    SPDCM_REQUIRE(columns);
    if (nrows > 0 && !data) return fail(SPDCM_ERR_ARGUMENT, "data must not be null");
    return guard([&] {
        if (ncols == 0 || nrows == 0) return fail(SPDCM_ERR_ARGUMENT, "table is empty");
        Table t;
        for (size_t i = 0; i < ncols; ++i) t.columns.emplace_back(columns[i] ? columns[i] : "");
        for (size_t r = 0; r < nrows; ++r) t.rows.emplace_back(data + r * ncols, data + (r + 1) * ncols);
        write_csv(t, path);
        return SPDCM_OK;
    });
}

spdcm_status spdcm_write_plot(const char* path, const char* title, const char* x_label, const char* y_label,
                              const spdcm_series* series, size_t count) {
    SPDCM_REQUIRE(path);
    SPDCM_REQUIRE(series);
    return guard([&] {
        if (count == 0) return fail(SPDCM_ERR_ARGUMENT, "no data series");
        Plot p;
        if (title) p.title = title;
        if (x_label) p.x_label = x_label;
        if (y_label) p.y_label = y_label;
        for (size_t i = 0; i < count; ++i) {
            const spdcm_series& s = series[i];
            if (!s.x || !s.y || s.length == 0) return fail(SPDCM_ERR_ARGUMENT, "empty data series");
            p.series.push_back({s.label ? s.label : "", {s.x, s.x + s.length}, {s.y, s.y + s.length}});
        }
        write_svg(p, path);
        return SPDCM_OK;
    });
}

}  // extern "C"
