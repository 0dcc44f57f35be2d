#include "spdcm/spdcm.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(spdcm_status s) {
    if (s != SPDCM_OK) throw Failure(std::string(spdcm_status_string(s)) + ": " + spdcm_last_error());
}

struct ModelDeleter {
    void operator()(spdcm_model* m) const { spdcm_model_free(m); }
};
struct ImageDeleter {
    void operator()(spdcm_image* m) const { spdcm_image_free(m); }
};
struct ReportDeleter {
    void operator()(spdcm_report* m) const { spdcm_report_free(m); }
};
using ModelPtr = std::unique_ptr<spdcm_model, ModelDeleter>;
using ImagePtr = std::unique_ptr<spdcm_image, ImageDeleter>;
using ReportPtr = std::unique_ptr<spdcm_report, ReportDeleter>;

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    bool svg = false;
};

ModelPtr load_model(const Common& c, const char* fallback_preset = nullptr) {
    spdcm_model* m = nullptr;
    if (!c.config.empty())
        check(spdcm_model_from_file(c.config.c_str(), &m));
    else if (!c.preset.empty())
        check(spdcm_model_from_preset(c.preset.c_str(), &m));
    else if (fallback_preset)
        check(spdcm_model_from_preset(fallback_preset, &m));
    else
        throw UsageFailure("one of --config or --preset is required");
    return ModelPtr(m);
}

double get(const spdcm_model* m, const char* name) {
    double v = 0;
    check(spdcm_model_get(m, name, &v));
    return v;
}

void set(spdcm_model* m, const char* name, double v) { check(spdcm_model_set(m, name, v)); }

fs::path output_dir(const Common& c) {
    if (!c.out.empty()) return c.out;
    if (const char* env = std::getenv("SPDCM_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

std::string out_file(const Common& c, const std::string& name) { return (output_dir(c) / name).string(); }

std::string fmt(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string label_for(const std::string& prefix, double v) { return prefix + "=" + fmt(v); }

struct Columns {
    std::vector<std::string> names;
    std::vector<std::vector<double>> data;

    void add(std::string name, std::vector<double> values) {
        names.push_back(std::move(name));
        data.push_back(std::move(values));
    }

    void write(const std::string& path) const {
        const std::size_t rows = data.front().size();
        std::vector<double> flat;
        flat.reserve(rows * data.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (const auto& col : data) flat.push_back(col[r]);
        std::vector<const char*> heads;
        for (const auto& n : names) heads.push_back(n.c_str());
        check(spdcm_write_table(path.c_str(), heads.data(), heads.size(), flat.data(), rows));
        std::cout << "wrote " << path << "\n";
    }
};

// First column is the abscissa; selected columns become series.
void write_plot(const std::string& path, const std::string& title, const std::string& xl,
                const std::string& yl, const Columns& cols, const std::vector<std::size_t>& which) {
    std::vector<spdcm_series> series;
    for (std::size_t i : which)
        series.push_back({cols.names[i].c_str(), cols.data[0].data(), cols.data[i].data(), cols.data[0].size()});
    check(spdcm_write_plot(path.c_str(), title.c_str(), xl.c_str(), yl.c_str(), series.data(), series.size()));
    std::cout << "wrote " << path << "\n";
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> scan_x(const spdcm_model* m, int points) {
    const int n = points > 0 ? points : static_cast<int>(get(m, "nx"));
    return linspace(get(m, "x_min"), get(m, "x_max"), n);
}

std::vector<double> to_mm(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    std::transform(v.begin(), v.end(), r.begin(), [](double x) { return x * 1e3; });
    return r;
}

std::pair<double, double> parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageFailure("range must look like MIN:MAX, got '" + text + "'");
    try {
        std::size_t used = 0;
        std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        double lo = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        double hi = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        if (!(hi > lo)) throw UsageFailure("range '" + text + "' is empty");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw UsageFailure("range must look like MIN:MAX, got '" + text + "'");
    }
}

// ---- subcommands ----

struct OrdersArgs {
    int max_order = 4;
    int points = 0;
    double y = 0;
};

int run_orders(const Common& c, const OrdersArgs& a) {
    if (a.max_order < 0) throw UsageFailure("--max-order must be non-negative");
    ModelPtr m = load_model(c);
    const auto xs = scan_x(m.get(), a.points);
    Columns cols;
    cols.add("x_mm", to_mm(xs));
    Columns summary;
    std::vector<double> order, branch, cx, cy, width;
    for (int n = 0; n <= a.max_order; ++n) {
        std::vector<double> vals;
        for (double x : xs) {
            double v = 0;
            check(spdcm_order_intensity(m.get(), n, x, a.y, &v));
            vals.push_back(v);
        }
        cols.add("order_" + std::to_string(n), std::move(vals));
        spdcm_order_info info{};
        check(spdcm_order_info_get(m.get(), n, &info));
        order.push_back(n);
        branch.push_back(info.idler);
        cx.push_back(info.center_x * 1e3);
        cy.push_back(info.center_y * 1e3);
        width.push_back(info.width);
    }
    summary.add("order", order);
    summary.add("idler", branch);
    summary.add("center_x_mm", cx);
    summary.add("center_y_mm", cy);
    summary.add("waist_m", width);
    cols.write(out_file(c, "orders.csv"));
    summary.write(out_file(c, "orders_summary.csv"));
    if (c.svg) {
        std::vector<std::size_t> which;
        for (std::size_t i = 1; i < cols.names.size(); ++i) which.push_back(i);
        write_plot(out_file(c, "orders.svg"), "Per-order intensity", "x (mm)", "mean photon count", cols, which);
    }
    return 0;
}

struct EfficiencyArgs {
    std::optional<double> beta;
    std::string range = "-16:16";
    int points = 3201;
};

int run_efficiency(const Common& c, const EfficiencyArgs& a) {
    double beta;
    if (a.beta) {
        beta = *a.beta;
    } else if (!c.config.empty() || !c.preset.empty()) {
        beta = get(load_model(c).get(), "beta");
    } else {
        throw UsageFailure("--beta is required without --config or --preset");
    }
    if (a.points < 2) throw UsageFailure("--points must be at least 2");
    auto [lo, hi] = parse_range(a.range);
    const auto as = linspace(lo, hi, a.points);
    std::vector<double> f;
    std::size_t best = 0;
    for (std::size_t i = 0; i < as.size(); ++i) {
        double v = 0;
        check(spdcm_efficiency(as[i], beta, &v));
        f.push_back(v);
        if (v > f[best]) best = i;
    }
    Columns cols;
    cols.add("a", as);
    cols.add("f", f);
    cols.write(out_file(c, "efficiency.csv"));
    std::cout << "beta " << fmt(beta) << "  argmax a " << fmt(as[best]) << "  f " << fmt(f[best]) << "\n";
    if (c.svg)
        write_plot(out_file(c, "efficiency.svg"), label_for("Efficiency, beta", beta), "a", "f(a)", cols, {1});
    return 0;
}

struct BackgroundArgs {
    std::vector<double> angles_deg;
    int points = 0;
    std::optional<double> r_max_mm;
};

int run_background(const Common& c, const BackgroundArgs& a) {
    ModelPtr m = load_model(c);
    const double r_max =
        a.r_max_mm ? *a.r_max_mm * 1e-3
                   : std::max(std::abs(get(m.get(), "x_min")), std::abs(get(m.get(), "x_max")));
    if (!(r_max > 0)) throw UsageFailure("radial range is empty");
    const int n = a.points > 0 ? a.points : static_cast<int>(get(m.get(), "nx"));
    const auto rs = linspace(0, r_max, n);
    std::vector<double> angles = a.angles_deg;
    if (angles.empty()) angles.push_back(get(m.get(), "pdc_angle") * 180 / M_PI);
    Columns cols;
    cols.add("r_mm", to_mm(rs));
    for (double deg : angles) {
        set(m.get(), "pdc_angle", deg * M_PI / 180);
        std::vector<double> vals;
        for (double r : rs) {
            spdcm_components comp{};
            check(spdcm_intensity(m.get(), r, 0, &comp));
            vals.push_back(comp.background);
        }
        cols.add(label_for("theta_deg", deg), std::move(vals));
        std::cout << "theta " << fmt(deg) << " deg  r0 " << fmt(get(m.get(), "r0") * 1e3) << " mm  R "
                  << fmt(get(m.get(), "R") * 1e3) << " mm  peak limit " << fmt(get(m.get(), "background_peak"))
                  << "\n";
    }
    cols.write(out_file(c, "background.csv"));
    if (c.svg) {
        std::vector<std::size_t> which;
        for (std::size_t i = 1; i < cols.names.size(); ++i) which.push_back(i);
        write_plot(out_file(c, "background.svg"), "Spontaneous background", "r (mm)", "mean photon count", cols,
                   which);
    }
    return 0;
}

struct CombinedArgs {
    std::vector<double> G{0.8, 1.0, 1.2};
    int points = 0;
    double y = 0;
};

int run_combined(const Common& c, const CombinedArgs& a) {
    ModelPtr m = load_model(c);
    const auto xs = scan_x(m.get(), a.points);
    Columns cols;
    cols.add("x_mm", to_mm(xs));
    std::vector<double> bg;
    std::vector<std::size_t> totals;
    for (double G : a.G) {
        set(m.get(), "G", G);
        std::vector<double> sig, idl, tot;
        bg.clear();
        for (double x : xs) {
            spdcm_components comp{};
            check(spdcm_intensity(m.get(), x, a.y, &comp));
            sig.push_back(comp.signal);
            idl.push_back(comp.idler);
            tot.push_back(comp.total);
            bg.push_back(comp.background);
        }
        auto peak = std::max_element(idl.begin(), idl.end());
        std::cout << "G " << fmt(G) << "  idler peak " << fmt(*peak) << " at x "
                  << fmt(xs[peak - idl.begin()] * 1e3) << " mm\n";
        cols.add(label_for("signal_G", G), std::move(sig));
        cols.add(label_for("idler_G", G), std::move(idl));
        cols.add(label_for("total_G", G), std::move(tot));
        totals.push_back(cols.names.size() - 1);
    }
    if (!bg.empty()) {
        auto peak = std::max_element(bg.begin(), bg.end());
        std::cout << "background peak " << fmt(*peak) << " at x " << fmt(xs[peak - bg.begin()] * 1e3) << " mm\n";
        cols.add("background", bg);
    }
    cols.write(out_file(c, "combined.csv"));
    if (c.svg)
        write_plot(out_file(c, "combined.svg"), "Combined output", "x (mm)", "mean photon count", cols, totals);
    return 0;
}

struct ImageArgs {
    std::string noise = "poisson";
    std::optional<unsigned long long> seed;
    std::string name = "image.csv";
};

int run_image(const Common& c, const ImageArgs& a) {
    ModelPtr m = load_model(c);
    const unsigned long long seed = a.seed ? *a.seed : static_cast<unsigned long long>(get(m.get(), "noise_seed"));
    spdcm_image* raw = nullptr;
    check(spdcm_image_synthesize(m.get(), a.noise == "poisson", seed, &raw));
    ImagePtr img(raw);
    const std::string path = out_file(c, a.name);
    check(spdcm_image_write(img.get(), path.c_str()));
    spdcm_image_info info{};
    check(spdcm_image_info_get(img.get(), &info));
    std::cout << "wrote " << path << " (" << info.nx << "x" << info.ny << ", total " << fmt(info.total) << ")\n";
    if (c.svg) {
        std::vector<double> vals(static_cast<std::size_t>(info.nx) * info.ny);
        check(spdcm_image_values(img.get(), vals.data(), vals.size()));
        const int row = info.ny / 2;
        Columns cols;
        cols.add("x_mm", to_mm(linspace(info.x_min, info.x_max, info.nx)));
        cols.add("counts", std::vector<double>(vals.begin() + std::size_t(row) * info.nx,
                                               vals.begin() + std::size_t(row + 1) * info.nx));
        write_plot(out_file(c, "image_profile.svg"), "Central row", "x (mm)", "counts", cols, {1});
    }
    return 0;
}

struct FitArgs {
    std::string image;
    std::string background_image;
    std::string free = "photons,squeezing";
};

ImagePtr read_image(const std::string& path) {
    spdcm_image* raw = nullptr;
    check(spdcm_image_read(path.c_str(), &raw));
    return ImagePtr(raw);
}

int run_fit(const Common& c, const FitArgs& a) {
    ModelPtr m = load_model(c);
    ImagePtr img = read_image(a.image);
    spdcm_fit_result r{};
    if (a.background_image.empty()) {
        check(spdcm_fit(m.get(), img.get(), a.free.c_str(), nullptr, &r));
    } else {
        ImagePtr bg = read_image(a.background_image);
        check(spdcm_fit_separate(m.get(), bg.get(), img.get(), a.free.c_str(), &r));
    }
    static const char* status[] = {"converged", "max_iterations", "not_identifiable"};
    const std::string path = out_file(c, "fit.csv");
    fs::create_directories(output_dir(c));
    std::ofstream os(path);
    if (!os) throw Failure(path + ": cannot open for writing");
    os << "parameter,value,std_error\n";
    for (int i = 0; i < r.count; ++i) {
        os << r.names[i] << ',' << fmt(r.values[i]) << ',' << fmt(r.std_errors[i]) << '\n';
        std::cout << r.names[i] << " = " << fmt(r.values[i]) << " +/- " << fmt(r.std_errors[i]) << "\n";
    }
    if (!os) throw Failure(path + ": write failed");
    std::cout << "status " << status[std::clamp(r.status, 0, 2)] << ", " << r.iterations << " iterations, residual "
              << fmt(r.residual_norm) << "\nwrote " << path << "\n";
    return r.status == 0 ? 0 : 1;
}

struct ValidateArgs {
    bool full = false;
};

int run_validate(const Common& c, const ValidateArgs& a) {
    ModelPtr m = load_model(c, "fig5");
    spdcm_report* raw = nullptr;
    check(spdcm_validate(m.get(), a.full ? 1 : 0, &raw));
    ReportPtr rep(raw);
    std::cout << spdcm_report_text(rep.get());
    const std::string path = out_file(c, "validate.csv");
    fs::create_directories(output_dir(c));
    std::ofstream os(path);
    if (!os) throw Failure(path + ": cannot open for writing");
    os << "check,value,tolerance,result,note\n";
    for (std::size_t i = 0; i < spdcm_report_count(rep.get()); ++i) {
        spdcm_check k{};
        check(spdcm_report_check(rep.get(), i, &k));
        std::string note = k.note;
        std::replace(note.begin(), note.end(), ',', ';');
        os << k.name << ',' << fmt(k.value) << ',' << fmt(k.tolerance) << ','
           << (k.informational ? "info" : k.pass ? "pass" : "fail") << ',' << note << '\n';
    }
    if (!os) throw Failure(path + ": write failed");
    std::cout << "wrote " << path << "\n";
    return spdcm_report_passed(rep.get()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stimulated and spontaneous down-conversion intensity model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", spdcm_version());

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config, "Experiment config file")->check(CLI::ExistingFile);
        sub->add_option("-p,--preset", common.preset, "Built-in config: fig2, fig4 or fig5");
        sub->add_option("-o,--out", common.out, "Output directory (default $SPDCM_OUTPUT_DIR or .)");
        sub->add_flag("--svg", common.svg, "Also write SVG line plots");
    };

    OrdersArgs oa;
    auto* orders = app.add_subcommand("orders", "Per-order amplitude curves along x");
    add_common(orders);
    orders->add_option("--max-order", oa.max_order, "Highest order m");
    orders->add_option("--points", oa.points, "Scan points (default run.nx)");
    orders->add_option("--y", oa.y, "Scan line y [m]");

    EfficiencyArgs ea;
    auto* eff = app.add_subcommand("efficiency", "Efficiency f(a) for a given beta");
    add_common(eff);
    eff->add_option("--beta", ea.beta, "Beta (default from config)");
    eff->add_option("--a-range", ea.range, "Range MIN:MAX")->allow_extra_args(false);
    eff->add_option("--points", ea.points, "Number of samples");

    BackgroundArgs ba;
    auto* bgc = app.add_subcommand("background", "Radial background curves");
    add_common(bgc);
    bgc->add_option("--angles", ba.angles_deg, "PDC angles in degrees (comma list)")->delimiter(',');
    bgc->add_option("--points", ba.points, "Radial samples (default run.nx)");
    bgc->add_option("--r-max", ba.r_max_mm, "Largest radius [mm]");

    CombinedArgs ca;
    auto* comb = app.add_subcommand("combined", "Combined output curves for several G");
    add_common(comb);
    comb->add_option("--G", ca.G, "Idler peak fractions (comma list)")->delimiter(',');
    comb->add_option("--points", ca.points, "Scan points (default run.nx)");
    comb->add_option("--y", ca.y, "Scan line y [m]");

    ImageArgs ia;
    auto* image = app.add_subcommand("image", "Synthesize a 2-D detector image");
    add_common(image);
    image->add_option("--noise", ia.noise, "none or poisson")->check(CLI::IsMember({"none", "poisson"}));
    image->add_option("--seed", ia.seed, "Noise seed (default run.noise_seed)");
    image->add_option("--name", ia.name, "Output file name");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit model parameters to an image");
    add_common(fit);
    fit->add_option("--image", fa.image, "Image CSV (seed on)")->required()->check(CLI::ExistingFile);
    fit->add_option("--background-image", fa.background_image, "Seed-blocked image CSV for separate fitting")
        ->check(CLI::ExistingFile);
    fit->add_option("--free", fa.free, "Free parameters: photons, squeezing, G, seed_waist, pdc_angle");

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "Run the oracle validation suite");
    add_common(val);
    val->add_flag("--full", va.full, "Use 17x17x9 grids throughout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (!common.config.empty() && !common.preset.empty())
            throw UsageFailure("--config and --preset are mutually exclusive");
        if (*orders) return run_orders(common, oa);
        if (*eff) return run_efficiency(common, ea);
        if (*bgc) return run_background(common, ba);
        if (*comb) return run_combined(common, ca);
        if (*image) return run_image(common, ia);
        if (*fit) return run_fit(common, fa);
        if (*val) return run_validate(common, va);
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
