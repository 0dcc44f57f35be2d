#include "spdcm/config.hpp"

#include "spdcm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace spdcm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

Document parse_document(const std::string& text) {
    Document doc;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // strip comments that are not inside a quoted string
        bool in_str = false;
        std::string line;
        for (char c : raw) {
            if (c == '"') in_str = !in_str;
            if (c == '#' && !in_str) break;
            line += c;
        }
        if (in_str) throw ParseError("unterminated string", line_no);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("malformed section header", line_no);
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) throw ParseError("empty section name", line_no);
            if (doc.count(current)) throw ParseError("duplicate section [" + current + "]", line_no);
            doc[current];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        if (current.empty()) throw ParseError("key outside of any section", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (val.empty()) throw ParseError("missing value for '" + key + "'", line_no);
        RawValue rv;
        rv.line = line_no;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                throw ParseError("malformed string value for '" + key + "'", line_no);
            rv.text = val.substr(1, val.size() - 2);
            rv.quoted = true;
        } else {
            rv.text = val;
        }
        if (doc[current].count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        doc[current][key] = rv;
    }
    return doc;
}

struct UnitTable {
    const char* kind;
    std::vector<std::pair<std::string, double>> units;
};

const std::vector<UnitTable>& unit_tables() {
    static const std::vector<UnitTable> tables = {
        {"length", {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"μm", 1e-6},
                    {"µm", 1e-6}, {"nm", 1e-9}}},
        {"area", {{"m^2", 1.0}, {"cm^2", 1e-4}, {"mm^2", 1e-6}, {"um^2", 1e-12},
                  {"μm^2", 1e-12}, {"nm^2", 1e-18}, {"pm^2", 1e-24}}},
        {"frequency", {{"rad/s", 1.0}, {"rad/ps", 1e12}, {"rad/fs", 1e15},
                       {"Hz", 2 * kPi}, {"kHz", 2 * kPi * 1e3}, {"MHz", 2 * kPi * 1e6},
                       {"GHz", 2 * kPi * 1e9}, {"THz", 2 * kPi * 1e12}}},
        {"angle", {{"rad", 1.0}, {"mrad", 1e-3}, {"deg", kPi / 180.0}}},
        {"inverse_length", {{"1/m", 1.0}, {"1/cm", 1e2}, {"1/mm", 1e3}, {"1/um", 1e6},
                            {"1/μm", 1e6}}},
    };
    return tables;
}

double parse_number(const std::string& s, std::size_t& consumed) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc()) throw DomainError("not a number: '" + s + "'");
    consumed = static_cast<std::size_t>(ptr - s.data());
    return v;
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& kind) {
    std::string s = trim(text);
    std::size_t used = 0;
    double v = parse_number(s, used);
    std::string unit = trim(s.substr(used));
    if (unit.empty()) throw DomainError("missing unit suffix in '" + s + "'");
    for (const auto& t : unit_tables()) {
        if (kind != t.kind) continue;
        for (const auto& [name, scale] : t.units)
            if (name == unit) return v * scale;
        throw DomainError("unknown " + kind + " unit '" + unit + "'");
    }
    throw DomainError("unknown quantity kind '" + kind + "'");
}

Dispersion::Dispersion(std::vector<std::pair<double, double>> table) : table_(std::move(table)) {
    if (table_.empty()) throw ValidationError("crystal.index_table", "empty table");
    std::sort(table_.begin(), table_.end());
    n_ = table_.front().second;
}

double Dispersion::index(double omega) const {
    if (table_.empty()) return n_;
    if (omega <= table_.front().first) return table_.front().second;
    if (omega >= table_.back().first) return table_.back().second;
    auto it = std::upper_bound(table_.begin(), table_.end(), omega,
                               [](double w, const auto& p) { return w < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double t = (omega - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

namespace {

enum class Kind { length, area, frequency, angle, inverse_length, number, integer, word, text };

struct KeySpec {
    const char* name;
    Kind kind;
};

const std::map<std::string, std::vector<KeySpec>>& schema() {
    static const std::map<std::string, std::vector<KeySpec>> s = {
        {"pump",
         {{"wavelength", Kind::length}, {"degenerate_wavelength", Kind::length},
          {"frequency", Kind::frequency}, {"bandwidth", Kind::frequency}, {"waist", Kind::length},
          {"amplitude", Kind::number}, {"squeezing", Kind::number}, {"phase", Kind::angle}}},
        {"seed",
         {{"photons", Kind::number}, {"amplitude", Kind::number}, {"phase", Kind::angle},
          {"waist", Kind::length}, {"bandwidth", Kind::frequency}, {"frequency", Kind::frequency},
          {"wavelength", Kind::length}, {"offset_x", Kind::length}, {"offset_y", Kind::length},
          {"shift_x", Kind::inverse_length}, {"shift_y", Kind::inverse_length},
          {"G", Kind::number}}},
        {"crystal",
         {{"length", Kind::length}, {"cross_section", Kind::area}, {"index", Kind::number},
          {"index_table", Kind::text}, {"angle", Kind::angle}}},
        {"detector",
         {{"focal_length", Kind::length}, {"aperture", Kind::length},
          {"bandwidth", Kind::frequency}}},
        {"run",
         {{"combination", Kind::word}, {"idler_model", Kind::word}, {"orders", Kind::integer},
          {"noise_seed", Kind::integer}, {"exposure", Kind::number}, {"x_min", Kind::length},
          {"x_max", Kind::length}, {"y_min", Kind::length}, {"y_max", Kind::length},
          {"nx", Kind::integer}, {"ny", Kind::integer}}},
    };
    return s;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::length: return "length";
        case Kind::area: return "area";
        case Kind::frequency: return "frequency";
        case Kind::angle: return "angle";
        case Kind::inverse_length: return "inverse_length";
        default: return "";
    }
}

class Reader {
public:
    explicit Reader(Document doc) : doc_(std::move(doc)) {
        for (const auto& [sec, keys] : doc_) {
            auto it = schema().find(sec);
            if (it == schema().end()) {
                int line = keys.empty() ? 0 : keys.begin()->second.line;
                throw ParseError("unknown section [" + sec + "]", line);
            }
            for (const auto& [key, rv] : keys) {
                auto spec = std::find_if(it->second.begin(), it->second.end(),
                                         [&](const KeySpec& k) { return key == k.name; });
                if (spec == it->second.end())
                    throw ParseError("unknown key '" + key + "' in [" + sec + "]", rv.line);
                check_format(sec, key, rv, spec->kind);
            }
        }
    }

    bool has(const std::string& sec, const std::string& key) const {
        auto it = doc_.find(sec);
        return it != doc_.end() && it->second.count(key);
    }

    std::optional<double> get(const std::string& sec, const std::string& key) const {
        if (!has(sec, key)) return std::nullopt;
        const RawValue& rv = doc_.at(sec).at(key);
        Kind k = kind_of(sec, key);
        try {
            if (k == Kind::number || k == Kind::integer) {
                std::size_t used = 0;
                double v = parse_number(trim(rv.text), used);
                return v;
            }
            return parse_quantity(rv.text, kind_name(k));
        } catch (const DomainError& e) {
            throw ParseError(sec + "." + key + ": " + e.what(), rv.line);
        }
    }

    std::optional<std::string> text(const std::string& sec, const std::string& key) const {
        if (!has(sec, key)) return std::nullopt;
        return doc_.at(sec).at(key).text;
    }

    int line(const std::string& sec, const std::string& key) const {
        return has(sec, key) ? doc_.at(sec).at(key).line : 0;
    }

private:
    static Kind kind_of(const std::string& sec, const std::string& key) {
        for (const auto& k : schema().at(sec))
            if (key == k.name) return k.kind;
        return Kind::text;
    }

    static void check_format(const std::string& sec, const std::string& key, const RawValue& rv,
                             Kind kind) {
        const std::string where = sec + "." + key;
        std::string t = trim(rv.text);
        switch (kind) {
            case Kind::number:
            case Kind::integer: {
                std::size_t used = 0;
                try {
                    parse_number(t, used);
                } catch (const DomainError&) {
                    throw ParseError(where + ": expected a number", rv.line);
                }
                if (used != t.size())
                    throw ParseError(where + ": trailing characters after number", rv.line);
                if (kind == Kind::integer && t.find_first_of(".eE") != std::string::npos)
                    throw ParseError(where + ": expected an integer", rv.line);
                break;
            }
            case Kind::word:
            case Kind::text:
                break;
            default: {
                std::size_t used = 0;
                try {
                    parse_number(t, used);
                } catch (const DomainError&) {
                    throw ParseError(where + ": expected '<number> <unit>'", rv.line);
                }
                if (trim(t.substr(used)).empty())
                    throw ParseError(where + ": missing unit suffix", rv.line);
                try {
                    parse_quantity(t, kind_name(kind));
                } catch (const DomainError& e) {
                    throw ParseError(where + ": " + e.what(), rv.line);
                }
            }
        }
    }

    Document doc_;
};

std::vector<std::pair<double, double>> parse_index_table(const std::string& s, int line) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.rfind(':');
        if (colon == std::string::npos)
            throw ParseError("crystal.index_table: expected '<wavelength>:<index>' entries", line);
        try {
            double lambda = parse_quantity(item.substr(0, colon), "length");
            std::size_t used = 0;
            std::string ns = trim(item.substr(colon + 1));
            double n = parse_number(ns, used);
            out.emplace_back(2 * kPi * kSpeedOfLight / lambda, n);
        } catch (const DomainError& e) {
            throw ParseError(std::string("crystal.index_table: ") + e.what(), line);
        }
    }
    return out;
}

void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ValidationError(field, msg);
}

}  // namespace

double squeezing_from_amplitude(const ExperimentConfig& cfg, double zeta0) {
    double sigma = cfg.crystal.cross_section.value_or(0.0);
    const double c2 = kSpeedOfLight * kSpeedOfLight;
    return cfg.crystal.length * zeta0 * sigma * std::pow(cfg.pump.center_frequency, 1.5) *
           std::sqrt(cfg.pump.bandwidth) /
           (std::sqrt(2.0) * std::pow(kPi, 0.75) * c2 * cfg.pump.waist);
}

double amplitude_from_squeezing(const ExperimentConfig& cfg, double Xi) {
    double unit = squeezing_from_amplitude(cfg, 1.0);
    if (unit <= 0.0) throw ValidationError("crystal.cross_section", "needed to convert Ξ to |ζ₀|");
    return Xi / unit;
}

ExperimentConfig load_config(const std::string& text) {
    Reader r(parse_document(text));
    ExperimentConfig cfg;

    // pump
    int given = r.has("pump", "wavelength") + r.has("pump", "degenerate_wavelength") +
                r.has("pump", "frequency");
    if (given != 1)
        throw ValidationError("pump.wavelength",
                              "give exactly one of wavelength, degenerate_wavelength, frequency");
    if (auto v = r.get("pump", "frequency")) cfg.pump.center_frequency = *v;
    if (auto v = r.get("pump", "wavelength")) {
        require(*v > 0, "pump.wavelength", "must be positive");
        cfg.pump.center_frequency = 2 * kPi * kSpeedOfLight / *v;
    }
    if (auto v = r.get("pump", "degenerate_wavelength")) {
        require(*v > 0, "pump.degenerate_wavelength", "must be positive");
        cfg.pump.center_frequency = 2.0 * 2 * kPi * kSpeedOfLight / *v;
    }
    require(r.has("pump", "bandwidth"), "pump.bandwidth", "required");
    cfg.pump.bandwidth = *r.get("pump", "bandwidth");
    require(r.has("pump", "waist"), "pump.waist", "required");
    cfg.pump.waist = *r.get("pump", "waist");
    cfg.pump.amplitude = r.get("pump", "amplitude");
    cfg.pump.squeezing = r.get("pump", "squeezing");
    cfg.pump.phase = r.get("pump", "phase").value_or(0.0);

    // seed
    require(!(r.has("seed", "photons") && r.has("seed", "amplitude")), "seed.photons",
            "give either photons or amplitude, not both");
    if (auto v = r.get("seed", "photons")) {
        require(*v >= 0, "seed.photons", "must be non-negative");
        cfg.seed.amplitude = std::sqrt(*v);
    } else if (auto a = r.get("seed", "amplitude")) {
        cfg.seed.amplitude = *a;
    } else {
        throw ValidationError("seed.photons", "required (or seed.amplitude)");
    }
    cfg.seed.phase = r.get("seed", "phase").value_or(0.0);
    require(r.has("seed", "waist"), "seed.waist", "required");
    cfg.seed.waist = *r.get("seed", "waist");
    require(r.has("seed", "bandwidth"), "seed.bandwidth", "required");
    cfg.seed.bandwidth = *r.get("seed", "bandwidth");
    require(!(r.has("seed", "frequency") && r.has("seed", "wavelength")), "seed.frequency",
            "give either frequency or wavelength, not both");
    if (auto v = r.get("seed", "frequency")) cfg.seed.center_frequency = *v;
    if (auto v = r.get("seed", "wavelength")) {
        require(*v > 0, "seed.wavelength", "must be positive");
        cfg.seed.center_frequency = 2 * kPi * kSpeedOfLight / *v;
    }
    bool by_offset = r.has("seed", "offset_x") || r.has("seed", "offset_y");
    bool by_shift = r.has("seed", "shift_x") || r.has("seed", "shift_y");
    bool by_g = r.has("seed", "G");
    require(by_offset + by_shift + by_g <= 1, "seed.G",
            "give only one of offset_*, shift_* or G to place the seed");
    if (by_offset) {
        cfg.seed.placement = SeedConfig::Placement::offset;
        cfg.seed.offset = Vec2(r.get("seed", "offset_x").value_or(0.0),
                               r.get("seed", "offset_y").value_or(0.0));
    } else if (by_g) {
        cfg.seed.placement = SeedConfig::Placement::peak_fraction;
        cfg.seed.peak_fraction = *r.get("seed", "G");
    } else {
        cfg.seed.placement = SeedConfig::Placement::shift;
        cfg.seed.shift = Vec2(r.get("seed", "shift_x").value_or(0.0),
                              r.get("seed", "shift_y").value_or(0.0));
    }

    // crystal
    require(r.has("crystal", "length"), "crystal.length", "required");
    cfg.crystal.length = *r.get("crystal", "length");
    cfg.crystal.cross_section = r.get("crystal", "cross_section");
    require(!(r.has("crystal", "index") && r.has("crystal", "index_table")), "crystal.index",
            "give either index or index_table, not both");
    if (auto t = r.text("crystal", "index_table"))
        cfg.crystal.dispersion = Dispersion(parse_index_table(*t, r.line("crystal", "index_table")));
    else
        cfg.crystal.dispersion = Dispersion(r.get("crystal", "index").value_or(1.0));
    cfg.crystal.pdc_angle = r.get("crystal", "angle").value_or(0.0);

    // detector
    require(r.has("detector", "focal_length"), "detector.focal_length", "required");
    require(r.has("detector", "aperture"), "detector.aperture", "required");
    require(r.has("detector", "bandwidth"), "detector.bandwidth", "required");
    cfg.detector.focal_length = *r.get("detector", "focal_length");
    cfg.detector.aperture = *r.get("detector", "aperture");
    cfg.detector.bandwidth = *r.get("detector", "bandwidth");

    // run
    if (auto w = r.text("run", "combination")) {
        if (*w == "coherent")
            cfg.run.combination = Combination::coherent;
        else if (*w == "separate")
            cfg.run.combination = Combination::separate;
        else
            throw ParseError("run.combination: expected coherent or separate",
                             r.line("run", "combination"));
    }
    if (auto w = r.text("run", "idler_model")) {
        if (*w == "tca")
            cfg.run.idler_model = IdlerModel::tca;
        else if (*w == "series")
            cfg.run.idler_model = IdlerModel::series;
        else
            throw ParseError("run.idler_model: expected tca or series",
                             r.line("run", "idler_model"));
    }
    if (auto v = r.get("run", "orders")) cfg.run.orders = static_cast<int>(*v);
    if (auto v = r.get("run", "noise_seed")) {
        require(*v >= 0, "run.noise_seed", "must be non-negative");
        cfg.run.noise_seed = static_cast<unsigned long long>(*v);
    }
    if (auto v = r.get("run", "exposure")) cfg.run.exposure = *v;
    if (auto v = r.get("run", "x_min")) cfg.run.x_min = *v;
    if (auto v = r.get("run", "x_max")) cfg.run.x_max = *v;
    if (auto v = r.get("run", "y_min")) cfg.run.y_min = *v;
    if (auto v = r.get("run", "y_max")) cfg.run.y_max = *v;
    if (auto v = r.get("run", "nx")) cfg.run.nx = static_cast<int>(*v);
    if (auto v = r.get("run", "ny")) cfg.run.ny = static_cast<int>(*v);

    validate(cfg);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0; };
    require(finite_pos(cfg.pump.center_frequency), "pump.frequency", "must be positive");
    require(finite_pos(cfg.pump.bandwidth), "pump.bandwidth", "must be positive");
    require(finite_pos(cfg.pump.waist), "pump.waist", "must be positive");
    require(cfg.pump.amplitude || cfg.pump.squeezing, "pump.squeezing",
            "give pump.squeezing or pump.amplitude");
    if (cfg.pump.amplitude)
        require(std::isfinite(*cfg.pump.amplitude) && *cfg.pump.amplitude >= 0, "pump.amplitude",
                "must be non-negative");
    if (cfg.pump.squeezing)
        require(std::isfinite(*cfg.pump.squeezing) && *cfg.pump.squeezing >= 0,
                "pump.squeezing", "must be non-negative");
    require(std::isfinite(cfg.seed.amplitude) && cfg.seed.amplitude >= 0, "seed.amplitude",
            "must be non-negative");
    require(finite_pos(cfg.seed.waist), "seed.waist", "must be positive");
    require(finite_pos(cfg.seed.bandwidth), "seed.bandwidth", "must be positive");
    if (cfg.seed.center_frequency) {
        double wd = 0.5 * cfg.pump.center_frequency;
        require(std::abs(*cfg.seed.center_frequency - wd) <= 1e-9 * wd, "seed.frequency",
                "must equal the degenerate frequency ω_p/2");
    }
    require(finite_pos(cfg.crystal.length), "crystal.length", "must be positive");
    if (cfg.crystal.cross_section)
        require(finite_pos(*cfg.crystal.cross_section), "crystal.cross_section",
                "must be positive");
    if (cfg.crystal.dispersion.tabulated()) {
        for (const auto& [w, n] : cfg.crystal.dispersion.table())
            require(std::isfinite(n) && n >= 1.0, "crystal.index_table", "indices must be >= 1");
    } else {
        double n = cfg.crystal.dispersion.constant_index();
        require(std::isfinite(n) && n >= 1.0, "crystal.index", "must be >= 1");
    }
    require(std::isfinite(cfg.crystal.pdc_angle) && cfg.crystal.pdc_angle >= 0 &&
                cfg.crystal.pdc_angle < kPi / 2,
            "crystal.angle", "must lie in [0, 90) deg");
    require(finite_pos(cfg.detector.focal_length), "detector.focal_length", "must be positive");
    require(finite_pos(cfg.detector.aperture), "detector.aperture", "must be positive");
    require(finite_pos(cfg.detector.bandwidth), "detector.bandwidth", "must be positive");
    require(cfg.run.orders >= 0 && cfg.run.orders <= 64, "run.orders", "must lie in [0, 64]");
    require(finite_pos(cfg.run.exposure), "run.exposure", "must be positive");
    require(cfg.run.x_max > cfg.run.x_min, "run.x_max", "must exceed run.x_min");
    require(cfg.run.y_max >= cfg.run.y_min, "run.y_max", "must not be below run.y_min");
    require(cfg.run.nx >= 1 && cfg.run.ny >= 1, "run.nx", "pixel counts must be positive");

    if (cfg.pump.amplitude && cfg.pump.squeezing) {
        require(cfg.crystal.cross_section.has_value(), "crystal.cross_section",
                "needed to check pump.amplitude against pump.squeezing");
        double xi = squeezing_from_amplitude(cfg, *cfg.pump.amplitude);
        double tgt = *cfg.pump.squeezing;
        require(std::abs(xi - tgt) <= 1e-6 * std::max(std::abs(tgt), 1e-300), "pump.squeezing",
                "inconsistent with pump.amplitude (Ξ from amplitude = " + std::to_string(xi) +
                    ")");
    }
    if (cfg.pump.amplitude && !cfg.pump.squeezing)
        require(cfg.crystal.cross_section.has_value(), "crystal.cross_section",
                "needed to compute Ξ from pump.amplitude");
    if (cfg.seed.placement == SeedConfig::Placement::peak_fraction) {
        require(std::isfinite(cfg.seed.peak_fraction), "seed.G", "must be finite");
        double r0 = cfg.detector.focal_length * std::sin(cfg.crystal.pdc_angle);
        double kd = 0.5 * cfg.pump.center_frequency / kSpeedOfLight;
        double R = cfg.detector.focal_length / (kd * cfg.pump.waist);
        require(r0 * r0 >= 0.5 * R * R, "seed.G",
                "no idler peak location exists (r0^2 < R^2/2); place the seed by offset or shift");
    }
}

DerivedQuantities derive_quantities(const ExperimentConfig& cfg) {
    validate(cfg);
    DerivedQuantities d{};
    const double c = kSpeedOfLight;
    d.omega_p = cfg.pump.center_frequency;
    d.omega_d = 0.5 * d.omega_p;
    d.k_d = d.omega_d / c;
    double n_d = cfg.crystal.dispersion.index(d.omega_d);
    double th = cfg.crystal.pdc_angle;
    d.k_med = d.omega_d * n_d / c;
    d.kz_d = d.k_med * std::cos(th);
    d.chi_d = d.k_med * std::sin(th) * std::sin(th) / std::cos(th);
    if (cfg.pump.squeezing) {
        d.Xi = *cfg.pump.squeezing;
        if (cfg.pump.amplitude)
            d.zeta0 = *cfg.pump.amplitude;
        else if (cfg.crystal.cross_section)
            d.zeta0 = amplitude_from_squeezing(cfg, d.Xi);
    } else {
        d.zeta0 = *cfg.pump.amplitude;
        d.Xi = squeezing_from_amplitude(cfg, *d.zeta0);
    }
    d.phase = cfg.pump.phase;
    const double wp = cfg.pump.waist, dp = cfg.pump.bandwidth, L = cfg.crystal.length;
    d.M0 = std::pow(kPi, 1.25) * wp * wp / std::sqrt(dp);
    if (d.zeta0 && cfg.crystal.cross_section)
        d.M1 = 4 * std::sqrt(2.0) * L * *d.zeta0 * *cfg.crystal.cross_section *
               std::sqrt(d.omega_p * dp) / (std::pow(kPi, 0.75) * c * c * wp);
    else
        d.M1 = 8 * d.Xi / d.omega_p;
    if (d.zeta0 && cfg.crystal.cross_section)
        d.Omega0 = 4 * std::sqrt(2 * kPi * d.omega_p) * *d.zeta0 * *cfg.crystal.cross_section *
                   wp / (c * c);
    else
        d.Omega0 = d.M0 * d.M1 / L;
    d.eta = dp * dp / (cfg.seed.bandwidth * cfg.seed.bandwidth);
    const double f = cfg.detector.focal_length, wD = cfg.detector.aperture;
    d.area = 2 * kPi * f * f / (d.k_d * d.k_d * wD * wD);
    d.K_D = std::pow(2 * kPi, 3) * std::sqrt(kPi) * d.k_d * d.k_d * d.area * cfg.detector.bandwidth /
            (f * f);
    d.w0 = std::sqrt(wp * wp + cfg.seed.waist * cfg.seed.waist);
    d.beta = L / (d.kz_d * d.w0 * d.w0);
    d.beta0 = L / (wp * wp * d.k_d * std::cos(th));
    d.r0 = f * std::sin(th);
    d.R = f / (d.k_d * wp);
    double xp2 = d.r0 * d.r0 - 0.5 * d.R * d.R;
    if (xp2 >= 0) d.X_peak = std::sqrt(xp2);
    switch (cfg.seed.placement) {
        case SeedConfig::Placement::shift:
            d.K_xi = cfg.seed.shift;
            break;
        case SeedConfig::Placement::offset:
            d.K_xi = cfg.seed.offset * (d.k_d / f);
            break;
        case SeedConfig::Placement::peak_fraction:
            d.K_xi = Vec2(cfg.seed.peak_fraction * d.X_peak.value_or(0.0) * d.k_d / f, 0.0);
            break;
    }
    d.X_xi = d.K_xi * (f / d.k_d);
    return d;
}

}  // namespace spdcm
