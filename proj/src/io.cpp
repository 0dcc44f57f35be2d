#include "spdcm/io.hpp"

#include "spdcm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace spdcm {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

double parse_number(const std::string& s, const std::string& origin, int line) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e)
        throw IoError(origin, "line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        auto b = f.find_first_not_of(' ');
        auto e = f.find_last_not_of(' ');
        f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << text;
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

std::string to_csv(const Table& t) {
    if (t.columns.empty()) throw DomainError("to_csv: table has no columns");
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw DomainError("to_csv: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

Table parse_csv(const std::string& text, const std::string& origin) {
    Table t;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (t.columns.empty()) {
            t.columns = fields;
            continue;
        }
        if (fields.size() != t.columns.size())
            throw IoError(origin, "line " + std::to_string(n) + ": expected " +
                                      std::to_string(t.columns.size()) + " fields");
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_number(f, origin, n));
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw IoError(origin, "missing header row");
    return t;
}

void write_csv(const Table& t, const std::string& path) { write_text(path, to_csv(t)); }

Table read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

Table image_table(const IntensityImage& img) {
    Table t{{"x_mm", "y_mm", "intensity"}, {}};
    t.rows.reserve(img.values.size());
    for (int j = 0; j < img.grid.ny; ++j)
        for (int i = 0; i < img.grid.nx; ++i)
            t.rows.push_back({img.grid.x(i) * 1e3, img.grid.y(j) * 1e3, img.at(i, j)});
    return t;
}

IntensityImage image_from_table(const Table& t, const std::string& origin) {
    if (t.columns != std::vector<std::string>{"x_mm", "y_mm", "intensity"})
        throw IoError(origin, "expected header x_mm,y_mm,intensity");
    if (t.rows.empty()) throw IoError(origin, "image has no pixels");
    std::vector<double> xs, ys;
    for (const auto& r : t.rows) {
        xs.push_back(r[0]);
        ys.push_back(r[1]);
    }
    auto uniq = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    xs = uniq(xs);
    ys = uniq(ys);
    IntensityImage img;
    img.grid = {xs.front() * 1e-3, xs.back() * 1e-3, ys.front() * 1e-3, ys.back() * 1e-3,
                static_cast<int>(xs.size()), static_cast<int>(ys.size())};
    if (t.rows.size() != static_cast<std::size_t>(img.grid.size()))
        throw IoError(origin, "pixels do not form a complete regular grid");
    img.values.assign(img.grid.size(), 0.0);
    std::vector<char> seen(img.grid.size(), 0);
    for (const auto& r : t.rows) {
        int i = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), r[0]) - xs.begin());
        int j = static_cast<int>(std::lower_bound(ys.begin(), ys.end(), r[1]) - ys.begin());
        std::size_t k = static_cast<std::size_t>(j) * img.grid.nx + i;
        if (seen[k]) throw IoError(origin, "duplicate pixel");
        seen[k] = 1;
        if (r[2] < 0) throw IoError(origin, "negative intensity");
        img.values[k] = r[2];
    }
    // regularity: centres must be evenly spaced
    auto regular = [](const std::vector<double>& v) {
        if (v.size() < 3) return true;
        double h = (v.back() - v.front()) / (v.size() - 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i] - (v.front() + h * i)) > 1e-6 * std::abs(h)) return false;
        return true;
    };
    if (!regular(xs) || !regular(ys)) throw IoError(origin, "pixel grid is not regular");
    return img;
}

void write_image_csv(const IntensityImage& img, const std::string& path) {
    write_csv(image_table(img), path);
}

IntensityImage read_image_csv(const std::string& path) { return image_from_table(read_csv(path), path); }

namespace {

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

// 1, 2 or 5 times a power of ten, giving about n intervals
double nice_step(double span, int n) {
    double raw = span / n;
    double p = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * p) return m * p;
    return 10 * p;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < 1e-12 * step) v = 0;
    char buf[32];
    int digits = std::max(0, -static_cast<int>(std::floor(std::log10(step))));
    if (std::abs(v) >= 1e5 || (v != 0 && std::abs(v) < 1e-4))
        std::snprintf(buf, sizeof buf, "%.2g", v);
    else
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string render_svg(const Plot& plot) {
    if (plot.series.empty()) throw DomainError("render_svg: no data series");
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0, y1 = -INFINITY;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size() || s.x.empty()) throw DomainError("render_svg: bad series " + s.label);
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double W = 720, Hh = 440, ml = 80, mr = 20, mt = 40, mb = 60;
    const double pw = W - ml - mr, ph = Hh - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::ostringstream o;
    o.imbue(std::locale::classic());
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!plot.title.empty())
        o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
          << escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    double xs = nice_step(x1 - x0, 8), ys = nice_step(y1 - y0, 6);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs)
        o << "<line x1=\"" << px(t) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(t) << "\" y2=\""
          << mt + ph + 5 << "\" stroke=\"black\"/><text x=\"" << px(t) << "\" y=\"" << mt + ph + 18
          << "\" text-anchor=\"middle\">" << tick_label(t, xs) << "</text>\n";
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys)
        o << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << ml << "\" y2=\"" << py(t)
          << "\" stroke=\"black\"/><text x=\"" << ml - 8 << "\" y=\"" << py(t) + 4
          << "\" text-anchor=\"end\">" << tick_label(t, ys) << "</text>\n";
    o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << Hh - 15 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << "</text>\n";
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* c = colors[k % 6];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        o << "\"/>\n";
        o << "<text x=\"" << ml + pw - 10 << "\" y=\"" << mt + 16 + 16 * k << "\" text-anchor=\"end\" fill=\""
          << c << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const Plot& plot, const std::string& path) { write_text(path, render_svg(plot)); }

}  // namespace spdcm
