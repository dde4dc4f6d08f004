#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "config.hpp"

namespace lzn::cli {

namespace {

constexpr const char* palette[] = {"#2563eb", "#dc2626", "#16a34a",
                                   "#9333ea", "#ea580c", "#0891b2"};
constexpr int palette_size = 6;

struct CsvTable {
    std::string schema;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw config_error("csv is missing column '" + name + "'");
    }
};

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double cell_number(const CsvTable& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw config_error("csv row " + std::to_string(row + 1) +
                           ": not a number: '" + s + "'");
    return x;
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open csv '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# schema: ", 0) != 0)
        throw config_error("'" + path + "' has no '# schema:' line");
    t.schema = line.substr(10);
    if (!std::getline(in, line) || line.empty())
        throw config_error("'" + path + "' has no header line");
    t.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto cells = split_line(line);
        if (cells.size() != t.header.size())
            throw config_error("'" + path + "': row with " +
                               std::to_string(cells.size()) + " fields, header has " +
                               std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.rows.empty())
        throw config_error("'" + path + "' has no data rows");
    return t;
}

std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::string fmtg(double x) {
    if (x == 0.0)
        x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::string escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

class SvgDoc {
public:
    SvgDoc(double width, double height) : width_(width), height_(height) {}

    void raw(const std::string& s) { body_ += s; }

    void line(double x1, double y1, double x2, double y2,
              const std::string& stroke, double w = 1.0,
              const std::string& extra = "") {
        body_ += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" +
                 fmt2(x2) + "\" y2=\"" + fmt2(y2) + "\" stroke=\"" + stroke +
                 "\" stroke-width=\"" + fmt2(w) + "\"" + extra + "/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& stroke, double w = 1.5,
                  const std::string& extra = "") {
        if (pts.empty())
            return;
        body_ += "<polyline fill=\"none\" stroke=\"" + stroke +
                 "\" stroke-width=\"" + fmt2(w) + "\"" + extra + " points=\"";
        for (const auto& [x, y] : pts)
            body_ += fmt2(x) + "," + fmt2(y) + " ";
        body_ += "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& fill) {
        body_ += "<circle cx=\"" + fmt2(x) + "\" cy=\"" + fmt2(y) + "\" r=\"" +
                 fmt2(r) + "\" fill=\"" + fill + "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& extra = "") {
        body_ += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" +
                 fmt2(w) + "\" height=\"" + fmt2(h) + "\" fill=\"" + fill + "\"" +
                 extra + "/>\n";
    }

    void text(double x, double y, const std::string& s,
              const std::string& anchor = "middle", double size = 12.0,
              const std::string& extra = "") {
        body_ += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) +
                 "\" text-anchor=\"" + anchor + "\" font-size=\"" + fmt2(size) +
                 "\" font-family=\"sans-serif\" fill=\"#222\"" + extra + ">" +
                 escape_text(s) + "</text>\n";
    }

    std::string finish() const {
        std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                          fmt2(width_) + "\" height=\"" + fmt2(height_) +
                          "\" viewBox=\"0 0 " + fmt2(width_) + " " +
                          fmt2(height_) + "\">\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

private:
    double width_, height_;
    std::string body_;
};

struct Rect {
    double left, top, right, bottom;
    double width() const { return right - left; }
    double height() const { return bottom - top; }
};

// Axis mapping from data to pixels. Log and symlog modes kick in for wide
// dynamic ranges; symlog uses the smallest data magnitude as its linear
// threshold, so sign-mirrored sweep-rate axes come out symmetric.
struct Scale {
    int mode = 0;  // 0 linear, 1 log10, 2 symlog
    double linthresh = 1.0;
    double data_lo = 0.0, data_hi = 1.0;
    double t_lo = 0.0, t_hi = 1.0;
    double p_lo = 0.0, p_hi = 1.0;

    double tx(double x) const {
        if (mode == 1)
            return std::log10(x);
        if (mode == 2)
            return x >= 0.0 ? std::log10(1.0 + x / linthresh)
                            : -std::log10(1.0 - x / linthresh);
        return x;
    }

    double px_from_t(double t) const {
        return p_lo + (t - t_lo) / (t_hi - t_lo) * (p_hi - p_lo);
    }

    double px(double x) const { return px_from_t(tx(x)); }
};

Scale fit_scale(std::span<const double> xs, double p_lo, double p_hi,
                bool favor_log,
                std::optional<std::pair<double, double>> include = std::nullopt) {
    Scale s;
    s.p_lo = p_lo;
    s.p_hi = p_hi;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double minabs = lo;
    bool pos = false, neg = false, zero = false;
    for (double x : xs) {
        if (!std::isfinite(x))
            continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        if (x > 0.0)
            pos = true;
        else if (x < 0.0)
            neg = true;
        else
            zero = true;
        if (x != 0.0)
            minabs = std::min(minabs, std::fabs(x));
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (favor_log && !zero && std::isfinite(minabs)) {
        const double maxabs = std::max(std::fabs(lo), std::fabs(hi));
        if (maxabs / minabs >= 30.0) {
            if (pos && !neg) {
                s.mode = 1;
            } else {
                s.mode = 2;
                s.linthresh = minabs;
            }
        }
    }
    if (include) {
        lo = std::min(lo, include->first);
        hi = std::max(hi, include->second);
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    s.data_lo = lo;
    s.data_hi = hi;
    double tlo = s.tx(lo), thi = s.tx(hi);
    double pad = 0.03 * (thi - tlo);
    if (pad <= 0.0)
        pad = 0.5;
    s.t_lo = tlo - pad;
    s.t_hi = thi + pad;
    return s;
}

double nice_step(double range) {
    const double raw = range / 4.5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double n = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return n * mag;
}

std::vector<double> axis_ticks(const Scale& s) {
    std::vector<double> out;
    if (s.mode == 0) {
        const double step = nice_step(s.data_hi - s.data_lo);
        double t = std::ceil(s.data_lo / step - 1e-9) * step;
        for (; t <= s.data_hi + step * 1e-9; t += step)
            out.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
        return out;
    }
    const double minabs =
        s.mode == 1 ? s.data_lo : s.linthresh;
    const double maxabs = std::max(std::fabs(s.data_lo), std::fabs(s.data_hi));
    const int kmin = static_cast<int>(std::floor(std::log10(minabs)));
    const int kmax = static_cast<int>(std::ceil(std::log10(maxabs)));
    std::vector<double> decades;
    for (int k = kmin; k <= kmax; ++k)
        decades.push_back(std::pow(10.0, k));
    if (s.mode == 1) {
        for (double d : decades)
            if (d >= s.data_lo * 0.999 && d <= s.data_hi * 1.001)
                out.push_back(d);
        if (out.size() < 2)
            out = {s.data_lo, s.data_hi};
        return out;
    }
    if (s.data_lo < 0.0)
        for (auto it = decades.rbegin(); it != decades.rend(); ++it)
            if (-*it >= s.data_lo * 1.001)
                out.push_back(-*it);
    if (s.data_lo < 0.0 && s.data_hi > 0.0)
        out.push_back(0.0);
    if (s.data_hi > 0.0)
        for (double d : decades)
            if (d <= s.data_hi * 1.001)
                out.push_back(d);
    // Thin crowded symlog axes, always keeping the zero tick.
    while (out.size() > 11) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out[i] == 0.0 || i % 2 == 0)
                thin.push_back(out[i]);
        if (thin.size() == out.size())
            break;
        out = std::move(thin);
    }
    return out;
}

void draw_frame(SvgDoc& d, const Rect& r, const Scale& sx, const Scale& sy,
                const std::string& xlabel, const std::string& ylabel,
                bool grid = true) {
    for (double v : axis_ticks(sx)) {
        const double x = sx.px(v);
        if (x < r.left - 0.5 || x > r.right + 0.5)
            continue;
        if (grid)
            d.line(x, r.top, x, r.bottom, "#e5e5e5", 0.7);
        d.line(x, r.bottom, x, r.bottom + 5, "#444", 1.0);
        d.text(x, r.bottom + 19, fmtg(v));
    }
    for (double v : axis_ticks(sy)) {
        const double y = sy.px(v);
        if (y > r.bottom + 0.5 || y < r.top - 0.5)
            continue;
        if (grid)
            d.line(r.left, y, r.right, y, "#e5e5e5", 0.7);
        d.line(r.left - 5, y, r.left, y, "#444", 1.0);
        d.text(r.left - 8, y + 4, fmtg(v), "end");
    }
    d.rect(r.left, r.top, r.width(), r.height(), "none",
           " stroke=\"#444\" stroke-width=\"1\"");
    d.text((r.left + r.right) / 2, r.bottom + 38, xlabel, "middle", 13);
    d.text(r.left - 46, (r.top + r.bottom) / 2, ylabel, "middle", 13,
           " transform=\"rotate(-90 " + fmt2(r.left - 46) + " " +
               fmt2((r.top + r.bottom) / 2) + ")\"");
}

struct Series {
    std::string name;
    std::vector<double> x, y, err;
};

std::string plot_title(const std::string& csv_path) {
    return std::filesystem::path(csv_path).stem().string();
}

std::string render_series_plot(const std::string& title,
                               const std::vector<Series>& series,
                               const std::string& xlabel,
                               const std::string& ylabel, bool favor_log_x,
                               std::optional<std::pair<double, double>> y_span) {
    SvgDoc d(860, 520);
    const Rect r{70, 42, 830, 462};

    std::vector<double> all_x, all_y;
    for (const auto& s : series) {
        all_x.insert(all_x.end(), s.x.begin(), s.x.end());
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            all_y.push_back(s.y[i] + (i < s.err.size() ? s.err[i] : 0.0));
            all_y.push_back(s.y[i] - (i < s.err.size() ? s.err[i] : 0.0));
        }
    }
    const Scale sx = fit_scale(all_x, r.left, r.right, favor_log_x);
    const Scale sy = fit_scale(all_y, r.bottom, r.top, false, y_span);

    d.text((r.left + r.right) / 2, 24, title, "middle", 15);
    draw_frame(d, r, sx, sy, xlabel, ylabel);

    d.raw("<clipPath id=\"plot\"><rect x=\"" + fmt2(r.left) + "\" y=\"" +
          fmt2(r.top) + "\" width=\"" + fmt2(r.width()) + "\" height=\"" +
          fmt2(r.height()) + "\"/></clipPath>\n");
    d.raw("<g clip-path=\"url(#plot)\">\n");
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::string color = palette[si % palette_size];
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i < s.err.size() && s.err[i] > 0.0) {
                const double x = sx.px(s.x[i]);
                d.line(x, sy.px(s.y[i] - s.err[i]), x, sy.px(s.y[i] + s.err[i]),
                       color, 1.0, " stroke-opacity=\"0.5\"");
            }
        }
        std::vector<std::pair<double, double>> pts;
        pts.reserve(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts.emplace_back(sx.px(s.x[i]), sy.px(s.y[i]));
        d.polyline(pts, color, 1.6);
        if (s.x.size() <= 64)
            for (const auto& [x, y] : pts)
                d.circle(x, y, 2.4, color);
    }
    d.raw("</g>\n");

    if (series.size() > 1 || !series.front().name.empty()) {
        double ly = r.top + 16;
        for (std::size_t si = 0; si < series.size(); ++si) {
            const std::string color = palette[si % palette_size];
            d.line(r.right - 150, ly - 4, r.right - 122, ly - 4, color, 2.0);
            d.text(r.right - 116, ly, series[si].name, "start", 12);
            ly += 17;
        }
    }
    return d.finish();
}

struct Rgb {
    double r, g, b;
};

std::string ramp_color(double u) {
    static const Rgb stops[] = {{68, 1, 84},
                                {59, 82, 139},
                                {33, 145, 140},
                                {94, 201, 98},
                                {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0);
    const double pos = u * 4.0;
    const int i = std::min(3, static_cast<int>(pos));
    const double f = pos - i;
    const auto mix = [&](double a, double b) { return a + (b - a) * f; };
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(mix(stops[i].r, stops[i + 1].r))),
                  static_cast<int>(std::lround(mix(stops[i].g, stops[i + 1].g))),
                  static_cast<int>(std::lround(mix(stops[i].b, stops[i + 1].b))));
    return buf;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// Cell edges at midpoints between neighbouring axis values, in the scale's
// transformed coordinate so log-spaced axes get evenly sized cells.
std::vector<double> cell_edges(const std::vector<double>& centers,
                               const Scale& s) {
    std::vector<double> t(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i)
        t[i] = s.tx(centers[i]);
    std::vector<double> edges(centers.size() + 1);
    if (centers.size() == 1) {
        edges[0] = t[0] - 0.5;
        edges[1] = t[0] + 0.5;
        return edges;
    }
    for (std::size_t i = 1; i < centers.size(); ++i)
        edges[i] = 0.5 * (t[i - 1] + t[i]);
    edges.front() = t.front() - (edges[1] - t.front());
    edges.back() = t.back() + (t.back() - edges[centers.size() - 1]);
    return edges;
}

std::string render_heatmap(const std::string& title, const CsvTable& t) {
    const std::size_t ca = t.col("alpha");
    const std::size_t cd = t.col("delta");
    const std::size_t cp = t.col("P");

    std::vector<double> alphas, deltas;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        alphas.push_back(cell_number(t, i, ca));
        deltas.push_back(cell_number(t, i, cd));
    }
    const auto ax = sorted_unique(alphas);
    const auto dx = sorted_unique(deltas);

    std::map<std::pair<std::size_t, std::size_t>, double> value;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto ai = static_cast<std::size_t>(
            std::lower_bound(ax.begin(), ax.end(), cell_number(t, i, ca)) -
            ax.begin());
        const auto di = static_cast<std::size_t>(
            std::lower_bound(dx.begin(), dx.end(), cell_number(t, i, cd)) -
            dx.begin());
        const double p = cell_number(t, i, cp);
        value[{ai, di}] = p;
        vmin = std::min(vmin, p);
        vmax = std::max(vmax, p);
    }
    if (vmin > vmax) {
        vmin = 0.0;
        vmax = 1.0;
    }
    const double spread = vmax > vmin ? vmax - vmin : 1.0;

    SvgDoc d(860, 520);
    const Rect r{70, 42, 740, 462};
    const Scale sx = fit_scale(ax, r.left, r.right, true);
    const Scale sy = fit_scale(dx, r.bottom, r.top, false);

    d.text((r.left + r.right) / 2, 24, title, "middle", 15);

    const auto ex = cell_edges(ax, sx);
    const auto ey = cell_edges(dx, sy);
    for (const auto& [key, p] : value) {
        const double x0 = sx.px_from_t(ex[key.first]);
        const double x1 = sx.px_from_t(ex[key.first + 1]);
        const double y0 = sy.px_from_t(ey[key.second]);
        const double y1 = sy.px_from_t(ey[key.second + 1]);
        d.rect(std::min(x0, x1), std::min(y0, y1), std::fabs(x1 - x0) + 0.3,
               std::fabs(y1 - y0) + 0.3, ramp_color((p - vmin) / spread));
    }
    draw_frame(d, r, sx, sy, "alpha", "delta", false);

    const double bar_x = 766, bar_top = r.top, bar_h = r.height();
    const int bands = 64;
    for (int i = 0; i < bands; ++i) {
        const double u = (bands - 1 - i) / static_cast<double>(bands - 1);
        d.rect(bar_x, bar_top + bar_h * i / bands, 18, bar_h / bands + 0.6,
               ramp_color(u));
    }
    d.rect(bar_x, bar_top, 18, bar_h, "none",
           " stroke=\"#444\" stroke-width=\"1\"");
    for (int i = 0; i <= 4; ++i) {
        const double u = i / 4.0;
        const double y = bar_top + bar_h * (1.0 - u);
        d.line(bar_x + 18, y, bar_x + 22, y, "#444", 1.0);
        d.text(bar_x + 25, y + 4, fmtg(vmin + u * spread), "start", 11);
    }
    d.text(bar_x + 9, bar_top - 8, "P", "middle", 13);
    return d.finish();
}

std::string render_spectrum_panels(const std::string& title,
                                   const CsvTable& t) {
    const std::size_t ct = t.col("t");
    Series re_p{"E+", {}, {}, {}}, re_m{"E-", {}, {}, {}};
    Series im_p{"E+", {}, {}, {}}, im_m{"E-", {}, {}, {}};
    const std::size_t crp = t.col("re_e_plus"), cip = t.col("im_e_plus");
    const std::size_t crm = t.col("re_e_minus"), cim = t.col("im_e_minus");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double tt = cell_number(t, i, ct);
        re_p.x.push_back(tt);
        re_m.x.push_back(tt);
        im_p.x.push_back(tt);
        im_m.x.push_back(tt);
        re_p.y.push_back(cell_number(t, i, crp));
        re_m.y.push_back(cell_number(t, i, crm));
        im_p.y.push_back(cell_number(t, i, cip));
        im_m.y.push_back(cell_number(t, i, cim));
    }

    SvgDoc d(860, 760);
    const Rect panels[2] = {{70, 42, 830, 360}, {70, 420, 830, 710}};
    const char* ylabels[2] = {"Re E", "Im E"};
    const Series* groups[2][2] = {{&re_p, &re_m}, {&im_p, &im_m}};

    d.text(450, 24, title, "middle", 15);
    for (int panel = 0; panel < 2; ++panel) {
        const Rect& r = panels[panel];
        std::vector<double> ys;
        for (const auto* s : groups[panel])
            ys.insert(ys.end(), s->y.begin(), s->y.end());
        const Scale sx = fit_scale(re_p.x, r.left, r.right, false);
        const Scale sy = fit_scale(ys, r.bottom, r.top, false);
        draw_frame(d, r, sx, sy, panel == 1 ? "t" : "", ylabels[panel]);
        for (int si = 0; si < 2; ++si) {
            const auto* s = groups[panel][si];
            std::vector<std::pair<double, double>> pts;
            pts.reserve(s->x.size());
            for (std::size_t i = 0; i < s->x.size(); ++i)
                pts.emplace_back(sx.px(s->x[i]), sy.px(s->y[i]));
            d.polyline(pts, palette[si], 1.4);
        }
        double ly = r.top + 16;
        for (int si = 0; si < 2; ++si) {
            d.line(r.right - 120, ly - 4, r.right - 94, ly - 4, palette[si], 2.0);
            d.text(r.right - 88, ly, groups[panel][si]->name, "start", 12);
            ly += 17;
        }
    }
    return d.finish();
}

std::string render_probability_lines(const std::string& title,
                                     const CsvTable& t) {
    const std::size_t ca = t.col("alpha");
    const std::size_t cm = t.col("method");
    const std::size_t cp = t.col("P");
    const std::size_t ce = t.col("stderr");

    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& name = t.rows[i][cm];
        auto it = index.find(name);
        if (it == index.end()) {
            it = index.emplace(name, series.size()).first;
            series.push_back(Series{name, {}, {}, {}});
        }
        Series& s = series[it->second];
        s.x.push_back(cell_number(t, i, ca));
        s.y.push_back(cell_number(t, i, cp));
        s.err.push_back(cell_number(t, i, ce));
    }
    return render_series_plot(title, series, "alpha", "P", true,
                              std::pair{0.0, 1.0});
}

std::string render_noise_path(const std::string& title, const CsvTable& t) {
    Series s{"", {}, {}, {}};
    const std::size_t ct = t.col("t"), cf = t.col("f");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        s.x.push_back(cell_number(t, i, ct));
        s.y.push_back(cell_number(t, i, cf));
    }
    return render_series_plot(title, {s}, "t", "f", false, std::nullopt);
}

}  // namespace

std::string render_csv_to_svg(const std::string& csv_path,
                              const std::string& svg_path) {
    const CsvTable t = load_csv(csv_path);
    const std::string title = plot_title(csv_path);

    std::string out;
    if (t.schema == "lznoise.curve.v1" || t.schema == "lznoise.compare.v1")
        out = render_probability_lines(title, t);
    else if (t.schema == "lznoise.phase.v1")
        out = render_heatmap(title, t);
    else if (t.schema == "lznoise.spectrum.v1")
        out = render_spectrum_panels(title, t);
    else if (t.schema == "lznoise.path.v1")
        out = render_noise_path(title, t);
    else
        throw config_error("no plot is defined for schema '" + t.schema + "'");

    std::ofstream f(svg_path, std::ios::binary);
    if (!f)
        throw config_error("cannot open output file '" + svg_path + "'");
    f << out;
    if (!f)
        throw std::runtime_error("short write to " + svg_path);
    return out;
}

}
