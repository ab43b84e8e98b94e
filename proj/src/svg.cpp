#include "wulffmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wulffmc {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);  // +0.0 folds -0
    return buf;
}

std::string svg_open(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(width) + " " +
           fmt(height) + "\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
           "\" font-family=\"sans-serif\">\n";
}

std::string text_at(double x, double y, const std::string& s, const std::string& extra = "") {
    return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"12\"" +
           (extra.empty() ? "" : " " + extra) + ">" + s + "</text>\n";
}

// world-frame boundary point of a shape along body angle theta (d=2 sections)
Vec posed_boundary(const Shape& shape, double cth, double sth) {
    const Vec w{cth, sth, 0.0};
    const Vec body = w * shape.body_radius(Direction(w));
    return shape.pose().rot.apply(body) + shape.pose().offset;
}

struct Box {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    void include(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

// maps data coordinates into a pixel rectangle, preserving aspect, y up
struct Frame {
    double scale, cx, cy, px, py;  // data center -> pixel center

    Frame(const Box& b, double pw, double ph, double pad) {
        const double dx = std::max(b.xmax - b.xmin, 1e-12);
        const double dy = std::max(b.ymax - b.ymin, 1e-12);
        scale = std::min((pw - 2 * pad) / dx, (ph - 2 * pad) / dy);
        cx = 0.5 * (b.xmin + b.xmax);
        cy = 0.5 * (b.ymin + b.ymax);
        px = pw / 2;
        py = ph / 2;
    }
    double x(double v) const { return px + (v - cx) * scale; }
    double y(double v) const { return py - (v - cy) * scale; }
};

std::string closed_path(const std::vector<Vec>& pts, const Frame& f, double ox,
                        const std::string& style) {
    std::string d = "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        d += (i ? "L" : "M") + fmt(f.x(pts[i].x) + ox) + " " + fmt(f.y(pts[i].y));
    d += "Z\" " + style + "/>\n";
    return d;
}

std::vector<Vec> section_outline(const Shape& shape, int plane, std::size_t samples) {
    // plane 0: body xy, 1: body xz, 2: body yz; drawn in the body frame
    std::vector<Vec> pts;
    pts.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        const double c = std::cos(th), s = std::sin(th);
        Vec w;
        if (plane == 0) w = {c, s, 0};
        else if (plane == 1) w = {c, 0, s};
        else w = {0, c, s};
        const double r = shape.body_radius(Direction(w));
        pts.push_back({r * c, r * s, 0});  // section plane coordinates
    }
    return pts;
}

std::vector<Vec> outline2d(const Shape& shape, std::size_t samples) {
    if (shape.family() == ShapeFamily::RegularPolygon) {
        std::vector<Vec> pts;
        const int n = shape.sides();
        pts.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * M_PI * k / n;  // vertices sit on the sample angles
            pts.push_back(posed_boundary(shape, std::cos(th), std::sin(th)));
        }
        return pts;
    }
    std::vector<Vec> pts;
    pts.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        pts.push_back(posed_boundary(shape, std::cos(th), std::sin(th)));
    }
    return pts;
}

const std::string kOutlineStyle = "fill=\"#dbe9f6\" stroke=\"#1f77b4\" stroke-width=\"1.5\"";

// ticks at multiples of a 1/2/5 step covering [lo, hi]
std::vector<double> nice_ticks(double lo, double hi) {
    const double range = hi - lo;
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    std::vector<double> ticks;
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 1e-9 * range; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * range ? 0.0 : t);
    return ticks;
}

}  // namespace

std::string shape_svg(const Shape& shape) {
    if (shape.dim() == 2) {
        const auto pts = outline2d(shape, 512);
        Box box;
        for (const auto& p : pts) box.include(p.x, p.y);
        const double w = 360, h = 360;
        const Frame f(box, w, h, 24);
        std::string out = svg_open(w, h);
        out += closed_path(pts, f, 0, kOutlineStyle);
        out += "</svg>\n";
        return out;
    }
    const double panel = 220, h = 244;
    std::string out = svg_open(3 * panel, h);
    const char* names[] = {"xy", "xz", "yz"};
    for (int plane = 0; plane < 3; ++plane) {
        const auto pts = section_outline(shape, plane, 512);
        Box box;
        for (const auto& p : pts) box.include(p.x, p.y);
        const Frame f(box, panel, panel, 20);
        out += closed_path(pts, f, plane * panel, kOutlineStyle);
        out += text_at(plane * panel + panel / 2 - 8, h - 8, names[plane],
                       "fill=\"#555555\"");
    }
    out += "</svg>\n";
    return out;
}

std::string snapshot_svg(const ParticleConfiguration& config) {
    const auto& container = config.container();
    const Shape& shape = container.shape();
    const double lambda = container.linear_scale();

    std::vector<Vec> outline;
    if (shape.dim() == 2) {
        outline = outline2d(shape, 512);
    } else {
        outline.reserve(512);
        for (std::size_t i = 0; i < 512; ++i) {
            const double th = 2.0 * M_PI * static_cast<double>(i) / 512.0;
            outline.push_back(posed_boundary(shape, std::cos(th), std::sin(th)));
        }
    }
    for (auto& p : outline) p *= lambda;

    Box box;
    for (const auto& p : outline) box.include(p.x, p.y);
    for (const auto& p : config.positions()) {
        box.include(p.x - 0.5, p.y - 0.5);
        box.include(p.x + 0.5, p.y + 0.5);
    }

    const double w = 420, h = 420;
    const Frame f(box, w, h, 24);
    std::string out = svg_open(w, h);
    const std::string style =
        shape.dim() == 2
            ? "fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\""
            : "fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\" stroke-dasharray=\"5 4\"";
    out += closed_path(outline, f, 0, style);

    double zmin = 0, zmax = 0;
    if (shape.dim() == 3) {
        for (const auto& p : config.positions()) {
            zmin = std::min(zmin, p.z);
            zmax = std::max(zmax, p.z);
        }
    }
    for (const auto& p : config.positions()) {
        std::string fill = "#1f77b4";
        if (shape.dim() == 3 && zmax > zmin) {
            const int light = 25 + static_cast<int>(50 * (p.z - zmin) / (zmax - zmin));
            fill = "hsl(210,60%," + std::to_string(light) + "%)";
        }
        out += "<circle class=\"p\" cx=\"" + fmt(f.x(p.x)) + "\" cy=\"" + fmt(f.y(p.y)) +
               "\" r=\"" + fmt(0.5 * f.scale) + "\" fill=\"" + fill +
               "\" fill-opacity=\"0.85\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string scan_svg(const PressureScan& scan, const std::vector<std::string>& labels) {
    if (scan.rows.empty()) throw std::invalid_argument("scan has no rows to plot");
    const auto& first = scan.rows.front().comparison;
    const std::size_t shapes = first.entries.size();
    if (!labels.empty() && labels.size() != shapes)
        throw std::invalid_argument("one label per shape expected");
    auto name = [&](std::size_t i) {
        return i < labels.size() ? labels[i] : "shape " + std::to_string(i);
    };
    const double z = first.z;

    double pmin = scan.rows.front().pressure, pmax = pmin;
    double dmin = 0, dmax = 0;
    for (const auto& row : scan.rows) {
        pmin = std::min(pmin, row.pressure);
        pmax = std::max(pmax, row.pressure);
        for (const auto& pair : row.comparison.pairs) {
            dmin = std::min(dmin, pair.delta - z * pair.se);
            dmax = std::max(dmax, pair.delta + z * pair.se);
        }
    }
    if (pmax == pmin) {
        pmin -= 0.5;
        pmax += 0.5;
    }
    const double ppad = 0.06 * (pmax - pmin);
    pmin -= ppad;
    pmax += ppad;
    if (dmax == dmin) {
        dmin -= 1;
        dmax += 1;
    }
    const double dpad = 0.08 * (dmax - dmin);
    dmin -= dpad;
    dmax += dpad;

    const double W = 640, H = 420, L = 70, R = 24, T = 30, B = 52;
    const auto X = [&](double p) { return L + (p - pmin) / (pmax - pmin) * (W - L - R); };
    const auto Y = [&](double d) { return H - B - (d - dmin) / (dmax - dmin) * (H - T - B); };

    std::string out = svg_open(W, H);
    out += "<rect x=\"" + fmt(L) + "\" y=\"" + fmt(T) + "\" width=\"" + fmt(W - L - R) +
           "\" height=\"" + fmt(H - T - B) +
           "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";

    for (double t : nice_ticks(pmin, pmax)) {
        const double x = X(t);
        out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(x) +
               "\" y2=\"" + fmt(H - B + 5) + "\" stroke=\"#555555\"/>\n";
        out += text_at(x - 10, H - B + 19, fmt(t), "fill=\"#333333\"");
    }
    for (double t : nice_ticks(dmin, dmax)) {
        const double y = Y(t);
        out += "<line x1=\"" + fmt(L - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(L) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"#555555\"/>\n";
        out += text_at(L - 10, y + 4, fmt(t), "fill=\"#333333\" text-anchor=\"end\"");
    }
    if (dmin < 0 && dmax > 0)
        out += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(Y(0)) + "\" x2=\"" + fmt(W - R) +
               "\" y2=\"" + fmt(Y(0)) +
               "\" stroke=\"#888888\" stroke-dasharray=\"4 4\"/>\n";

    out += text_at(L + (W - L - R) / 2 - 28, H - 12, "pressure", "fill=\"#333333\"");
    out += "<text x=\"16\" y=\"" + fmt(T + (H - T - B) / 2) + "\" font-size=\"12\" " +
           "fill=\"#333333\" transform=\"rotate(-90 16 " + fmt(T + (H - T - B) / 2) +
           ")\" text-anchor=\"middle\">&#916;&#10216;E&#10217; &#177; " + fmt(z) +
           "&#183;SE</text>\n";

    for (std::size_t k = 0; k < first.pairs.size(); ++k) {
        const char* color = kPalette[k % kPaletteSize];
        std::string line = "<path d=\"";
        std::string marks;
        for (std::size_t r = 0; r < scan.rows.size(); ++r) {
            const auto& pair = scan.rows[r].comparison.pairs[k];
            const double x = X(scan.rows[r].pressure), y = Y(pair.delta);
            line += (r ? "L" : "M") + fmt(x) + " " + fmt(y);
            const double ylo = Y(pair.delta - z * pair.se), yhi = Y(pair.delta + z * pair.se);
            marks += "<line class=\"err\" x1=\"" + fmt(x) + "\" y1=\"" + fmt(ylo) +
                     "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(yhi) + "\" stroke=\"" + color +
                     "\" stroke-width=\"1.2\"/>\n";
            for (double yc : {ylo, yhi})
                marks += "<line x1=\"" + fmt(x - 3) + "\" y1=\"" + fmt(yc) + "\" x2=\"" +
                         fmt(x + 3) + "\" y2=\"" + fmt(yc) + "\" stroke=\"" + color +
                         "\" stroke-width=\"1.2\"/>\n";
            marks += "<circle class=\"pt\" cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) +
                     "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        line += "\" fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"/>\n";
        out += line + marks;

        const auto& pair = first.pairs[k];
        const double ly = T + 16 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + fmt(W - R - 150) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
               fmt(W - R - 130) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += text_at(W - R - 124, ly, name(pair.first) + " &#8722; " + name(pair.second),
                       "fill=\"#333333\"");
    }
    out += "</svg>\n";
    return out;
}

}  // namespace wulffmc
