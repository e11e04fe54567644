#include "qshape/svg_render.hpp"

#include <cmath>
#include <cstdio>

#include "qshape/errors.hpp"

namespace qshape {

namespace {

constexpr double cell_size = 512.0;
constexpr double fill_fraction = 0.8;

std::string fmt(double v) {
    char buf[32];
    // Fixed two-decimal coordinates keep the output byte-stable across
    // platforms and diffs readable.
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_int(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Cluster {
    complex_t position;
    int multiplicity = 0;
};

// Clusters in first-occurrence order; positions within a relative window
// of an existing cluster join it.
std::vector<Cluster> cluster_points(const cvector_t& pts, double spread) {
    const double window = 1e-9 * spread;
    std::vector<Cluster> clusters;
    for (const auto& p : pts) {
        bool merged = false;
        for (auto& c : clusters) {
            if (std::abs(p - c.position) <= window) {
                ++c.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back({p, 1});
    }
    return clusters;
}

} // namespace

std::string render_svg(const std::vector<CaptionedConfig>& configs,
                       const RenderOptions& options) {
    const std::size_t cells = configs.size();
    const double width = cell_size * static_cast<double>(cells == 0 ? 1 : cells);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_int(width) +
           "\" height=\"" + fmt_int(cell_size) + "\" viewBox=\"0 0 " +
           fmt_int(width) + " " + fmt_int(cell_size) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt_int(width) + "\" height=\"" +
           fmt_int(cell_size) + "\" fill=\"#ffffff\"/>\n";

    for (std::size_t cell = 0; cell < cells; ++cell) {
        const PointConfig& config = configs[cell].config;
        const auto& pts = config.points;
        if (config.n_points() < 3) {
            throw TooFewPoints("cannot render fewer than 3 points");
        }

        complex_t centroid{0.0, 0.0};
        for (const auto& p : pts) centroid += p;
        centroid /= static_cast<double>(pts.size());

        double spread = 0.0;
        double scale_abs = 0.0;
        for (const auto& p : pts) {
            spread = std::max(spread, std::abs(p - centroid));
            scale_abs = std::max(scale_abs, std::abs(p));
        }
        if (spread <= 1e-12 * std::max(scale_abs, 1e-300)) {
            throw DegenerateConfig("all points coincide; nothing to draw");
        }

        const double cx = cell_size * (static_cast<double>(cell) + 0.5);
        const double cy = cell_size / 2.0;
        const double zoom = fill_fraction * (cell_size / 2.0) / spread;
        auto to_x = [&](const complex_t& p) {
            return cx + (p.real() - centroid.real()) * zoom;
        };
        auto to_y = [&](const complex_t& p) {
            return cy - (p.imag() - centroid.imag()) * zoom;
        };

        svg += "<g>\n";
        svg += "<rect x=\"" + fmt_int(cell_size * static_cast<double>(cell)) +
               "\" y=\"0\" width=\"" + fmt_int(cell_size) + "\" height=\"" +
               fmt_int(cell_size) + "\" fill=\"none\" stroke=\"#cccccc\"/>\n";

        if (options.draw_path) {
            std::string d;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                d += (i == 0 ? "M" : " L");
                d += fmt(to_x(pts[i])) + " " + fmt(to_y(pts[i]));
            }
            d += " Z";
            svg += "<path d=\"" + d +
                   "\" fill=\"none\" stroke=\"#3a5a8c\" stroke-width=\"1.5\"/>\n";
        }

        const double r = options.point_radius;
        for (const Cluster& c : cluster_points(pts, spread)) {
            const double x = to_x(c.position);
            const double y = to_y(c.position);
            svg += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"" +
                   fmt(r) + "\" fill=\"#1f3a5f\"/>\n";
            if (c.multiplicity > 1) {
                svg += "<text x=\"" + fmt(x + r + 2.0) + "\" y=\"" +
                       fmt(y - r - 2.0) +
                       "\" font-family=\"sans-serif\" font-size=\"13\" "
                       "fill=\"#8c2f2f\">" +
                       std::to_string(c.multiplicity) + "</text>\n";
            }
        }

        if (!configs[cell].caption.empty()) {
            svg += "<text x=\"" + fmt(cx) + "\" y=\"" + fmt(cell_size - 8.0) +
                   "\" font-family=\"sans-serif\" font-size=\"14\" "
                   "text-anchor=\"middle\" fill=\"#333333\">" +
                   xml_escape(configs[cell].caption) + "</text>\n";
        }
        svg += "</g>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace qshape
