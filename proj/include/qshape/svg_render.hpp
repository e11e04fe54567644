#pragma once

#include <string>
#include <vector>

#include "qshape/shape.hpp"

namespace qshape {

struct CaptionedConfig {
    PointConfig config;
    std::string caption;
};

struct RenderOptions {
    double point_radius = 5.0;
    bool draw_path = true; // closed polygon through the points in label order
};

// Deterministic SVG: one 512x512 cell per configuration, laid out left to
// right. Each shape is centered on its centroid and scaled to 80% of the
// cell; the y axis points up. Points become circles, coincident points
// collapse to one circle with a multiplicity badge. Identical inputs and
// options produce identical bytes.
std::string render_svg(const std::vector<CaptionedConfig>& configs,
                       const RenderOptions& options = {});

} // namespace qshape
