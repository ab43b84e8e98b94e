#pragma once

#include <string>
#include <vector>

#include "wulffmc/geometry.hpp"
#include "wulffmc/interaction.hpp"
#include "wulffmc/search.hpp"

namespace wulffmc {

// Self-contained SVG renderers, no plotting dependency. Output is a complete
// UTF-8 <svg> document; identical inputs produce identical bytes.

// Boundary drawing. d=2: one outline in the world frame (polygons keep exact
// vertices). d=3: the three body-frame cross sections z=0, y=0, x=0.
std::string shape_svg(const Shape& shape);

// Container outline with particles as hard-core disks (diameter 1) at the
// configuration's physical scale. d=3 projects onto the xy plane and shades
// particles by depth; the dashed curve is the container's mid-plane section.
std::string snapshot_svg(const ParticleConfiguration& config);

// Delta <E> vs pressure, one curve per shape pair, error bars at the scan's
// verdict z. `labels` names the shapes (empty = generated names); a non-empty
// list must match the shape count.
std::string scan_svg(const PressureScan& scan, const std::vector<std::string>& labels = {});

}  // namespace wulffmc
