#pragma once

#include <string>

#include "pendctl/simulate.hpp"

namespace pendctl {

/// Standalone 800x600 SVG with two stacked axes: theta(t) on top, u(t)
/// below. Pure polylines and text, no external assets; long records are
/// decimated to keep the file small.
std::string render_trajectory_svg(const TrajectoryRecord& tr);

}  // namespace pendctl
