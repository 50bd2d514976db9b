#pragma once

#include <string>

#include "dlambda/harness/experiment.hpp"

namespace dlambda::harness {

/// Standalone SVG line plot with labelled, ticked axes and a legend.
std::string render_svg(const PlotSpec& plot);

} // namespace dlambda::harness
