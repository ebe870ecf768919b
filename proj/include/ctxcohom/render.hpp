#pragma once

#include <string>
#include <vector>

#include "ctxcohom/empirical.hpp"

namespace ctxcohom {

/// Measurements in the order of the single cycle formed by a cover of
/// two-element contexts, starting from measurement 0. Throws
/// UnsupportedTopology for any other cover.
std::vector<std::size_t> cycle_order(const Scenario& scenario);

/// Bundle diagram as an SVG 1.1 document: base polygon, one outcome fibre per
/// measurement, one line with class "section" per possible section, and each
/// global section as a closed polyline with class "global".
std::string render_svg(const EmpiricalModel& model, const std::string& title);

}  // namespace ctxcohom
