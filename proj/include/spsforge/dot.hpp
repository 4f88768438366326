#pragma once

#include <string>

#include "spsforge/congruence.hpp"
#include "spsforge/diagram.hpp"

namespace spsforge {

// Hasse diagram drawn bottom to top, one rank per height, nodes within a
// rank in sweep order. With a coloring, each edge carries its colour
// label ("c0", "c1", ...).
std::string export_dot(const PlanarDiagram& diagram, const EdgeColoring* coloring = nullptr);

}  // namespace spsforge
