#pragma once

#include <utility>
#include <vector>

#include "spsforge/congruence.hpp"
#include "spsforge/diagram.hpp"

namespace spsforge {

enum class SquareKind { kTight, kWide };

/// One leg element and the cell of the original diagram it consumed.
struct LegStep {
  int element = -1;
  FourCell consumed;
};

/// Record of one fork insertion. Original elements keep their indices in
/// the new diagram; new elements are appended after them.
struct ForkTrace {
  FourCell cell;
  int new_top = -1;
  int new_left = -1;
  int new_right = -1;
  std::vector<LegStep> left_leg;
  std::vector<LegStep> right_leg;

  std::size_t added() const { return 3 + left_leg.size() + right_leg.size(); }
};

/// Tight iff the cell's top has exactly two lower covers.
SquareKind classify_cell(const PlanarDiagram& diagram, const FourCell& cell);

/// Replaces `cell` by a copy of N7 and runs the legs down through the cells
/// of the original diagram. The result is validated (lattice, planar, all
/// faces 4-cells, semimodular, slim); a failure is reported as
/// kInternalInvariantViolation.
std::pair<PlanarDiagram, ForkTrace> insert_fork(const PlanarDiagram& diagram,
                                                const FourCell& cell);

/// con(m, t) in the extended lattice.
Congruence fork_congruence(const PlanarDiagram& extended, const ForkTrace& trace);

}  // namespace spsforge
