#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spsforge/order.hpp"

namespace spsforge {

/// A covering square {o, c_l, c_r, t} bounding a face with no interior
/// element. Fields are element indices of the owning diagram.
struct FourCell {
  int bottom = -1;
  int left = -1;
  int right = -1;
  int top = -1;

  friend bool operator==(const FourCell&, const FourCell&) = default;
};

/// An internal face. Both chains run from `bottom` to `top` inclusive.
struct Face {
  int bottom = -1;
  int top = -1;
  std::vector<int> left_chain;
  std::vector<int> right_chain;

  std::size_t element_count() const {
    return left_chain.size() + right_chain.size() - 2;
  }
};

enum class Shape { kNotRectangular, kRectangular, kPatch };

struct ShapeClass {
  Shape shape = Shape::kNotRectangular;
  std::optional<int> left_corner;
  std::optional<int> right_corner;
};

using CellIds = std::array<ElementId, 4>;

/// How a diagram was produced: a base label such as "grid:2x3" and the fork
/// cells applied to it, in order, by element id.
struct Provenance {
  std::string base;
  std::vector<CellIds> forks;
};

using RotationMap = std::map<ElementId, std::vector<ElementId>>;

/// A lattice together with a planar embedding of its Hasse diagram, given
/// by the left-to-right order of upper and lower covers at every element.
/// Faces, boundaries and 4-cells are derived on construction.
class PlanarDiagram {
 public:
  PlanarDiagram() = default;

  static PlanarDiagram build(std::vector<ElementId> elements,
                             const std::vector<Cover>& covers,
                             const RotationMap& upper_order,
                             const RotationMap& lower_order);
  static PlanarDiagram from_rotation(FiniteLattice lattice,
                                     std::vector<std::vector<int>> upper_order,
                                     std::vector<std::vector<int>> lower_order);

  const FiniteLattice& lattice() const { return lattice_; }
  std::size_t size() const { return lattice_.size(); }
  const ElementId& id(int i) const { return lattice_.id(i); }

  const std::vector<int>& upper_order(int i) const { return upper_[i]; }
  const std::vector<int>& lower_order(int i) const { return lower_[i]; }

  const std::vector<Face>& faces() const { return faces_; }
  /// Internal faces with exactly four elements, bottom-to-top then
  /// left-to-right by their tops.
  const std::vector<FourCell>& cells() const { return cells_; }
  bool all_faces_are_cells() const { return cells_.size() == faces_.size(); }

  /// Index into faces() of the internal face on the given side of the
  /// upward edge lower->upper, or -1 for the outer face.
  int face_left_of(int lower, int upper) const;
  int face_right_of(int lower, int upper) const;

  /// Maximal chains from 0 to 1 along the leftmost and rightmost covers.
  const std::vector<int>& left_boundary() const { return left_boundary_; }
  const std::vector<int>& right_boundary() const { return right_boundary_; }

  /// Rank of each element in a leftmost-first depth-first walk from 0.
  int sweep_rank(int i) const { return sweep_rank_[i]; }

  std::optional<std::size_t> find_cell(const FourCell& cell) const;
  /// Throws kCellNotFound unless the ids name a 4-cell of this diagram.
  FourCell cell_from_ids(const CellIds& ids) const;
  CellIds cell_ids(const FourCell& cell) const;

  const Provenance& provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

  RotationMap upper_rotation_map() const;
  RotationMap lower_rotation_map() const;

 private:
  void derive_faces();

  FiniteLattice lattice_;
  std::vector<std::vector<int>> upper_;
  std::vector<std::vector<int>> lower_;
  std::vector<Face> faces_;
  std::vector<FourCell> cells_;
  // Per cover (lower * n + upper): face on the right of the upward dart
  // and on its left; -1 is the outer face.
  std::vector<int> right_face_;
  std::vector<int> left_face_;
  std::vector<int> left_boundary_;
  std::vector<int> right_boundary_;
  std::vector<int> sweep_rank_;
  Provenance provenance_;
};

/// Product of a (p+1)-chain (the left side) and a (q+1)-chain (the right
/// side). Bounds are named "0" and "1"; other elements get letters in
/// order of height, then left to right.
PlanarDiagram grid(int p, int q);

std::vector<FourCell> four_cells(const PlanarDiagram& diagram);
ShapeClass classify_shape(const PlanarDiagram& diagram);

/// Diagram labels used by grid(): "a".."z", "aa", "ab", ...
std::string letter_name(std::size_t k);

}  // namespace spsforge
