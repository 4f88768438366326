#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spsforge/diagram.hpp"
#include "spsforge/order.hpp"

namespace spsforge {

/// A partition of lattice elements. Class labels are normalised to first
/// appearance in element order, so equal partitions compare equal.
class Congruence {
 public:
  Congruence() = default;
  static Congruence identity(std::size_t n);
  static Congruence from_labels(const std::vector<int>& labels);

  std::size_t size() const { return labels_.size(); }
  int class_count() const { return classes_; }
  int class_of(int x) const { return labels_[x]; }
  bool same(int a, int b) const { return labels_[a] == labels_[b]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<std::vector<int>> classes() const;

  /// Every class of *this lies inside a class of `other`.
  bool refines(const Congruence& other) const;
  /// Common refinement.
  Congruence intersect(const Congruence& other) const;

  friend bool operator==(const Congruence&, const Congruence&) = default;
  friend auto operator<=>(const Congruence& a, const Congruence& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  std::vector<int> labels_;
  int classes_ = 0;
};

/// The least congruence collapsing a and b.
Congruence principal_congruence(const FiniteLattice& lattice, int a, int b);

bool is_compatible(const FiniteLattice& lattice, const Congruence& theta);

/// Join-irreducible congruences ordered by refinement. Member k is the
/// colour "c<k>"; colours are numbered by first appearance along the
/// sorted cover list.
struct JiOrder {
  std::vector<Congruence> members;
  FiniteOrder order;
  /// Number of down-sets of `order`, i.e. |Con L|.
  std::uint64_t congruence_count = 0;

  std::size_t size() const { return members.size(); }
};

/// Colour of every cover, aligned with FiniteLattice::covers().
struct EdgeColoring {
  std::vector<IndexCover> covers;
  std::vector<int> colors;

  /// -1 when (lower, upper) is not a cover.
  int color_of(int lower, int upper) const;
};

struct CongruenceStructure {
  JiOrder ji;
  EdgeColoring coloring;
};

CongruenceStructure ji_congruence_order(const FiniteLattice& lattice);

std::uint64_t count_down_sets(const FiniteOrder& order);

/// Sorted distinct colours on the four edges of `cell`.
std::vector<int> square_palette(const PlanarDiagram& diagram, const FourCell& cell,
                                const EdgeColoring& coloring);

struct ConditionCheck {
  bool holds = true;
  std::optional<int> offender;
};

/// Every element has at most two upper covers.
ConditionCheck check_cc1(const FiniteOrder& order);
/// Every nonmaximal element lies below at least two maximal elements.
ConditionCheck check_cc2(const FiniteOrder& order);

}  // namespace spsforge
