#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spsforge {

using ElementId = std::string;
using Cover = std::pair<ElementId, ElementId>;
using IndexCover = std::pair<int, int>;

// Down/up sets are kept as 64-bit masks, which caps every order and lattice.
inline constexpr std::size_t kMaxElements = 64;

/// A finite order given by its cover relation. Elements keep the order in
/// which they were supplied; all algorithms work on those dense indices.
class FiniteOrder {
 public:
  FiniteOrder() = default;

  /// Validates that `covers` is acyclic and transitively reduced.
  static FiniteOrder build(std::vector<ElementId> elements,
                           const std::vector<Cover>& covers);
  static FiniteOrder from_indices(std::vector<ElementId> elements,
                                  const std::vector<IndexCover>& covers);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::vector<ElementId>& ids() const { return ids_; }
  const ElementId& id(int i) const { return ids_[i]; }
  std::optional<int> index_of(std::string_view id) const;
  /// Throws kUnknownElement.
  int require_index(std::string_view id) const;

  std::span<const int> upper_covers(int i) const { return upper_[i]; }
  std::span<const int> lower_covers(int i) const { return lower_[i]; }
  /// Sorted by (lower, upper) index.
  const std::vector<IndexCover>& covers() const { return covers_; }

  bool leq(int a, int b) const { return (down_[b] >> a) & 1U; }
  bool less(int a, int b) const { return a != b && leq(a, b); }
  bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }
  bool is_cover(int lower, int upper) const;

  /// Elements below (resp. above) `i`, including `i`.
  std::uint64_t down_mask(int i) const { return down_[i]; }
  std::uint64_t up_mask(int i) const { return up_[i]; }

  /// Length of the longest chain from a minimal element up to `i`.
  int height(int i) const { return height_[i]; }

  std::vector<int> minimal_elements() const;
  std::vector<int> maximal_elements() const;

  /// The suborder induced on `members` (in that order), reduced to covers.
  FiniteOrder induced(std::span<const int> members) const;

 private:
  std::vector<ElementId> ids_;
  std::unordered_map<ElementId, int> index_;
  std::vector<std::vector<int>> upper_;
  std::vector<std::vector<int>> lower_;
  std::vector<IndexCover> covers_;
  std::vector<std::uint64_t> down_;
  std::vector<std::uint64_t> up_;
  std::vector<int> height_;
};

/// A finite lattice with precomputed meet and join tables.
class FiniteLattice {
 public:
  FiniteLattice() = default;

  /// Elements are taken in order of first appearance in `covers`.
  static FiniteLattice build(const std::vector<Cover>& covers);
  static FiniteLattice build(std::vector<ElementId> elements,
                             const std::vector<Cover>& covers);
  static FiniteLattice from_order(FiniteOrder order);

  const FiniteOrder& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  const ElementId& id(int i) const { return order_.id(i); }
  int index(std::string_view id) const { return order_.require_index(id); }

  int bottom() const { return bottom_; }
  int top() const { return top_; }
  int meet(int a, int b) const { return meet_[a * size() + b]; }
  int join(int a, int b) const { return join_[a * size() + b]; }
  bool leq(int a, int b) const { return order_.leq(a, b); }
  bool is_cover(int lower, int upper) const {
    return order_.is_cover(lower, upper);
  }
  std::span<const int> upper_covers(int i) const {
    return order_.upper_covers(i);
  }
  std::span<const int> lower_covers(int i) const {
    return order_.lower_covers(i);
  }
  const std::vector<IndexCover>& covers() const { return order_.covers(); }

 private:
  FiniteOrder order_;
  std::vector<std::uint8_t> meet_;
  std::vector<std::uint8_t> join_;
  int bottom_ = 0;
  int top_ = 0;
};

bool is_distributive(const FiniteLattice& lattice);
bool is_semimodular(const FiniteLattice& lattice);
/// No M3 sublattice.
bool is_slim(const FiniteLattice& lattice);

/// Elements with exactly one lower cover, in index order.
std::vector<int> join_irreducibles(const FiniteLattice& lattice);
/// Join-irreducibles with the order induced from the lattice.
FiniteOrder join_irreducible_order(const FiniteLattice& lattice);

/// Down-sets of `order` ordered by inclusion. Elements are named by their
/// members, e.g. "{}" or "{e,g}".
FiniteLattice down_set_lattice(const FiniteOrder& order);

/// A cover-preserving bijection from `p` to `q` (indexed by `p`), the
/// lexicographically least one in index order, or nothing.
std::optional<std::vector<int>> order_isomorphic(const FiniteOrder& p,
                                                 const FiniteOrder& q);

/// Isomorphism-invariant byte string: equal iff isomorphic.
std::string canonical_key(const FiniteOrder& order);
std::string canonical_key(const FiniteLattice& lattice);

/// Relabeling used by canonical_key: position of each element in the
/// canonical form.
std::vector<int> canonical_labeling(const FiniteOrder& order);

}  // namespace spsforge
