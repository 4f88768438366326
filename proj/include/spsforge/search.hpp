#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spsforge/congruence.hpp"
#include "spsforge/diagram.hpp"
#include "spsforge/order.hpp"

namespace spsforge {

struct SearchBounds {
  /// Fork cap for grid(1,1).
  int max_forks = 0;
  /// Fork cap for every other grid; defaults to max_forks.
  std::optional<int> max_forks_large;
  std::size_t max_elements = kMaxElements;
  int grid_max_p = 1;
  int grid_max_q = 1;
  bool prune_on_ji_count = true;

  int cap_for(int p, int q) const {
    return p == 1 && q == 1 ? max_forks : max_forks_large.value_or(max_forks);
  }
};

struct RunOptions {
  /// 0 picks SPSFORGE_THREADS, then the hardware concurrency.
  int threads = 0;
  /// Empty disables checkpointing.
  std::string checkpoint_path;
  /// Parents expanded between checkpoints.
  std::size_t checkpoint_every = 256;
  bool resume = false;
};

/// Worker count for a run: an explicit request wins, otherwise the
/// hardware concurrency; SPSFORGE_THREADS caps either.
int resolve_threads(int requested);

struct TargetOrder {
  std::string name;
  FiniteOrder order;
};

/// The order of join-irreducibles of D_8: epsilon < gamma, delta < alpha, beta.
TargetOrder p_d8();

struct EnumerationBase {
  PlanarDiagram diagram;
  int max_forks = 0;
};

struct EnumerationLimits {
  std::size_t max_elements = kMaxElements;
  /// Drop lattices with more join-irreducible congruences than this.
  std::optional<std::size_t> prune_above_ji;
};

/// One emitted lattice. References are valid during the visitor call.
struct Enumerated {
  const PlanarDiagram& diagram;
  const std::string& key;
  const FiniteOrder& ji_order;
  std::uint64_t congruence_count;
  int forks;
};

struct EnumerationStats {
  std::size_t explored = 0;
  std::size_t pruned = 0;
  std::size_t truncated_by_elements = 0;
  std::size_t at_fork_cap = 0;
  std::size_t insertions = 0;
  std::size_t tight_insertions = 0;
  std::size_t wide_insertions = 0;
  std::size_t count_law_violations = 0;
  std::size_t cc1_violations = 0;
  std::size_t cc2_violations = 0;
  /// Emitted lattices by number of forks.
  std::vector<std::size_t> per_stratum;
  /// False when the visitor stopped the run.
  bool completed = false;
  int threads = 1;
};

/// Return false to stop the enumeration.
using Visitor = std::function<bool(const Enumerated&)>;

/// Breadth-first fork insertion at every 4-cell, one stratum per fork
/// count. Children are deduplicated by canonical key; each stratum is
/// emitted sorted by (size, key), independent of the thread count.
EnumerationStats enumerate(const std::vector<EnumerationBase>& bases,
                           const EnumerationLimits& limits, const RunOptions& options,
                           const Visitor& visit);

/// grid(p, q) for p <= p_max, q <= q_max, one of each mirror pair, skipping
/// grids larger than max_elements.
std::vector<EnumerationBase> grid_bases(const SearchBounds& bounds);

struct Witness {
  PlanarDiagram diagram;
  int forks = 0;
  /// Target element i corresponds to ji-order element isomorphism[i].
  std::vector<int> isomorphism;
};

struct SearchReport {
  TargetOrder target;
  SearchBounds bounds;
  std::vector<std::string> bases;
  EnumerationStats stats;
  std::optional<Witness> witness;
  bool exhausted = false;
  double wall_seconds = 0.0;
};

/// Throws kInvalidTarget for an empty target.
SearchReport search_representation(const TargetOrder& target, const SearchBounds& bounds,
                                   const RunOptions& options = {});

struct CountLawReplay {
  std::size_t steps = 0;
  std::size_t violations = 0;
  /// The replayed script rebuilds a lattice with the same canonical key.
  bool reproduces = false;
};

struct VerificationReport {
  std::size_t ji_count = 0;
  std::uint64_t congruence_count = 0;
  FiniteOrder ji_order;
  ConditionCheck cc1;
  ConditionCheck cc2;
  /// Present when the provenance names a grid base.
  std::optional<CountLawReplay> replay;
};

/// Throws kNotSPS unless the lattice is semimodular and slim.
VerificationReport verify_necessary_conditions(const PlanarDiagram& diagram);

/// Parses "grid:PxQ".
std::optional<std::pair<int, int>> parse_grid_label(const std::string& label);

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex);

}  // namespace spsforge
