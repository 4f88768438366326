#include "spsforge/order.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "spsforge/error.hpp"

namespace spsforge {

namespace {

constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

template <typename F>
void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask != 0) {
    const int i = std::countr_zero(mask);
    f(i);
    mask &= mask - 1;
  }
}

std::string join_ids(const FiniteOrder& order, std::uint64_t mask) {
  std::string out;
  for_each_bit(mask, [&](int i) {
    if (!out.empty()) out += ", ";
    out += order.id(i);
  });
  return out;
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kNotTransitivelyReduced: return "NotTransitivelyReduced";
    case ErrorCode::kNoBounds: return "NoBounds";
    case ErrorCode::kNotALattice: return "NotALattice";
    case ErrorCode::kNotPlanar: return "NotPlanar";
    case ErrorCode::kInconsistentRotation: return "InconsistentRotation";
    case ErrorCode::kCellNotFound: return "CellNotFound";
    case ErrorCode::kInternalInvariantViolation:
      return "InternalInvariantViolation";
    case ErrorCode::kNotSPS: return "NotSPS";
    case ErrorCode::kInvalidTarget: return "InvalidTarget";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// FiniteOrder

FiniteOrder FiniteOrder::build(std::vector<ElementId> elements,
                               const std::vector<Cover>& covers) {
  std::unordered_map<ElementId, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].empty()) fail(ErrorCode::kInvalidArgument, "empty element id");
    if (!index.emplace(elements[i], static_cast<int>(i)).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate element id '" + elements[i] + "'");
    }
  }
  std::vector<IndexCover> indexed;
  indexed.reserve(covers.size());
  for (const auto& [lo, hi] : covers) {
    auto l = index.find(lo);
    auto h = index.find(hi);
    if (l == index.end()) fail(ErrorCode::kUnknownElement, "unknown element '" + lo + "'");
    if (h == index.end()) fail(ErrorCode::kUnknownElement, "unknown element '" + hi + "'");
    indexed.emplace_back(l->second, h->second);
  }
  return from_indices(std::move(elements), indexed);
}

FiniteOrder FiniteOrder::from_indices(std::vector<ElementId> elements,
                                      const std::vector<IndexCover>& covers) {
  const int n = static_cast<int>(elements.size());
  if (elements.size() > kMaxElements) {
    fail(ErrorCode::kTooLarge, "order has " + std::to_string(n) +
                                   " elements, the limit is " +
                                   std::to_string(kMaxElements));
  }
  FiniteOrder o;
  o.ids_ = std::move(elements);
  for (int i = 0; i < n; ++i) {
    if (o.ids_[i].empty()) fail(ErrorCode::kInvalidArgument, "empty element id");
    if (!o.index_.emplace(o.ids_[i], i).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate element id '" + o.ids_[i] + "'");
    }
  }
  o.upper_.assign(n, {});
  o.lower_.assign(n, {});
  std::vector<std::uint64_t> cover_up(n, 0);
  for (const auto& [lo, hi] : covers) {
    if (lo < 0 || hi < 0 || lo >= n || hi >= n) {
      fail(ErrorCode::kUnknownElement, "cover refers to an element out of range");
    }
    if (lo == hi) {
      fail(ErrorCode::kCycleDetected, "element '" + o.ids_[lo] + "' covers itself");
    }
    if (cover_up[lo] & bit(hi)) {
      fail(ErrorCode::kInvalidArgument, "duplicate cover (" + o.ids_[lo] + ", " +
                                            o.ids_[hi] + ")");
    }
    cover_up[lo] |= bit(hi);
    o.upper_[lo].push_back(hi);
    o.lower_[hi].push_back(lo);
    o.covers_.emplace_back(lo, hi);
  }
  for (auto& v : o.upper_) std::sort(v.begin(), v.end());
  for (auto& v : o.lower_) std::sort(v.begin(), v.end());
  std::sort(o.covers_.begin(), o.covers_.end());

  // Kahn's algorithm; anything left over sits on a cycle.
  std::vector<int> indegree(n);
  for (int i = 0; i < n; ++i) indegree[i] = static_cast<int>(o.lower_[i].size());
  std::vector<int> topo;
  topo.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) topo.push_back(i);
  }
  for (std::size_t k = 0; k < topo.size(); ++k) {
    for (int u : o.upper_[topo[k]]) {
      if (--indegree[u] == 0) topo.push_back(u);
    }
  }
  if (static_cast<int>(topo.size()) != n) {
    for (int i = 0; i < n; ++i) {
      if (indegree[i] > 0) {
        fail(ErrorCode::kCycleDetected,
             "cover relation has a cycle through '" + o.ids_[i] + "'");
      }
    }
  }

  o.up_.assign(n, 0);
  o.down_.assign(n, 0);
  o.height_.assign(n, 0);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int i = *it;
    o.up_[i] = bit(i);
    for (int u : o.upper_[i]) o.up_[i] |= o.up_[u];
  }
  for (int i : topo) {
    o.down_[i] = bit(i);
    for (int l : o.lower_[i]) {
      o.down_[i] |= o.down_[l];
      o.height_[i] = std::max(o.height_[i], o.height_[l] + 1);
    }
  }
  for (const auto& [lo, hi] : o.covers_) {
    for (int c : o.upper_[lo]) {
      if (c != hi && (o.up_[c] & bit(hi))) {
        fail(ErrorCode::kNotTransitivelyReduced,
             "cover (" + o.ids_[lo] + ", " + o.ids_[hi] + ") is implied by " +
                 o.ids_[lo] + " < " + o.ids_[c] + " < " + o.ids_[hi]);
      }
    }
  }
  return o;
}

std::optional<int> FiniteOrder::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteOrder::require_index(std::string_view id) const {
  auto i = index_of(id);
  if (!i) fail(ErrorCode::kUnknownElement, "unknown element '" + std::string(id) + "'");
  return *i;
}

bool FiniteOrder::is_cover(int lower, int upper) const {
  const auto& up = upper_[lower];
  return std::binary_search(up.begin(), up.end(), upper);
}

std::vector<int> FiniteOrder::minimal_elements() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(size()); ++i) {
    if (lower_[i].empty()) out.push_back(i);
  }
  return out;
}

std::vector<int> FiniteOrder::maximal_elements() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(size()); ++i) {
    if (upper_[i].empty()) out.push_back(i);
  }
  return out;
}

FiniteOrder FiniteOrder::induced(std::span<const int> members) const {
  std::vector<ElementId> ids;
  ids.reserve(members.size());
  for (int m : members) ids.push_back(ids_[m]);
  std::vector<IndexCover> covers;
  const int k = static_cast<int>(members.size());
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (!less(members[a], members[b])) continue;
      bool between = false;
      for (int c = 0; c < k && !between; ++c) {
        between = less(members[a], members[c]) && less(members[c], members[b]);
      }
      if (!between) covers.emplace_back(a, b);
    }
  }
  return from_indices(std::move(ids), covers);
}

// ---------------------------------------------------------------------------
// FiniteLattice

FiniteLattice FiniteLattice::build(const std::vector<Cover>& covers) {
  if (covers.empty()) fail(ErrorCode::kInvalidArgument, "cover list is empty");
  std::vector<ElementId> elements;
  std::unordered_set<ElementId> seen;
  for (const auto& [lo, hi] : covers) {
    if (seen.insert(lo).second) elements.push_back(lo);
    if (seen.insert(hi).second) elements.push_back(hi);
  }
  return build(std::move(elements), covers);
}

FiniteLattice FiniteLattice::build(std::vector<ElementId> elements,
                                   const std::vector<Cover>& covers) {
  return from_order(FiniteOrder::build(std::move(elements), covers));
}

FiniteLattice FiniteLattice::from_order(FiniteOrder order) {
  const int n = static_cast<int>(order.size());
  if (n == 0) fail(ErrorCode::kNoBounds, "empty order has no bounds");
  const auto mins = order.minimal_elements();
  const auto maxs = order.maximal_elements();
  if (mins.size() != 1) {
    fail(ErrorCode::kNoBounds, "no unique least element (" +
                                   std::to_string(mins.size()) + " minimal elements)");
  }
  if (maxs.size() != 1) {
    fail(ErrorCode::kNoBounds, "no unique greatest element (" +
                                   std::to_string(maxs.size()) + " maximal elements)");
  }

  FiniteLattice l;
  l.bottom_ = mins.front();
  l.top_ = maxs.front();
  l.meet_.assign(static_cast<std::size_t>(n) * n, 0);
  l.join_.assign(static_cast<std::size_t>(n) * n, 0);

  std::vector<int> down_size(n), up_size(n);
  for (int i = 0; i < n; ++i) {
    down_size[i] = std::popcount(order.down_mask(i));
    up_size[i] = std::popcount(order.up_mask(i));
  }

  // The glb is the common lower bound whose down-set is the whole common
  // lower set; dually for the lub.
  auto bound = [&](std::uint64_t common, bool lower, int a, int b) {
    int best = -1;
    for_each_bit(common, [&](int c) {
      const int sz = lower ? down_size[c] : up_size[c];
      if (best < 0 || sz > (lower ? down_size[best] : up_size[best])) best = c;
    });
    const std::uint64_t got = lower ? order.down_mask(best) : order.up_mask(best);
    if (got != common) {
      // Report the maximal lower (minimal upper) bounds.
      std::uint64_t extremal = 0;
      for_each_bit(common, [&](int c) {
        const std::uint64_t beyond =
            (lower ? order.up_mask(c) : order.down_mask(c)) & common & ~bit(c);
        if (beyond == 0) extremal |= bit(c);
      });
      fail(ErrorCode::kNotALattice,
           "pair (" + order.id(a) + ", " + order.id(b) + ") has no " +
               (lower ? "greatest lower bound; maximal lower bounds: "
                      : "least upper bound; minimal upper bounds: ") +
               join_ids(order, extremal));
    }
    return best;
  };

  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const int m = bound(order.down_mask(a) & order.down_mask(b), true, a, b);
      const int j = bound(order.up_mask(a) & order.up_mask(b), false, a, b);
      l.meet_[a * n + b] = l.meet_[b * n + a] = static_cast<std::uint8_t>(m);
      l.join_[a * n + b] = l.join_[b * n + a] = static_cast<std::uint8_t>(j);
    }
  }
  l.order_ = std::move(order);
  return l;
}

// ---------------------------------------------------------------------------
// Predicates

bool is_distributive(const FiniteLattice& l) {
  const int n = static_cast<int>(l.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_semimodular(const FiniteLattice& l) {
  const int n = static_cast<int>(l.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (l.is_cover(l.meet(a, b), a) && !l.is_cover(b, l.join(a, b))) {
        return false;
      }
    }
  }
  return true;
}

bool is_slim(const FiniteLattice& l) {
  const int n = static_cast<int>(l.size());
  const auto& order = l.order();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (order.comparable(a, b)) continue;
      const int m = l.meet(a, b);
      const int j = l.join(a, b);
      for (int c = b + 1; c < n; ++c) {
        if (order.comparable(a, c) || order.comparable(b, c)) continue;
        if (l.meet(a, c) == m && l.meet(b, c) == m && l.join(a, c) == j &&
            l.join(b, c) == j) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<int> join_irreducibles(const FiniteLattice& l) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(l.size()); ++i) {
    if (l.lower_covers(i).size() == 1) out.push_back(i);
  }
  return out;
}

FiniteOrder join_irreducible_order(const FiniteLattice& l) {
  const auto ji = join_irreducibles(l);
  return l.order().induced(ji);
}

FiniteLattice down_set_lattice(const FiniteOrder& order) {
  const int n = static_cast<int>(order.size());
  std::vector<int> linear(n);
  std::iota(linear.begin(), linear.end(), 0);
  std::stable_sort(linear.begin(), linear.end(),
                   [&](int a, int b) { return order.height(a) < order.height(b); });

  std::vector<std::uint64_t> sets;
  std::function<void(int, std::uint64_t)> extend = [&](int k, std::uint64_t set) {
    if (k == n) {
      if (sets.size() >= kMaxElements) {
        fail(ErrorCode::kTooLarge, "down-set lattice exceeds " +
                                       std::to_string(kMaxElements) + " elements");
      }
      sets.push_back(set);
      return;
    }
    const int x = linear[k];
    extend(k + 1, set);
    const std::uint64_t below = order.down_mask(x) & ~bit(x);
    if ((below & set) == below) extend(k + 1, set | bit(x));
  };
  extend(0, 0);

  std::sort(sets.begin(), sets.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    // Lexicographic on member indices: the smaller set holds the lowest
    // differing index.
    const std::uint64_t diff = a ^ b;
    return diff != 0 && (a & (diff & (~diff + 1))) != 0;
  });

  std::vector<ElementId> ids;
  for (std::uint64_t s : sets) {
    std::string id = "{";
    bool first = true;
    for_each_bit(s, [&](int i) {
      if (!first) id += ",";
      id += order.id(i);
      first = false;
    });
    ids.push_back(id + "}");
  }
  std::vector<IndexCover> covers;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const std::uint64_t extra = sets[b] & ~sets[a];
      if ((sets[a] & ~sets[b]) == 0 && std::popcount(extra) == 1) {
        covers.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  return FiniteLattice::from_order(FiniteOrder::from_indices(std::move(ids), covers));
}

std::optional<std::vector<int>> order_isomorphic(const FiniteOrder& p,
                                                 const FiniteOrder& q) {
  const int n = static_cast<int>(p.size());
  if (q.size() != p.size() || p.covers().size() != q.covers().size()) {
    return std::nullopt;
  }
  if (canonical_key(p) != canonical_key(q)) return std::nullopt;

  auto invariant = [](const FiniteOrder& o, int i) {
    return std::tuple(o.height(i), o.upper_covers(i).size(), o.lower_covers(i).size(),
                      std::popcount(o.down_mask(i)), std::popcount(o.up_mask(i)));
  };
  std::vector<int> map(n, -1);
  std::uint64_t used = 0;
  std::function<bool(int)> place = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used & bit(j)) continue;
      if (invariant(p, i) != invariant(q, j)) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        ok = p.leq(k, i) == q.leq(map[k], j) && p.leq(i, k) == q.leq(j, map[k]);
      }
      if (!ok) continue;
      map[i] = j;
      used |= bit(j);
      if (place(i + 1)) return true;
      used &= ~bit(j);
      map[i] = -1;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return map;
}

std::string canonical_key(const FiniteLattice& lattice) {
  return canonical_key(lattice.order());
}

}  // namespace spsforge
