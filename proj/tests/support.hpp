// Shared fixtures and brute-force oracles for the test suites. The oracles
// never call the congruence closure or the isomorphism search.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "spsforge/congruence.hpp"
#include "spsforge/diagram.hpp"
#include "spsforge/error.hpp"
#include "spsforge/fork.hpp"
#include "spsforge/order.hpp"

namespace spsforge::testing {

inline FiniteLattice boolean_square() {
  return FiniteLattice::build({{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}});
}

inline FiniteLattice m3() {
  return FiniteLattice::build(
      {{"0", "a"}, {"0", "b"}, {"0", "c"}, {"a", "1"}, {"b", "1"}, {"c", "1"}});
}

inline FiniteLattice n5() {
  return FiniteLattice::build({{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "c"}, {"c", "1"}});
}

inline FiniteLattice chain(int length) {
  std::vector<Cover> covers;
  for (int i = 0; i < length; ++i) {
    covers.emplace_back("x" + std::to_string(i), "x" + std::to_string(i + 1));
  }
  return FiniteLattice::build(covers);
}

inline FiniteOrder antichain(int k) {
  std::vector<ElementId> ids;
  for (int i = 0; i < k; ++i) ids.push_back("p" + std::to_string(i));
  return FiniteOrder::build(ids, {});
}

/// L_1: the fork inserted into the single cell of grid(1,1).
inline PlanarDiagram l1() { return insert_fork(grid(1, 1), grid(1, 1).cells().at(0)).first; }

/// Hand-written N7 with the labels o, aL, aR, cL, cR, m, t.
inline PlanarDiagram n7_by_hand() {
  return PlanarDiagram::build(
      {"o", "aL", "aR", "cL", "m", "cR", "t"},
      {{"o", "aL"}, {"o", "aR"}, {"aL", "cL"}, {"aL", "m"}, {"aR", "m"}, {"aR", "cR"},
       {"cL", "t"}, {"m", "t"}, {"cR", "t"}},
      {{"o", {"aL", "aR"}}, {"aL", {"cL", "m"}}, {"aR", {"m", "cR"}}},
      {{"t", {"cL", "m", "cR"}}, {"m", {"aL", "aR"}}});
}

/// All naturally labelled orders on n elements (i < j in the order implies
/// i < j as integers); every order appears at least once up to isomorphism.
inline std::vector<FiniteOrder> naturally_labelled_orders(int n) {
  std::vector<FiniteOrder> out;
  std::vector<std::uint64_t> down(n, 0);
  std::function<void(int)> place = [&](int j) {
    if (j == n) {
      std::vector<ElementId> ids;
      for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
      std::vector<IndexCover> covers;
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
          if (!((down[b] >> a) & 1U)) continue;
          bool between = false;
          for (int c = a + 1; c < b && !between; ++c) {
            between = ((down[b] >> c) & 1U) && ((down[c] >> a) & 1U);
          }
          if (!between) covers.emplace_back(a, b);
        }
      }
      out.push_back(FiniteOrder::from_indices(ids, covers));
      return;
    }
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << j); ++s) {
      bool closed = true;
      for (int i = 0; i < j && closed; ++i) {
        if ((s >> i) & 1U) closed = (down[i] & ~s) == 0;
      }
      if (!closed) continue;
      down[j] = s;
      place(j + 1);
    }
  };
  place(0);
  return out;
}

inline bool brute_isomorphic(const FiniteOrder& p, const FiniteOrder& q) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(q.size()) != n) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      for (int b = 0; b < n && ok; ++b) ok = p.leq(a, b) == q.leq(perm[a], perm[b]);
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Plain backtracking isomorphism test for orders too large for
/// brute_isomorphic: extend a partial map while it preserves <= both ways.
inline bool backtrack_isomorphic(const FiniteOrder& p, const FiniteOrder& q) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(q.size()) != n || p.covers().size() != q.covers().size()) return false;
  auto profile = [](const FiniteOrder& o, int i) {
    return std::tuple(o.height(i), o.upper_covers(i).size(), o.lower_covers(i).size());
  };
  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> place = [&](int a) {
    if (a == n) return true;
    for (int b = 0; b < n; ++b) {
      if (used[b] || profile(p, a) != profile(q, b)) continue;
      bool ok = true;
      for (int c = 0; c < a && ok; ++c) {
        ok = p.leq(c, a) == q.leq(image[c], b) && p.leq(a, c) == q.leq(b, image[c]);
      }
      if (!ok) continue;
      image[a] = b;
      used[b] = true;
      if (place(a + 1)) return true;
      used[b] = false;
    }
    return false;
  };
  return place(0);
}

/// The order relabelled by `perm` (element i becomes position perm[i]).
inline FiniteOrder relabel(const FiniteOrder& o, const std::vector<int>& perm) {
  const int n = static_cast<int>(o.size());
  std::vector<ElementId> ids(n);
  for (int i = 0; i < n; ++i) ids[perm[i]] = o.id(i);
  std::vector<IndexCover> covers;
  for (const auto& [a, b] : o.covers()) covers.emplace_back(perm[a], perm[b]);
  std::shuffle(covers.begin(), covers.end(), std::mt19937(static_cast<unsigned>(n)));
  return FiniteOrder::from_indices(ids, covers);
}

/// Every congruence of a small lattice: filter all set partitions.
inline std::vector<Congruence> all_congruences(const FiniteLattice& l) {
  const int n = static_cast<int>(l.size());
  std::vector<Congruence> out;
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> grow = [&](int i, int used) {
    if (i == n) {
      auto c = Congruence::from_labels(rgs);
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) {
        for (int y = x + 1; y < n && ok; ++y) {
          if (rgs[x] != rgs[y]) continue;
          for (int z = 0; z < n && ok; ++z) {
            ok = rgs[l.meet(x, z)] == rgs[l.meet(y, z)] &&
                 rgs[l.join(x, z)] == rgs[l.join(y, z)];
          }
        }
      }
      if (ok) out.push_back(c);
      return;
    }
    for (int c = 0; c <= used; ++c) {
      rgs[i] = c;
      grow(i + 1, std::max(used, c + 1));
    }
  };
  if (n > 0) {
    rgs[0] = 0;
    grow(1, 1);
  }
  return out;
}

/// Least congruence collapsing a and b, as the meet of all congruences that
/// collapse them.
inline Congruence brute_least(const std::vector<Congruence>& all, int a, int b, std::size_t n) {
  std::vector<int> labels(n, 0);
  Congruence acc = Congruence::from_labels(labels);
  for (const auto& c : all) {
    if (c.same(a, b)) acc = acc.intersect(c);
  }
  return acc;
}

/// Lattices on up to `max_n` elements, one per isomorphism class, obtained
/// by adding bounds to every order on max_n - 2 elements or fewer.
inline std::vector<FiniteLattice> small_lattices(int max_n) {
  std::vector<FiniteLattice> out;
  std::vector<std::string> keys;
  out.push_back(FiniteLattice::from_order(FiniteOrder::build({"0"}, {})));
  keys.push_back(canonical_key(out.back()));
  for (int k = 0; k + 2 <= max_n; ++k) {
    for (const auto& middle : naturally_labelled_orders(k)) {
      std::vector<ElementId> ids{"0"};
      for (const auto& id : middle.ids()) ids.push_back(id);
      ids.push_back("1");
      std::vector<IndexCover> covers;
      for (const auto& [a, b] : middle.covers()) covers.emplace_back(a + 1, b + 1);
      for (int i = 0; i < k; ++i) {
        if (middle.lower_covers(i).empty()) covers.emplace_back(0, i + 1);
        if (middle.upper_covers(i).empty()) covers.emplace_back(i + 1, k + 1);
      }
      if (k == 0) covers.emplace_back(0, 1);
      try {
        auto l = FiniteLattice::from_order(FiniteOrder::from_indices(ids, covers));
        auto key = canonical_key(l);
        if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
        keys.push_back(key);
        out.push_back(std::move(l));
      } catch (const Error&) {
      }
    }
  }
  return out;
}

}  // namespace spsforge::testing
