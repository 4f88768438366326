#include "spsforge/congruence.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <unordered_map>

#include "spsforge/error.hpp"

namespace spsforge {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Congruence

Congruence Congruence::identity(std::size_t n) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels);
}

Congruence Congruence::from_labels(const std::vector<int>& labels) {
  Congruence c;
  c.labels_.resize(labels.size());
  std::unordered_map<int, int> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = renumber.emplace(labels[i], static_cast<int>(renumber.size()));
    c.labels_[i] = it->second;
  }
  c.classes_ = static_cast<int>(renumber.size());
  return c;
}

std::vector<std::vector<int>> Congruence::classes() const {
  std::vector<std::vector<int>> out(classes_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out[labels_[i]].push_back(static_cast<int>(i));
  }
  return out;
}

bool Congruence::refines(const Congruence& other) const {
  std::vector<int> image(classes_, -1);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int& img = image[labels_[i]];
    if (img < 0) {
      img = other.labels_[i];
    } else if (img != other.labels_[i]) {
      return false;
    }
  }
  return true;
}

Congruence Congruence::intersect(const Congruence& other) const {
  std::map<std::pair<int, int>, int> pairs;
  std::vector<int> labels(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, _] = pairs.emplace(std::pair(labels_[i], other.labels_[i]),
                                 static_cast<int>(pairs.size()));
    labels[i] = it->second;
  }
  return from_labels(labels);
}

Congruence principal_congruence(const FiniteLattice& lattice, int a, int b) {
  const int n = static_cast<int>(lattice.size());
  if (a < 0 || b < 0 || a >= n || b >= n) {
    fail(ErrorCode::kUnknownElement, "principal congruence of an element out of range");
  }
  UnionFind uf(n);
  std::vector<std::pair<int, int>> work{{a, b}};
  while (!work.empty()) {
    const auto [x, y] = work.back();
    work.pop_back();
    if (!uf.unite(x, y)) continue;
    for (int z = 0; z < n; ++z) {
      const int mx = lattice.meet(x, z), my = lattice.meet(y, z);
      if (mx != my) work.emplace_back(mx, my);
      const int jx = lattice.join(x, z), jy = lattice.join(y, z);
      if (jx != jy) work.emplace_back(jx, jy);
    }
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = uf.find(i);
  return Congruence::from_labels(labels);
}

bool is_compatible(const FiniteLattice& lattice, const Congruence& theta) {
  const int n = static_cast<int>(lattice.size());
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (!theta.same(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (!theta.same(lattice.meet(x, z), lattice.meet(y, z)) ||
            !theta.same(lattice.join(x, z), lattice.join(y, z))) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Join-irreducible congruences

int EdgeColoring::color_of(int lower, int upper) const {
  auto it = std::lower_bound(covers.begin(), covers.end(), IndexCover{lower, upper});
  if (it == covers.end() || *it != IndexCover{lower, upper}) return -1;
  return colors[it - covers.begin()];
}

CongruenceStructure ji_congruence_order(const FiniteLattice& lattice) {
  const auto& covers = lattice.covers();
  const int edges = static_cast<int>(covers.size());
  auto edge = [&](int lo, int hi) {
    auto it = std::lower_bound(covers.begin(), covers.end(), IndexCover{lo, hi});
    return static_cast<int>(it - covers.begin());
  };

  // Opposite sides of a covering square are perspective and generate the
  // same congruence, so one closure per perspectivity class suffices.
  UnionFind sides(edges);
  for (int o = 0; o < static_cast<int>(lattice.size()); ++o) {
    const auto up = lattice.upper_covers(o);
    for (std::size_t i = 0; i < up.size(); ++i) {
      for (std::size_t j = i + 1; j < up.size(); ++j) {
        const int t = lattice.join(up[i], up[j]);
        if (!lattice.is_cover(up[i], t) || !lattice.is_cover(up[j], t)) continue;
        sides.unite(edge(o, up[i]), edge(up[j], t));
        sides.unite(edge(o, up[j]), edge(up[i], t));
      }
    }
  }

  CongruenceStructure out;
  out.coloring.covers = covers;
  out.coloring.colors.assign(edges, -1);
  std::vector<int> class_color(edges, -1);
  std::map<Congruence, int> seen;
  for (int c = 0; c < edges; ++c) {
    const int root = sides.find(c);
    if (class_color[root] < 0) {
      auto theta = principal_congruence(lattice, covers[c].first, covers[c].second);
      auto [it, fresh] = seen.emplace(std::move(theta), static_cast<int>(seen.size()));
      if (fresh) out.ji.members.push_back(it->first);
      class_color[root] = it->second;
    }
    out.coloring.colors[c] = class_color[root];
  }

  const int k = static_cast<int>(out.ji.members.size());
  std::vector<ElementId> ids;
  for (int i = 0; i < k; ++i) ids.push_back("c" + std::to_string(i));
  std::vector<std::vector<bool>> below(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      below[i][j] = i != j && out.ji.members[i].refines(out.ji.members[j]);
    }
  }
  std::vector<IndexCover> order_covers;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (!below[i][j]) continue;
      bool between = false;
      for (int m = 0; m < k && !between; ++m) between = below[i][m] && below[m][j];
      if (!between) order_covers.emplace_back(i, j);
    }
  }
  out.ji.order = FiniteOrder::from_indices(std::move(ids), order_covers);
  out.ji.congruence_count = count_down_sets(out.ji.order);
  return out;
}

std::uint64_t count_down_sets(const FiniteOrder& order) {
  std::unordered_map<std::uint64_t, std::uint64_t> memo;
  auto count = [&](auto&& self, std::uint64_t set) -> std::uint64_t {
    if (set == 0) return 1;
    if (auto it = memo.find(set); it != memo.end()) return it->second;
    const int x = 63 - std::countl_zero(set);
    const std::uint64_t r =
        self(self, set & ~order.up_mask(x)) + self(self, set & ~order.down_mask(x));
    memo.emplace(set, r);
    return r;
  };
  const std::size_t n = order.size();
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return count(count, all);
}

std::vector<int> square_palette(const PlanarDiagram& diagram, const FourCell& cell,
                                const EdgeColoring& coloring) {
  if (!diagram.find_cell(cell)) {
    fail(ErrorCode::kCellNotFound, "square is not a 4-cell of the diagram");
  }
  std::vector<int> colors{coloring.color_of(cell.bottom, cell.left),
                          coloring.color_of(cell.bottom, cell.right),
                          coloring.color_of(cell.left, cell.top),
                          coloring.color_of(cell.right, cell.top)};
  if (std::find(colors.begin(), colors.end(), -1) != colors.end()) {
    fail(ErrorCode::kInvalidArgument, "coloring does not belong to this diagram");
  }
  std::sort(colors.begin(), colors.end());
  colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
  return colors;
}

ConditionCheck check_cc1(const FiniteOrder& order) {
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    if (order.upper_covers(i).size() > 2) return {false, i};
  }
  return {};
}

ConditionCheck check_cc2(const FiniteOrder& order) {
  std::uint64_t maximal = 0;
  for (int m : order.maximal_elements()) maximal |= std::uint64_t{1} << m;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    if (!order.upper_covers(i).empty() && std::popcount(order.up_mask(i) & maximal) < 2) {
      return {false, i};
    }
  }
  return {};
}

}  // namespace spsforge
