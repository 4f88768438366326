#include "spsforge/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "spsforge/error.hpp"

namespace spsforge {

namespace {

bool same_members(std::vector<int> a, std::span<const int> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  return std::equal(a.begin(), a.end(), b.begin());
}

std::vector<int> resolve(const FiniteLattice& lattice, const RotationMap& map,
                         int element, std::span<const int> expected,
                         const char* which) {
  const ElementId& id = lattice.id(element);
  auto it = map.find(id);
  if (it == map.end()) {
    if (expected.size() <= 1) return {expected.begin(), expected.end()};
    fail(ErrorCode::kInconsistentRotation,
         std::string(which) + " order missing for '" + id + "'");
  }
  std::vector<int> out;
  for (const auto& name : it->second) {
    auto idx = lattice.order().index_of(name);
    if (!idx) {
      fail(ErrorCode::kInconsistentRotation, std::string(which) + " order of '" + id +
                                                 "' names unknown element '" + name + "'");
    }
    out.push_back(*idx);
  }
  return out;
}

}  // namespace

PlanarDiagram PlanarDiagram::build(std::vector<ElementId> elements,
                                   const std::vector<Cover>& covers,
                                   const RotationMap& upper_order,
                                   const RotationMap& lower_order) {
  FiniteLattice lattice = FiniteLattice::build(std::move(elements), covers);
  for (const auto* map : {&upper_order, &lower_order}) {
    for (const auto& [id, _] : *map) {
      if (!lattice.order().index_of(id)) {
        fail(ErrorCode::kInconsistentRotation,
             "rotation order given for unknown element '" + id + "'");
      }
    }
  }
  const int n = static_cast<int>(lattice.size());
  std::vector<std::vector<int>> upper(n), lower(n);
  for (int i = 0; i < n; ++i) {
    upper[i] = resolve(lattice, upper_order, i, lattice.upper_covers(i), "upper");
    lower[i] = resolve(lattice, lower_order, i, lattice.lower_covers(i), "lower");
  }
  return from_rotation(std::move(lattice), std::move(upper), std::move(lower));
}

PlanarDiagram PlanarDiagram::from_rotation(FiniteLattice lattice,
                                           std::vector<std::vector<int>> upper_order,
                                           std::vector<std::vector<int>> lower_order) {
  const int n = static_cast<int>(lattice.size());
  if (static_cast<int>(upper_order.size()) != n ||
      static_cast<int>(lower_order.size()) != n) {
    fail(ErrorCode::kInconsistentRotation, "rotation system does not cover every element");
  }
  for (int i = 0; i < n; ++i) {
    if (!same_members(upper_order[i], lattice.upper_covers(i))) {
      fail(ErrorCode::kInconsistentRotation,
           "upper order of '" + lattice.id(i) + "' is not a permutation of its upper covers");
    }
    if (!same_members(lower_order[i], lattice.lower_covers(i))) {
      fail(ErrorCode::kInconsistentRotation,
           "lower order of '" + lattice.id(i) + "' is not a permutation of its lower covers");
    }
  }
  PlanarDiagram d;
  d.lattice_ = std::move(lattice);
  d.upper_ = std::move(upper_order);
  d.lower_ = std::move(lower_order);
  d.derive_faces();
  return d;
}

void PlanarDiagram::derive_faces() {
  const int n = static_cast<int>(size());
  const auto& covers = lattice_.covers();
  const int edges = static_cast<int>(covers.size());

  // Clockwise neighbour cycle: upper covers left to right, then lower
  // covers right to left.
  std::vector<std::vector<int>> cw(n);
  std::vector<int> position(static_cast<std::size_t>(n) * n, -1);
  for (int v = 0; v < n; ++v) {
    cw[v] = upper_[v];
    cw[v].insert(cw[v].end(), lower_[v].rbegin(), lower_[v].rend());
    for (int k = 0; k < static_cast<int>(cw[v].size()); ++k) position[v * n + cw[v][k]] = k;
  }
  std::vector<int> cover_index(static_cast<std::size_t>(n) * n, -1);
  for (int c = 0; c < edges; ++c) cover_index[covers[c].first * n + covers[c].second] = c;

  // Dart 2c runs up cover c, dart 2c+1 runs down. Tracing keeps the face
  // on the right of each dart.
  auto dart = [&](int from, int to) {
    const int c = cover_index[from * n + to];
    return c >= 0 ? 2 * c : 2 * cover_index[to * n + from] + 1;
  };
  auto head = [&](int d) { return d % 2 == 0 ? covers[d / 2].second : covers[d / 2].first; };
  auto tail = [&](int d) { return d % 2 == 0 ? covers[d / 2].first : covers[d / 2].second; };

  std::vector<int> face_of(2 * edges, -1);
  std::vector<std::vector<int>> cycles;
  for (int start = 0; start < 2 * edges; ++start) {
    if (face_of[start] >= 0) continue;
    const int f = static_cast<int>(cycles.size());
    cycles.emplace_back();
    int d = start;
    while (face_of[d] < 0) {
      face_of[d] = f;
      cycles.back().push_back(d);
      const int u = tail(d), v = head(d);
      const int deg = static_cast<int>(cw[v].size());
      const int w = cw[v][(position[v * n + u] + deg - 1) % deg];
      d = dart(v, w);
    }
    if (d != start) {
      fail(ErrorCode::kNotPlanar, "rotation system does not close into faces");
    }
  }

  const int face_total = edges == 0 ? 1 : static_cast<int>(cycles.size());
  if (n - edges + face_total != 2) {
    fail(ErrorCode::kNotPlanar, "Euler check failed: V - E + F = " +
                                    std::to_string(n - edges + face_total) + " (V=" +
                                    std::to_string(n) + ", E=" + std::to_string(edges) +
                                    ", F=" + std::to_string(face_total) + ")");
  }

  left_boundary_.assign(1, lattice_.bottom());
  right_boundary_.assign(1, lattice_.bottom());
  while (!upper_[left_boundary_.back()].empty()) {
    left_boundary_.push_back(upper_[left_boundary_.back()].front());
  }
  while (!upper_[right_boundary_.back()].empty()) {
    right_boundary_.push_back(upper_[right_boundary_.back()].back());
  }

  sweep_rank_.assign(n, -1);
  {
    int next = 0;
    std::vector<int> stack{lattice_.bottom()};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (sweep_rank_[v] >= 0) continue;
      sweep_rank_[v] = next++;
      for (auto it = upper_[v].rbegin(); it != upper_[v].rend(); ++it) {
        if (sweep_rank_[*it] < 0) stack.push_back(*it);
      }
    }
  }

  faces_.clear();
  cells_.clear();
  right_face_.assign(static_cast<std::size_t>(n) * n, -1);
  left_face_.assign(static_cast<std::size_t>(n) * n, -1);
  if (edges == 0) return;

  // The outer face runs up the right boundary and down the left one.
  const int outer = face_of[dart(right_boundary_[0], right_boundary_[1])];
  bool bounded = true;
  for (std::size_t k = 1; k < right_boundary_.size(); ++k) {
    bounded = bounded && face_of[dart(right_boundary_[k - 1], right_boundary_[k])] == outer;
  }
  for (std::size_t k = 1; k < left_boundary_.size(); ++k) {
    bounded = bounded && face_of[dart(left_boundary_[k], left_boundary_[k - 1])] == outer;
  }
  // Walking down from 1 along the leftmost (rightmost) lower covers must
  // retrace the same boundary.
  for (std::size_t k = 1; k < left_boundary_.size(); ++k) {
    bounded = bounded && lower_[left_boundary_[k]].front() == left_boundary_[k - 1];
  }
  for (std::size_t k = 1; k < right_boundary_.size(); ++k) {
    bounded = bounded && lower_[right_boundary_[k]].back() == right_boundary_[k - 1];
  }
  if (!bounded) {
    fail(ErrorCode::kNotPlanar, "boundary chains do not bound a common outer face");
  }

  std::vector<int> renumber(cycles.size(), -1);
  std::vector<std::pair<int, Face>> internal;
  for (int f = 0; f < static_cast<int>(cycles.size()); ++f) {
    if (f == outer) continue;
    const auto& cyc = cycles[f];
    const int len = static_cast<int>(cyc.size());
    int bottom_at = -1, tops = 0, bottoms = 0;
    for (int k = 0; k < len; ++k) {
      const bool in_up = cyc[(k + len - 1) % len] % 2 == 0;
      const bool out_up = cyc[k] % 2 == 0;
      if (!in_up && out_up) {
        ++bottoms;
        bottom_at = k;
      }
      if (in_up && !out_up) ++tops;
    }
    if (bottoms != 1 || tops != 1) {
      fail(ErrorCode::kNotPlanar, "a face does not have a unique top and bottom");
    }
    Face face;
    face.bottom = tail(cyc[bottom_at]);
    face.left_chain.push_back(face.bottom);
    int k = bottom_at;
    while (cyc[k] % 2 == 0) {
      face.left_chain.push_back(head(cyc[k]));
      k = (k + 1) % len;
    }
    face.top = face.left_chain.back();
    std::vector<int> down{face.top};
    while (k != bottom_at) {
      down.push_back(head(cyc[k]));
      k = (k + 1) % len;
    }
    face.right_chain.assign(down.rbegin(), down.rend());
    const auto& up = upper_[face.bottom];
    auto l = std::find(up.begin(), up.end(), face.left_chain[1]);
    auto r = std::find(up.begin(), up.end(), face.right_chain[1]);
    if (r - l != 1) {
      fail(ErrorCode::kNotPlanar, "a face is not bounded by adjacent upper covers of its bottom");
    }
    const auto& down_at_top = lower_[face.top];
    l = std::find(down_at_top.begin(), down_at_top.end(),
                  face.left_chain[face.left_chain.size() - 2]);
    r = std::find(down_at_top.begin(), down_at_top.end(),
                  face.right_chain[face.right_chain.size() - 2]);
    if (r - l != 1) {
      fail(ErrorCode::kNotPlanar, "a face is not bounded by adjacent lower covers of its top");
    }
    internal.emplace_back(f, std::move(face));
  }

  auto key = [&](const Face& face) {
    return std::tuple(lattice_.order().height(face.top), sweep_rank_[face.top],
                      sweep_rank_[face.left_chain[face.left_chain.size() - 2]]);
  };
  std::sort(internal.begin(), internal.end(),
            [&](const auto& a, const auto& b) { return key(a.second) < key(b.second); });
  for (auto& [f, face] : internal) {
    renumber[f] = static_cast<int>(faces_.size());
    if (face.element_count() == 4) {
      cells_.push_back({face.bottom, face.left_chain[1], face.right_chain[1], face.top});
    }
    faces_.push_back(std::move(face));
  }
  for (int c = 0; c < edges; ++c) {
    const int slot = covers[c].first * n + covers[c].second;
    right_face_[slot] = renumber[face_of[2 * c]];
    left_face_[slot] = renumber[face_of[2 * c + 1]];
  }
}

int PlanarDiagram::face_left_of(int lower, int upper) const {
  return left_face_[lower * static_cast<int>(size()) + upper];
}

int PlanarDiagram::face_right_of(int lower, int upper) const {
  return right_face_[lower * static_cast<int>(size()) + upper];
}

std::optional<std::size_t> PlanarDiagram::find_cell(const FourCell& cell) const {
  auto it = std::find(cells_.begin(), cells_.end(), cell);
  if (it == cells_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

FourCell PlanarDiagram::cell_from_ids(const CellIds& ids) const {
  std::array<int, 4> idx{};
  for (int k = 0; k < 4; ++k) {
    auto i = lattice_.order().index_of(ids[k]);
    if (!i) {
      fail(ErrorCode::kCellNotFound, "cell names unknown element '" + ids[k] + "'");
    }
    idx[k] = *i;
  }
  FourCell cell{idx[0], idx[1], idx[2], idx[3]};
  if (!find_cell(cell)) {
    fail(ErrorCode::kCellNotFound, "(" + ids[0] + ", " + ids[1] + ", " + ids[2] + ", " +
                                       ids[3] + ") is not a 4-cell of the diagram");
  }
  return cell;
}

CellIds PlanarDiagram::cell_ids(const FourCell& cell) const {
  return {id(cell.bottom), id(cell.left), id(cell.right), id(cell.top)};
}

RotationMap PlanarDiagram::upper_rotation_map() const {
  RotationMap out;
  for (int i = 0; i < static_cast<int>(size()); ++i) {
    auto& v = out[id(i)];
    for (int u : upper_[i]) v.push_back(id(u));
  }
  return out;
}

RotationMap PlanarDiagram::lower_rotation_map() const {
  RotationMap out;
  for (int i = 0; i < static_cast<int>(size()); ++i) {
    auto& v = out[id(i)];
    for (int u : lower_[i]) v.push_back(id(u));
  }
  return out;
}

std::string letter_name(std::size_t k) {
  std::string s;
  ++k;
  while (k > 0) {
    --k;
    s.insert(s.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  }
  return s;
}

PlanarDiagram grid(int p, int q) {
  if (p < 1 || q < 1) {
    fail(ErrorCode::kInvalidArgument, "grid edge counts must be at least 1");
  }
  if (static_cast<std::size_t>(p + 1) * static_cast<std::size_t>(q + 1) > kMaxElements) {
    fail(ErrorCode::kTooLarge, "grid(" + std::to_string(p) + "," + std::to_string(q) +
                                   ") exceeds " + std::to_string(kMaxElements) + " elements");
  }
  // (i, j): i steps up the left side, j up the right side; horizontal
  // position is j - i.
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= q; ++j) cells.emplace_back(i, j);
  }
  std::sort(cells.begin(), cells.end(), [](auto a, auto b) {
    return std::pair(a.first + a.second, a.second - a.first) <
           std::pair(b.first + b.second, b.second - b.first);
  });
  const int n = static_cast<int>(cells.size());
  std::vector<int> at((p + 1) * (q + 1));
  std::vector<ElementId> ids(n);
  for (int k = 0; k < n; ++k) {
    at[cells[k].first * (q + 1) + cells[k].second] = k;
    ids[k] = k == 0 ? "0" : k == n - 1 ? "1" : letter_name(static_cast<std::size_t>(k - 1));
  }
  auto idx = [&](int i, int j) { return at[i * (q + 1) + j]; };
  std::vector<IndexCover> covers;
  std::vector<std::vector<int>> upper(n), lower(n);
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = cells[k];
    if (i < p) {
      covers.emplace_back(k, idx(i + 1, j));
      upper[k].push_back(idx(i + 1, j));
    }
    if (j < q) {
      covers.emplace_back(k, idx(i, j + 1));
      upper[k].push_back(idx(i, j + 1));
    }
    if (j > 0) lower[k].push_back(idx(i, j - 1));
    if (i > 0) lower[k].push_back(idx(i - 1, j));
  }
  auto lattice = FiniteLattice::from_order(FiniteOrder::from_indices(std::move(ids), covers));
  auto d = PlanarDiagram::from_rotation(std::move(lattice), std::move(upper), std::move(lower));
  d.set_provenance({"grid:" + std::to_string(p) + "x" + std::to_string(q), {}});
  return d;
}

std::vector<FourCell> four_cells(const PlanarDiagram& diagram) { return diagram.cells(); }

ShapeClass classify_shape(const PlanarDiagram& diagram) {
  const auto& l = diagram.lattice();
  auto corners = [&](const std::vector<int>& boundary) {
    std::vector<int> out;
    for (int x : boundary) {
      if (x == l.bottom() || x == l.top()) continue;
      if (l.lower_covers(x).size() == 1 && l.upper_covers(x).size() == 1) out.push_back(x);
    }
    return out;
  };
  const auto left = corners(diagram.left_boundary());
  const auto right = corners(diagram.right_boundary());
  ShapeClass out;
  if (left.size() != 1 || right.size() != 1) return out;
  const int cl = left.front(), cr = right.front();
  if (l.meet(cl, cr) != l.bottom() || l.join(cl, cr) != l.top()) return out;
  if (!is_semimodular(l)) return out;
  out.left_corner = cl;
  out.right_corner = cr;
  const bool dual_atoms = l.is_cover(cl, l.top()) && l.is_cover(cr, l.top());
  out.shape = dual_atoms ? Shape::kPatch : Shape::kRectangular;
  return out;
}

}  // namespace spsforge
