#include "spsforge/fork.hpp"

#include <algorithm>
#include <unordered_set>

#include "spsforge/error.hpp"

namespace spsforge {

namespace {

[[noreturn]] void broken(const std::string& what) {
  fail(ErrorCode::kInternalInvariantViolation, "fork insertion: " + what);
}

void replace(std::vector<int>& v, int from, int to) {
  auto it = std::find(v.begin(), v.end(), from);
  if (it == v.end()) broken("expected cover is missing");
  *it = to;
}

void insert_beside(std::vector<int>& v, int anchor, int item, bool after) {
  auto it = std::find(v.begin(), v.end(), anchor);
  if (it == v.end()) broken("expected cover is missing");
  v.insert(after ? it + 1 : it, item);
}

}  // namespace

SquareKind classify_cell(const PlanarDiagram& diagram, const FourCell& cell) {
  if (!diagram.find_cell(cell)) {
    fail(ErrorCode::kCellNotFound, "square is not a 4-cell of the diagram");
  }
  return diagram.lattice().lower_covers(cell.top).size() == 2 ? SquareKind::kTight
                                                              : SquareKind::kWide;
}

std::pair<PlanarDiagram, ForkTrace> insert_fork(const PlanarDiagram& diagram,
                                                const FourCell& cell) {
  if (!diagram.find_cell(cell)) {
    fail(ErrorCode::kCellNotFound, "square is not a 4-cell of the diagram");
  }
  const auto& original = diagram.lattice();
  const int n = static_cast<int>(original.size());
  std::vector<ElementId> ids = original.order().ids();
  std::unordered_set<ElementId> taken(ids.begin(), ids.end());
  std::vector<std::vector<int>> upper(n), lower(n);
  for (int i = 0; i < n; ++i) {
    upper[i] = diagram.upper_order(i);
    lower[i] = diagram.lower_order(i);
  }

  const std::string suffix = "@" + std::to_string(diagram.provenance().forks.size() + 1);
  auto fresh = [&](const std::string& stem) {
    std::string id = stem + suffix;
    while (taken.contains(id)) id += "'";
    taken.insert(id);
    ids.push_back(id);
    upper.emplace_back();
    lower.emplace_back();
    return static_cast<int>(ids.size()) - 1;
  };

  const auto [o, cl, cr, t] = cell;
  ForkTrace trace;
  trace.cell = cell;
  const int m = trace.new_top = fresh("m");
  const int al = trace.new_left = fresh("aL");
  const int ar = trace.new_right = fresh("aR");

  // N7 in place of the cell.
  replace(upper[o], cl, al);
  replace(upper[o], cr, ar);
  replace(lower[cl], o, al);
  replace(lower[cr], o, ar);
  lower[al] = {o};
  upper[al] = {cl, m};
  lower[ar] = {o};
  upper[ar] = {m, cr};
  lower[m] = {al, ar};
  upper[m] = {t};
  insert_beside(lower[t], cl, m, /*after=*/true);

  // Legs walk down through cells of the original diagram, each used once.
  std::vector<bool> consumed(diagram.faces().size(), false);
  consumed[diagram.face_right_of(o, cl)] = true;

  auto run_leg = [&](bool left, int u, int w, int v, std::vector<LegStep>& leg) {
    while (true) {
      const int f = left ? diagram.face_left_of(u, w) : diagram.face_right_of(u, w);
      if (f < 0 || consumed[f]) return;
      const Face& face = diagram.faces()[f];
      if (face.element_count() != 4 || face.top != w) return;
      const int near = left ? face.right_chain[1] : face.left_chain[1];
      if (near != u) return;
      const int x = left ? face.left_chain[1] : face.right_chain[1];
      const int b = face.bottom;
      const int y = fresh(std::string(left ? "legL" : "legR") +
                          std::to_string(leg.size() + 1));
      replace(upper[b], x, y);
      replace(lower[x], b, y);
      lower[y] = {b};
      upper[y] = left ? std::vector<int>{x, v} : std::vector<int>{v, x};
      insert_beside(lower[v], u, y, /*after=*/!left);
      consumed[f] = true;
      leg.push_back({y, left ? FourCell{b, x, u, w} : FourCell{b, u, x, w}});
      u = b;
      w = x;
      v = y;
    }
  };
  run_leg(true, o, cl, al, trace.left_leg);
  run_leg(false, o, cr, ar, trace.right_leg);

  std::vector<IndexCover> covers;
  for (int i = 0; i < static_cast<int>(upper.size()); ++i) {
    for (int u : upper[i]) covers.emplace_back(i, u);
  }
  PlanarDiagram out;
  try {
    auto lattice = FiniteLattice::from_order(FiniteOrder::from_indices(ids, covers));
    out = PlanarDiagram::from_rotation(std::move(lattice), std::move(upper), std::move(lower));
  } catch (const Error& e) {
    broken(std::string(error_code_name(e.code())) + ": " + e.what());
  }
  if (out.size() != diagram.size() + trace.added()) broken("size law violated");
  if (!out.all_faces_are_cells()) broken("a face of the result is not a 4-cell");
  for (const auto* leg : {&trace.left_leg, &trace.right_leg}) {
    int prev = out.lattice().order().height(leg == &trace.left_leg ? al : ar);
    for (const auto& step : *leg) {
      const int h = out.lattice().order().height(step.element);
      if (h >= prev) broken("leg does not descend");
      prev = h;
    }
  }
  if (!is_semimodular(out.lattice())) broken("result is not semimodular");
  if (!is_slim(out.lattice())) broken("result is not slim");

  Provenance p = diagram.provenance();
  p.forks.push_back(diagram.cell_ids(cell));
  out.set_provenance(std::move(p));
  return {std::move(out), std::move(trace)};
}

Congruence fork_congruence(const PlanarDiagram& extended, const ForkTrace& trace) {
  return principal_congruence(extended.lattice(), trace.new_top, trace.cell.top);
}

}  // namespace spsforge
