#include "spsforge/dot.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace spsforge {

namespace {

constexpr std::array<const char*, 10> kPalette{
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const PlanarDiagram& diagram, const EdgeColoring* coloring) {
  const auto& lattice = diagram.lattice();
  const auto& order = lattice.order();
  const int n = static_cast<int>(lattice.size());

  std::map<int, std::vector<int>> ranks;
  for (int i = 0; i < n; ++i) ranks[order.height(i)].push_back(i);
  for (auto& [h, members] : ranks) {
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return diagram.sweep_rank(a) < diagram.sweep_rank(b); });
  }

  std::ostringstream out;
  out << "digraph lattice {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=circle, fontsize=10];\n";
  out << "  edge [arrowhead=none];\n";
  for (const auto& [h, members] : ranks) {
    out << "  { rank=same;";
    for (int i : members) out << ' ' << quoted(lattice.id(i)) << ';';
    out << " }\n";
  }
  for (const auto& [a, b] : lattice.covers()) {
    out << "  " << quoted(lattice.id(a)) << " -> " << quoted(lattice.id(b));
    if (coloring != nullptr) {
      const int c = coloring->color_of(a, b);
      out << " [label=\"c" << c << "\", color=\"" << kPalette[c % kPalette.size()]
          << "\", fontcolor=\"" << kPalette[c % kPalette.size()] << "\"]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace spsforge
