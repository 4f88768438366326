#include "spsforge/report.hpp"

#include <sstream>

namespace spsforge {

namespace {

Json script_json(const Provenance& p) {
  Json script = Json::array();
  for (const auto& cell : p.forks) script.push_back({cell[0], cell[1], cell[2], cell[3]});
  return script;
}

Json check_json(const ConditionCheck& c, const FiniteOrder& order) {
  Json j = Json::object();
  j["holds"] = c.holds;
  j["offender"] = c.offender ? Json(order.id(*c.offender)) : Json(nullptr);
  return j;
}

}  // namespace

Json order_to_json(const FiniteOrder& order) {
  Json j = Json::object();
  j["elements"] = order.ids();
  Json covers = Json::array();
  for (const auto& [a, b] : order.covers()) covers.push_back({order.id(a), order.id(b)});
  j["covers"] = std::move(covers);
  return j;
}

Json enumeration_stats_json(const EnumerationStats& s) {
  Json j = Json::object();
  j["explored"] = s.explored;
  j["pruned"] = s.pruned;
  j["per_stratum"] = s.per_stratum;
  j["truncated_by_elements"] = s.truncated_by_elements;
  j["at_fork_cap"] = s.at_fork_cap;
  j["insertions"] = {{"total", s.insertions}, {"tight", s.tight_insertions}, {"wide", s.wide_insertions}};
  j["count_law_violations"] = s.count_law_violations;
  j["cc1_violations"] = s.cc1_violations;
  j["cc2_violations"] = s.cc2_violations;
  j["completed"] = s.completed;
  return j;
}

Json search_report_json(const SearchReport& r, bool include_timing) {
  Json j = Json::object();
  j["schema"] = "spsforge-search-report";
  j["schema_version"] = kReportSchemaVersion;
  Json target = order_to_json(r.target.order);
  target["name"] = r.target.name;
  j["target"] = std::move(target);
  Json bounds = Json::object();
  bounds["max_forks"] = r.bounds.max_forks;
  bounds["max_forks_large_grids"] = r.bounds.max_forks_large.value_or(r.bounds.max_forks);
  bounds["max_elements"] = r.bounds.max_elements;
  bounds["grid_max"] = {r.bounds.grid_max_p, r.bounds.grid_max_q};
  bounds["prune_on_ji_count"] = r.bounds.prune_on_ji_count;
  j["bounds"] = std::move(bounds);
  j["bases"] = r.bases;
  j["explored"] = r.stats.explored;
  j["pruned"] = r.stats.pruned;
  j["enumeration"] = enumeration_stats_json(r.stats);
  if (r.witness) {
    const auto& w = *r.witness;
    Json witness = Json::object();
    witness["base"] = w.diagram.provenance().base;
    witness["forks"] = w.forks;
    witness["fork_script"] = script_json(w.diagram.provenance());
    witness["size"] = w.diagram.size();
    const auto ji = ji_congruence_order(w.diagram.lattice()).ji.order;
    Json iso = Json::object();
    for (std::size_t i = 0; i < w.isomorphism.size(); ++i) {
      iso[r.target.order.id(static_cast<int>(i))] = ji.id(w.isomorphism[i]);
    }
    witness["isomorphism"] = std::move(iso);
    witness["diagram"] = document_to_json(document_of(w.diagram));
    j["witness"] = std::move(witness);
  } else {
    j["witness"] = nullptr;
  }
  j["exhausted"] = r.exhausted;
  j["verdict"] = r.witness     ? "witness found"
                 : r.exhausted ? "exhausted within bounds, no witness"
                               : "incomplete";
  if (include_timing) j["wall_time_seconds"] = r.wall_seconds;
  return j;
}

Json verification_report_json(const VerificationReport& r) {
  Json j = Json::object();
  j["schema"] = "spsforge-verification-report";
  j["schema_version"] = kReportSchemaVersion;
  j["ji_count"] = r.ji_count;
  j["congruence_count"] = r.congruence_count;
  j["ji_order"] = order_to_json(r.ji_order);
  j["cc1"] = check_json(r.cc1, r.ji_order);
  j["cc2"] = check_json(r.cc2, r.ji_order);
  if (r.replay) {
    j["count_law"] = {{"steps", r.replay->steps},
                      {"violations", r.replay->violations},
                      {"reproduces", r.replay->reproduces}};
  } else {
    j["count_law"] = nullptr;
  }
  return j;
}

std::string congruence_report_text(const PlanarDiagram& diagram, bool ji_order, bool colors) {
  const auto& lattice = diagram.lattice();
  const auto s = ji_congruence_order(lattice);
  std::ostringstream out;
  out << "elements: " << lattice.size() << "\n";
  out << "join-irreducible congruences: " << s.ji.size() << "\n";
  out << "congruences: " << s.ji.congruence_count << "\n";
  for (std::size_t k = 0; k < s.ji.size(); ++k) {
    out << s.ji.order.id(static_cast<int>(k)) << ":";
    for (const auto& cls : s.ji.members[k].classes()) {
      if (cls.size() < 2) continue;
      out << " {";
      for (std::size_t i = 0; i < cls.size(); ++i) out << (i ? "," : "") << lattice.id(cls[i]);
      out << "}";
    }
    out << "\n";
  }
  if (ji_order) {
    out << "ji order covers:";
    if (s.ji.order.covers().empty()) out << " none (antichain)";
    out << "\n";
    for (const auto& [a, b] : s.ji.order.covers()) {
      out << "  " << s.ji.order.id(a) << " < " << s.ji.order.id(b) << "\n";
    }
  }
  if (colors) {
    out << "edge colours:\n";
    for (std::size_t k = 0; k < s.coloring.covers.size(); ++k) {
      const auto [a, b] = s.coloring.covers[k];
      out << "  " << lattice.id(a) << " -< " << lattice.id(b) << ": c" << s.coloring.colors[k]
          << "\n";
    }
    out << "4-cell palettes:\n";
    for (const auto& cell : diagram.cells()) {
      out << "  " << diagram.id(cell.bottom) << "," << diagram.id(cell.left) << ","
          << diagram.id(cell.right) << "," << diagram.id(cell.top) << ":";
      for (int c : square_palette(diagram, cell, s.coloring)) out << " c" << c;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace spsforge
