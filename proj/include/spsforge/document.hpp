#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spsforge/diagram.hpp"
#include "spsforge/order.hpp"

namespace spsforge {

using Json = nlohmann::ordered_json;

/// On-disk form of a lattice or diagram. Rotation orders are optional;
/// without them the document describes a lattice (or a target order).
struct LatticeDocument {
  std::vector<ElementId> elements;
  std::vector<Cover> covers;
  std::optional<RotationMap> upper_order;
  std::optional<RotationMap> lower_order;
  Json metadata = Json::object();

  bool has_rotation() const { return upper_order.has_value() || lower_order.has_value(); }
};

/// Throws kParseError (with line and column) for malformed JSON and
/// kValidationError (naming the field) for schema violations.
LatticeDocument parse_document(const std::string& text);
LatticeDocument document_from_json(const Json& json);
Json document_to_json(const LatticeDocument& doc);
std::string dump_document(const LatticeDocument& doc);

/// Rotation orders and metadata {name, base, fork_script} from provenance.
LatticeDocument document_of(const PlanarDiagram& diagram);

/// These wrap core errors as kValidationError; Error::cause() keeps the
/// original code.
PlanarDiagram diagram_of(const LatticeDocument& doc);
FiniteLattice lattice_of(const LatticeDocument& doc);
FiniteOrder order_of(const LatticeDocument& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

PlanarDiagram load_diagram(const std::string& path);
void save_diagram(const PlanarDiagram& diagram, const std::string& path);

}  // namespace spsforge
