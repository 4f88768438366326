#include "spsforge/document.hpp"

#include <fstream>
#include <sstream>

#include "spsforge/error.hpp"

namespace spsforge {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  fail(ErrorCode::kValidationError, field + ": " + what);
}

std::string string_at(const Json& j, const std::string& field) {
  if (!j.is_string()) invalid(field, "expected a string");
  return j.get<std::string>();
}

std::vector<ElementId> string_list(const Json& j, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected an array of strings");
  std::vector<ElementId> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(string_at(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

RotationMap rotation_map(const Json& j, const std::string& field) {
  if (!j.is_object()) invalid(field, "expected an object mapping ids to id lists");
  RotationMap out;
  for (const auto& [key, value] : j.items()) {
    out[key] = string_list(value, field + "." + key);
  }
  return out;
}

void put_rotation(Json& out, const char* name, const std::vector<ElementId>& elements,
                  const RotationMap& map) {
  Json obj = Json::object();
  for (const auto& e : elements) {
    auto it = map.find(e);
    if (it != map.end() && !it->second.empty()) obj[e] = it->second;
  }
  out[name] = std::move(obj);
}

template <typename F>
auto wrapped(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidationError || e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kValidationError, e.code(),
                std::string(error_code_name(e.code())) + ": " + e.what());
  }
}

Provenance provenance_of(const Json& metadata) {
  Provenance p;
  if (metadata.contains("base")) p.base = string_at(metadata["base"], "metadata.base");
  if (!metadata.contains("fork_script")) return p;
  const Json& script = metadata["fork_script"];
  if (!script.is_array()) invalid("metadata.fork_script", "expected an array of cells");
  for (std::size_t k = 0; k < script.size(); ++k) {
    const std::string field = "metadata.fork_script[" + std::to_string(k) + "]";
    auto ids = string_list(script[k], field);
    if (ids.size() != 4) invalid(field, "a cell lists exactly four ids");
    p.forks.push_back({ids[0], ids[1], ids[2], ids[3]});
  }
  return p;
}

}  // namespace

LatticeDocument document_from_json(const Json& json) {
  if (!json.is_object()) invalid("document", "expected a JSON object");
  LatticeDocument doc;
  if (!json.contains("elements")) invalid("elements", "missing");
  doc.elements = string_list(json["elements"], "elements");
  if (!json.contains("covers")) invalid("covers", "missing");
  const Json& covers = json["covers"];
  if (!covers.is_array()) invalid("covers", "expected an array of [lower, upper] pairs");
  for (std::size_t k = 0; k < covers.size(); ++k) {
    const std::string field = "covers[" + std::to_string(k) + "]";
    auto pair = string_list(covers[k], field);
    if (pair.size() != 2) invalid(field, "expected [lower, upper]");
    doc.covers.emplace_back(pair[0], pair[1]);
  }
  if (json.contains("upper_order")) doc.upper_order = rotation_map(json["upper_order"], "upper_order");
  if (json.contains("lower_order")) doc.lower_order = rotation_map(json["lower_order"], "lower_order");
  if (json.contains("metadata")) {
    if (!json["metadata"].is_object()) invalid("metadata", "expected an object");
    doc.metadata = json["metadata"];
  }
  return doc;
}

LatticeDocument parse_document(const std::string& text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(ErrorCode::kParseError, "line " + std::to_string(line) + ", column " +
                                     std::to_string(column) + ": malformed JSON");
  }
  return document_from_json(json);
}

Json document_to_json(const LatticeDocument& doc) {
  Json out = Json::object();
  out["elements"] = doc.elements;
  Json covers = Json::array();
  for (const auto& [a, b] : doc.covers) covers.push_back({a, b});
  out["covers"] = std::move(covers);
  if (doc.upper_order) put_rotation(out, "upper_order", doc.elements, *doc.upper_order);
  if (doc.lower_order) put_rotation(out, "lower_order", doc.elements, *doc.lower_order);
  out["metadata"] = doc.metadata;
  return out;
}

std::string dump_document(const LatticeDocument& doc) {
  return document_to_json(doc).dump(2) + "\n";
}

LatticeDocument document_of(const PlanarDiagram& diagram) {
  LatticeDocument doc;
  const auto& lattice = diagram.lattice();
  doc.elements = lattice.order().ids();
  for (const auto& [a, b] : lattice.covers()) doc.covers.emplace_back(lattice.id(a), lattice.id(b));
  doc.upper_order = diagram.upper_rotation_map();
  doc.lower_order = diagram.lower_rotation_map();
  const auto& p = diagram.provenance();
  if (!p.base.empty()) doc.metadata["base"] = p.base;
  Json script = Json::array();
  for (const auto& cell : p.forks) script.push_back({cell[0], cell[1], cell[2], cell[3]});
  doc.metadata["fork_script"] = std::move(script);
  return doc;
}

PlanarDiagram diagram_of(const LatticeDocument& doc) {
  auto provenance = provenance_of(doc.metadata);
  return wrapped([&] {
    auto d = PlanarDiagram::build(doc.elements, doc.covers, doc.upper_order.value_or(RotationMap{}),
                                  doc.lower_order.value_or(RotationMap{}));
    d.set_provenance(std::move(provenance));
    return d;
  });
}

FiniteLattice lattice_of(const LatticeDocument& doc) {
  return wrapped([&] { return FiniteLattice::build(doc.elements, doc.covers); });
}

FiniteOrder order_of(const LatticeDocument& doc) {
  return wrapped([&] { return FiniteOrder::build(doc.elements, doc.covers); });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

PlanarDiagram load_diagram(const std::string& path) {
  return diagram_of(parse_document(read_text_file(path)));
}

void save_diagram(const PlanarDiagram& diagram, const std::string& path) {
  write_text_file(path, dump_document(document_of(diagram)));
}

}  // namespace spsforge
