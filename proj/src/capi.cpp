#include "spsforge/spsforge.h"

#include <cstring>
#include <optional>
#include <string>

#include "spsforge/document.hpp"
#include "spsforge/dot.hpp"
#include "spsforge/error.hpp"
#include "spsforge/fork.hpp"
#include "spsforge/report.hpp"
#include "spsforge/search.hpp"

using namespace spsforge;

struct spsf_diagram {
  FiniteLattice lattice;
  std::optional<PlanarDiagram> diagram;
  int forks = 0;
};

struct spsf_order {
  TargetOrder target;
};

namespace {

thread_local std::string last_error;

spsf_status status_of(ErrorCode code) { return static_cast<spsf_status>(static_cast<int>(code) + 1); }

template <typename F>
spsf_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SPSF_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return SPSF_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return SPSF_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* owned(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spsf_diagram* wrap(PlanarDiagram d) {
  auto* h = new spsf_diagram;
  h->lattice = d.lattice();
  h->forks = static_cast<int>(d.provenance().forks.size());
  h->diagram = std::move(d);
  return h;
}

spsf_diagram* from_document(const LatticeDocument& doc) {
  if (doc.has_rotation()) return wrap(diagram_of(doc));
  try {
    return wrap(diagram_of(doc));
  } catch (const Error& e) {
    if (e.cause() != ErrorCode::kInconsistentRotation) throw;
  }
  auto* h = new spsf_diagram;
  h->lattice = lattice_of(doc);
  return h;
}

const PlanarDiagram& embedded(const spsf_diagram* d) {
  if (!d->diagram) {
    fail(ErrorCode::kValidationError, "document has no rotation orders; a planar diagram is required");
  }
  return *d->diagram;
}

spsf_order* wrap_order(const LatticeDocument& doc) {
  auto order = order_of(doc);
  if (order.size() == 0) fail(ErrorCode::kInvalidTarget, "target order is empty");
  std::string name = "target";
  if (doc.metadata.contains("name") && doc.metadata["name"].is_string()) {
    name = doc.metadata["name"].get<std::string>();
  }
  return new spsf_order{{name, std::move(order)}};
}

}  // namespace

extern "C" {

const char* spsf_version(void) { return "1.0.0"; }

const char* spsf_status_name(spsf_status status) {
  if (status == SPSF_OK) return "Ok";
  if (status < SPSF_E_INVALID_ARGUMENT || status > SPSF_E_IO) return "Unknown";
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status) - 1));
}

const char* spsf_last_error(void) { return last_error.c_str(); }

void spsf_string_free(char* s) { delete[] s; }

spsf_status spsf_grid(int p, int q, spsf_diagram** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(grid(p, q));
  });
}

spsf_status spsf_diagram_load(const char* path, spsf_diagram** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = from_document(parse_document(read_text_file(path)));
  });
}

spsf_status spsf_diagram_from_json(const char* text, spsf_diagram** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = from_document(parse_document(text));
  });
}

spsf_status spsf_diagram_save(const spsf_diagram* d, const char* path) {
  return guarded([&] {
    require(d, "diagram");
    require(path, "path");
    write_text_file(path, dump_document(document_of(embedded(d))));
  });
}

spsf_status spsf_diagram_to_json(const spsf_diagram* d, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = owned(dump_document(document_of(embedded(d))));
  });
}

void spsf_diagram_free(spsf_diagram* d) { delete d; }

size_t spsf_diagram_size(const spsf_diagram* d) { return d == nullptr ? 0 : d->lattice.size(); }

int spsf_diagram_has_rotation(const spsf_diagram* d) {
  return d != nullptr && d->diagram.has_value() ? 1 : 0;
}

int spsf_diagram_fork_count(const spsf_diagram* d) { return d == nullptr ? 0 : d->forks; }

spsf_status spsf_diagram_canonical_key(const spsf_diagram* d, char** hex) {
  return guarded([&] {
    require(d, "diagram");
    require(hex, "out");
    *hex = owned(to_hex(canonical_key(d->lattice)));
  });
}

spsf_status spsf_fork(const spsf_diagram* d, const char* const cell[4], spsf_diagram** out) {
  return guarded([&] {
    require(d, "diagram");
    require(cell, "cell");
    require(out, "out");
    CellIds ids;
    for (int k = 0; k < 4; ++k) {
      require(cell[k], "cell id");
      ids[k] = cell[k];
    }
    const auto& diagram = embedded(d);
    *out = wrap(insert_fork(diagram, diagram.cell_from_ids(ids)).first);
  });
}

spsf_status spsf_congruence_report(const spsf_diagram* d, int ji_order, int colors, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = owned(congruence_report_text(embedded(d), ji_order != 0, colors != 0));
  });
}

spsf_status spsf_check(const spsf_diagram* d, const char* prop, int* holds) {
  return guarded([&] {
    require(d, "diagram");
    require(prop, "prop");
    require(holds, "holds");
    const std::string p = prop;
    bool result = false;
    if (p == "semimodular") {
      result = is_semimodular(d->lattice);
    } else if (p == "slim") {
      result = is_slim(d->lattice);
    } else if (p == "distributive") {
      result = is_distributive(d->lattice);
    } else if (p == "planar") {
      result = d->diagram.has_value();
    } else if (p == "rectangular" || p == "patch") {
      const auto shape = classify_shape(embedded(d)).shape;
      result = shape == Shape::kPatch || (p == "rectangular" && shape == Shape::kRectangular);
    } else if (p == "cc1" || p == "cc2") {
      const auto ji = ji_congruence_order(d->lattice).ji.order;
      result = (p == "cc1" ? check_cc1(ji) : check_cc2(ji)).holds;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown property '" + p + "'");
    }
    *holds = result ? 1 : 0;
  });
}

spsf_status spsf_export_dot(const spsf_diagram* d, int colors, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    const auto& diagram = embedded(d);
    if (colors != 0) {
      const auto coloring = ji_congruence_order(diagram.lattice()).coloring;
      *out = owned(export_dot(diagram, &coloring));
    } else {
      *out = owned(export_dot(diagram));
    }
  });
}

spsf_status spsf_verify(const spsf_diagram* d, char** report_json) {
  return guarded([&] {
    require(d, "diagram");
    require(report_json, "out");
    *report_json =
        owned(verification_report_json(verify_necessary_conditions(embedded(d))).dump(2) + "\n");
  });
}

spsf_status spsf_order_d8(spsf_order** out) {
  return guarded([&] {
    require(out, "out");
    *out = new spsf_order{p_d8()};
  });
}

spsf_status spsf_order_load(const char* path, spsf_order** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap_order(parse_document(read_text_file(path)));
  });
}

spsf_status spsf_order_from_json(const char* text, spsf_order** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = wrap_order(parse_document(text));
  });
}

size_t spsf_order_size(const spsf_order* o) { return o == nullptr ? 0 : o->target.order.size(); }

void spsf_order_free(spsf_order* o) { delete o; }

spsf_status spsf_enumerate(const spsf_diagram* base, const spsf_enumerate_params* params,
                           spsf_visit_fn visit, void* user, char** stats_json) {
  return guarded([&] {
    require(base, "base");
    require(params, "params");
    const auto& diagram = embedded(base);
    if (!is_semimodular(diagram.lattice()) || !is_slim(diagram.lattice()) ||
        !diagram.all_faces_are_cells()) {
      fail(ErrorCode::kNotSPS, "enumeration base must be slim, semimodular and tiled by 4-cells");
    }
    if (params->max_forks < 0) fail(ErrorCode::kInvalidArgument, "max_forks must be non-negative");
    EnumerationLimits limits;
    if (params->max_elements > 0) limits.max_elements = params->max_elements;
    RunOptions options;
    options.threads = params->threads;
    std::size_t index = 0;
    const auto stats = enumerate({{diagram, params->max_forks}}, limits, options,
                                 [&](const Enumerated& e) {
                                   if (visit == nullptr) return true;
                                   spsf_diagram handle{e.diagram.lattice(), e.diagram, e.forks};
                                   return visit(user, &handle, index++) != 0;
                                 });
    if (stats_json != nullptr) *stats_json = owned(enumeration_stats_json(stats).dump(2) + "\n");
  });
}

void spsf_search_params_init(spsf_search_params* params) {
  if (params == nullptr) return;
  params->max_forks = 0;
  params->max_forks_large = -1;
  params->max_elements = 40;
  params->grid_max_p = 1;
  params->grid_max_q = 1;
  params->prune_on_ji_count = 1;
  params->threads = 0;
  params->checkpoint_path = nullptr;
  params->checkpoint_every = 256;
  params->resume = 0;
  params->include_timing = 0;
}

spsf_status spsf_search(const spsf_order* target, const spsf_search_params* params,
                        char** report_json) {
  return guarded([&] {
    require(target, "target");
    require(params, "params");
    require(report_json, "out");
    SearchBounds bounds;
    bounds.max_forks = params->max_forks;
    if (params->max_forks_large >= 0) bounds.max_forks_large = params->max_forks_large;
    bounds.max_elements = params->max_elements;
    bounds.grid_max_p = params->grid_max_p;
    bounds.grid_max_q = params->grid_max_q;
    bounds.prune_on_ji_count = params->prune_on_ji_count != 0;
    RunOptions options;
    options.threads = params->threads;
    if (params->checkpoint_path != nullptr) options.checkpoint_path = params->checkpoint_path;
    options.checkpoint_every = params->checkpoint_every;
    options.resume = params->resume != 0;
    const auto report = search_representation(target->target, bounds, options);
    *report_json = owned(search_report_json(report, params->include_timing != 0).dump(2) + "\n");
  });
}

}  // extern "C"
