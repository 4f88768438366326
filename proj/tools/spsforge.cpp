// Command-line front end. Talks to the library through the C interface only.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spsforge/spsforge.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

struct Failure {
  int exit_code;
  std::string message;
};

void check(spsf_status status, const std::string& context) {
  if (status == SPSF_OK) return;
  const int code = status == SPSF_E_INVALID_ARGUMENT ? kExitUsage : kExitValidation;
  throw Failure{code, context + ": " + spsf_status_name(status) + ": " + spsf_last_error()};
}

struct DiagramDeleter {
  void operator()(spsf_diagram* d) const { spsf_diagram_free(d); }
};
struct OrderDeleter {
  void operator()(spsf_order* o) const { spsf_order_free(o); }
};
using Diagram = std::unique_ptr<spsf_diagram, DiagramDeleter>;
using Order = std::unique_ptr<spsf_order, OrderDeleter>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  spsf_string_free(s);
  return out;
}

Diagram load(const std::string& path) {
  spsf_diagram* d = nullptr;
  check(spsf_diagram_load(path.c_str(), &d), "loading " + path);
  return Diagram(d);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitValidation, "cannot write " + path};
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// "grid:PxQ" -> (P, Q); anything else is treated as a file path.
bool parse_grid(const std::string& label, int& p, int& q) {
  if (label.rfind("grid:", 0) != 0) return false;
  const auto dims = split(label.substr(5), 'x');
  if (dims.size() != 2) throw Failure{kExitUsage, "expected grid:PxQ, got " + label};
  try {
    std::size_t used = 0;
    p = std::stoi(dims[0], &used);
    if (used != dims[0].size()) throw std::invalid_argument(dims[0]);
    q = std::stoi(dims[1], &used);
    if (used != dims[1].size()) throw std::invalid_argument(dims[1]);
  } catch (const std::exception&) {
    throw Failure{kExitUsage, "expected grid:PxQ, got " + label};
  }
  return true;
}

struct EmitContext {
  std::string dir;
  std::size_t written = 0;
  std::string error;
};

int emit_one(void* user, const spsf_diagram* d, size_t index) {
  auto* ctx = static_cast<EmitContext*>(user);
  if (ctx->dir.empty()) return 1;
  char name[32];
  std::snprintf(name, sizeof name, "%06zu.json", index);
  const auto path = (std::filesystem::path(ctx->dir) / name).string();
  if (spsf_diagram_save(d, path.c_str()) != SPSF_OK) {
    ctx->error = spsf_last_error();
    return 0;
  }
  ++ctx->written;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slim planar semimodular lattices: forks, congruences and representation search"};
  app.require_subcommand(1);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "Write the grid C_{P+1} x C_{Q+1}");
  std::vector<int> edges;
  std::string grid_out;
  grid_cmd->add_option("--edges", edges, "Chain lengths P Q")->expected(2)->required();
  grid_cmd->add_option("--out", grid_out, "Output document")->required();

  // fork
  auto* fork_cmd = app.add_subcommand("fork", "Insert a fork into a 4-cell");
  std::string fork_in, fork_cell, fork_out;
  fork_cmd->add_option("--in", fork_in, "Input document")->required();
  fork_cmd->add_option("--cell", fork_cell, "Cell as bottom,left,right,top")->required();
  fork_cmd->add_option("--out", fork_out, "Output document")->required();

  // congruences
  auto* con_cmd = app.add_subcommand("congruences", "Join-irreducible congruences");
  std::string con_in;
  bool con_ji = false, con_colors = false;
  con_cmd->add_option("--in", con_in, "Input document")->required();
  con_cmd->add_flag("--ji-order", con_ji, "Print the covers of the ji order");
  con_cmd->add_flag("--colors", con_colors, "Print edge colours and 4-cell palettes");

  // check
  auto* check_cmd = app.add_subcommand("check", "Check lattice properties");
  std::string check_in;
  std::vector<std::string> props;
  check_cmd->add_option("--in", check_in, "Input document")->required();
  check_cmd
      ->add_option("--props", props,
                   "Comma-separated: semimodular,slim,planar,distributive,rectangular,patch,cc1,cc2")
      ->delimiter(',')
      ->required();

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate lattices obtained by forks");
  std::string enum_base, enum_emit;
  int enum_forks = 0, enum_threads = 0;
  std::size_t enum_max_elements = 0;
  enum_cmd->add_option("--base", enum_base, "grid:PxQ or a document")->required();
  enum_cmd->add_option("--max-forks", enum_forks, "Fork cap")->required()->check(CLI::NonNegativeNumber);
  enum_cmd->add_option("--emit", enum_emit, "Directory for one document per lattice");
  enum_cmd->add_option("--max-elements", enum_max_elements, "Element cap");
  enum_cmd->add_option("--threads", enum_threads, "Worker threads")->check(CLI::NonNegativeNumber);

  // search
  auto* search_cmd = app.add_subcommand("search", "Bounded search for a representing lattice");
  std::string search_target, search_report, search_checkpoint;
  spsf_search_params sp;
  spsf_search_params_init(&sp);
  std::vector<int> grid_max;
  bool no_prune = false, resume = false, timing = false;
  search_cmd->add_option("--target", search_target, "d8 or a document with covers")->required();
  search_cmd->add_option("--max-forks", sp.max_forks, "Fork cap for grid(1,1)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--max-forks-large", sp.max_forks_large, "Fork cap for larger grids")
      ->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--grid-max", grid_max, "Largest grid P Q")->expected(2)->required();
  search_cmd->add_option("--max-elements", sp.max_elements, "Element cap")->required();
  search_cmd->add_option("--report", search_report, "Report file (default: stdout)");
  search_cmd->add_flag("--no-prune", no_prune, "Disable pruning by ji count");
  search_cmd->add_option("--threads", sp.threads, "Worker threads")->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--checkpoint", search_checkpoint, "Checkpoint file");
  search_cmd->add_option("--checkpoint-every", sp.checkpoint_every, "Parents between checkpoints");
  search_cmd->add_flag("--resume", resume, "Resume from the checkpoint file");
  search_cmd->add_flag("--timing", timing, "Include wall time in the report");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "Write a Graphviz drawing");
  std::string dot_in, dot_out;
  bool dot_colors = false;
  dot_cmd->add_option("--in", dot_in, "Input document")->required();
  dot_cmd->add_flag("--colors", dot_colors, "Label edges by congruence colour");
  dot_cmd->add_option("--out", dot_out, "Output file (default: stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "CC1, CC2 and the fork count law");
  std::string verify_in, verify_out;
  verify_cmd->add_option("--in", verify_in, "Input document")->required();
  verify_cmd->add_option("--out", verify_out, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*grid_cmd) {
      spsf_diagram* d = nullptr;
      check(spsf_grid(edges[0], edges[1], &d), "grid");
      Diagram g(d);
      check(spsf_diagram_save(g.get(), grid_out.c_str()), "saving " + grid_out);
    } else if (*fork_cmd) {
      const auto ids = split(fork_cell, ',');
      if (ids.size() != 4) throw Failure{kExitUsage, "--cell needs four comma-separated ids"};
      const char* cell[4] = {ids[0].c_str(), ids[1].c_str(), ids[2].c_str(), ids[3].c_str()};
      auto in = load(fork_in);
      spsf_diagram* d = nullptr;
      check(spsf_fork(in.get(), cell, &d), "fork");
      Diagram out(d);
      check(spsf_diagram_save(out.get(), fork_out.c_str()), "saving " + fork_out);
      std::cout << "wrote " << fork_out << " (" << spsf_diagram_size(out.get()) << " elements)\n";
    } else if (*con_cmd) {
      auto in = load(con_in);
      char* text = nullptr;
      check(spsf_congruence_report(in.get(), con_ji, con_colors, &text), "congruences");
      std::cout << take(text);
    } else if (*check_cmd) {
      auto in = load(check_in);
      bool all = true;
      for (const auto& p : props) {
        int holds = 0;
        check(spsf_check(in.get(), p.c_str(), &holds), "check " + p);
        std::cout << p << ": " << (holds ? "pass" : "fail") << "\n";
        all = all && holds;
      }
      if (!all) return kExitValidation;
    } else if (*enum_cmd) {
      Diagram base;
      int p = 0, q = 0;
      spsf_diagram* d = nullptr;
      if (parse_grid(enum_base, p, q)) {
        check(spsf_grid(p, q, &d), "grid");
      } else {
        check(spsf_diagram_load(enum_base.c_str(), &d), "loading " + enum_base);
      }
      base.reset(d);
      EmitContext ctx;
      ctx.dir = enum_emit;
      if (!enum_emit.empty()) std::filesystem::create_directories(enum_emit);
      spsf_enumerate_params params{enum_forks, enum_max_elements, enum_threads};
      char* stats = nullptr;
      check(spsf_enumerate(base.get(), &params, emit_one, &ctx, &stats), "enumerate");
      if (!ctx.error.empty()) throw Failure{kExitValidation, "emit: " + ctx.error};
      std::cout << take(stats);
    } else if (*search_cmd) {
      spsf_order* o = nullptr;
      if (search_target == "d8") {
        check(spsf_order_d8(&o), "target");
      } else {
        check(spsf_order_load(search_target.c_str(), &o), "loading " + search_target);
      }
      Order target(o);
      sp.grid_max_p = grid_max[0];
      sp.grid_max_q = grid_max[1];
      sp.prune_on_ji_count = no_prune ? 0 : 1;
      sp.checkpoint_path = search_checkpoint.empty() ? nullptr : search_checkpoint.c_str();
      sp.resume = resume ? 1 : 0;
      sp.include_timing = timing ? 1 : 0;
      char* report = nullptr;
      check(spsf_search(target.get(), &sp, &report), "search");
      const auto text = take(report);
      write_output(search_report, text);
      if (!search_report.empty() && search_report != "-") {
        const bool found = text.find("\"witness\": null") == std::string::npos;
        std::cout << (found ? "witness found" : "exhausted within bounds, no witness")
                  << "; report written to " << search_report << "\n";
      }
    } else if (*dot_cmd) {
      auto in = load(dot_in);
      char* dot = nullptr;
      check(spsf_export_dot(in.get(), dot_colors, &dot), "export-dot");
      write_output(dot_out, take(dot));
    } else if (*verify_cmd) {
      auto in = load(verify_in);
      char* report = nullptr;
      check(spsf_verify(in.get(), &report), "verify");
      write_output(verify_out, take(report));
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
