#include "spsforge/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "spsforge/document.hpp"
#include "spsforge/error.hpp"
#include "spsforge/fork.hpp"

namespace spsforge {

namespace {

constexpr int kNeverExpand = std::numeric_limits<int>::max();

struct Node {
  PlanarDiagram diagram;
  std::string key;
  FiniteOrder ji;
  std::uint64_t congruence_count = 0;
  int forks = 0;
  int budget = 0;
};

Node make_node(PlanarDiagram diagram, int forks, int budget, std::string key = {}) {
  Node node;
  node.key = key.empty() ? canonical_key(diagram.lattice()) : std::move(key);
  auto structure = ji_congruence_order(diagram.lattice());
  node.ji = std::move(structure.ji.order);
  node.congruence_count = structure.ji.congruence_count;
  node.diagram = std::move(diagram);
  node.forks = forks;
  node.budget = budget;
  return node;
}

bool emission_less(const Node& a, const Node& b) {
  if (a.diagram.size() != b.diagram.size()) return a.diagram.size() < b.diagram.size();
  return a.key < b.key;
}

// Children of one parent, in cell order.
struct Expansion {
  std::vector<Node> children;
  std::size_t insertions = 0;
  std::size_t tight = 0;
  std::size_t wide = 0;
  std::size_t truncated = 0;
  std::size_t violations = 0;
};

Expansion expand(const Node& parent, const EnumerationLimits& limits) {
  Expansion out;
  for (const auto& cell : parent.diagram.cells()) {
    const bool tight = classify_cell(parent.diagram, cell) == SquareKind::kTight;
    PlanarDiagram child;
    try {
      child = insert_fork(parent.diagram, cell).first;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge) throw;
      ++out.truncated;
      continue;
    }
    ++out.insertions;
    ++(tight ? out.tight : out.wide);
    if (child.size() > limits.max_elements) {
      ++out.truncated;
      continue;
    }
    Node node = make_node(std::move(child), parent.forks + 1, parent.budget - 1);
    if (node.ji.size() != parent.ji.size() + (tight ? 1 : 0)) ++out.violations;
    out.children.push_back(std::move(node));
  }
  return out;
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct State {
  int layer = 0;
  std::vector<Node> frontier;
  std::size_t next_parent = 0;
  std::vector<Node> gathered;
  std::unordered_map<std::string, int> seen;
  EnumerationStats stats;
};

Json stats_to_json(const EnumerationStats& s) {
  Json j = Json::object();
  j["explored"] = s.explored;
  j["pruned"] = s.pruned;
  j["truncated_by_elements"] = s.truncated_by_elements;
  j["at_fork_cap"] = s.at_fork_cap;
  j["insertions"] = s.insertions;
  j["tight_insertions"] = s.tight_insertions;
  j["wide_insertions"] = s.wide_insertions;
  j["count_law_violations"] = s.count_law_violations;
  j["cc1_violations"] = s.cc1_violations;
  j["cc2_violations"] = s.cc2_violations;
  j["per_stratum"] = s.per_stratum;
  return j;
}

EnumerationStats stats_from_json(const Json& j) {
  EnumerationStats s;
  s.explored = j.at("explored").get<std::size_t>();
  s.pruned = j.at("pruned").get<std::size_t>();
  s.truncated_by_elements = j.at("truncated_by_elements").get<std::size_t>();
  s.at_fork_cap = j.at("at_fork_cap").get<std::size_t>();
  s.insertions = j.at("insertions").get<std::size_t>();
  s.tight_insertions = j.at("tight_insertions").get<std::size_t>();
  s.wide_insertions = j.at("wide_insertions").get<std::size_t>();
  s.count_law_violations = j.at("count_law_violations").get<std::size_t>();
  s.cc1_violations = j.at("cc1_violations").get<std::size_t>();
  s.cc2_violations = j.at("cc2_violations").get<std::size_t>();
  s.per_stratum = j.at("per_stratum").get<std::vector<std::size_t>>();
  return s;
}

Json node_to_json(const Node& n) {
  Json j = Json::object();
  j["forks"] = n.forks;
  j["budget"] = n.budget;
  j["key"] = to_hex(n.key);
  j["diagram"] = document_to_json(document_of(n.diagram));
  return j;
}

Node node_from_json(const Json& j) {
  return make_node(diagram_of(document_from_json(j.at("diagram"))), j.at("forks").get<int>(),
                   j.at("budget").get<int>(), from_hex(j.at("key").get<std::string>()));
}

Json fingerprint(const std::vector<EnumerationBase>& bases, const EnumerationLimits& limits) {
  Json j = Json::object();
  Json list = Json::array();
  for (const auto& b : bases) {
    list.push_back({{"key", to_hex(canonical_key(b.diagram.lattice()))}, {"max_forks", b.max_forks}});
  }
  j["bases"] = std::move(list);
  j["max_elements"] = limits.max_elements;
  j["prune_above_ji"] = limits.prune_above_ji ? Json(*limits.prune_above_ji) : Json(nullptr);
  return j;
}

void save_checkpoint(const std::string& path, const Json& print, const State& state) {
  Json j = Json::object();
  j["format"] = "spsforge-checkpoint";
  j["version"] = 1;
  j["fingerprint"] = print;
  j["layer"] = state.layer;
  j["next_parent"] = state.next_parent;
  std::vector<std::pair<std::string, int>> seen(state.seen.begin(), state.seen.end());
  std::sort(seen.begin(), seen.end());
  Json keys = Json::array();
  for (const auto& [key, budget] : seen) keys.push_back({to_hex(key), budget});
  j["seen"] = std::move(keys);
  Json frontier = Json::array();
  for (const auto& n : state.frontier) frontier.push_back(node_to_json(n));
  j["frontier"] = std::move(frontier);
  Json gathered = Json::array();
  for (const auto& n : state.gathered) gathered.push_back(node_to_json(n));
  j["gathered"] = std::move(gathered);
  j["stats"] = stats_to_json(state.stats);
  const std::string tmp = path + ".tmp";
  write_text_file(tmp, j.dump() + "\n");
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot move checkpoint into place at " + path);
}

State load_checkpoint(const std::string& path, const Json& print) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error&) {
    fail(ErrorCode::kParseError, "checkpoint " + path + " is not valid JSON");
  }
  try {
    if (j.at("format") != "spsforge-checkpoint" || j.at("version") != 1) {
      fail(ErrorCode::kValidationError, "checkpoint " + path + " has an unknown format");
    }
    if (j.at("fingerprint") != print) {
      fail(ErrorCode::kValidationError, "checkpoint " + path + " belongs to a different run");
    }
    State state;
    state.layer = j.at("layer").get<int>();
    state.next_parent = j.at("next_parent").get<std::size_t>();
    for (const auto& entry : j.at("seen")) {
      state.seen.emplace(from_hex(entry.at(0).get<std::string>()), entry.at(1).get<int>());
    }
    for (const auto& n : j.at("frontier")) state.frontier.push_back(node_from_json(n));
    for (const auto& n : j.at("gathered")) state.gathered.push_back(node_from_json(n));
    state.stats = stats_from_json(j.at("stats"));
    return state;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kValidationError, "checkpoint " + path + ": " + e.what());
  }
}

class Enumerator {
 public:
  Enumerator(const EnumerationLimits& limits, const Visitor& visit, int threads)
      : limits_(limits), visit_(visit), threads_(threads) {}

  // Deduplicates one stratum, emits the new lattices and returns false if
  // the visitor asked to stop. The next frontier is left in state.frontier.
  bool settle(State& state, std::vector<Node> candidates) {
    auto& stats = state.stats;
    if (stats.per_stratum.size() <= static_cast<std::size_t>(state.layer)) {
      stats.per_stratum.resize(state.layer + 1, 0);
    }
    std::unordered_map<std::string, std::size_t> group;
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      auto [it, inserted] = group.emplace(candidates[i].key, reps.size());
      if (inserted) {
        reps.push_back(i);
      } else if (candidates[i].budget > candidates[reps[it->second]].budget) {
        reps[it->second] = i;
      }
    }

    std::vector<Node> emitted;
    std::vector<Node> frontier;
    for (std::size_t r : reps) {
      Node& node = candidates[r];
      auto it = state.seen.find(node.key);
      if (it == state.seen.end()) {
        if (!check_cc1(node.ji).holds) ++stats.cc1_violations;
        if (!check_cc2(node.ji).holds) ++stats.cc2_violations;
        if (limits_.prune_above_ji && node.ji.size() > *limits_.prune_above_ji) {
          state.seen.emplace(node.key, kNeverExpand);
          ++stats.pruned;
          continue;
        }
        state.seen.emplace(node.key, node.budget);
        emitted.push_back(std::move(node));
      } else if (it->second < node.budget) {
        // Reached again with more forks to spend: expand, but do not re-emit.
        it->second = node.budget;
        frontier.push_back(std::move(node));
      }
    }

    std::sort(emitted.begin(), emitted.end(), emission_less);
    for (auto& node : emitted) {
      ++stats.explored;
      ++stats.per_stratum[state.layer];
      const Enumerated view{node.diagram, node.key, node.ji, node.congruence_count, node.forks};
      if (!visit_(view)) return false;
      if (node.budget > 0) {
        frontier.push_back(std::move(node));
      } else {
        ++stats.at_fork_cap;
      }
    }
    std::sort(frontier.begin(), frontier.end(), emission_less);
    state.frontier = std::move(frontier);
    state.next_parent = 0;
    return true;
  }

  void expand_range(State& state, std::size_t end) {
    const std::size_t begin = state.next_parent;
    std::vector<Expansion> results(end - begin);
    parallel_for(results.size(), threads_,
                 [&](std::size_t i) { results[i] = expand(state.frontier[begin + i], limits_); });
    auto& stats = state.stats;
    for (auto& r : results) {
      stats.insertions += r.insertions;
      stats.tight_insertions += r.tight;
      stats.wide_insertions += r.wide;
      stats.truncated_by_elements += r.truncated;
      stats.count_law_violations += r.violations;
      for (auto& child : r.children) state.gathered.push_back(std::move(child));
    }
    state.next_parent = end;
  }

 private:
  const EnumerationLimits& limits_;
  const Visitor& visit_;
  int threads_;
};

}  // namespace

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("SPSFORGE_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1) {
      fail(ErrorCode::kInvalidArgument, "SPSFORGE_THREADS must be a positive integer");
    }
    n = static_cast<int>(std::min<long>(n, cap));
  }
  return n;
}

TargetOrder p_d8() {
  return {"P_D8", FiniteOrder::build({"alpha", "beta", "gamma", "delta", "epsilon"},
                                     {{"epsilon", "gamma"},
                                      {"epsilon", "delta"},
                                      {"gamma", "alpha"},
                                      {"gamma", "beta"},
                                      {"delta", "alpha"},
                                      {"delta", "beta"}})};
}

EnumerationStats enumerate(const std::vector<EnumerationBase>& bases,
                           const EnumerationLimits& limits, const RunOptions& options,
                           const Visitor& visit) {
  const int threads = resolve_threads(options.threads);
  const bool checkpointing = !options.checkpoint_path.empty();
  const Json print = checkpointing ? fingerprint(bases, limits) : Json();
  Enumerator engine(limits, visit, threads);

  State state;
  bool resumed = false;
  if (checkpointing && options.resume && std::filesystem::exists(options.checkpoint_path)) {
    state = load_checkpoint(options.checkpoint_path, print);
    resumed = true;
  }
  if (!resumed) {
    std::vector<Node> roots;
    for (const auto& b : bases) {
      if (b.max_forks < 0) fail(ErrorCode::kInvalidArgument, "fork caps must be non-negative");
      if (b.diagram.size() > limits.max_elements) continue;
      roots.push_back(make_node(b.diagram, 0, b.max_forks));
    }
    if (!engine.settle(state, std::move(roots))) {
      state.stats.threads = threads;
      return state.stats;
    }
  }

  const std::size_t chunk =
      checkpointing && options.checkpoint_every > 0 ? options.checkpoint_every
                                                    : std::numeric_limits<std::size_t>::max();
  while (!state.frontier.empty()) {
    while (state.next_parent < state.frontier.size()) {
      const std::size_t end =
          state.frontier.size() - state.next_parent > chunk ? state.next_parent + chunk
                                                            : state.frontier.size();
      engine.expand_range(state, end);
      if (checkpointing) save_checkpoint(options.checkpoint_path, print, state);
    }
    std::vector<Node> candidates = std::move(state.gathered);
    state.gathered.clear();
    ++state.layer;
    if (!engine.settle(state, std::move(candidates))) {
      state.stats.threads = threads;
      return state.stats;
    }
    if (checkpointing) save_checkpoint(options.checkpoint_path, print, state);
  }
  state.stats.completed = true;
  state.stats.threads = threads;
  return state.stats;
}

std::vector<EnumerationBase> grid_bases(const SearchBounds& bounds) {
  std::vector<EnumerationBase> out;
  for (int p = 1; p <= bounds.grid_max_p; ++p) {
    for (int q = 1; q <= bounds.grid_max_q; ++q) {
      // grid(q, p) is the mirror image of grid(p, q).
      if (p > q && q <= bounds.grid_max_p && p <= bounds.grid_max_q) continue;
      if (static_cast<std::size_t>((p + 1) * (q + 1)) > bounds.max_elements) continue;
      out.push_back({grid(p, q), bounds.cap_for(p, q)});
    }
  }
  return out;
}

SearchReport search_representation(const TargetOrder& target, const SearchBounds& bounds,
                                   const RunOptions& options) {
  if (target.order.size() == 0) fail(ErrorCode::kInvalidTarget, "target order is empty");
  if (bounds.max_forks < 0 || bounds.max_forks_large.value_or(0) < 0 || bounds.grid_max_p < 1 ||
      bounds.grid_max_q < 1 || bounds.max_elements < 4) {
    fail(ErrorCode::kInvalidArgument,
         "bounds need max_forks >= 0, grid caps >= 1 and max_elements >= 4");
  }
  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  report.target = target;
  report.bounds = bounds;
  const auto bases = grid_bases(bounds);
  for (const auto& b : bases) report.bases.push_back(b.diagram.provenance().base);

  EnumerationLimits limits;
  limits.max_elements = bounds.max_elements;
  if (bounds.prune_on_ji_count) limits.prune_above_ji = target.order.size();

  const std::string target_key = canonical_key(target.order);
  report.stats = enumerate(bases, limits, options, [&](const Enumerated& e) {
    if (e.ji_order.size() != target.order.size() || canonical_key(e.ji_order) != target_key) {
      return true;
    }
    auto iso = order_isomorphic(target.order, e.ji_order);
    if (!iso) return true;
    report.witness = Witness{e.diagram, e.forks, *iso};
    return false;
  });
  report.exhausted = !report.witness && report.stats.completed;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::optional<std::pair<int, int>> parse_grid_label(const std::string& label) {
  if (label.rfind("grid:", 0) != 0) return std::nullopt;
  const std::string rest = label.substr(5);
  const auto x = rest.find('x');
  if (x == std::string::npos || x == 0 || x + 1 == rest.size()) return std::nullopt;
  auto number = [](const std::string& s) -> std::optional<int> {
    if (s.size() > 4 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    return std::stoi(s);
  };
  auto p = number(rest.substr(0, x));
  auto q = number(rest.substr(x + 1));
  if (!p || !q || *p < 1 || *q < 1) return std::nullopt;
  return std::pair{*p, *q};
}

VerificationReport verify_necessary_conditions(const PlanarDiagram& diagram) {
  const auto& lattice = diagram.lattice();
  if (!is_semimodular(lattice)) fail(ErrorCode::kNotSPS, "lattice is not semimodular");
  if (!is_slim(lattice)) fail(ErrorCode::kNotSPS, "lattice is not slim");
  VerificationReport report;
  auto structure = ji_congruence_order(lattice);
  report.ji_count = structure.ji.size();
  report.congruence_count = structure.ji.congruence_count;
  report.cc1 = check_cc1(structure.ji.order);
  report.cc2 = check_cc2(structure.ji.order);
  report.ji_order = std::move(structure.ji.order);

  const auto& provenance = diagram.provenance();
  const auto dims = parse_grid_label(provenance.base);
  if (!dims) return report;
  CountLawReplay replay;
  PlanarDiagram current = grid(dims->first, dims->second);
  std::size_t ji = ji_congruence_order(current.lattice()).ji.size();
  bool applied = true;
  for (const auto& ids : provenance.forks) {
    FourCell cell;
    try {
      cell = current.cell_from_ids(ids);
    } catch (const Error&) {
      applied = false;
      break;
    }
    const bool tight = classify_cell(current, cell) == SquareKind::kTight;
    current = insert_fork(current, cell).first;
    const std::size_t next = ji_congruence_order(current.lattice()).ji.size();
    if (next != ji + (tight ? 1 : 0)) ++replay.violations;
    ji = next;
    ++replay.steps;
  }
  replay.reproduces = applied && canonical_key(current.lattice()) == canonical_key(lattice);
  report.replay = replay;
  return report;
}

std::string to_hex(const std::string& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += kDigits[c >> 4];
    out += kDigits[c & 15];
  }
  return out;
}

std::string from_hex(const std::string& hex) {
  auto value = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    fail(ErrorCode::kParseError, "invalid hex digit in key");
  };
  if (hex.size() % 2 != 0) fail(ErrorCode::kParseError, "hex key has odd length");
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out += static_cast<char>(value(hex[i]) * 16 + value(hex[i + 1]));
  }
  return out;
}

}  // namespace spsforge
