#include <cstdlib>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "spsforge/error.hpp"
#include "spsforge/search.hpp"
#include "support.hpp"

using namespace spsforge;
using namespace spsforge::testing;

namespace {

struct Emitted {
  std::string key;
  std::size_t size;
  int forks;
  std::string base;
  std::vector<CellIds> script;

  friend bool operator==(const Emitted&, const Emitted&) = default;
};

struct Run {
  std::vector<Emitted> emitted;
  std::vector<PlanarDiagram> diagrams;
  EnumerationStats stats;
};

Run run(const std::vector<EnumerationBase>& bases, RunOptions options = {},
        EnumerationLimits limits = {}) {
  Run r;
  r.stats = enumerate(bases, limits, options, [&](const Enumerated& e) {
    r.emitted.push_back({e.key, e.diagram.size(), e.forks, e.diagram.provenance().base,
                         e.diagram.provenance().forks});
    r.diagrams.push_back(e.diagram);
    return true;
  });
  return r;
}

RunOptions with_threads(int t) {
  RunOptions o;
  o.threads = t;
  return o;
}

// Every result of every fork script of the given length, without any
// deduplication.
std::vector<PlanarDiagram> all_scripts(const PlanarDiagram& base, int length) {
  std::vector<PlanarDiagram> layer{base};
  for (int k = 0; k < length; ++k) {
    std::vector<PlanarDiagram> next;
    for (const auto& d : layer) {
      for (const auto& c : d.cells()) next.push_back(insert_fork(d, c).first);
    }
    layer = std::move(next);
  }
  return layer;
}

std::size_t isomorphism_classes(const std::vector<PlanarDiagram>& diagrams) {
  std::vector<const FiniteOrder*> reps;
  for (const auto& d : diagrams) {
    bool known = false;
    for (const auto* r : reps) known = known || backtrack_isomorphic(*r, d.lattice().order());
    if (!known) reps.push_back(&d.lattice().order());
  }
  return reps.size();
}

FiniteOrder v_order() {
  return FiniteOrder::build({"alpha", "beta", "gamma"}, {{"gamma", "alpha"}, {"gamma", "beta"}});
}

SearchBounds small_bounds(int forks, int p, int q) {
  SearchBounds b;
  b.max_forks = forks;
  b.grid_max_p = p;
  b.grid_max_q = q;
  b.max_elements = 40;
  return b;
}

}  // namespace

TEST_CASE("the built-in target is the order of join-irreducibles of D_8") {
  const auto target = p_d8();
  CHECK(target.order.size() == 5);
  auto d8 = down_set_lattice(target.order);
  CHECK(d8.size() == 8);
  CHECK(is_distributive(d8));
  CHECK(brute_isomorphic(join_irreducible_order(d8), target.order));
  CHECK(check_cc1(target.order).holds);
  CHECK(check_cc2(target.order).holds);
}

TEST_CASE("enumeration from the Boolean square, stratum by stratum") {
  auto zero = run({{grid(1, 1), 0}});
  REQUIRE(zero.emitted.size() == 1);
  CHECK(zero.emitted[0].size == 4);

  auto one = run({{grid(1, 1), 1}});
  CHECK(one.stats.per_stratum == std::vector<std::size_t>{1, 1});
  CHECK(one.diagrams[1].size() == 7);
  CHECK(backtrack_isomorphic(one.diagrams[1].lattice().order(), n7_by_hand().lattice().order()));

  auto two = run({{grid(1, 1), 2}});
  REQUIRE(two.stats.per_stratum.size() == 3);
  CHECK(two.stats.per_stratum[2] == isomorphism_classes(all_scripts(grid(1, 1), 2)));
  CHECK(two.stats.per_stratum[2] == 2);
  CHECK(two.stats.completed);
}

TEST_CASE("strata match isomorphism classes of all fork scripts") {
  // Exactly three forks: every script's result must be emitted in stratum
  // three or earlier, and stratum three holds the new classes.
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}}) {
    auto r = run({{grid(p, q), 3}});
    std::vector<PlanarDiagram> upto2;
    for (int k = 0; k <= 2; ++k) {
      for (auto& d : all_scripts(grid(p, q), k)) upto2.push_back(std::move(d));
    }
    const auto before = isomorphism_classes(upto2);
    auto with3 = upto2;
    for (auto& d : all_scripts(grid(p, q), 3)) with3.push_back(std::move(d));
    CHECK(r.stats.explored == isomorphism_classes(with3));
    CHECK(r.stats.per_stratum[0] + r.stats.per_stratum[1] + r.stats.per_stratum[2] == before);
  }
}

TEST_CASE("emitted lattices are pairwise non-isomorphic and SPS") {
  auto r = run({{grid(1, 1), 3}, {grid(1, 2), 3}, {grid(2, 2), 2}});
  for (std::size_t i = 0; i < r.diagrams.size(); ++i) {
    const auto& d = r.diagrams[i];
    CHECK(is_semimodular(d.lattice()));
    CHECK(is_slim(d.lattice()));
    CHECK(d.all_faces_are_cells());
    CHECK(static_cast<int>(d.provenance().forks.size()) == r.emitted[i].forks);
    for (std::size_t j = i + 1; j < r.diagrams.size(); ++j) {
      CHECK_FALSE(backtrack_isomorphic(d.lattice().order(), r.diagrams[j].lattice().order()));
    }
  }
}

TEST_CASE("emission order is sorted and independent of the thread count") {
  const std::vector<EnumerationBase> bases{{grid(1, 1), 4}, {grid(1, 2), 3}, {grid(2, 2), 2}};
  auto one = run(bases, with_threads(1));
  auto four = run(bases, with_threads(4));
  auto again = run(bases, with_threads(3));
  CHECK(one.emitted == four.emitted);
  CHECK(one.emitted == again.emitted);
  CHECK(four.stats.threads == 4);
  for (std::size_t i = 1; i < one.emitted.size(); ++i) {
    const auto& a = one.emitted[i - 1];
    const auto& b = one.emitted[i];
    if (a.forks == b.forks) CHECK(std::pair(a.size, a.key) < std::pair(b.size, b.key));
    CHECK(a.forks <= b.forks);
  }
}

TEST_CASE("count law and necessary conditions hold across the enumeration") {
  auto r = run({{grid(1, 1), 4}, {grid(1, 2), 3}, {grid(2, 2), 3}});
  CHECK(r.stats.insertions > 0);
  CHECK(r.stats.tight_insertions + r.stats.wide_insertions == r.stats.insertions);
  CHECK(r.stats.tight_insertions > 0);
  CHECK(r.stats.wide_insertions > 0);
  CHECK(r.stats.count_law_violations == 0);
  CHECK(r.stats.cc1_violations == 0);
  CHECK(r.stats.cc2_violations == 0);
}

TEST_CASE("element bound truncates the stream") {
  EnumerationLimits limits;
  limits.max_elements = 10;
  auto r = run({{grid(1, 1), 3}}, {}, limits);
  CHECK(r.stats.truncated_by_elements > 0);
  for (const auto& e : r.emitted) CHECK(e.size <= 10);
}

TEST_CASE("a visitor can stop the run") {
  std::size_t seen = 0;
  auto stats = enumerate({{grid(1, 1), 4}}, {}, {}, [&](const Enumerated&) { return ++seen < 3; });
  CHECK(seen == 3);
  CHECK_FALSE(stats.completed);
}

TEST_CASE("grid bases keep one grid per mirror pair") {
  auto bases = grid_bases(small_bounds(2, 3, 3));
  CHECK(bases.size() == 6);
  std::set<std::string> labels;
  for (const auto& b : bases) labels.insert(b.diagram.provenance().base);
  CHECK(labels == std::set<std::string>{"grid:1x1", "grid:1x2", "grid:1x3", "grid:2x2",
                                        "grid:2x3", "grid:3x3"});
  auto bounds = small_bounds(5, 3, 3);
  bounds.max_forks_large = 3;
  for (const auto& b : grid_bases(bounds)) {
    CHECK(b.max_forks == (b.diagram.provenance().base == "grid:1x1" ? 5 : 3));
  }
  CHECK(grid_bases(small_bounds(1, 1, 3)).size() == 3);
  auto tight = small_bounds(1, 3, 3);
  tight.max_elements = 9;
  CHECK(grid_bases(tight).size() == 4);
}

TEST_CASE("positive controls find witnesses") {
  const auto antichain_target = TargetOrder{"antichain", antichain(2)};
  auto a = search_representation(antichain_target, small_bounds(2, 2, 2));
  REQUIRE(a.witness.has_value());
  CHECK(a.witness->forks == 0);
  CHECK(a.witness->diagram.provenance().base == "grid:1x1");
  CHECK_FALSE(a.exhausted);

  auto v = search_representation({"V", v_order()}, small_bounds(2, 2, 2));
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->forks == 1);
  CHECK(v.witness->diagram.size() == 7);
  const auto ji = ji_congruence_order(v.witness->diagram.lattice()).ji.order;
  CHECK(brute_isomorphic(ji, v_order()));
  const auto& iso = v.witness->isomorphism;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) CHECK(v_order().leq(x, y) == ji.leq(iso[x], iso[y]));
  }
}

TEST_CASE("pruning never changes the verdict") {
  std::vector<TargetOrder> catalogue{
      {"point", antichain(1)},
      {"antichain2", antichain(2)},
      {"antichain3", antichain(3)},
      {"V", v_order()},
      {"chain2", chain(1).order()},
      {"Lambda", FiniteOrder::build({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}})},
      {"P_D8", p_d8().order},
  };
  for (const auto& target : catalogue) {
    auto bounds = small_bounds(3, 2, 2);
    auto pruned = search_representation(target, bounds);
    bounds.prune_on_ji_count = false;
    auto full = search_representation(target, bounds);
    CAPTURE(target.name);
    CHECK(pruned.witness.has_value() == full.witness.has_value());
    CHECK(pruned.exhausted == full.exhausted);
    if (pruned.witness && full.witness) {
      CHECK(canonical_key(pruned.witness->diagram.lattice()) ==
            canonical_key(full.witness->diagram.lattice()));
    }
    CHECK(full.stats.pruned == 0);
  }
}

TEST_CASE("orders failing a necessary condition are never found") {
  // A two-element chain fails CC2.
  auto chain_report = search_representation({"chain2", chain(1).order()}, small_bounds(3, 2, 2));
  CHECK(chain_report.exhausted);
  CHECK_FALSE(chain_report.witness.has_value());
}

TEST_CASE("search rejects bad targets and bounds") {
  try {
    search_representation({"empty", FiniteOrder{}}, small_bounds(1, 1, 1));
    FAIL("empty target accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidTarget);
  }
  auto bad = small_bounds(1, 0, 1);
  CHECK_THROWS_AS(search_representation(p_d8(), bad), Error);
}

TEST_CASE("checkpoint and resume reproduce an uninterrupted run") {
  const std::vector<EnumerationBase> bases{{grid(1, 1), 4}, {grid(1, 2), 2}};
  const auto reference = run(bases);

  const auto path = (std::filesystem::temp_directory_path() / "spsforge_test_checkpoint.json").string();
  std::filesystem::remove(path);
  RunOptions options;
  options.checkpoint_path = path;
  options.checkpoint_every = 2;
  // Stop at the first lattice with three forks.
  auto interrupted = enumerate(bases, {}, options, [](const Enumerated& e) { return e.forks < 3; });
  CHECK_FALSE(interrupted.completed);
  REQUIRE(std::filesystem::exists(path));

  options.resume = true;
  Run resumed;
  resumed.stats = enumerate(bases, {}, options, [&](const Enumerated& e) {
    resumed.emitted.push_back({e.key, e.diagram.size(), e.forks, e.diagram.provenance().base,
                               e.diagram.provenance().forks});
    return true;
  });
  CHECK(resumed.stats.completed);
  CHECK(resumed.stats.explored == reference.stats.explored);
  CHECK(resumed.stats.per_stratum == reference.stats.per_stratum);
  CHECK(resumed.stats.insertions == reference.stats.insertions);
  REQUIRE(!resumed.emitted.empty());
  CHECK(resumed.emitted.front().forks == 3);
  const std::vector<Emitted> tail(reference.emitted.end() - resumed.emitted.size(),
                                  reference.emitted.end());
  CHECK(resumed.emitted == tail);

  // A checkpoint from a different run is refused.
  try {
    enumerate({{grid(2, 2), 1}}, {}, options, [](const Enumerated&) { return true; });
    FAIL("foreign checkpoint accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidationError);
  }
  std::filesystem::remove(path);
}

TEST_CASE("verify_necessary_conditions") {
  auto l = l1();
  auto report = verify_necessary_conditions(l);
  CHECK(report.ji_count == 3);
  CHECK(report.congruence_count == 5);
  CHECK(report.cc1.holds);
  CHECK(report.cc2.holds);
  REQUIRE(report.replay.has_value());
  CHECK(report.replay->steps == 1);
  CHECK(report.replay->violations == 0);
  CHECK(report.replay->reproduces);

  auto g = verify_necessary_conditions(grid(2, 2));
  CHECK(g.ji_count == 4);
  CHECK(g.ji_order.covers().empty());
  CHECK(g.cc1.holds);
  CHECK(g.cc2.holds);
  CHECK(g.replay->steps == 0);

  // Hand-made diagrams carry no grid base, so there is nothing to replay.
  CHECK_FALSE(verify_necessary_conditions(n7_by_hand()).replay.has_value());

  auto m3_diagram = PlanarDiagram::build(
      {"0", "a", "b", "c", "1"}, {{"0", "a"}, {"0", "b"}, {"0", "c"}, {"a", "1"}, {"b", "1"}, {"c", "1"}},
      {{"0", {"a", "b", "c"}}}, {{"1", {"a", "b", "c"}}});
  auto n5_diagram = PlanarDiagram::build(
      {"0", "a", "b", "c", "1"}, {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "c"}, {"c", "1"}},
      {{"0", {"a", "c"}}}, {{"1", {"b", "c"}}});
  for (const auto* d : {&m3_diagram, &n5_diagram}) {
    try {
      verify_necessary_conditions(*d);
      FAIL("non-SPS lattice accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNotSPS);
    }
  }
}

TEST_CASE("replay detects a script that does not rebuild the lattice") {
  auto l = l1();
  auto p = l.provenance();
  p.base = "grid:1x2";
  l.set_provenance(p);
  auto report = verify_necessary_conditions(l);
  REQUIRE(report.replay.has_value());
  CHECK_FALSE(report.replay->reproduces);
}

TEST_CASE("thread count resolution") {
  unsetenv("SPSFORGE_THREADS");
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  setenv("SPSFORGE_THREADS", "2", 1);
  CHECK(resolve_threads(8) == 2);
  CHECK(resolve_threads(1) == 1);
  CHECK(resolve_threads(0) <= 2);
  setenv("SPSFORGE_THREADS", "lots", 1);
  CHECK_THROWS_AS(resolve_threads(1), Error);
  unsetenv("SPSFORGE_THREADS");
}

TEST_CASE("grid labels and hex keys") {
  CHECK(parse_grid_label("grid:2x3") == std::pair{2, 3});
  CHECK_FALSE(parse_grid_label("grid:0x3").has_value());
  CHECK_FALSE(parse_grid_label("grid:2").has_value());
  CHECK_FALSE(parse_grid_label("file.json").has_value());
  const std::string bytes("\x00\x07\xff\x10", 4);
  CHECK(to_hex(bytes) == "0007ff10");
  CHECK(from_hex(to_hex(bytes)) == bytes);
  CHECK_THROWS_AS(from_hex("0g"), Error);
}
