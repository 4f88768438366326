// Exercises the shared library through its C interface only.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "spsforge/spsforge.h"

namespace {

std::string take(char* s) {
  std::string out = s;
  spsf_string_free(s);
  return out;
}

spsf_diagram* grid_handle(int p, int q) {
  spsf_diagram* d = nullptr;
  REQUIRE(spsf_grid(p, q, &d) == SPSF_OK);
  return d;
}

spsf_diagram* l1_handle() {
  spsf_diagram* g = grid_handle(1, 1);
  const char* cell[4] = {"0", "a", "b", "1"};
  spsf_diagram* l = nullptr;
  REQUIRE(spsf_fork(g, cell, &l) == SPSF_OK);
  spsf_diagram_free(g);
  return l;
}

}  // namespace

TEST_CASE("grid and fork through the C interface") {
  spsf_diagram* l = l1_handle();
  CHECK(spsf_diagram_size(l) == 7);
  CHECK(spsf_diagram_has_rotation(l) == 1);
  CHECK(spsf_diagram_fork_count(l) == 1);
  int holds = 0;
  for (const char* p : {"semimodular", "slim", "planar", "cc1", "cc2", "patch", "rectangular"}) {
    CAPTURE(p);
    REQUIRE(spsf_check(l, p, &holds) == SPSF_OK);
    CHECK(holds == 1);
  }
  REQUIRE(spsf_check(l, "distributive", &holds) == SPSF_OK);
  CHECK(holds == 0);
  spsf_diagram_free(l);
}

TEST_CASE("errors carry a status and a message") {
  spsf_diagram* d = nullptr;
  CHECK(spsf_grid(0, 1, &d) == SPSF_E_INVALID_ARGUMENT);
  CHECK(d == nullptr);
  CHECK(std::string(spsf_last_error()).size() > 0);
  CHECK(std::string(spsf_status_name(SPSF_E_NOT_A_LATTICE)) == "NotALattice");
  CHECK(std::string(spsf_status_name(SPSF_OK)) == "Ok");

  spsf_diagram* g = grid_handle(1, 2);
  const char* not_a_cell[4] = {"0", "a", "b", "1"};
  spsf_diagram* out = nullptr;
  CHECK(spsf_fork(g, not_a_cell, &out) == SPSF_E_CELL_NOT_FOUND);
  CHECK(std::string(spsf_last_error()).find("4-cell") != std::string::npos);
  int holds = 0;
  CHECK(spsf_check(g, "bogus", &holds) == SPSF_E_INVALID_ARGUMENT);
  CHECK(spsf_check(nullptr, "slim", &holds) == SPSF_E_INVALID_ARGUMENT);
  spsf_diagram_free(g);

  CHECK(spsf_diagram_from_json("{ not json", &d) == SPSF_E_PARSE);
  CHECK(spsf_diagram_from_json(R"({"elements": ["0","a","b","x","y","1"],
      "covers": [["0","a"],["0","b"],["a","x"],["a","y"],["b","x"],["b","y"],["x","1"],["y","1"]]})",
                               &d) == SPSF_E_VALIDATION);
  CHECK(std::string(spsf_last_error()).find("NotALattice") != std::string::npos);
  CHECK(spsf_diagram_load("/nonexistent/spsforge.json", &d) == SPSF_E_IO);
}

TEST_CASE("the last error is per thread") {
  spsf_diagram* d = nullptr;
  CHECK(spsf_grid(0, 0, &d) != SPSF_OK);
  std::string other;
  std::thread t([&] { other = spsf_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK(!std::string(spsf_last_error()).empty());
}

TEST_CASE("JSON round trip and canonical keys") {
  spsf_diagram* l = l1_handle();
  char* text = nullptr;
  REQUIRE(spsf_diagram_to_json(l, &text) == SPSF_OK);
  const std::string json = take(text);
  spsf_diagram* back = nullptr;
  REQUIRE(spsf_diagram_from_json(json.c_str(), &back) == SPSF_OK);
  char* k1 = nullptr;
  char* k2 = nullptr;
  REQUIRE(spsf_diagram_canonical_key(l, &k1) == SPSF_OK);
  REQUIRE(spsf_diagram_canonical_key(back, &k2) == SPSF_OK);
  CHECK(take(k1) == take(k2));
  REQUIRE(spsf_diagram_to_json(back, &text) == SPSF_OK);
  CHECK(take(text) == json);
  spsf_diagram_free(back);
  spsf_diagram_free(l);
}

TEST_CASE("lattice-only documents") {
  spsf_diagram* d = nullptr;
  REQUIRE(spsf_diagram_from_json(
              R"({"elements": ["0","a","b","1"], "covers": [["0","a"],["0","b"],["a","1"],["b","1"]]})",
              &d) == SPSF_OK);
  CHECK(spsf_diagram_has_rotation(d) == 0);
  int holds = 1;
  REQUIRE(spsf_check(d, "planar", &holds) == SPSF_OK);
  CHECK(holds == 0);
  REQUIRE(spsf_check(d, "cc2", &holds) == SPSF_OK);
  CHECK(holds == 1);
  char* dot = nullptr;
  CHECK(spsf_export_dot(d, 0, &dot) == SPSF_E_VALIDATION);
  spsf_diagram_free(d);
}

TEST_CASE("congruence report, DOT and verification") {
  spsf_diagram* l = l1_handle();
  char* s = nullptr;
  REQUIRE(spsf_congruence_report(l, 1, 1, &s) == SPSF_OK);
  const auto report = take(s);
  CHECK(report.find("join-irreducible congruences: 3") != std::string::npos);
  CHECK(report.find("congruences: 5") != std::string::npos);
  REQUIRE(spsf_export_dot(l, 1, &s) == SPSF_OK);
  CHECK(take(s).find("label=\"c2\"") != std::string::npos);
  REQUIRE(spsf_verify(l, &s) == SPSF_OK);
  const auto verify = take(s);
  CHECK(verify.find("\"violations\": 0") != std::string::npos);
  CHECK(verify.find("\"reproduces\": true") != std::string::npos);
  spsf_diagram_free(l);
}

namespace {

struct Collected {
  std::vector<std::size_t> sizes;
  std::vector<int> forks;
  std::size_t stop_after = 0;
};

int collect(void* user, const spsf_diagram* d, size_t) {
  auto* c = static_cast<Collected*>(user);
  c->sizes.push_back(spsf_diagram_size(d));
  c->forks.push_back(spsf_diagram_fork_count(d));
  return c->stop_after == 0 || c->sizes.size() < c->stop_after;
}

}  // namespace

TEST_CASE("enumeration through the C interface") {
  spsf_diagram* g = grid_handle(1, 1);
  spsf_enumerate_params params{2, 0, 1};
  Collected c;
  char* stats = nullptr;
  REQUIRE(spsf_enumerate(g, &params, collect, &c, &stats) == SPSF_OK);
  const auto text = take(stats);
  CHECK(c.sizes == std::vector<std::size_t>{4, 7, 10, 11});
  CHECK(c.forks == std::vector<int>{0, 1, 2, 2});
  CHECK(text.find("\"completed\": true") != std::string::npos);

  Collected stopped;
  stopped.stop_after = 2;
  REQUIRE(spsf_enumerate(g, &params, collect, &stopped, nullptr) == SPSF_OK);
  CHECK(stopped.sizes.size() == 2);

  params.max_forks = -1;
  CHECK(spsf_enumerate(g, &params, collect, &c, nullptr) == SPSF_E_INVALID_ARGUMENT);
  spsf_diagram_free(g);
}

TEST_CASE("search through the C interface") {
  spsf_order* d8 = nullptr;
  REQUIRE(spsf_order_d8(&d8) == SPSF_OK);
  CHECK(spsf_order_size(d8) == 5);
  spsf_search_params params;
  spsf_search_params_init(&params);
  params.max_forks = 3;
  params.grid_max_p = 2;
  params.grid_max_q = 2;
  char* report = nullptr;
  REQUIRE(spsf_search(d8, &params, &report) == SPSF_OK);
  const auto text = take(report);
  CHECK(text.find("\"exhausted\": true") != std::string::npos);
  CHECK(text.find("\"witness\": null") != std::string::npos);
  CHECK(text.find("wall_time") == std::string::npos);
  spsf_order_free(d8);

  spsf_order* v = nullptr;
  REQUIRE(spsf_order_from_json(R"({"elements": ["a","b","c"], "covers": [["c","a"],["c","b"]]})",
                               &v) == SPSF_OK);
  REQUIRE(spsf_search(v, &params, &report) == SPSF_OK);
  CHECK(take(report).find("\"verdict\": \"witness found\"") != std::string::npos);
  spsf_order_free(v);

  spsf_order* empty = nullptr;
  CHECK(spsf_order_from_json(R"({"elements": [], "covers": []})", &empty) ==
        SPSF_E_INVALID_TARGET);
}
