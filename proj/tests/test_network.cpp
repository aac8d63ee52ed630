#include <algorithm>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wbfmap/generate.hpp"
#include "wbfmap/json_io.hpp"
#include "wbfmap/network.hpp"

using namespace wbfmap;

TEST_CASE("parse_network reads the chain2 document") {
  BeliefNetwork net = testutil::chain2();
  REQUIRE(net.node_count() == 2);
  CHECK(net.node_names[0] == "A");
  CHECK(net.node_names[1] == "B");
  CHECK(net.parents[0].empty());
  REQUIRE(net.parents[1].size() == 1);
  CHECK(net.parents[1][0] == 0);
  CHECK(net.domain_size(0) == 2);
  CHECK(net.cpts[1].rows[0][0] == 0.9);
  CHECK(net.cpts[1].rows[1][0] == 0.5);
}

TEST_CASE("parse_network rejects a non-normalized row, naming node and row") {
  const char* doc =
      R"({"nodes":[{"name":"A","values":["t","f"],"parents":[],"cpt":[[0.8,0.2]]},)"
      R"({"name":"B","values":["t","f"],"parents":["A"],"cpt":[[0.9,0.2],[0.5,0.5]]}]})";
  try {
    parse_network(doc);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("'B'") != std::string::npos);
    CHECK(what.find("row 0") != std::string::npos);
  }
}

TEST_CASE("parse_network detects a two-node cycle") {
  const char* doc =
      R"({"nodes":[{"name":"A","values":["t","f"],"parents":["B"],"cpt":[[0.8,0.2],[0.5,0.5]]},)"
      R"({"name":"B","values":["t","f"],"parents":["A"],"cpt":[[0.9,0.1],[0.5,0.5]]}]})";
  REQUIRE_THROWS_MATCHES(parse_network(doc), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("cycle")));
}

TEST_CASE("parse_network rejects unknown parents and bad shapes") {
  CHECK_THROWS_AS(
      parse_network(
          R"({"nodes":[{"name":"B","values":["t","f"],"parents":["Z"],"cpt":[[1,0]]}]})"),
      ParseError);
  CHECK_THROWS_AS(parse_network("not json"), ParseError);
  // row count mismatch
  CHECK_THROWS_AS(
      parse_network(
          R"({"nodes":[{"name":"A","values":["t","f"],"parents":[],"cpt":[[0.8,0.2]]},)"
          R"({"name":"B","values":["t","f"],"parents":["A"],"cpt":[[0.9,0.1]]}]})"),
      ParseError);
  // entry outside [0,1]
  CHECK_THROWS_AS(
      parse_network(
          R"({"nodes":[{"name":"A","values":["t","f"],"parents":[],"cpt":[[1.5,-0.5]]}]})"),
      ParseError);
  // duplicate node name
  CHECK_THROWS_AS(
      parse_network(
          R"({"nodes":[{"name":"A","values":["t"],"parents":[],"cpt":[[1.0]]},)"
          R"({"name":"A","values":["t"],"parents":[],"cpt":[[1.0]]}]})"),
      ParseError);
}

TEST_CASE("joint_probability multiplies the selected CPT entries") {
  BeliefNetwork net = testutil::chain2();
  CHECK(joint_probability(net, {0, 0}) == 0.8 * 0.9);  // A=t, B=t
  CHECK(joint_probability(net, {1, 0}) == 0.2 * 0.5);  // A=f, B=t
  BeliefNetwork det = testutil::chain2_with_row(0.0, 0.5);
  CHECK(joint_probability(det, {0, 0}) == 0.0);  // hits a zero entry
}

TEST_CASE("is_polytree on the basic shapes") {
  CHECK(is_polytree(testutil::chain2()));
  CHECK_FALSE(is_polytree(testutil::diamond()));
  BeliefNetwork single;
  single.node_names = {"X"};
  single.value_names = {{"a", "b"}};
  single.parents = {{}};
  single.cpts = {{{}, 2, {{0.5, 0.5}}}};
  CHECK(is_polytree(single));
}

TEST_CASE("topological_order is parent-first with id tie-break") {
  CHECK(topological_order(testutil::chain2()) == std::vector<NodeId>{0, 1});
  BeliefNetwork two;
  two.node_names = {"X", "Y"};
  two.value_names = {{"a"}, {"a"}};
  two.parents = {{}, {}};
  two.cpts = {{{}, 1, {{1.0}}}, {{}, 1, {{1.0}}}};
  CHECK(topological_order(two) == std::vector<NodeId>{0, 1});
  CHECK(topological_order(testutil::diamond()) == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("parse_network accepts forward parent references and orders by document") {
  // B listed first with parent A declared later; ids still follow document order.
  const char* doc =
      R"({"nodes":[{"name":"B","values":["t","f"],"parents":["A"],"cpt":[[0.9,0.1],[0.5,0.5]]},)"
      R"({"name":"A","values":["t","f"],"parents":[],"cpt":[[0.8,0.2]]}]})";
  BeliefNetwork net = parse_network(doc);
  CHECK(net.node_names[0] == "B");
  CHECK(topological_order(net) == std::vector<NodeId>{1, 0});
}

namespace {

// Independent cycle check for the undirected skeleton: depth-first search
// that declares a cycle when it revisits a vertex through a new edge.
bool undirected_acyclic_dfs(const BeliefNetwork& net) {
  const int n = net.node_count();
  std::vector<std::vector<int>> adj(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId p : net.parents[v]) {
      adj[v].push_back(p);
      adj[p].push_back(v);
    }
  }
  std::vector<int> state(n, 0);
  for (int start = 0; start < n; ++start) {
    if (state[start]) continue;
    // (vertex, edge-parent) stack
    std::vector<std::pair<int, int>> stack{{start, -1}};
    while (!stack.empty()) {
      auto [v, from] = stack.back();
      stack.pop_back();
      if (state[v]) return false;
      state[v] = 1;
      bool skipped_parent_edge = false;
      for (int w : adj[v]) {
        if (w == from && !skipped_parent_edge) {
          skipped_parent_edge = true;  // consume exactly one edge back
          continue;
        }
        if (state[w]) return false;
        stack.emplace_back(w, v);
      }
    }
  }
  return true;
}

double sum_over_all_assignments(const BeliefNetwork& net) {
  Assignment a(net.node_count(), 0);
  double total = 0.0;
  while (true) {
    total += joint_probability(net, a);
    int v = net.node_count() - 1;
    for (; v >= 0; --v) {
      if (++a[v] < net.domain_size(v)) break;
      a[v] = 0;
    }
    if (v < 0) break;
  }
  return total;
}

}  // namespace

TEST_CASE("joint probabilities of random networks sum to one") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GenOptions opts;
    opts.nodes = 2 + static_cast<int>(seed % 7);
    BeliefNetwork net = generate_network(seed, opts);
    CHECK(sum_over_all_assignments(net) == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("networks round-trip through serialization") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    BeliefNetwork net = generate_network(seed, {});
    BeliefNetwork again = parse_network(write_network(net));
    CHECK(net == again);
    CHECK(write_network(net) == write_network(again));
  }
}

TEST_CASE("is_polytree agrees with an independent skeleton check") {
  int polytrees = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenOptions opts;
    opts.nodes = 3 + static_cast<int>(seed % 8);
    opts.polytree = seed % 2 == 0;
    BeliefNetwork net = generate_network(seed, opts);
    const bool expected = undirected_acyclic_dfs(net);
    CHECK(is_polytree(net) == expected);
    if (expected) ++polytrees;
    if (opts.polytree) CHECK(is_polytree(net));
  }
  CHECK(polytrees > 0);
}
