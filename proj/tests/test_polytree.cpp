#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wbfmap/compile.hpp"
#include "wbfmap/generate.hpp"
#include "wbfmap/oracle.hpp"
#include "wbfmap/polytree.hpp"
#include "wbfmap/search.hpp"

using namespace wbfmap;

namespace {

BeliefNetwork binary_path(std::uint64_t seed, int length) {
  detail::Rng rng(seed);
  BeliefNetwork net;
  for (int i = 0; i < length; ++i) {
    net.node_names.push_back("p" + std::to_string(i));
    net.value_names.push_back({"v0", "v1"});
    net.parents.push_back(i == 0 ? std::vector<NodeId>{}
                                 : std::vector<NodeId>{static_cast<NodeId>(i - 1)});
    Cpt cpt;
    cpt.own_domain_size = 2;
    if (i > 0) cpt.parent_domain_sizes.push_back(2);
    for (int r = 0; r < cpt.row_count(); ++r) {
      const double p = 0.1 + 0.8 * rng.u01();
      cpt.rows.push_back({p, 1.0 - p});
    }
    net.cpts.push_back(cpt);
  }
  validate(net);
  return net;
}

}  // namespace

TEST_CASE("polytree solve matches best-first search on chain2") {
  BeliefNetwork net = testutil::chain2();
  Evidence ev = testutil::ev(net, "B=t");
  WbfDag dag = compile(net, ev, CompileOptions{});
  auto fast = solve_map_polytree(net, ev, dag);
  auto slow = solve_map(dag, heuristic_min_entry(dag));
  REQUIRE(fast);
  REQUIRE(slow);
  CHECK(fast->assignment == slow->assignment);
  CHECK(fast->cost == Catch::Approx(slow->cost).margin(1e-9));
  CHECK(fast->probability == Catch::Approx(std::exp(-fast->cost)).epsilon(1e-12));
}

TEST_CASE("polytree solve rejects non-polytree networks") {
  BeliefNetwork net = testutil::diamond();
  Evidence ev;
  WbfDag dag = compile(net, ev, CompileOptions{});
  CHECK_THROWS_AS(solve_map_polytree(net, ev, dag), std::invalid_argument);
}

TEST_CASE("demand resolutions grow linearly along a path") {
  // Evidence at the far end of binary paths of lengths 4, 8, 12.
  std::vector<std::uint64_t> counts;
  for (int length : {4, 8, 12}) {
    BeliefNetwork net = binary_path(7, length);
    Evidence ev;
    ev.set(length - 1, 0);
    WbfDag dag = compile(net, ev, CompileOptions{});
    auto result = solve_map_polytree(net, ev, dag);
    REQUIRE(result);
    counts.push_back(result->stats.demand_resolutions);
    // The count never exceeds the total CPT entry count.
    std::uint64_t entries = 0;
    for (NodeId v = 0; v < net.node_count(); ++v)
      entries += static_cast<std::uint64_t>(net.cpts[v].row_count()) * net.domain_size(v);
    CHECK(result->stats.demand_resolutions <= entries);
  }
  const double slope1 = static_cast<double>(counts[1] - counts[0]) / 4.0;
  const double slope2 = static_cast<double>(counts[2] - counts[1]) / 4.0;
  CHECK(slope2 <= 2.0 * slope1);
  CHECK(slope1 <= 2.0 * slope2);
}

TEST_CASE("random polytrees: fast path equals search, including evidence") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenOptions opts;
    opts.nodes = 4 + static_cast<int>(seed % 9);
    opts.polytree = true;
    opts.det_fraction = seed % 4 == 0 ? 0.3 : 0.0;
    BeliefNetwork net = generate_network(seed, opts);
    REQUIRE(is_polytree(net));
    Evidence ev = random_evidence(seed * 17 + 5, net, 2);
    WbfDag dag = compile(net, ev, CompileOptions{});
    auto fast = solve_map_polytree(net, ev, dag);
    auto slow = solve_map(dag, heuristic_min_entry(dag));
    if (!slow) {
      CHECK_FALSE(fast);
      continue;
    }
    REQUIRE(fast);
    CHECK(fast->cost == Catch::Approx(slow->cost).margin(1e-9));
    CHECK(fast->probability ==
          Catch::Approx(joint_probability(net, fast->assignment)).epsilon(1e-9));
    for (const auto& [node, value] : ev.findings) CHECK(fast->assignment[node] == value);
  }
}

TEST_CASE("shared ancestor feeding two evidence chains is handled") {
  // r -> u -> e1 and r -> x -> e2: a polytree where both evidence cones
  // meet at r, so the per-value caches must not commit r prematurely.
  BeliefNetwork net;
  net.node_names = {"r", "u", "x", "e1", "e2"};
  for (int i = 0; i < 5; ++i) net.value_names.push_back({"a", "b"});
  net.parents = {{}, {0}, {0}, {1}, {2}};
  net.cpts.resize(5);
  net.cpts[0] = {{}, 2, {{0.5, 0.5}}};
  net.cpts[1] = {{2}, 2, {{0.9, 0.1}, {0.2, 0.8}}};
  net.cpts[2] = {{2}, 2, {{0.1, 0.9}, {0.8, 0.2}}};
  net.cpts[3] = {{2}, 2, {{0.7, 0.3}, {0.4, 0.6}}};
  net.cpts[4] = {{2}, 2, {{0.6, 0.4}, {0.3, 0.7}}};
  validate(net);
  REQUIRE(is_polytree(net));
  Evidence ev;
  ev.set(3, 0);
  ev.set(4, 0);
  WbfDag dag = compile(net, ev, CompileOptions{});
  auto fast = solve_map_polytree(net, ev, dag);
  auto expected = map_oracle(net, ev);
  REQUIRE(fast);
  REQUIRE(expected);
  CHECK(fast->probability == Catch::Approx(expected->probability).epsilon(1e-9));
}

TEST_CASE("polytree solve reports no model on impossible evidence") {
  BeliefNetwork net = testutil::chain2_with_row(0.0, 0.0);
  Evidence ev = testutil::ev(net, "B=t");
  WbfDag dag = compile(net, ev, CompileOptions{});
  CHECK_FALSE(solve_map_polytree(net, ev, dag));
}

TEST_CASE("polytree solve honors zeroed non-prior costs") {
  BeliefNetwork net = testutil::chain2();
  Evidence ev = testutil::ev(net, "B=t");
  CompileOptions opts;
  opts.zero_nonprior = true;
  WbfDag dag = compile(net, ev, opts);
  auto fast = solve_map_polytree(net, ev, dag);
  auto expected = partial_roots_oracle(net, ev);
  REQUIRE(fast);
  REQUIRE(expected);
  CHECK(fast->probability == Catch::Approx(expected->probability).epsilon(1e-9));
}
