#pragma once

// Linear-time MAP for polytree networks.
//
// Best-first demand splitting is replaced by memoized demand resolution:
// the undirected graph over variables and per-node CPT factors of a
// polytree is a forest, so each component can be rooted and every demand
// "best completion cost of this node's side of the tree, per value" is
// resolved exactly once and cached. A factor's cache is filled by one sweep
// over its CPT entries, combining the cached answers of its already-resolved
// neighbours, so the total number of demand resolutions equals the total
// CPT entry count of the network. The arg-min entry recorded per cache slot
// reconstructs the assignment root-down.
//
// The costs and entry admissibility come from the compiled DAG, so pruning
// and zeroed non-prior costs behave exactly as in solve_map.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wbfmap/network.hpp"
#include "wbfmap/search.hpp"
#include "wbfmap/wbfdag.hpp"

namespace wbfmap {

inline std::optional<SolverResult> solve_map_polytree(const BeliefNetwork& net,
                                                      const Evidence& ev,
                                                      const WbfDag& dag) {
  if (!is_polytree(net))
    throw std::invalid_argument(
        "solve_map_polytree requires a polytree network; shared ancestors make "
        "demand memoization unsound");
  if (dag.bn_node_count() != net.node_count())
    throw std::invalid_argument("network and compiled DAG disagree on node count");
  validate_evidence(net, ev);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = net.node_count();
  SearchStats stats;

  // Vertices 0..n-1 are variables, n..2n-1 the per-node factors. The
  // bipartite variable/factor graph of a polytree is a forest.
  const int vertex_count = 2 * n;
  auto factor_vertex = [n](NodeId v) { return n + v; };
  std::vector<std::vector<int>> adjacency(vertex_count);
  for (NodeId v = 0; v < n; ++v) {
    adjacency[factor_vertex(v)].push_back(v);
    adjacency[v].push_back(factor_vertex(v));
    for (NodeId p : net.parents[v]) {
      adjacency[factor_vertex(v)].push_back(p);
      adjacency[p].push_back(factor_vertex(v));
    }
  }

  std::vector<int> tree_parent(vertex_count, -2);  // -2: unvisited, -1: root
  std::vector<int> visit_order;
  visit_order.reserve(vertex_count);
  std::vector<int> component_root;
  for (NodeId r = 0; r < n; ++r) {
    if (tree_parent[r] != -2) continue;
    component_root.push_back(r);
    tree_parent[r] = -1;
    std::size_t head = visit_order.size();
    visit_order.push_back(r);
    while (head < visit_order.size()) {
      int u = visit_order[head++];
      for (int w : adjacency[u]) {
        if (tree_parent[w] == -2) {
          tree_parent[w] = u;
          visit_order.push_back(w);
        }
      }
    }
  }

  // Admissibility and cost per CPT entry, as compiled into the DAG.
  auto entry_cost = [&](NodeId v, int rank, ValueId d0, double* cost) {
    const Gadget& gadget = dag.gadgets[v];
    if (!gadget.root_entries.empty()) {
      const RootEntry& e = gadget.root_entries[d0];
      *cost = e.cost;
      return e.choice_root != -1 && e.admissible;
    }
    const GadgetEntry& e =
        gadget.entries[static_cast<std::size_t>(rank) * net.domain_size(v) + d0];
    *cost = e.cost;
    return e.selector != -1 && e.admissible;
  };
  auto clamp = [&](NodeId v, ValueId d) {
    ValueId required = ev.at(v);
    return (required == kUnassigned || required == d) ? 0.0 : kInf;
  };

  // Caches: per variable and per factor, the best completion cost of its
  // subtree away from the tree parent, for each value of the parent-side
  // variable; factors also record the arg-min CPT entry per slot.
  std::vector<std::vector<double>> var_cache(n);
  std::vector<std::vector<double>> factor_cache(n);
  std::vector<std::vector<int>> factor_choice(n);

  for (std::size_t i = visit_order.size(); i-- > 0;) {
    const int u = visit_order[i];
    if (u < n) {
      // Variable: sum the caches of its child factors, respecting evidence.
      const NodeId y = u;
      var_cache[y].assign(net.domain_size(y), 0.0);
      for (ValueId d = 0; d < net.domain_size(y); ++d) var_cache[y][d] = clamp(y, d);
      for (int w : adjacency[u]) {
        if (tree_parent[w] != u) continue;
        const NodeId v = w - n;
        for (ValueId d = 0; d < net.domain_size(y); ++d)
          var_cache[y][d] += factor_cache[v][d];
      }
      continue;
    }
    // Factor of node v: one sweep over the CPT entries of v.
    const NodeId v = u - n;
    const NodeId parent_var = tree_parent[u];
    assert(parent_var >= 0 && parent_var < n);
    const Cpt& cpt = net.cpts[v];
    const int m = net.domain_size(v);
    factor_cache[v].assign(net.domain_size(parent_var), kInf);
    factor_choice[v].assign(net.domain_size(parent_var), -1);
    const int rows = cpt.row_count();
    for (int rank = 0; rank < rows; ++rank) {
      const std::vector<ValueId> tuple = cpt.parent_values_of_row(rank);
      for (ValueId d0 = 0; d0 < m; ++d0) {
        ++stats.demand_resolutions;
        double cost = 0.0;
        if (!entry_cost(v, rank, d0, &cost)) continue;
        ValueId slot_value = kUnassigned;
        if (parent_var == v) {
          slot_value = d0;
        } else {
          cost += var_cache[v][d0];
        }
        for (std::size_t j = 0; j < net.parents[v].size(); ++j) {
          const NodeId x = net.parents[v][j];
          if (x == parent_var) {
            slot_value = tuple[j];
          } else {
            cost += var_cache[x][tuple[j]];
          }
        }
        assert(slot_value != kUnassigned);
        if (cost < factor_cache[v][slot_value]) {
          factor_cache[v][slot_value] = cost;
          factor_choice[v][slot_value] = rank * m + d0;
        }
      }
    }
  }

  // Combine components; bail out if any admits no satisfying completion.
  double total = 0.0;
  Assignment assignment(n, kUnassigned);
  std::vector<NodeId> trace;
  for (NodeId r : component_root) {
    double best = kInf;
    ValueId best_value = kUnassigned;
    for (ValueId d = 0; d < net.domain_size(r); ++d) {
      if (var_cache[r][d] < best) {
        best = var_cache[r][d];
        best_value = d;
      }
    }
    if (best == kInf) return std::nullopt;
    total += best;
    assignment[r] = best_value;
    trace.push_back(r);
  }

  // Root-down reconstruction from the recorded arg-min entries.
  while (!trace.empty()) {
    const NodeId y = trace.back();
    trace.pop_back();
    for (int w : adjacency[y]) {
      if (tree_parent[w] != y) continue;
      const NodeId v = w - n;
      const int entry = factor_choice[v][assignment[y]];
      assert(entry != -1);
      const int m = net.domain_size(v);
      const ValueId d0 = static_cast<ValueId>(entry % m);
      const std::vector<ValueId> tuple = net.cpts[v].parent_values_of_row(entry / m);
      if (v != y) {
        assert(assignment[v] == kUnassigned);
        assignment[v] = d0;
        trace.push_back(v);
      } else {
        assert(assignment[v] == d0);
      }
      for (std::size_t j = 0; j < net.parents[v].size(); ++j) {
        const NodeId x = net.parents[v][j];
        if (x == y) {
          assert(assignment[x] == tuple[j]);
          continue;
        }
        assert(assignment[x] == kUnassigned);
        assignment[x] = tuple[j];
        trace.push_back(x);
      }
    }
  }
  assert(is_total(assignment));

  stats.expansions = stats.demand_resolutions;
  SolverResult result;
  result.assignment = std::move(assignment);
  result.cost = total;
  result.probability = std::exp(-total);
  result.stats = stats;
  return result;
}

}  // namespace wbfmap
