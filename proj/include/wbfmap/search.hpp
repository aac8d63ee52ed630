#pragma once

// Best-first search for minimum-cost satisfying models of a WBF DAG.
//
// A partial solution carries committed node values, a FIFO queue of open
// demands (node, required value), and the cost collected so far. Expanding
// a demand on an uncommitted image splits the solution per admissible
// selector / choice root; demands on already-committed nodes either drop
// (value agrees) or kill the branch (value differs). The frontier is a
// min-priority queue over g + h with FIFO tie-breaking by insertion
// sequence, so goals pop in non-decreasing cost order and the first goal
// is a minimum-cost satisfying model.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbfmap/wbfdag.hpp"

namespace wbfmap {

enum class SolveMode {
  Complete,   // every image must take a Domain value
  Ancestral,  // only the evidence cone is forced (literal construction)
};

struct Demand {
  std::int32_t node = -1;
  bool any_domain = false;  // complete-mode seed: any Domain value will do
  WbfValue value;           // required value when !any_domain

  friend bool operator==(const Demand&, const Demand&) = default;
};

struct PartialSolution {
  WbfAssignment committed;
  std::deque<Demand> open;
  double g = 0.0;
  std::uint64_t seq = 0;
  SolveMode mode = SolveMode::Complete;
  std::vector<char> selected;  // per BN node: gadget selection committed

  bool is_goal() const { return open.empty(); }
};

struct SearchStats {
  std::uint64_t expansions = 0;          // states expanded (demand pops)
  std::uint64_t generated = 0;           // successor states created
  std::uint64_t peak_queue = 0;          // largest frontier size
  std::uint64_t demand_resolutions = 0;  // demands processed / cache fills
};

struct SolverResult {
  Assignment assignment;  // total, or parent-closed partial in ancestral mode
  double cost = 0.0;
  double probability = 1.0;  // exp(-cost)
  SearchStats stats;
};

struct Heuristic {
  std::string name;
  std::function<double(const PartialSolution&)> estimate;
};

// Constantly 0; the trivial admissible estimate (a completion is judged by
// the cost collected so far).
inline Heuristic heuristic_zero() {
  return {"zero", [](const PartialSolution&) { return 0.0; }};
}

namespace detail {

// BN nodes that are evidence nodes or ancestors of one.
inline std::vector<char> evidence_ancestors(const WbfDag& dag) {
  std::vector<char> mark(dag.bn_node_count(), 0);
  std::vector<NodeId> stack;
  for (const auto& [node, value] : dag.evidence.findings) {
    (void)value;
    if (!mark[node]) {
      mark[node] = 1;
      stack.push_back(node);
    }
  }
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId p : dag.bn_parents[v]) {
      if (!mark[p]) {
        mark[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return mark;
}

// Minimum admissible selection cost per BN gadget; +inf when no entry of a
// gadget may be selected.
inline std::vector<double> gadget_min_costs(const WbfDag& dag) {
  std::vector<double> mins(dag.bn_node_count(),
                           std::numeric_limits<double>::infinity());
  for (NodeId bn = 0; bn < dag.bn_node_count(); ++bn) {
    const Gadget& gadget = dag.gadgets[bn];
    for (const RootEntry& e : gadget.root_entries)
      if (e.admissible && e.cost < mins[bn]) mins[bn] = e.cost;
    for (const GadgetEntry& e : gadget.entries)
      if (e.admissible && e.cost < mins[bn]) mins[bn] = e.cost;
  }
  return mins;
}

}  // namespace detail

// Sum, over gadgets with no committed selection yet, of the gadget's
// smallest surviving selection cost. Admissible: every satisfying model in
// complete mode commits exactly one selection per gadget; in ancestral mode
// only evidence-ancestor gadgets are forced, so the sum is restricted to
// those.
inline Heuristic heuristic_min_entry(const WbfDag& dag) {
  auto mins = std::make_shared<const std::vector<double>>(detail::gadget_min_costs(dag));
  auto ancestors = std::make_shared<const std::vector<char>>(detail::evidence_ancestors(dag));
  return {"min-entry", [mins, ancestors](const PartialSolution& p) {
            double h = 0.0;
            for (std::size_t bn = 0; bn < p.selected.size(); ++bn) {
              if (p.selected[bn]) continue;
              if (p.mode == SolveMode::Ancestral && !(*ancestors)[bn]) continue;
              h += (*mins)[bn];
            }
            return h;
          }};
}

// Kahn over a raw parent relation, ascending-id tie-break.
inline std::vector<NodeId> topological_order_of(const std::vector<std::vector<NodeId>>& parents) {
  const int n = static_cast<int>(parents.size());
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = static_cast<int>(parents[v].size());
    for (NodeId p : parents[v]) children[p].push_back(v);
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId c : children[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  return order;
}

// Initial state: one demand for the evidence sink, plus (complete mode) one
// any-Domain demand per image in BN topological order.
inline PartialSolution make_initial(const WbfDag& dag, SolveMode mode) {
  PartialSolution p;
  p.committed = WbfAssignment(dag.node_count());
  p.mode = mode;
  p.selected.assign(dag.bn_node_count(), 0);
  p.open.push_back(Demand{dag.sink, false, dag.sink_value});
  if (mode == SolveMode::Complete) {
    for (NodeId v : topological_order_of(dag.bn_parents))
      p.open.push_back(Demand{dag.image_of(v), true, WbfValue::u()});
  }
  return p;
}

// Pops the front demand of p and returns the successor solutions in
// deterministic creation order. New demands are placed at the front of the
// queue so a gadget's parent demands resolve before unrelated seeds.
inline std::vector<PartialSolution> expand(const WbfDag& dag, const PartialSolution& p) {
  if (p.open.empty()) throw std::logic_error("expand on a goal state");
  const Demand demand = p.open.front();
  const WbfNode& node = dag.nodes[demand.node];
  std::vector<PartialSolution> out;

  if (!demand.any_domain && demand.value.is_undef())
    throw std::logic_error("demand of U is never admissible");

  if (p.committed.has(demand.node)) {
    const WbfValue held = p.committed.get(demand.node);
    const bool ok = demand.any_domain ? held.is_domain() : held == demand.value;
    if (!ok) return out;  // inconsistent re-demand: branch dies
    PartialSolution s = p;
    s.open.pop_front();
    out.push_back(std::move(s));
    return out;
  }

  switch (node.kind) {
    case WbfKind::EvidenceAnd: {
      if (demand.any_domain || !demand.value.is_true())
        throw std::logic_error("sink can only be demanded T");
      PartialSolution s = p;
      s.open.pop_front();
      s.committed.set(demand.node, WbfValue::t());
      const auto& findings = dag.evidence.findings;
      for (std::size_t i = findings.size(); i-- > 0;) {
        s.open.push_front(Demand{dag.image_of(findings[i].first), false,
                                 WbfValue::domain(findings[i].second)});
      }
      out.push_back(std::move(s));
      return out;
    }
    case WbfKind::Image: {
      if (!demand.any_domain && !demand.value.is_domain())
        throw std::logic_error("images can only be demanded Domain values");
      const NodeId bn = node.bn_node;
      const Gadget& gadget = dag.gadgets[bn];
      const int m = dag.bn_domain_sizes[bn];

      if (!gadget.root_entries.empty()) {
        // Root gadget: commit the chosen choice root T, siblings F.
        for (ValueId d = 0; d < m; ++d) {
          if (!demand.any_domain && d != demand.value.value) continue;
          const RootEntry& entry = gadget.root_entries[d];
          if (!entry.admissible) continue;
          PartialSolution s = p;
          s.open.pop_front();
          s.committed.set(demand.node, WbfValue::domain(d));
          s.g += entry.cost;
          s.selected[bn] = 1;
          for (ValueId other = 0; other < m; ++other) {
            const std::int32_t cr = gadget.root_entries[other].choice_root;
            if (cr != -1)
              s.committed.set(cr, other == d ? WbfValue::t() : WbfValue::f());
          }
          out.push_back(std::move(s));
        }
        return out;
      }

      // Non-root gadget: one successor per surviving selector of the
      // demanded value; sibling selectors stay uncommitted (their cost
      // roots are forced F at goal completion).
      const int rows = static_cast<int>(gadget.entries.size()) / m;
      for (int rank = 0; rank < rows; ++rank) {
        for (ValueId d0 = 0; d0 < m; ++d0) {
          if (!demand.any_domain && d0 != demand.value.value) continue;
          const GadgetEntry& entry = gadget.entries[static_cast<std::size_t>(rank) * m + d0];
          if (entry.selector == -1 || !entry.admissible) continue;
          const auto& match = std::get<SelectorMatch>(dag.nodes[entry.selector].label);
          PartialSolution s = p;
          s.open.pop_front();
          s.committed.set(demand.node, WbfValue::domain(d0));
          s.committed.set(entry.selector, WbfValue::t());
          if (entry.cost_root != -1) s.committed.set(entry.cost_root, WbfValue::t());
          s.g += entry.cost;
          s.selected[bn] = 1;
          const auto& bn_parents = dag.bn_parents[bn];
          for (std::size_t j = bn_parents.size(); j-- > 0;) {
            s.open.push_front(Demand{dag.image_of(bn_parents[j]), false,
                                     WbfValue::domain(match.required_tuple[j])});
          }
          out.push_back(std::move(s));
        }
      }
      return out;
    }
    default:
      throw std::logic_error("demand on a choice root, cost root or selector");
  }
}

// Forces values for every node of a committed gadget: uncommitted choice
// and cost roots become F, uncommitted selectors take their label value.
// Gadgets whose image was never demanded (ancestral mode) stay unassigned.
inline void complete_goal(const WbfDag& dag, PartialSolution& p) {
  for (NodeId bn = 0; bn < dag.bn_node_count(); ++bn) {
    const Gadget& gadget = dag.gadgets[bn];
    if (!p.committed.has(gadget.image)) continue;
    for (const RootEntry& entry : gadget.root_entries) {
      if (entry.choice_root != -1 && !p.committed.has(entry.choice_root))
        p.committed.set(entry.choice_root, WbfValue::f());
    }
    for (const GadgetEntry& entry : gadget.entries) {
      if (entry.cost_root != -1 && !p.committed.has(entry.cost_root))
        p.committed.set(entry.cost_root, WbfValue::f());
    }
  }
  std::vector<WbfValue> buf;
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    const WbfNode& node = dag.nodes[i];
    if (node.kind != WbfKind::Selector || p.committed.has(i)) continue;
    if (!p.committed.has(dag.gadgets[node.bn_node].image)) continue;
    buf.clear();
    bool ready = true;
    for (std::int32_t parent : node.parents) {
      if (!p.committed.has(parent)) {
        ready = false;
        break;
      }
      buf.push_back(p.committed.get(parent));
    }
    if (ready) p.committed.set(i, evaluate_label(node, buf));
  }
}

// Best-first engine. next() returns goals in non-decreasing cost order;
// construct with an explicit initial state to continue a search from an
// arbitrary partial solution.
class MapSearch {
 public:
  MapSearch(const WbfDag& dag, Heuristic h, SolveMode mode = SolveMode::Complete)
      : MapSearch(dag, std::move(h), make_initial(dag, mode)) {}

  MapSearch(const WbfDag& dag, Heuristic h, PartialSolution initial)
      : dag_(&dag), h_(std::move(h)) {
    initial.seq = next_seq_++;
    push(std::move(initial));
  }

  // Test/audit hook, called on every popped state.
  std::function<void(const PartialSolution&)> on_pop;

  std::optional<SolverResult> next() {
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), Order{});
      Item item = std::move(heap_.back());
      heap_.pop_back();
      if (on_pop) on_pop(item.state);
      if (item.state.is_goal()) return emit(std::move(item.state));
      ++stats_.expansions;
      ++stats_.demand_resolutions;
      for (PartialSolution& s : expand(*dag_, item.state)) {
        s.seq = next_seq_++;
        ++stats_.generated;
        push(std::move(s));
      }
    }
    return std::nullopt;
  }

  const SearchStats& stats() const { return stats_; }

 private:
  struct Item {
    double f = 0.0;
    std::uint64_t seq = 0;
    PartialSolution state;
  };
  // Min-heap over (f, seq): std's heap primitives build a max-heap, so the
  // comparator orders "worse" items first.
  struct Order {
    bool operator()(const Item& a, const Item& b) const {
      if (a.f != b.f) return a.f > b.f;
      return a.seq > b.seq;  // FIFO among equal priorities
    }
  };

  void push(PartialSolution s) {
    const double f = s.g + h_.estimate(s);
    heap_.push_back(Item{f, s.seq, std::move(s)});
    std::push_heap(heap_.begin(), heap_.end(), Order{});
    if (heap_.size() > stats_.peak_queue) stats_.peak_queue = heap_.size();
  }

  SolverResult emit(PartialSolution goal) {
    complete_goal(*dag_, goal);
    if (!is_model(*dag_, goal.committed) || !is_satisfying(*dag_, goal.committed))
      throw std::logic_error("completed goal is not a satisfying model");
    assert(std::abs(model_cost(*dag_, goal.committed) - goal.g) <= 1e-9 * (1.0 + goal.g));
    SolverResult result;
    result.assignment = induced_assignment(*dag_, goal.committed);
    result.cost = goal.g;
    result.probability = std::exp(-goal.g);
    result.stats = stats_;
    return result;
  }

  const WbfDag* dag_;
  Heuristic h_;
  std::uint64_t next_seq_ = 0;
  SearchStats stats_;
  std::vector<Item> heap_;
};

// First minimum-cost satisfying model, or nullopt when no satisfying model
// exists (the evidence has probability 0 under pruning).
inline std::optional<SolverResult> solve_map(const WbfDag& dag, const Heuristic& h,
                                             SolveMode mode = SolveMode::Complete) {
  return MapSearch(dag, h, mode).next();
}

// Up to k results in non-increasing probability; fewer iff fewer satisfying
// models exist. Distinct goals always induce distinct network assignments
// (checked, not filtered).
inline std::vector<SolverResult> solve_kbest(const WbfDag& dag, int k, const Heuristic& h) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<SolverResult> results;
  MapSearch search(dag, h, SolveMode::Complete);
  while (static_cast<int>(results.size()) < k) {
    auto r = search.next();
    if (!r) break;
    for (const SolverResult& prev : results) {
      if (prev.assignment == r->assignment)
        throw std::logic_error("duplicate induced assignment in k-best enumeration");
    }
    results.push_back(std::move(*r));
  }
  return results;
}

}  // namespace wbfmap
