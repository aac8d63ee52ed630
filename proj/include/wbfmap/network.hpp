#pragma once

// Data model for discrete Bayesian networks: nodes with per-node value
// domains, parent lists, and conditional probability tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wbfmap {

using NodeId = std::int32_t;
using ValueId = std::int32_t;

// Hole marker for partial assignments.
inline constexpr ValueId kUnassigned = -1;

// Tolerance for CPT row normalization checks.
inline constexpr double kRowSumTolerance = 1e-9;

// Invalid input (file, evidence string, CLI argument). The CLI maps this
// to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Conditional probability table. One row per parent configuration, one
// column per own value. Rows are ordered row-major over parent
// configurations with the LAST listed parent varying fastest.
struct Cpt {
  std::vector<int> parent_domain_sizes;
  int own_domain_size = 0;
  std::vector<std::vector<double>> rows;

  int row_count() const {
    int n = 1;
    for (int m : parent_domain_sizes) n *= m;
    return n;
  }

  double at(int row, ValueId value) const { return rows[row][value]; }

  // Row index of a parent-value tuple (last parent fastest).
  int row_of(const std::vector<ValueId>& parent_values) const {
    int row = 0;
    for (std::size_t i = 0; i < parent_domain_sizes.size(); ++i) {
      row = row * parent_domain_sizes[i] + parent_values[i];
    }
    return row;
  }

  std::vector<ValueId> parent_values_of_row(int row) const {
    std::vector<ValueId> tuple(parent_domain_sizes.size(), 0);
    for (std::size_t i = parent_domain_sizes.size(); i-- > 0;) {
      tuple[i] = static_cast<ValueId>(row % parent_domain_sizes[i]);
      row /= parent_domain_sizes[i];
    }
    return tuple;
  }

  friend bool operator==(const Cpt&, const Cpt&) = default;
};

struct BeliefNetwork {
  std::vector<std::string> node_names;
  std::vector<std::vector<std::string>> value_names;  // per node
  std::vector<std::vector<NodeId>> parents;           // per node
  std::vector<Cpt> cpts;  // roots carry a single prior row

  int node_count() const { return static_cast<int>(node_names.size()); }
  int domain_size(NodeId v) const {
    return static_cast<int>(value_names[v].size());
  }
  bool is_root(NodeId v) const { return parents[v].empty(); }

  NodeId node_by_name(const std::string& name) const {
    for (NodeId i = 0; i < node_count(); ++i) {
      if (node_names[i] == name) return i;
    }
    return -1;
  }

  ValueId value_by_name(NodeId node, const std::string& name) const {
    const auto& names = value_names[node];
    for (ValueId i = 0; i < static_cast<ValueId>(names.size()); ++i) {
      if (names[i] == name) return i;
    }
    return -1;
  }

  friend bool operator==(const BeliefNetwork&, const BeliefNetwork&) = default;
};

// Hard findings: a partial map node -> value, kept sorted by node id.
struct Evidence {
  std::vector<std::pair<NodeId, ValueId>> findings;

  bool empty() const { return findings.empty(); }

  bool has(NodeId node) const { return at(node) != kUnassigned; }

  ValueId at(NodeId node) const {
    for (const auto& [n, v] : findings) {
      if (n == node) return v;
    }
    return kUnassigned;
  }

  void set(NodeId node, ValueId value) {
    if (has(node)) throw ParseError("duplicate evidence for node " + std::to_string(node));
    findings.emplace_back(node, value);
    std::sort(findings.begin(), findings.end());
  }
};

// Total when it has no kUnassigned holes; partial otherwise.
using Assignment = std::vector<ValueId>;

inline bool is_total(const Assignment& a) {
  return std::find(a.begin(), a.end(), kUnassigned) == a.end();
}

// Checks evidence node/value ranges against the network.
inline void validate_evidence(const BeliefNetwork& net, const Evidence& ev) {
  NodeId prev = -1;
  for (const auto& [node, value] : ev.findings) {
    if (node < 0 || node >= net.node_count())
      throw ParseError("evidence references unknown node id " + std::to_string(node));
    if (value < 0 || value >= net.domain_size(node))
      throw ParseError("evidence value out of range for node '" + net.node_names[node] + "'");
    if (node == prev)
      throw ParseError("evidence lists node '" + net.node_names[node] + "' twice");
    prev = node;
  }
}

// Structural validation: parent ids in range and duplicate-free, CPT shapes
// match, rows normalized, graph acyclic. Throws ParseError naming the
// offending node.
inline void validate(const BeliefNetwork& net) {
  const int n = net.node_count();
  for (NodeId v = 0; v < n; ++v) {
    const std::string& name = net.node_names[v];
    if (net.value_names[v].empty())
      throw ParseError("node '" + name + "' has an empty value list");
    std::vector<NodeId> seen;
    for (NodeId p : net.parents[v]) {
      if (p < 0 || p >= n)
        throw ParseError("node '" + name + "' has an out-of-range parent id");
      if (std::find(seen.begin(), seen.end(), p) != seen.end())
        throw ParseError("node '" + name + "' lists parent '" + net.node_names[p] + "' twice");
      seen.push_back(p);
    }
    const Cpt& cpt = net.cpts[v];
    if (cpt.own_domain_size != net.domain_size(v))
      throw ParseError("CPT of node '" + name + "' has wrong column count");
    if (static_cast<int>(cpt.parent_domain_sizes.size()) != static_cast<int>(net.parents[v].size()))
      throw ParseError("CPT of node '" + name + "' has wrong parent arity");
    for (std::size_t i = 0; i < net.parents[v].size(); ++i) {
      if (cpt.parent_domain_sizes[i] != net.domain_size(net.parents[v][i]))
        throw ParseError("CPT of node '" + name + "' disagrees with parent domain sizes");
    }
    if (static_cast<int>(cpt.rows.size()) != cpt.row_count())
      throw ParseError("CPT of node '" + name + "' has " + std::to_string(cpt.rows.size()) +
                       " rows, expected " + std::to_string(cpt.row_count()));
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      if (static_cast<int>(cpt.rows[r].size()) != cpt.own_domain_size)
        throw ParseError("CPT row " + std::to_string(r) + " of node '" + name + "' has wrong length");
      double sum = 0.0;
      for (double p : cpt.rows[r]) {
        if (!(p >= 0.0 && p <= 1.0))
          throw ParseError("CPT row " + std::to_string(r) + " of node '" + name +
                           "' has an entry outside [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw ParseError("CPT row " + std::to_string(r) + " of node '" + name +
                         "' is not normalized (sums to " + std::to_string(sum) + ")");
    }
  }
  // Kahn's algorithm; leftover in-degree means a directed cycle.
  std::vector<int> indegree(n, 0);
  for (NodeId v = 0; v < n; ++v) indegree[v] = static_cast<int>(net.parents[v].size());
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId p : net.parents[v]) children[p].push_back(v);
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  int removed = 0;
  while (!ready.empty()) {
    NodeId v = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeId c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (removed != n) {
    for (NodeId v = 0; v < n; ++v) {
      if (indegree[v] > 0)
        throw ParseError("cycle detected involving node '" + net.node_names[v] + "'");
    }
  }
}

// Product over nodes of the CPT entry selected by a total assignment.
inline double joint_probability(const BeliefNetwork& net, const Assignment& a) {
  double p = 1.0;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const Cpt& cpt = net.cpts[v];
    std::vector<ValueId> tuple(net.parents[v].size());
    for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = a[net.parents[v][i]];
    p *= cpt.at(cpt.row_of(tuple), a[v]);
  }
  return p;
}

// True iff the underlying undirected graph of the parent relation is
// acyclic (edge count == node count - component count).
inline bool is_polytree(const BeliefNetwork& net) {
  const int n = net.node_count();
  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) root[i] = i;
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  int components = n;
  int edges = 0;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId p : net.parents[v]) {
      ++edges;
      int a = find(v), b = find(p);
      if (a != b) {
        root[a] = b;
        --components;
      }
    }
  }
  return edges == n - components;
}

// Parents precede children; ties broken by ascending node id.
inline std::vector<NodeId> topological_order(const BeliefNetwork& net) {
  const int n = net.node_count();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = static_cast<int>(net.parents[v].size());
    for (NodeId p : net.parents[v]) children[p].push_back(v);
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

}  // namespace wbfmap
