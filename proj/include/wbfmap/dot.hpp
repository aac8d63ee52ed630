#pragma once

// Graphviz DOT emission for a compiled WBF DAG. Shapes by node kind:
// ChoiceRoot=box, CostRoot=diamond, Selector=ellipse, Image=doubleoctagon,
// EvidenceAnd=house. Edges run parent -> child.

#include <cstdio>
#include <string>

#include "wbfmap/network.hpp"
#include "wbfmap/wbfdag.hpp"

namespace wbfmap {

namespace detail {

inline const char* kind_name(WbfKind k) {
  switch (k) {
    case WbfKind::ChoiceRoot: return "ChoiceRoot";
    case WbfKind::CostRoot: return "CostRoot";
    case WbfKind::Selector: return "Selector";
    case WbfKind::Image: return "Image";
    case WbfKind::EvidenceAnd: return "EvidenceAnd";
  }
  return "?";
}

inline const char* kind_shape(WbfKind k) {
  switch (k) {
    case WbfKind::ChoiceRoot: return "box";
    case WbfKind::CostRoot: return "diamond";
    case WbfKind::Selector: return "ellipse";
    case WbfKind::Image: return "doubleoctagon";
    case WbfKind::EvidenceAnd: return "house";
  }
  return "plaintext";
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Human-readable description of what a node stands for, in network terms.
inline std::string node_description(const WbfDag& dag, const BeliefNetwork& net,
                                    const WbfNode& node) {
  auto value_name = [&](NodeId bn, ValueId v) {
    return net.node_names[bn] + "=" + net.value_names[bn][v];
  };
  switch (node.kind) {
    case WbfKind::ChoiceRoot:
      return value_name(node.bn_node, node.own_value);
    case WbfKind::CostRoot:
    case WbfKind::Selector: {
      std::string out = value_name(node.bn_node, node.own_value) + "|";
      const Cpt& cpt = net.cpts[node.bn_node];
      const std::vector<ValueId> tuple = cpt.parent_values_of_row(node.tuple_rank);
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += ",";
        out += value_name(net.parents[node.bn_node][i], tuple[i]);
      }
      return out;
    }
    case WbfKind::Image:
      return net.node_names[node.bn_node];
    case WbfKind::EvidenceAnd: {
      if (dag.evidence.empty()) return "true";
      std::string out;
      for (std::size_t i = 0; i < dag.evidence.findings.size(); ++i) {
        if (i) out += ",";
        out += value_name(dag.evidence.findings[i].first, dag.evidence.findings[i].second);
      }
      return out;
    }
  }
  return "";
}

}  // namespace detail

inline std::string to_dot(const WbfDag& dag, const BeliefNetwork& net) {
  std::string out = "digraph wbfdag {\n";
  char costbuf[48];
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    const WbfNode& node = dag.nodes[i];
    std::snprintf(costbuf, sizeof(costbuf), "%.6f", node.cost_true);
    out += "  n" + std::to_string(i) + " [shape=" + detail::kind_shape(node.kind) +
           ", label=\"" + detail::kind_name(node.kind) + "\\n" +
           detail::dot_escape(detail::node_description(dag, net, node)) + "\\ncost(T)=" +
           costbuf + "\"];\n";
  }
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    for (std::int32_t p : dag.nodes[i].parents)
      out += "  n" + std::to_string(p) + " -> n" + std::to_string(i) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace wbfmap
