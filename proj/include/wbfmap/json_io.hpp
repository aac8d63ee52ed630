#pragma once

// Network file format: a JSON object
//   {"nodes":[{"name":"A","values":["t","f"],"parents":[],"cpt":[[0.8,0.2]]},...]}
// Node order in the document defines node ids. Parent references are
// resolved against the whole document, then the graph is checked for
// cycles.

#include <string>
#include <vector>

#include "json.hpp"
#include "wbfmap/network.hpp"

namespace wbfmap {

inline BeliefNetwork parse_network(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON syntax error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw ParseError("expected a JSON object with a \"nodes\" array");

  const auto& nodes = doc["nodes"];
  BeliefNetwork net;
  // First pass: names and domains, so parent references (and their domain
  // sizes) can be resolved regardless of declaration order.
  for (const auto& jn : nodes) {
    if (!jn.is_object() || !jn.contains("name") || !jn.contains("values") ||
        !jn.contains("parents") || !jn.contains("cpt"))
      throw ParseError("each node needs \"name\", \"values\", \"parents\" and \"cpt\"");
    std::string name = jn["name"].get<std::string>();
    if (net.node_by_name(name) != -1)
      throw ParseError("duplicate node name '" + name + "'");
    net.node_names.push_back(name);
    std::vector<std::string> values;
    for (const auto& jv : jn["values"]) values.push_back(jv.get<std::string>());
    net.value_names.push_back(std::move(values));
  }
  // Second pass: parents and CPTs.
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const auto& jn = nodes[v];
    std::vector<NodeId> parents;
    for (const auto& jp : jn["parents"]) {
      std::string pname = jp.get<std::string>();
      NodeId p = net.node_by_name(pname);
      if (p == -1)
        throw ParseError("unknown parent '" + pname + "' of node '" + net.node_names[v] + "'");
      parents.push_back(p);
    }
    Cpt cpt;
    cpt.own_domain_size = net.domain_size(v);
    for (NodeId p : parents) cpt.parent_domain_sizes.push_back(net.domain_size(p));
    for (const auto& jrow : jn["cpt"]) {
      std::vector<double> row;
      for (const auto& je : jrow) {
        if (!je.is_number())
          throw ParseError("non-numeric CPT entry in node '" + net.node_names[v] + "'");
        row.push_back(je.get<double>());
      }
      cpt.rows.push_back(std::move(row));
    }
    net.parents.push_back(std::move(parents));
    net.cpts.push_back(std::move(cpt));
  }
  validate(net);
  return net;
}

inline std::string write_network(const BeliefNetwork& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId v = 0; v < net.node_count(); ++v) {
    nlohmann::json jn;
    jn["name"] = net.node_names[v];
    jn["values"] = net.value_names[v];
    nlohmann::json jp = nlohmann::json::array();
    for (NodeId p : net.parents[v]) jp.push_back(net.node_names[p]);
    jn["parents"] = jp;
    jn["cpt"] = net.cpts[v].rows;
    nodes.push_back(jn);
  }
  nlohmann::json doc;
  doc["nodes"] = nodes;
  return doc.dump();
}

}  // namespace wbfmap
