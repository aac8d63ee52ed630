#pragma once

// Text-level helpers shared by the CLI and its tests: evidence strings,
// shortest round-trip number formatting, and the result block format.

#include <charconv>
#include <cmath>
#include <string>

#include "wbfmap/network.hpp"
#include "wbfmap/oracle.hpp"

namespace wbfmap {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Comma-separated `name=value` findings; surrounding whitespace is ignored.
inline Evidence parse_evidence(const std::string& spec, const BeliefNetwork& net) {
  Evidence ev;
  auto trim = [](std::string s) {
    const char* ws = " \t";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  if (trim(spec).empty()) return ev;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = spec.find(',', pos);
    const std::string term =
        trim(spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    const std::size_t eq = term.find('=');
    if (term.empty() || eq == std::string::npos || eq == 0 || eq == term.size() - 1)
      throw ParseError("malformed evidence term '" + term + "'");
    const std::string name = trim(term.substr(0, eq));
    const std::string value = trim(term.substr(eq + 1));
    const NodeId node = net.node_by_name(name);
    if (node == -1) throw ParseError("unknown node '" + name + "'");
    const ValueId val = net.value_by_name(node, value);
    if (val == -1) throw ParseError("unknown value '" + value + "' for node '" + name + "'");
    if (ev.has(node)) throw ParseError("duplicate evidence for node '" + name + "'");
    ev.set(node, val);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ev;
}

// One result block: `node=value` lines in node-id order for every assigned
// node, then cost and probability.
inline std::string format_result_block(const BeliefNetwork& net, const Assignment& a,
                                       double cost, double probability) {
  std::string out;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v < static_cast<NodeId>(a.size()) && a[v] != kUnassigned) {
      out += net.node_names[v];
      out += '=';
      out += net.value_names[v][a[v]];
      out += '\n';
    }
  }
  out += "cost=" + format_double(cost) + '\n';
  out += "prob=" + format_double(probability) + '\n';
  return out;
}

inline std::string format_ranked_block(const BeliefNetwork& net, const RankedAssignment& r) {
  return format_result_block(net, r.assignment, -std::log(r.probability), r.probability);
}

}  // namespace wbfmap
