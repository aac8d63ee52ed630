#pragma once

// Brute-force reference implementations. Everything here enumerates all
// total assignments, guarded to at most 10^7, and exists to verify the
// compiled-search path on small instances.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wbfmap/network.hpp"

namespace wbfmap {

struct RankedAssignment {
  Assignment assignment;
  // Joint probability of the assignment; for partial_roots_oracle this is
  // the root-prior product instead.
  double probability = 0.0;
};

namespace detail {

inline constexpr double kEnumerationLimit = 1e7;

inline void check_enumerable(const BeliefNetwork& net) {
  double count = 1.0;
  for (NodeId v = 0; v < net.node_count(); ++v) count *= net.domain_size(v);
  if (count > kEnumerationLimit)
    throw std::runtime_error("instance too large for brute-force enumeration");
}

// Odometer step in lexicographic order (last node fastest); false at wrap.
inline bool next_assignment(const BeliefNetwork& net, Assignment& a) {
  for (int v = net.node_count() - 1; v >= 0; --v) {
    if (++a[v] < net.domain_size(v)) return true;
    a[v] = 0;
  }
  return false;
}

inline bool consistent(const Evidence& ev, const Assignment& a) {
  for (const auto& [node, value] : ev.findings)
    if (a[node] != value) return false;
  return true;
}

template <typename Score>
inline std::optional<RankedAssignment> argmax_enumerate(const BeliefNetwork& net,
                                                        const Evidence& ev,
                                                        Score&& score) {
  check_enumerable(net);
  validate_evidence(net, ev);
  std::optional<RankedAssignment> best;
  Assignment a(net.node_count(), 0);
  do {
    if (!consistent(ev, a)) continue;
    const double s = score(a);
    if (s > 0.0 && (!best || s > best->probability)) best = RankedAssignment{a, s};
  } while (next_assignment(net, a));
  return best;  // strict improvement keeps the lexicographically first tie
}

}  // namespace detail

// Argmax of the joint probability over total assignments consistent with
// the evidence; ties broken lexicographically by (node, value); nullopt if
// every consistent assignment has probability 0.
inline std::optional<RankedAssignment> map_oracle(const BeliefNetwork& net, const Evidence& ev) {
  return detail::argmax_enumerate(net, ev,
                                  [&](const Assignment& a) { return joint_probability(net, a); });
}

// Top-k consistent assignments by probability (zero-probability excluded),
// same tiebreak as map_oracle.
inline std::vector<RankedAssignment> kbest_oracle(const BeliefNetwork& net, const Evidence& ev,
                                                  int k) {
  if (k <= 0) return {};
  detail::check_enumerable(net);
  validate_evidence(net, ev);
  std::vector<RankedAssignment> all;
  Assignment a(net.node_count(), 0);
  do {
    if (!detail::consistent(ev, a)) continue;
    const double p = joint_probability(net, a);
    if (p > 0.0) all.push_back({a, p});
  } while (detail::next_assignment(net, a));
  std::stable_sort(all.begin(), all.end(),
                   [](const RankedAssignment& x, const RankedAssignment& y) {
                     return x.probability > y.probability;
                   });
  if (static_cast<int>(all.size()) > k) all.resize(k);
  return all;
}

// Partial MAP over roots: among consistent assignments in which every CPT
// entry used is strictly positive, maximize the product of root priors
// only. The returned probability field holds that root score.
inline std::optional<RankedAssignment> partial_roots_oracle(const BeliefNetwork& net,
                                                            const Evidence& ev) {
  return detail::argmax_enumerate(net, ev, [&](const Assignment& a) {
    double root_score = 1.0;
    for (NodeId v = 0; v < net.node_count(); ++v) {
      const Cpt& cpt = net.cpts[v];
      std::vector<ValueId> tuple(net.parents[v].size());
      for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = a[net.parents[v][i]];
      const double entry = cpt.at(cpt.row_of(tuple), a[v]);
      if (entry == 0.0) return 0.0;  // infeasible: uses a forbidden entry
      if (net.is_root(v)) root_score *= entry;
    }
    return root_score;
  });
}

}  // namespace wbfmap
