#pragma once

// Seeded random network generation for tests and the `gen` CLI command.
// Rows are Dirichlet(1)-style: independent exponentials, normalized.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wbfmap/network.hpp"

namespace wbfmap {

struct GenOptions {
  int nodes = 8;
  int min_values = 2;
  int max_values = 3;
  int max_in_degree = 3;
  // Probability that a CPT row is deterministic (a single 1, rest 0).
  double det_fraction = 0.0;
  bool polytree = false;
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  // Uniform on (0, 1), never exactly 0 or 1.
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

inline BeliefNetwork generate_network(std::uint64_t seed, const GenOptions& opts = {}) {
  detail::Rng rng(seed);
  BeliefNetwork net;
  const int n = opts.nodes;

  for (int i = 0; i < n; ++i) {
    net.node_names.push_back("n" + std::to_string(i));
    const int m = opts.min_values + rng.below(opts.max_values - opts.min_values + 1);
    std::vector<std::string> values;
    for (int d = 0; d < m; ++d) values.push_back("v" + std::to_string(d));
    net.value_names.push_back(std::move(values));
  }

  // Union-find over the undirected skeleton, used in polytree mode to
  // reject parents that would close an undirected cycle.
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };

  for (NodeId v = 0; v < n; ++v) {
    const int want = v == 0 ? 0 : rng.below(std::min<int>(v, opts.max_in_degree) + 1);
    std::vector<NodeId> candidates(v);
    for (NodeId p = 0; p < v; ++p) candidates[p] = p;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
      std::swap(candidates[i], candidates[i + rng.below(static_cast<int>(candidates.size()) - i)]);
    std::vector<NodeId> parents;
    for (NodeId p : candidates) {
      if (static_cast<int>(parents.size()) >= want) break;
      if (opts.polytree) {
        if (find(p) == find(v)) continue;
        comp[find(p)] = find(v);
      }
      parents.push_back(p);
    }
    std::sort(parents.begin(), parents.end());

    Cpt cpt;
    cpt.own_domain_size = net.domain_size(v);
    for (NodeId p : parents) cpt.parent_domain_sizes.push_back(net.domain_size(p));
    const int rows = cpt.row_count();
    for (int r = 0; r < rows; ++r) {
      std::vector<double> row(cpt.own_domain_size, 0.0);
      if (rng.u01() < opts.det_fraction) {
        row[rng.below(cpt.own_domain_size)] = 1.0;
      } else {
        double sum = 0.0;
        for (double& x : row) {
          x = -std::log(rng.u01());
          sum += x;
        }
        for (double& x : row) x /= sum;
      }
      cpt.rows.push_back(std::move(row));
    }
    net.parents.push_back(std::move(parents));
    net.cpts.push_back(std::move(cpt));
  }

  validate(net);
  return net;
}

// Hard evidence on 0..max_findings distinct random nodes.
inline Evidence random_evidence(std::uint64_t seed, const BeliefNetwork& net, int max_findings) {
  detail::Rng rng(seed);
  Evidence ev;
  const int n = net.node_count();
  const int count = std::min(n, rng.below(max_findings + 1));
  std::vector<NodeId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  for (int i = 0; i < count; ++i) std::swap(ids[i], ids[i + rng.below(n - i)]);
  for (int i = 0; i < count; ++i) ev.set(ids[i], rng.below(net.domain_size(ids[i])));
  return ev;
}

}  // namespace wbfmap
