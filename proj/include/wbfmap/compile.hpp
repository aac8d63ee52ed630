#pragma once

// Construction of the WBF DAG from a belief network and evidence.
//
// Each root node u with m values becomes one image plus m choice roots,
// cost(T) = -ln P(u = L_i). Each non-root v with k parents becomes one
// cost root and one selector per CPT entry (m * prod(m_i) of each) plus one
// image whose parents are the selectors. A single sink node conjoins the
// images of all evidence nodes; with no evidence its label is constantly T.
//
// With prune01, a zero-probability entry omits its cost root and selector
// and a probability-1 entry omits the cost root and drops the cost slot
// from its selector. With pruning off, zero-probability cost roots exist
// with a large finite penalty and are flagged inadmissible so the search
// never commits them.

#include <cassert>
#include <cmath>
#include <cstdint>

#include "wbfmap/network.hpp"
#include "wbfmap/wbfdag.hpp"

namespace wbfmap {

inline WbfDag compile(const BeliefNetwork& net, const Evidence& ev,
                      const CompileOptions& options = {}) {
  validate_evidence(net, ev);

  WbfDag dag;
  dag.options = options;
  dag.evidence = ev;
  dag.bn_parents = net.parents;
  dag.bn_domain_sizes.resize(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v)
    dag.bn_domain_sizes[v] = net.domain_size(v);
  dag.gadgets.resize(net.node_count());

  auto add_node = [&dag](WbfNode node) {
    dag.nodes.push_back(std::move(node));
    return static_cast<std::int32_t>(dag.nodes.size() - 1);
  };

  // Gadgets are emitted in topological order so parent images exist before
  // the selectors that reference them.
  for (NodeId v : topological_order(net)) {
    Gadget& gadget = dag.gadgets[v];
    const Cpt& cpt = net.cpts[v];
    const int m = net.domain_size(v);

    if (net.is_root(v)) {
      gadget.root_entries.resize(m);
      std::vector<std::int32_t> image_parents;
      std::vector<ValueId> branch_values;
      for (ValueId d = 0; d < m; ++d) {
        const double p = cpt.rows[0][d];
        RootEntry& entry = gadget.root_entries[d];
        if (p == 0.0 && options.prune01) continue;  // omitted
        WbfNode choice;
        choice.kind = WbfKind::ChoiceRoot;
        choice.bn_node = v;
        choice.own_value = d;
        if (p == 0.0) {
          choice.cost_true = options.zero_prob_penalty;
          choice.inadmissible_true = true;
        } else {
          choice.cost_true = -std::log(p);
        }
        entry.choice_root = add_node(choice);
        entry.cost = choice.cost_true;
        entry.admissible = !choice.inadmissible_true;
        image_parents.push_back(entry.choice_root);
        branch_values.push_back(d);
      }
      WbfNode image;
      image.kind = WbfKind::Image;
      image.bn_node = v;
      image.parents = std::move(image_parents);
      image.label = XorImage{std::move(branch_values)};
      gadget.image = add_node(image);
      continue;
    }

    const int k = static_cast<int>(net.parents[v].size());
    const int rows = cpt.row_count();
    gadget.entries.resize(static_cast<std::size_t>(rows) * m);
    std::vector<std::int32_t> image_parents;
    std::vector<ValueId> branch_values;
    for (int rank = 0; rank < rows; ++rank) {
      const std::vector<ValueId> tuple = cpt.parent_values_of_row(rank);
      for (ValueId d0 = 0; d0 < m; ++d0) {
        const double p = cpt.rows[rank][d0];
        GadgetEntry& entry = gadget.entries[static_cast<std::size_t>(rank) * m + d0];
        if (p == 0.0 && options.prune01) continue;  // omitted

        const bool drop_cost_slot = (p == 1.0 && options.prune01);
        if (!drop_cost_slot) {
          WbfNode cost;
          cost.kind = WbfKind::CostRoot;
          cost.bn_node = v;
          cost.own_value = d0;
          cost.tuple_rank = rank;
          if (p == 0.0) {
            cost.cost_true = options.zero_prob_penalty;
            cost.inadmissible_true = true;
          } else {
            cost.cost_true = options.zero_nonprior ? 0.0 : -std::log(p);
          }
          entry.cost_root = add_node(cost);
        }

        WbfNode selector;
        selector.kind = WbfKind::Selector;
        selector.bn_node = v;
        selector.own_value = d0;
        selector.tuple_rank = rank;
        for (NodeId parent : net.parents[v])
          selector.parents.push_back(dag.image_of(parent));
        SelectorMatch match;
        match.required_tuple = tuple;
        if (entry.cost_root != -1) {
          selector.parents.push_back(entry.cost_root);
          match.cost_parent_pos = k;
        }
        selector.label = std::move(match);
        entry.selector = add_node(selector);
        entry.cost = entry.cost_root != -1 ? dag.nodes[entry.cost_root].cost_true : 0.0;
        entry.admissible =
            entry.cost_root == -1 || !dag.nodes[entry.cost_root].inadmissible_true;
        image_parents.push_back(entry.selector);
        branch_values.push_back(d0);
      }
    }
    WbfNode image;
    image.kind = WbfKind::Image;
    image.bn_node = v;
    image.parents = std::move(image_parents);
    image.label = XorImage{std::move(branch_values)};
    gadget.image = add_node(image);
  }

  WbfNode sink;
  sink.kind = WbfKind::EvidenceAnd;
  if (ev.empty()) {
    sink.label = ConstTrue{};
  } else {
    EvidenceMatch match;
    for (std::size_t i = 0; i < ev.findings.size(); ++i) {
      sink.parents.push_back(dag.image_of(ev.findings[i].first));
      match.required.emplace_back(static_cast<int>(i), ev.findings[i].second);
    }
    sink.label = std::move(match);
  }
  dag.sink = add_node(sink);
  dag.sink_value = WbfValue::t();

  // Parents always precede their children in emission order.
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    for (std::int32_t p : dag.nodes[i].parents) {
      if (p >= i) throw std::logic_error("compiled DAG is not topologically ordered");
    }
  }

  return dag;
}

// Builds the total WBF model canonically representing a total network
// assignment: per node the matching choice root / selector and cost root
// hold T, every other root holds F, and label-bearing nodes hold their
// evaluated values. Throws std::invalid_argument if the assignment uses an
// omitted (zero-probability) entry.
inline WbfAssignment canonical_model(const WbfDag& dag, const Assignment& a) {
  WbfAssignment f(dag.node_count());
  for (NodeId bn = 0; bn < dag.bn_node_count(); ++bn) {
    const Gadget& gadget = dag.gadgets[bn];
    if (!gadget.root_entries.empty()) {
      if (gadget.root_entries[a[bn]].choice_root == -1)
        throw std::invalid_argument("assignment uses an omitted zero-probability value");
      for (const RootEntry& entry : gadget.root_entries) {
        if (entry.choice_root != -1)
          f.set(entry.choice_root,
                dag.nodes[entry.choice_root].own_value == a[bn] ? WbfValue::t()
                                                                : WbfValue::f());
      }
    } else {
      const int m = dag.bn_domain_sizes[bn];
      std::vector<ValueId> tuple(dag.bn_parents[bn].size());
      for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = a[dag.bn_parents[bn][i]];
      int rank = 0;
      for (std::size_t i = 0; i < tuple.size(); ++i)
        rank = rank * dag.bn_domain_sizes[dag.bn_parents[bn][i]] + tuple[i];
      const GadgetEntry& chosen = gadget.entries[static_cast<std::size_t>(rank) * m + a[bn]];
      if (chosen.selector == -1)
        throw std::invalid_argument("assignment uses an omitted zero-probability entry");
      for (const GadgetEntry& entry : gadget.entries) {
        if (entry.cost_root != -1)
          f.set(entry.cost_root,
                entry.cost_root == chosen.cost_root ? WbfValue::t() : WbfValue::f());
      }
    }
    f.set(dag.image_of(bn), WbfValue::domain(a[bn]));
  }
  // Selectors and the sink take their label values.
  std::vector<WbfValue> buf;
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    const WbfNode& node = dag.nodes[i];
    if (node.kind != WbfKind::Selector && node.kind != WbfKind::EvidenceAnd) continue;
    buf.clear();
    for (std::int32_t p : node.parents) buf.push_back(f.get(p));
    f.set(i, evaluate_label(node, buf));
  }
  return f;
}

}  // namespace wbfmap
