#pragma once

// Weighted boolean-function DAG: a DAG whose nodes take values in
// D' = D ∪ {T, F, U}, each non-root node carrying a label function over its
// parents' values, each (node, value) pair carrying a non-negative cost, and
// one (sink, value) pair acting as the evidence requirement. This header
// holds the value/label/node types and the declarative layer: label
// evaluation, model and satisfaction checks, assignment cost, and the
// induced assignment on the source network.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "wbfmap/network.hpp"

namespace wbfmap {

struct WbfValue {
  enum class Tag : std::uint8_t { Domain, True, False, Undef };

  Tag tag = Tag::Undef;
  ValueId value = -1;  // meaningful only when tag == Domain

  static WbfValue domain(ValueId v) { return {Tag::Domain, v}; }
  static WbfValue t() { return {Tag::True, -1}; }
  static WbfValue f() { return {Tag::False, -1}; }
  static WbfValue u() { return {Tag::Undef, -1}; }

  bool is_domain() const { return tag == Tag::Domain; }
  bool is_true() const { return tag == Tag::True; }
  bool is_false() const { return tag == Tag::False; }
  bool is_undef() const { return tag == Tag::Undef; }

  friend bool operator==(const WbfValue&, const WbfValue&) = default;
};

enum class WbfKind : std::uint8_t {
  ChoiceRoot,   // root gadget: one per domain value of a BN root node
  CostRoot,     // non-root gadget: one per CPT entry, carries the entry cost
  Selector,     // ties a CPT entry to a specific parent-value tuple
  Image,        // stands for a BN node; holds its Domain value in a model
  EvidenceAnd,  // unique sink; T iff all evidence images match
};

// Domain value per parent position; yields Domain(branch_values[i]) iff
// parent i is T and every other parent is F, U otherwise.
struct XorImage {
  std::vector<ValueId> branch_values;
};

// T iff the cost parent (when present) is T and every image parent equals
// its required tuple value, F otherwise. Image parents come first in BN
// parent order; cost_parent_pos is -1 when the cost slot was dropped by
// probability-1 pruning.
struct SelectorMatch {
  std::vector<ValueId> required_tuple;
  int cost_parent_pos = -1;
};

// T iff every listed parent holds its required Domain value, F otherwise.
struct EvidenceMatch {
  std::vector<std::pair<int, ValueId>> required;  // (parent position, value)
};

// Constantly T; the sink label when there is no evidence.
struct ConstTrue {};

using Label = std::variant<XorImage, SelectorMatch, EvidenceMatch, ConstTrue>;

struct WbfNode {
  WbfKind kind;
  NodeId bn_node = -1;     // owning BN node (-1 for the sink)
  ValueId own_value = -1;  // ChoiceRoot: the value; CostRoot/Selector: d0
  std::int32_t tuple_rank = -1;  // CostRoot/Selector: parent-config row
  std::vector<std::int32_t> parents;
  Label label = ConstTrue{};  // unused for ChoiceRoot/CostRoot (WBF roots)
  double cost_true = 0.0;     // c(node, T); all other values cost 0
  // Zero-probability entry kept because pruning is off; the search never
  // commits it to T.
  bool inadmissible_true = false;

  bool is_wbf_root() const {
    return kind == WbfKind::ChoiceRoot || kind == WbfKind::CostRoot;
  }
};

struct CompileOptions {
  bool prune01 = true;        // omit P=0 gadget parts, shrink P=1 parts
  bool zero_nonprior = false; // partial MAP over roots: zero all CostRoot costs
  // Finite stand-in for the infinite cost of a zero-probability entry when
  // prune01 is off; such entries are marked inadmissible instead.
  double zero_prob_penalty = 1e12;
};

// Per-value bookkeeping for a BN root node's gadget.
struct RootEntry {
  std::int32_t choice_root = -1;  // -1: omitted (P=0 under prune01)
  double cost = 0.0;
  bool admissible = false;
};

// Per-CPT-entry bookkeeping for a non-root gadget, indexed rank*m + d0.
struct GadgetEntry {
  std::int32_t selector = -1;   // -1: omitted (P=0 under prune01)
  std::int32_t cost_root = -1;  // -1: dropped (P=1 under prune01)
  double cost = 0.0;            // charged when this entry is selected
  bool admissible = false;
};

struct Gadget {
  std::int32_t image = -1;
  std::vector<RootEntry> root_entries;  // roots: one per domain value
  std::vector<GadgetEntry> entries;     // non-roots: one per CPT entry
};

struct WbfDag {
  std::vector<WbfNode> nodes;
  std::int32_t sink = -1;
  WbfValue sink_value = WbfValue::t();
  std::vector<Gadget> gadgets;                 // by BN node
  std::vector<std::vector<NodeId>> bn_parents; // copy of the BN parent lists
  std::vector<int> bn_domain_sizes;
  Evidence evidence;
  CompileOptions options;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int bn_node_count() const { return static_cast<int>(gadgets.size()); }
  std::int32_t image_of(NodeId bn) const { return gadgets[bn].image; }
  int edge_count() const {
    int e = 0;
    for (const auto& n : nodes) e += static_cast<int>(n.parents.size());
    return e;
  }
};

// Possibly partial map from WBF node to value.
class WbfAssignment {
 public:
  WbfAssignment() = default;
  explicit WbfAssignment(std::size_t node_count)
      : values_(node_count), set_(node_count, 0) {}

  std::size_t size() const { return values_.size(); }
  bool has(std::int32_t node) const { return set_[node] != 0; }
  WbfValue get(std::int32_t node) const { return values_[node]; }
  void set(std::int32_t node, WbfValue v) {
    values_[node] = v;
    set_[node] = 1;
  }
  std::size_t assigned_count() const {
    std::size_t c = 0;
    for (char s : set_) c += s != 0;
    return c;
  }

  friend bool operator==(const WbfAssignment&, const WbfAssignment&) = default;

 private:
  std::vector<WbfValue> values_;
  std::vector<char> set_;
};

// Pure evaluation of a node's label on its parents' values. Throws
// std::invalid_argument on arity mismatch.
inline WbfValue evaluate_label(const WbfNode& node, std::span<const WbfValue> parent_values) {
  if (parent_values.size() != node.parents.size())
    throw std::invalid_argument("label arity mismatch");
  if (const auto* xi = std::get_if<XorImage>(&node.label)) {
    int true_at = -1;
    for (std::size_t i = 0; i < parent_values.size(); ++i) {
      if (parent_values[i].is_true()) {
        if (true_at != -1) return WbfValue::u();
        true_at = static_cast<int>(i);
      } else if (!parent_values[i].is_false()) {
        return WbfValue::u();
      }
    }
    if (true_at == -1) return WbfValue::u();
    return WbfValue::domain(xi->branch_values[true_at]);
  }
  if (const auto* sm = std::get_if<SelectorMatch>(&node.label)) {
    std::size_t image_pos = 0;
    for (std::size_t i = 0; i < parent_values.size(); ++i) {
      if (static_cast<int>(i) == sm->cost_parent_pos) {
        if (!parent_values[i].is_true()) return WbfValue::f();
      } else {
        if (parent_values[i] != WbfValue::domain(sm->required_tuple[image_pos]))
          return WbfValue::f();
        ++image_pos;
      }
    }
    return WbfValue::t();
  }
  if (const auto* em = std::get_if<EvidenceMatch>(&node.label)) {
    for (const auto& [pos, val] : em->required) {
      if (parent_values[pos] != WbfValue::domain(val)) return WbfValue::f();
    }
    return WbfValue::t();
  }
  return WbfValue::t();  // ConstTrue
}

// True iff every assigned WBF root holds T or F and every assigned
// label-bearing node whose parents are all assigned equals its label value.
// Nodes with unassigned parents are not yet checkable; an empty assignment
// is vacuously a model.
inline bool is_model(const WbfDag& dag, const WbfAssignment& f) {
  std::vector<WbfValue> buf;
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    if (!f.has(i)) continue;
    const WbfNode& node = dag.nodes[i];
    WbfValue v = f.get(i);
    if (node.is_wbf_root()) {
      if (!v.is_true() && !v.is_false()) return false;
      continue;
    }
    bool parents_assigned = true;
    buf.clear();
    for (std::int32_t p : node.parents) {
      if (!f.has(p)) {
        parents_assigned = false;
        break;
      }
      buf.push_back(f.get(p));
    }
    if (!parents_assigned) continue;
    if (evaluate_label(node, buf) != v) return false;
  }
  return true;
}

// Requires f to be a model; true iff the sink is assigned its required value.
inline bool is_satisfying(const WbfDag& dag, const WbfAssignment& f) {
  return f.has(dag.sink) && f.get(dag.sink) == dag.sink_value;
}

// Sum over assigned nodes of c(node, value); unassigned nodes contribute 0.
inline double model_cost(const WbfDag& dag, const WbfAssignment& f) {
  double c = 0.0;
  for (std::int32_t i = 0; i < dag.node_count(); ++i) {
    if (f.has(i) && f.get(i).is_true()) c += dag.nodes[i].cost_true;
  }
  return c;
}

// Maps each BN node whose image holds a Domain value to that value; nodes
// with unassigned images are left as kUnassigned. An image holding U
// signals a non-satisfying input and throws.
inline Assignment induced_assignment(const WbfDag& dag, const WbfAssignment& f) {
  Assignment a(dag.bn_node_count(), kUnassigned);
  for (NodeId bn = 0; bn < dag.bn_node_count(); ++bn) {
    std::int32_t img = dag.image_of(bn);
    if (!f.has(img)) continue;
    WbfValue v = f.get(img);
    if (v.is_undef())
      throw std::logic_error("image node holds U; input is not a satisfying model");
    if (!v.is_domain())
      throw std::logic_error("image node holds a boolean value");
    a[bn] = v.value;
  }
  return a;
}

}  // namespace wbfmap
