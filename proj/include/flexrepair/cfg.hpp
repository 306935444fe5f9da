#pragma once

#include <map>
#include <string>
#include <vector>

#include "flexrepair/model.hpp"

namespace flexrepair {

/// label -> count (always positive).
using LabelMultiset = std::map<std::string, int>;

/// Node id of the sink that stands for a missing successor.
inline constexpr int kSinkId = 0;

struct CfgNode {
  int id = kSinkId;  // location id, or kSinkId
  LabelMultiset labels;
  int line = 0;
  std::string description;
  std::vector<Binding> bindings;

  bool sink() const { return id == kSinkId; }
};

struct CfgEdge {
  int src = 0;
  int dst = 0;
  bool polarity = true;

  bool operator==(const CfgEdge&) const = default;
};

struct CfgOptions {
  // Renames iter#k / ind#k to iter# / ind# so loop numbering does not
  // affect label similarity.
  bool normalizeLoopNames = false;
};

class Cfg {
 public:
  std::vector<CfgNode> nodes;  // nodes[0] is the sink
  std::vector<CfgEdge> edges;
  int entry = kSinkId;

  const CfgNode& node(int id) const;
  size_t index_of(int id) const;
  int true_next(int id) const;
  int false_next(int id) const;
  /// Non-sink node ids in ascending order.
  std::vector<int> location_ids() const;

 private:
  friend Cfg build_cfg(const ModelFunction&, const CfgOptions&);
  std::map<int, size_t> index_;
};

Cfg build_cfg(const ModelFunction& fn, const CfgOptions& opts = {});

LabelMultiset extract_labels(const Expr& e, const CfgOptions& opts = {});

/// Labels of one binding: the target contributes "cond" for $cond and its
/// name for loop bookkeeping variables; user variables contribute nothing.
LabelMultiset binding_labels(const Binding& b, const CfgOptions& opts = {});

void add_labels(LabelMultiset& into, const LabelMultiset& more);

/// Multiset Jaccard: sum of minimum counts over sum of maximum counts.
/// Two empty multisets score 1.
double jaccard(const LabelMultiset& a, const LabelMultiset& b);

std::string format_labels(const LabelMultiset& labels);

/// Graphviz rendering; False edges are dotted.
std::string to_dot(const Cfg& cfg, const std::string& name = "cfg");

}  // namespace flexrepair
