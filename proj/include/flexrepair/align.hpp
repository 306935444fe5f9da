#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flexrepair/cfg.hpp"
#include "flexrepair/model.hpp"

namespace flexrepair {

enum class AlignMode { Rigid, FlexLabel, FlexLabelEdge, SarfgenSim };

std::string to_string(AlignMode mode);

struct AlignConfig {
  size_t maxPermutations = 1000;  // 0 = no limit
  double perAlignTimeout = 60.0;  // seconds, <= 0 disables
  double overallTimeout = 300.0;
  double proceedThreshold = 0.6;
  double sarfgenThreshold = 0.95;
  bool edgeWeightEnabled = true;
};

struct AlignmentResult {
  std::map<int, int> mapping;  // correct node -> incorrect node, sink included
  std::map<std::pair<int, int>, double> perPairSimilarity;
  double rawScore = 0.0;
  double normalizedScore = 0.0;
  AlignMode mode = AlignMode::FlexLabelEdge;
  size_t exploredPermutations = 0;
  bool timedOut = false;

  /// Incorrect-side node ids that no correct node maps to (sink excluded).
  std::vector<int> unmapped_incorrect(const Cfg& incorrect) const;
};

/// Recursive pairing from the entry nodes. nullopt means the control flows
/// do not match.
std::optional<AlignmentResult> rigid_align(const Cfg& correct, const Cfg& incorrect);

/// Mode is FlexLabelEdge when edge weights are enabled, FlexLabel otherwise.
AlignmentResult flex_align(const Cfg& correct, const Cfg& incorrect, const AlignConfig& config = {});

/// Dispatches on mode; Sarfgen simulation is label+edge alignment tagged for
/// the stricter gate. nullopt only for a rigid mismatch.
std::optional<AlignmentResult> align(const Cfg& correct, const Cfg& incorrect, AlignMode mode,
                                     const AlignConfig& config = {});

/// Score of one fixed mapping (sink pair excluded), filling per-pair scores.
double mapping_score(const Cfg& correct, const Cfg& incorrect, const std::map<int, int>& mapping,
                     bool edges, std::map<std::pair<int, int>, double>* per_pair = nullptr);

/// s divided by the larger node count, sink excluded.
double normalize_score(double raw, const Cfg& correct, const Cfg& incorrect);

enum class GateDecision { Proceed, Reject };

GateDecision gate(const AlignmentResult& result, const AlignConfig& config);
GateDecision gate(double normalized, double threshold);

struct RecreatedModel {
  ModelFunction function;
  std::map<int, int> mapping;  // completed: every correct node is mapped
  std::vector<int> removed;    // incorrect location ids dropped
  std::vector<int> created;    // fresh location ids
  std::vector<std::string> warnings;
};

/// Rebuilds the incorrect function so its transitions mirror the correct
/// graph through the alignment.
RecreatedModel recreate_model(const Cfg& correct, const Cfg& incorrect, const AlignmentResult& phi,
                              const ModelFunction& correct_fn, const ModelFunction& incorrect_fn);

namespace detail {

/// Rectangular assignment (rows <= cols), minimizing cost. Entries >= kForbidden
/// are not allowed. Returns the column for each row, or empty if infeasible.
inline constexpr double kForbidden = 1e6;
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

/// Enumerates assignments in non-decreasing cost order (Murty). The callback
/// returns false to stop early.
void k_best_assignments(const std::vector<std::vector<double>>& cost,
                        const std::function<bool(const std::vector<int>&, double)>& visit);

}  // namespace detail

}  // namespace flexrepair
