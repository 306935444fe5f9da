#include "flexrepair/align.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <set>

namespace flexrepair {

std::string to_string(AlignMode mode) {
  switch (mode) {
    case AlignMode::Rigid: return "rigid";
    case AlignMode::FlexLabel: return "flex-label";
    case AlignMode::FlexLabelEdge: return "flex-label-edge";
    case AlignMode::SarfgenSim: return "sarfgen-sim";
  }
  return "?";
}

std::vector<int> AlignmentResult::unmapped_incorrect(const Cfg& incorrect) const {
  std::set<int> used;
  for (const auto& [u, v] : mapping) used.insert(v);
  std::vector<int> out;
  for (int id : incorrect.location_ids()) {
    if (!used.count(id)) out.push_back(id);
  }
  return out;
}

namespace {

bool pair_up(const Cfg& gc, int u, const Cfg& gi, int v, std::map<int, int>& phi, std::set<int>& range) {
  if (phi.count(u) || range.count(v)) {
    auto it = phi.find(u);
    return it != phi.end() && it->second == v;
  }
  phi[u] = v;
  range.insert(v);
  if (u == kSinkId) return true;
  return pair_up(gc, gc.true_next(u), gi, gi.true_next(v), phi, range) &&
         pair_up(gc, gc.false_next(u), gi, gi.false_next(v), phi, range);
}

int mapped(const std::map<int, int>& phi, int u) {
  auto it = phi.find(u);
  return it == phi.end() ? -1 : it->second;
}

}  // namespace

std::optional<AlignmentResult> rigid_align(const Cfg& correct, const Cfg& incorrect) {
  std::map<int, int> phi{{kSinkId, kSinkId}};
  std::set<int> range{kSinkId};
  if (!pair_up(correct, correct.entry, incorrect, incorrect.entry, phi, range)) return std::nullopt;
  if (phi.size() != correct.nodes.size() || range.size() != incorrect.nodes.size()) return std::nullopt;
  AlignmentResult r;
  r.mode = AlignMode::Rigid;
  r.mapping = std::move(phi);
  r.exploredPermutations = 1;
  r.rawScore = mapping_score(correct, incorrect, r.mapping, true, &r.perPairSimilarity);
  r.normalizedScore = normalize_score(r.rawScore, correct, incorrect);
  return r;
}

double mapping_score(const Cfg& correct, const Cfg& incorrect, const std::map<int, int>& mapping,
                     bool edges, std::map<std::pair<int, int>, double>* per_pair) {
  double s = 0.0;
  for (const auto& [u, v] : mapping) {
    if (u == kSinkId) continue;
    double label = jaccard(correct.node(u).labels, incorrect.node(v).labels);
    double edge = 1.0;
    if (edges) {
      bool t = mapped(mapping, correct.true_next(u)) == incorrect.true_next(v);
      bool f = mapped(mapping, correct.false_next(u)) == incorrect.false_next(v);
      edge = t && f ? 1.0 : (!t && !f ? 0.0 : 0.5);
    }
    double pair = (label + edge) / 2.0;
    if (per_pair) (*per_pair)[{u, v}] = pair;
    s += pair;
  }
  return s;
}

double normalize_score(double raw, const Cfg& correct, const Cfg& incorrect) {
  size_t n = std::max(correct.nodes.size(), incorrect.nodes.size()) - 1;
  return n == 0 ? 1.0 : raw / static_cast<double>(n);
}

AlignmentResult flex_align(const Cfg& correct, const Cfg& incorrect, const AlignConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::vector<int> us = correct.location_ids();
  const std::vector<int> vs = incorrect.location_ids();
  // Rows are the smaller side so every row receives a column.
  const bool flipped = us.size() > vs.size();
  const std::vector<int>& rows = flipped ? vs : us;
  const std::vector<int>& cols = flipped ? us : vs;
  // Small positional penalty makes equal-similarity ties prefer the identity.
  const double eps = 1e-9;
  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      const Cfg& gr = flipped ? incorrect : correct;
      const Cfg& gc = flipped ? correct : incorrect;
      double sim = jaccard(gr.node(rows[i]).labels, gc.node(cols[j]).labels);
      cost[i][j] = -sim + eps * std::abs(static_cast<double>(i) - static_cast<double>(j));
    }
  }

  AlignmentResult best;
  best.mode = config.edgeWeightEnabled ? AlignMode::FlexLabelEdge : AlignMode::FlexLabel;
  best.mapping = {{kSinkId, kSinkId}};
  bool have = false;
  detail::k_best_assignments(cost, [&](const std::vector<int>& sol, double) {
    std::map<int, int> phi{{kSinkId, kSinkId}};
    for (size_t i = 0; i < sol.size(); ++i) {
      if (flipped) phi[cols[sol[i]]] = rows[i];
      else phi[rows[i]] = cols[sol[i]];
    }
    ++best.exploredPermutations;
    double s = mapping_score(correct, incorrect, phi, config.edgeWeightEnabled);
    if (!have || s > best.rawScore) {
      have = true;
      best.rawScore = s;
      best.mapping = std::move(phi);
    }
    if (config.maxPermutations && best.exploredPermutations >= config.maxPermutations) return false;
    if (config.perAlignTimeout > 0 &&
        std::chrono::duration<double>(Clock::now() - start).count() > config.perAlignTimeout) {
      best.timedOut = true;
      return false;
    }
    return true;
  });
  best.perPairSimilarity.clear();
  best.rawScore = mapping_score(correct, incorrect, best.mapping, config.edgeWeightEnabled,
                                &best.perPairSimilarity);
  best.normalizedScore = normalize_score(best.rawScore, correct, incorrect);
  return best;
}

std::optional<AlignmentResult> align(const Cfg& correct, const Cfg& incorrect, AlignMode mode,
                                     const AlignConfig& config) {
  if (mode == AlignMode::Rigid) return rigid_align(correct, incorrect);
  AlignConfig c = config;
  c.edgeWeightEnabled = mode != AlignMode::FlexLabel;
  AlignmentResult r = flex_align(correct, incorrect, c);
  r.mode = mode;
  return r;
}

GateDecision gate(double normalized, double threshold) {
  return normalized >= threshold ? GateDecision::Proceed : GateDecision::Reject;
}

GateDecision gate(const AlignmentResult& result, const AlignConfig& config) {
  double threshold = result.mode == AlignMode::SarfgenSim ? config.sarfgenThreshold
                     : result.mode == AlignMode::Rigid   ? 0.0
                                                         : config.proceedThreshold;
  return gate(result.normalizedScore, threshold);
}

RecreatedModel recreate_model(const Cfg& correct, const Cfg& incorrect, const AlignmentResult& phi,
                              const ModelFunction& correct_fn, const ModelFunction& incorrect_fn) {
  RecreatedModel out;
  out.function = incorrect_fn;
  out.mapping = phi.mapping;
  out.mapping[kSinkId] = kSinkId;
  ModelFunction& fn = out.function;

  std::set<int> range;
  for (const auto& [u, v] : out.mapping) range.insert(v);
  for (int v : incorrect.location_ids()) {
    if (!range.count(v)) {
      out.removed.push_back(v);
      fn.locations.erase(v);
    }
  }
  int next_id = incorrect_fn.max_id();
  for (int u : correct.location_ids()) {
    if (out.mapping.count(u)) continue;
    Location fresh;
    fresh.id = ++next_id;
    fresh.line = correct_fn.at(u).line;
    fresh.description = "created to match location " + std::to_string(u) + " of the correct program";
    fn.locations.emplace(fresh.id, fresh);
    out.mapping[u] = fresh.id;
    out.created.push_back(fresh.id);
  }
  auto target = [&](int u) -> std::optional<int> {
    if (u == kSinkId) return std::nullopt;
    return out.mapping.at(u);
  };
  for (const auto& [u, v] : out.mapping) {
    if (u == kSinkId) continue;
    Location& loc = fn.locations.at(v);
    loc.trueNext = target(correct.true_next(u));
    loc.falseNext = target(correct.false_next(u));
  }
  fn.entry = out.mapping.at(correct.entry);

  for (int v : out.removed) {
    for (const auto& [var, e] : incorrect_fn.at(v).bindings) {
      if (is_special_var(var)) continue;
      bool defined = false, used = false;
      for (const auto& [id, loc] : fn.locations) {
        if (loc.binds(var)) defined = true;
        for (const auto& b : loc.bindings) {
          if (b.second.uses(var, false) || b.second.uses(var, true)) used = true;
        }
      }
      if (used && !defined) {
        out.warnings.push_back("dropping location " + std::to_string(v) + " removes the only definition of " +
                               var);
      }
    }
  }
  return out;
}

}  // namespace flexrepair
