#pragma once

// Random small model functions for alignment tests, plus an exhaustive
// search over all injective mappings.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "flexrepair/align.hpp"
#include "flexrepair/cfg.hpp"
#include "flexrepair/model.hpp"

namespace testgen {

inline flexrepair::ModelFunction random_function(std::mt19937& rng, int nodes) {
  using flexrepair::Expr;
  static const char* consts[] = {"0", "1", "2", "7"};
  static const char* ops[] = {"Add", "Sub", "Lt", "GetElement"};
  flexrepair::ModelFunction fn;
  fn.name = "main";
  fn.entry = 1;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int id = 1; id <= nodes; ++id) {
    flexrepair::Location loc;
    loc.id = id;
    loc.line = id;
    for (int b = pick(0, 2); b > 0; --b) {
      Expr e = Expr::op(ops[pick(0, 3)], {Expr::var("x", true), Expr::constant(consts[pick(0, 3)], Expr::ConstType::Int)});
      loc.bindings.emplace_back("v" + std::to_string(b), e);
    }
    if (pick(0, 2) == 0) {
      loc.bindings.emplace_back("$cond", Expr::op("Lt", {Expr::var("x"), Expr::constant(consts[pick(0, 3)], Expr::ConstType::Int)}));
      loc.falseNext = pick(0, nodes);
      if (*loc.falseNext == 0) loc.falseNext.reset();
    }
    int t = pick(0, nodes);
    if (t != 0) loc.trueNext = t;
    fn.locations.emplace(id, loc);
  }
  return fn;
}

/// Best score over every injective mapping of the smaller node set.
inline double exhaustive_best(const flexrepair::Cfg& a, const flexrepair::Cfg& b, bool edges) {
  std::vector<int> us = a.location_ids(), vs = b.location_ids();
  bool flipped = us.size() > vs.size();
  const auto& rows = flipped ? vs : us;
  const auto& cols = flipped ? us : vs;
  double best = -1.0;
  std::vector<bool> used(cols.size(), false);
  std::map<int, int> phi{{flexrepair::kSinkId, flexrepair::kSinkId}};
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == rows.size()) {
      best = std::max(best, flexrepair::mapping_score(a, b, phi, edges));
      return;
    }
    for (size_t j = 0; j < cols.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      if (flipped) phi[cols[j]] = rows[i];
      else phi[rows[i]] = cols[j];
      go(i + 1);
      phi.erase(flipped ? cols[j] : rows[i]);
      used[j] = false;
    }
  };
  go(0);
  return best;
}

}  // namespace testgen
