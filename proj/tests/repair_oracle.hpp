#pragma once

// Cost tables over small programs and an exhaustive search for the cheapest
// variable mapping.

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flexrepair/frontend.hpp"
#include "flexrepair/repair.hpp"

namespace testgen {

using namespace flexrepair;

inline Model model_of(const std::string& text) { return build_model(parse(SourceProgram{text, "test"})); }

inline std::map<int, int> identity_locations(const ModelFunction& fn) {
  std::map<int, int> out;
  for (const auto& [id, loc] : fn.locations) out[id] = id;
  return out;
}

// Cost table for one function of two structurally identical programs.
struct Table {
  Model correct;
  Model incorrect;
  Trace trace;
  std::unique_ptr<CostTable> costs;

  Table(const std::string& c, const std::string& i, const std::string& fn = "main", std::vector<std::string> input = {})
      : correct(model_of(c)), incorrect(model_of(i)) {
    trace = run(correct, TestCase{"t", std::move(input), {}});
    const ModelFunction& fc = *correct.find(fn);
    costs = std::make_unique<CostTable>(correct, fc, *incorrect.find(fn), identity_locations(fc), trace);
  }
};

// Straight-line program over a small pool of names; every read is of an
// earlier assignment so the program always runs.
inline std::string random_straight_line(std::mt19937& rng, const std::vector<std::string>& pool, int statements) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<std::string> defined;
  std::string out;
  for (int k = 0; k < statements; ++k) {
    std::string target = pool[pick(0, static_cast<int>(pool.size()) - 1)];
    std::string rhs = std::to_string(pick(0, 3));
    if (!defined.empty() && pick(0, 2) != 0) {
      std::string u = defined[pick(0, static_cast<int>(defined.size()) - 1)];
      static const char* ops[] = {" + ", " * ", " - "};
      rhs = pick(0, 1) ? u + ops[pick(0, 2)] + rhs : u;
    }
    out += target + " = " + rhs + "\n";
    if (std::find(defined.begin(), defined.end(), target) == defined.end()) defined.push_back(target);
  }
  return out;
}

inline double brute_force(const CostTable& c) {
  const auto& cv = c.correct_vars();
  const auto& iv = c.incorrect_vars();
  double best = 1e300;
  std::map<std::string, std::string> m;
  std::set<std::string> used;
  std::function<void(size_t)> go = [&](size_t k) {
    if (k == cv.size()) {
      best = std::min(best, mapping_cost(c, m));
      return;
    }
    m[cv[k]] = kFresh;
    go(k + 1);
    for (const auto& w : iv) {
      if (used.count(w) || !c.allowed(cv[k], w)) continue;
      used.insert(w);
      m[cv[k]] = w;
      go(k + 1);
      used.erase(w);
    }
    m.erase(cv[k]);
  };
  go(0);
  return best;
}

}  // namespace testgen
