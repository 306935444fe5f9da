#include <algorithm>
#include <chrono>

#include "flexrepair/cfg.hpp"
#include "flexrepair/repair.hpp"

namespace flexrepair {

std::string to_string(RepairStatus status) {
  switch (status) {
    case RepairStatus::FullyRepaired: return "FullyRepaired";
    case RepairStatus::PartiallyRepaired: return "PartiallyRepaired";
    case RepairStatus::NotRepaired: return "NotRepaired";
    case RepairStatus::Rejected: return "Rejected";
    case RepairStatus::Timeout: return "Timeout";
  }
  return "?";
}

namespace {

using LocationMaps = std::map<std::string, std::map<int, int>>;

// One pass of cost computation, matching and edit generation on a test.
RepairPlan search(const Model& correct, const Model& incorrect, const LocationMaps& locations,
                  const TestCase& test, const RepairConfig& config) {
  RepairPlan plan;
  Trace trace = run(correct, test, config.limits);
  for (const auto& fc : correct.functions) {
    const ModelFunction* fi = incorrect.find(fc.name);
    CostTable costs(correct, fc, *fi, locations.at(fc.name), trace);
    VariableMapping mapping = solve_matching(costs, config.solve);
    auto edits = generate_repairs(costs, mapping);
    for (const auto& e : edits) plan.totalCost += e.cost;
    plan.edits.insert(plan.edits.end(), edits.begin(), edits.end());
    plan.variableMapping[fc.name] = std::move(mapping);
  }
  return plan;
}

size_t binding_count(const Model& m) {
  size_t n = 0;
  for (const auto& fn : m.functions) {
    for (const auto& [id, loc] : fn.locations) n += loc.bindings.size();
  }
  return n;
}

}  // namespace

RepairOutcome repair_and_verify(const SourceProgram& correct, const SourceProgram& incorrect,
                                const std::vector<TestCase>& tests, const RepairConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto over_budget = [&] {
    return config.align.overallTimeout > 0 &&
           std::chrono::duration<double>(Clock::now() - start).count() > config.align.overallTimeout;
  };

  RepairOutcome out;
  auto reject = [&](const std::string& why) {
    out.status = RepairStatus::Rejected;
    out.message = why;
    return out;
  };
  if (tests.empty()) return reject("no test cases");

  Model mc, mi;
  try {
    mc = build_model(parse(correct), config.model);
    mi = build_model(parse(incorrect), config.model);
  } catch (const std::exception& e) {
    return reject(e.what());
  }

  std::set<std::string> names_c, names_i;
  for (const auto& fn : mc.functions) names_c.insert(fn.name);
  for (const auto& fn : mi.functions) names_i.insert(fn.name);
  if (names_c != names_i) return reject("programs define different functions");

  Model working = mi;
  LocationMaps locations;
  bool first = true;
  for (const auto& fc : mc.functions) {
    ModelFunction& fi = *working.find(fc.name);
    Cfg gc = build_cfg(fc);
    Cfg gi = build_cfg(fi);
    auto r = align(gc, gi, config.mode, config.align);
    if (!r) return reject("control flow of " + fc.name + " does not match");
    out.alignmentScore = first ? r->normalizedScore : std::min(out.alignmentScore, r->normalizedScore);
    first = false;
    if (r->timedOut) {
      out.status = RepairStatus::Timeout;
      out.message = "alignment of " + fc.name + " ran out of time";
      return out;
    }
    if (gate(*r, config.align) == GateDecision::Reject) {
      return reject("alignment score of " + fc.name + " is below the threshold");
    }
    RecreatedModel rec = recreate_model(gc, gi, *r, fc, fi);
    out.warnings.insert(out.warnings.end(), rec.warnings.begin(), rec.warnings.end());
    fi = std::move(rec.function);
    std::map<int, int> locs = std::move(rec.mapping);
    locs.erase(kSinkId);
    locations[fc.name] = std::move(locs);
  }

  for (const auto& t : tests) {
    if (verdict(run(mc, t, config.limits), t) != TestVerdict::Pass) {
      return reject("correct program fails test " + t.id);
    }
  }

  size_t chosen = 0;
  for (size_t k = 0; k < tests.size(); ++k) {
    if (verdict(run(mi, tests[k], config.limits), tests[k]) != TestVerdict::Pass) {
      chosen = k;
      break;
    }
  }

  out.plan = search(mc, working, locations, tests[chosen], config);
  out.numRepairs = out.plan.edits.size();
  size_t changed = 0;
  for (const auto& e : out.plan.edits) {
    if (e.kind != RepairEdit::Kind::DeleteBinding) ++changed;
  }
  size_t total = binding_count(mi);
  out.changePercentage = total == 0 ? (changed ? 100.0 : 0.0) : 100.0 * changed / total;
  out.changePercentage = std::clamp(out.changePercentage, 0.0, 100.0);

  Model repaired;
  try {
    repaired = apply_repairs(working, out.plan);
  } catch (const UnresolvableOrder& e) {
    out.status = RepairStatus::NotRepaired;
    out.message = e.what();
    return out;
  }
  out.repaired = repaired;

  if (over_budget()) {
    out.status = RepairStatus::Timeout;
    out.message = "overall time budget exceeded";
    return out;
  }

  RepairPlan again = search(mc, repaired, locations, tests[chosen], config);
  bool converged = again.edits.empty();

  bool all_pass = true;
  for (const auto& t : tests) {
    TestVerdict v = verdict(run(repaired, t, config.limits), t);
    out.perTestVerdicts.emplace_back(t.id, v);
    if (v != TestVerdict::Pass) all_pass = false;
  }
  if (!converged) {
    out.status = RepairStatus::NotRepaired;
    out.message = "repair search still proposes " + std::to_string(again.edits.size()) + " edit(s)";
    return out;
  }

  bool further = false;
  for (size_t k = 0; k < tests.size() && !further; ++k) {
    if (k == chosen) continue;
    if (over_budget()) {
      out.status = RepairStatus::Timeout;
      out.message = "overall time budget exceeded";
      return out;
    }
    further = !search(mc, repaired, locations, tests[k], config).edits.empty();
  }

  if (all_pass && !further) {
    out.status = RepairStatus::FullyRepaired;
  } else if (out.perTestVerdicts[chosen].second == TestVerdict::Pass) {
    out.status = RepairStatus::PartiallyRepaired;
    out.message = further ? "other tests suggest further repairs" : "some tests still fail";
  } else {
    out.status = RepairStatus::NotRepaired;
    out.message = "test " + tests[chosen].id + " still fails";
  }
  return out;
}

}  // namespace flexrepair
