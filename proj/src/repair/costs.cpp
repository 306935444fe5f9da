#include <algorithm>
#include <functional>

#include "flexrepair/repair.hpp"

namespace flexrepair {

namespace {

constexpr size_t kMaxSubstitutions = 5000;

std::set<std::string> names_in(const Expr& e) {
  std::set<std::string> out = e.vars(false);
  for (const auto& n : e.vars(true)) out.insert(n);
  return out;
}

Expr rename(const Expr& e, const std::map<std::string, std::string>& names) {
  return e.map([&](const Expr& n) {
    if (!n.is_var()) return n;
    auto it = names.find(n.name);
    if (it == names.end()) return n;
    Expr out = n;
    out.name = it->second;
    return out;
  });
}

bool same_value(const Value& a, const Value& b) {
  if (a.type != b.type) return false;
  if (a.type == Value::Type::List || a.type == Value::Type::Tuple) return a.repr() == b.repr();
  return a == b;
}

std::vector<std::string> variable_list(const ModelFunction& fn) {
  std::set<std::string> vars = fn.variables();
  vars.insert(fn.params.begin(), fn.params.end());
  return {vars.begin(), vars.end()};
}

}  // namespace

CostTable::CostTable(const Model& correct, const ModelFunction& correct_fn, const ModelFunction& incorrect_fn,
                     std::map<int, int> locations, const Trace& correct_trace)
    : correct_(correct),
      correct_fn_(correct_fn),
      incorrect_fn_(incorrect_fn),
      locations_(std::move(locations)),
      correct_vars_(variable_list(correct_fn)),
      incorrect_vars_(variable_list(incorrect_fn)) {
  locations_.erase(kSinkId);
  steps_.reserve(correct_trace.steps.size());
  for (const auto& step : correct_trace.steps) {
    if (step.function == correct_fn.name) steps_.push_back(step);
  }
  for (size_t k = 0; k < steps_.size(); ++k) visits_[steps_[k].location].push_back(k);
  for (const auto& [loc, q] : locations_) {
    for (const auto& v : correct_vars_) {
      for (const auto& w : incorrect_vars_) {
        if (allowed(v, w)) fill(loc, v, w);
      }
    }
  }
}

bool CostTable::allowed(const std::string& v, const std::string& w) const {
  if (is_special_var(v) || is_special_var(w)) return v == w;
  // Parameters pair up by position.
  const auto& pc = correct_fn_.params;
  const auto& pi = incorrect_fn_.params;
  auto kc = std::find(pc.begin(), pc.end(), v);
  auto ki = std::find(pi.begin(), pi.end(), w);
  if (kc != pc.end() && static_cast<size_t>(kc - pc.begin()) < pi.size()) {
    return ki != pi.end() && kc - pc.begin() == ki - pi.begin();
  }
  if (ki != pi.end() && static_cast<size_t>(ki - pi.begin()) < pc.size()) return false;
  return true;
}

bool CostTable::may_be_fresh(const std::string& v) const {
  auto kc = std::find(correct_fn_.params.begin(), correct_fn_.params.end(), v);
  return kc == correct_fn_.params.end() ||
         static_cast<size_t>(kc - correct_fn_.params.begin()) >= incorrect_fn_.params.size();
}

const Expr& CostTable::correct_expr(int loc, const std::string& v, Expr& scratch) const {
  if (const Expr* e = correct_fn_.at(loc).find(v)) return *e;
  scratch = Expr::var(v, false);
  return scratch;
}

const Expr& CostTable::incorrect_expr(int loc, const std::string& w, Expr& scratch) const {
  if (const Expr* e = incorrect_fn_.at(locations_.at(loc)).find(w)) return *e;
  scratch = Expr::var(w, false);
  return scratch;
}

bool CostTable::agrees(int loc, const std::string& v, const Expr& renamed) const {
  auto it = visits_.find(loc);
  if (it == visits_.end()) return false;  // unvisited: only syntactic matches count
  for (size_t k : it->second) {
    const TraceStep& step = steps_[k];
    auto expected = step.post.find(v);
    if (expected == step.post.end()) continue;  // v is not live here
    try {
      Value got = evaluate(correct_, renamed, step.pre, step.post);
      if (!same_value(got, expected->second)) return false;
    } catch (...) {
      return false;
    }
  }
  return true;
}

void CostTable::fill(int loc, const std::string& v, const std::string& w) {
  Expr sc, si;
  const Expr& ec = correct_expr(loc, v, sc);
  const Expr& ei = incorrect_expr(loc, w, si);
  Cell cell;
  std::set<std::string> free = names_in(ei);
  free.erase(w);
  std::vector<std::string> ys(free.begin(), free.end());
  if (ys.empty()) {
    Expr renamed = rename(ei, {{w, v}});
    cell.trivial = renamed == ec || agrees(loc, v, renamed);
    if (!cell.trivial && !correct_fn_.at(loc).binds(v) && !incorrect_fn_.at(locations_.at(loc)).binds(w)) {
      cell.trivial = true;
    }
    cells_[{loc, v, w}] = std::move(cell);
    return;
  }
  // Primed reads must resolve to bindings that come before v in the correct
  // location, otherwise the repaired location could read in a cycle.
  const Location& lc = correct_fn_.at(loc);
  auto position = [&](const std::string& u) {
    for (size_t k = 0; k < lc.bindings.size(); ++k) {
      if (lc.bindings[k].first == u) return k;
    }
    return lc.bindings.size();
  };
  const size_t own = position(v);
  const std::set<std::string> primed = ei.vars(true);
  std::map<std::string, std::string> sigma{{w, v}};
  std::set<std::string> used{v};
  size_t tried = 0;
  bool truncated = false;
  std::function<void(size_t)> go = [&](size_t k) {
    if (truncated) return;
    if (k == ys.size()) {
      if (++tried > kMaxSubstitutions) {
        truncated = true;
        return;
      }
      Expr renamed = rename(ei, sigma);
      if (renamed == ec || agrees(loc, v, renamed)) {
        std::map<std::string, std::string> s = sigma;
        s.erase(w);
        cell.zero.push_back(std::move(s));
      }
      return;
    }
    for (const auto& u : correct_vars_) {
      if (used.count(u) || !allowed(u, ys[k])) continue;
      if (primed.count(ys[k]) && position(u) >= own) continue;
      used.insert(u);
      sigma[ys[k]] = u;
      go(k + 1);
      sigma.erase(ys[k]);
      used.erase(u);
    }
  };
  go(0);
  if (truncated) ++truncated_;
  cells_[{loc, v, w}] = std::move(cell);
}

double CostTable::change_cost(int loc, const std::string& v, const std::string& target,
                              const std::map<std::string, std::string>& mapping) const {
  Expr sc;
  const Expr& ec = correct_expr(loc, v, sc);
  double cost = target == kFresh ? 2.0 : 1.0;
  for (const auto& u : names_in(ec)) {
    if (u == v) continue;
    auto it = mapping.find(u);
    if (it != mapping.end() && it->second == kFresh) cost += 1.0;
  }
  return cost;
}

double CostTable::cost(int loc, const std::string& v, const std::string& w,
                       const std::map<std::string, std::string>& mapping) const {
  if (w == kFresh) {
    if (!correct_fn_.at(loc).binds(v)) return 0.0;
    return change_cost(loc, v, w, mapping);
  }
  auto it = cells_.find({loc, v, w});
  if (it == cells_.end()) return change_cost(loc, v, w, mapping);
  const Cell& cell = it->second;
  if (cell.trivial) return 0.0;
  for (const auto& sigma : cell.zero) {
    bool ok = true;
    for (const auto& [y, u] : sigma) {
      auto m = mapping.find(u);
      if (m != mapping.end() && m->second != y) {
        ok = false;
        break;
      }
      for (const auto& [other, target] : mapping) {
        if (target == y && other != u) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return 0.0;
  }
  return change_cost(loc, v, w, mapping);
}

double CostTable::lower_bound(const std::string& v, const std::string& w) const {
  double total = 0.0;
  for (const auto& [loc, q] : locations_) {
    if (w == kFresh) {
      if (correct_fn_.at(loc).binds(v)) total += 2.0;
      continue;
    }
    auto it = cells_.find({loc, v, w});
    if (it == cells_.end()) {
      total += 1.0;
      continue;
    }
    if (!it->second.trivial && it->second.zero.empty()) total += 1.0;
  }
  return total;
}

double CostTable::deletion_cost(const std::string& w) const {
  double n = 0.0;
  for (const auto& [id, loc] : incorrect_fn_.locations) {
    if (loc.binds(w)) n += 1.0;
  }
  return n;
}

std::string CostTable::fresh_name(const std::string& v) const {
  auto taken = [&](const std::string& n) {
    return std::binary_search(incorrect_vars_.begin(), incorrect_vars_.end(), n);
  };
  if (!taken(v)) return v;
  for (int k = 1;; ++k) {
    std::string n = v + "_" + std::to_string(k);
    if (!taken(n)) return n;
  }
}

std::vector<CostEntry> CostTable::entries() const {
  std::vector<CostEntry> out;
  for (const auto& [loc, q] : locations_) {
    const Location& lc = correct_fn_.at(loc);
    const Location& li = incorrect_fn_.at(q);
    for (const auto& v : correct_vars_) {
      if (lc.binds(v)) out.push_back(CostEntry{loc, v, kFresh, {}, cost(loc, v, kFresh, {})});
      for (const auto& w : incorrect_vars_) {
        if (!allowed(v, w) || (!lc.binds(v) && !li.binds(w))) continue;
        const Cell& cell = cells_.at({loc, v, w});
        if (cell.trivial) {
          out.push_back(CostEntry{loc, v, w, {}, 0.0});
          continue;
        }
        for (const auto& sigma : cell.zero) {
          CostEntry e{loc, v, w, {}, 0.0};
          for (const auto& [y, u] : sigma) e.dependencySubstitution[u] = y;
          out.push_back(std::move(e));
        }
        out.push_back(CostEntry{loc, v, w, {}, change_cost(loc, v, w, {})});
      }
    }
  }
  return out;
}

}  // namespace flexrepair
