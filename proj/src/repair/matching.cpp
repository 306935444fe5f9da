#include <algorithm>

#include "flexrepair/repair.hpp"

namespace flexrepair {

std::map<std::string, std::string> VariableMapping::as_cost_mapping() const {
  std::map<std::string, std::string> out;
  for (const auto& [v, w] : targets) out[v] = fresh.count(v) ? kFresh : w;
  return out;
}

double mapping_cost(const CostTable& costs, const std::map<std::string, std::string>& mapping) {
  double total = 0.0;
  for (const auto& [loc, q] : costs.locations()) {
    for (const auto& v : costs.correct_vars()) {
      auto it = mapping.find(v);
      total += costs.cost(loc, v, it == mapping.end() ? kFresh : it->second, mapping);
    }
  }
  std::set<std::string> range;
  for (const auto& [v, w] : mapping) range.insert(w);
  for (const auto& w : costs.incorrect_vars()) {
    if (!range.count(w)) total += costs.deletion_cost(w);
  }
  return total;
}

VariableMapping solve_matching(const CostTable& costs, const SolveOptions& opts) {
  const auto& cv = costs.correct_vars();
  const auto& iv = costs.incorrect_vars();
  const size_t n = cv.size(), m = iv.size();

  VariableMapping best;
  if (n == 0) {
    for (const auto& w : iv) {
      if (costs.deletion_cost(w) > 0) best.deletions.push_back(w);
      best.cost += costs.deletion_cost(w);
    }
    return best;
  }

  // Columns: incorrect variables, then one fresh slot per correct variable.
  // Charging -d(w) for using w turns deletions into a constant offset.
  double base = 0.0;
  std::vector<double> del(m);
  for (size_t j = 0; j < m; ++j) {
    del[j] = costs.deletion_cost(iv[j]);
    base += del[j];
  }
  std::vector<std::vector<double>> matrix(n, std::vector<double>(m + n, detail::kForbidden));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (costs.allowed(cv[i], iv[j])) matrix[i][j] = costs.lower_bound(cv[i], iv[j]) - del[j];
    }
    if (costs.may_be_fresh(cv[i])) matrix[i][m + i] = costs.lower_bound(cv[i], kFresh);
  }

  auto key_of = [&](const std::vector<int>& sol) {
    std::vector<std::string> key;
    for (int j : sol) key.push_back(static_cast<size_t>(j) < m ? iv[j] : std::string(1, '\x7f'));
    return key;
  };

  bool have = false;
  std::vector<int> best_sol;
  std::vector<std::string> best_key;
  double best_cost = 0.0;
  size_t seen = 0;
  bool exhausted = true;
  detail::k_best_assignments(matrix, [&](const std::vector<int>& sol, double relaxed) {
    if (have && relaxed + base > best_cost + 1e-9) return false;
    if (++seen > opts.maxCandidates) {
      exhausted = false;
      return false;
    }
    std::map<std::string, std::string> mapping;
    for (size_t i = 0; i < n; ++i) mapping[cv[i]] = static_cast<size_t>(sol[i]) < m ? iv[sol[i]] : kFresh;
    double exact = mapping_cost(costs, mapping);
    auto key = key_of(sol);
    if (!have || exact < best_cost - 1e-9 || (exact <= best_cost + 1e-9 && key < best_key)) {
      have = true;
      best_cost = exact;
      best_sol = sol;
      best_key = std::move(key);
    }
    return true;
  });

  best.cost = best_cost;
  best.exact = exhausted;
  std::set<std::string> used;
  for (size_t i = 0; i < n; ++i) {
    if (static_cast<size_t>(best_sol[i]) < m) {
      best.targets[cv[i]] = iv[best_sol[i]];
      used.insert(iv[best_sol[i]]);
    } else {
      best.fresh.insert(cv[i]);
    }
  }
  for (const auto& v : best.fresh) {
    std::string name = costs.fresh_name(v);
    for (int k = 1; used.count(name); ++k) name = costs.fresh_name(v + "_" + std::to_string(k));
    best.targets[v] = name;
    used.insert(name);
  }
  for (size_t j = 0; j < m; ++j) {
    if (!used.count(iv[j]) && del[j] > 0) best.deletions.push_back(iv[j]);
  }
  return best;
}

}  // namespace flexrepair
