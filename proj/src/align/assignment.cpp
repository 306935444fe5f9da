#include <limits>
#include <queue>
#include <stdexcept>

#include "flexrepair/align.hpp"

namespace flexrepair::detail {

// Potential-based Hungarian method for n rows and m >= n columns.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const size_t n = cost.size();
  if (n == 0) return {};
  const size_t m = cost[0].size();
  if (m < n) throw std::invalid_argument("hungarian: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<size_t> p(m + 1, 0), way(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      size_t i0 = p[j0], j1 = 0;
      double delta = inf;
      for (size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  for (size_t i = 0; i < n; ++i) {
    if (cost[i][row_to_col[i]] >= kForbidden) return {};
  }
  return row_to_col;
}

namespace {

struct Subproblem {
  std::vector<std::pair<int, int>> forced;
  std::vector<std::pair<int, int>> forbidden;
  std::vector<int> solution;  // empty until solved
  double bound = 0.0;
};

struct ByBound {
  bool operator()(const Subproblem& a, const Subproblem& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    // Solved entries first so equal-cost solutions come out before children.
    return a.solution.empty() && !b.solution.empty();
  }
};

double total(const std::vector<std::vector<double>>& cost, const std::vector<int>& sol) {
  double s = 0.0;
  for (size_t i = 0; i < sol.size(); ++i) s += cost[i][sol[i]];
  return s;
}

bool solve(const std::vector<std::vector<double>>& base, Subproblem& sp) {
  auto cost = base;
  for (const auto& [r, c] : sp.forbidden) cost[r][c] = kForbidden;
  for (const auto& [r, c] : sp.forced) {
    for (size_t j = 0; j < cost[r].size(); ++j) {
      if (static_cast<int>(j) != c) cost[r][j] = kForbidden;
    }
    for (size_t i = 0; i < cost.size(); ++i) {
      if (static_cast<int>(i) != r) cost[i][c] = kForbidden;
    }
  }
  sp.solution = hungarian(cost);
  if (sp.solution.empty()) return false;
  sp.bound = total(base, sp.solution);
  return true;
}

}  // namespace

void k_best_assignments(const std::vector<std::vector<double>>& cost,
                        const std::function<bool(const std::vector<int>&, double)>& visit) {
  if (cost.empty()) {
    visit({}, 0.0);
    return;
  }
  std::priority_queue<Subproblem, std::vector<Subproblem>, ByBound> queue;
  Subproblem root;
  if (!solve(cost, root)) return;
  queue.push(std::move(root));
  while (!queue.empty()) {
    Subproblem sp = queue.top();
    queue.pop();
    if (sp.solution.empty()) {
      // Children are pushed with their parent's cost as a lower bound and
      // solved only when they reach the front.
      if (solve(cost, sp)) queue.push(std::move(sp));
      continue;
    }
    if (!visit(sp.solution, sp.bound)) return;
    std::vector<bool> is_forced(cost.size(), false);
    for (const auto& f : sp.forced) is_forced[f.first] = true;
    std::vector<std::pair<int, int>> forced = sp.forced;
    for (size_t r = 0; r < cost.size(); ++r) {
      if (is_forced[r]) continue;
      Subproblem child;
      child.forced = forced;
      child.forbidden = sp.forbidden;
      child.forbidden.emplace_back(static_cast<int>(r), sp.solution[r]);
      child.bound = sp.bound;
      queue.push(std::move(child));
      forced.emplace_back(static_cast<int>(r), sp.solution[r]);
    }
  }
}

}  // namespace flexrepair::detail
