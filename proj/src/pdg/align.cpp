#include <cmath>
#include <deque>

#include "flexrepair/align.hpp"
#include "flexrepair/pdg.hpp"

namespace flexrepair {

double pdg_similarity(const PdgNode& u, const OrbitSignature& su, const PdgNode& v, const OrbitSignature& sv,
                      const PdgConfig& config) {
  double top = topological_similarity(su, sv, config.weights);
  double sem = jaccard(u.labels, v.labels);
  return config.alpha * top + (1.0 - config.alpha) * sem;
}

std::vector<std::pair<int, int>> flag_replacements(const std::map<std::pair<int, int>, double>& sims, double k,
                                                   double* mean, double* stddev) {
  double mu = 0.0, sigma = 0.0;
  if (!sims.empty()) {
    for (const auto& [pair, s] : sims) mu += s;
    mu /= static_cast<double>(sims.size());
    for (const auto& [pair, s] : sims) sigma += (s - mu) * (s - mu);
    sigma = std::sqrt(sigma / static_cast<double>(sims.size()));
  }
  if (mean) *mean = mu;
  if (stddev) *stddev = sigma;
  std::vector<std::pair<int, int>> out;
  for (const auto& [pair, s] : sims) {
    if (s < mu - k * sigma) out.push_back(pair);
  }
  return out;
}

double edge_correctness(const Pdg& first, const Pdg& second, const std::map<int, int>& phi) {
  if (first.edges.empty()) return 1.0;
  size_t kept = 0;
  for (const auto& e : first.edges) {
    auto a = phi.find(e.src), b = phi.find(e.dst);
    if (a != phi.end() && b != phi.end() && second.has_edge(a->second, b->second, e.kind)) ++kept;
  }
  return static_cast<double>(kept) / static_cast<double>(first.edges.size());
}

namespace {

std::map<int, int> undirected_distances(const Pdg& g, int from, int limit) {
  std::map<int, int> dist{{from, 0}};
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (dist[x] == limit) continue;
    for (int y : g.neighbors(x)) {
      if (dist.count(y)) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

}  // namespace

PdgAlignment pdg_align(const Pdg& correct, const Pdg& incorrect, const PdgConfig& config) {
  PdgAlignment out;
  out.swapped = correct.nodes.size() > incorrect.nodes.size();
  const Pdg& first = out.swapped ? incorrect : correct;
  const Pdg& second = out.swapped ? correct : incorrect;
  auto sig_first = orbit_signatures(first, config.maxNodes);
  auto sig_second = orbit_signatures(second, config.maxNodes);

  const auto rows = first.ids();
  const auto cols = second.ids();
  std::map<int, int> phi;  // first -> second
  if (!rows.empty()) {
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t j = 0; j < cols.size(); ++j) {
        cost[i][j] = -pdg_similarity(first.node(rows[i]), sig_first.at(rows[i]), second.node(cols[j]),
                                     sig_second.at(cols[j]), config);
      }
    }
    auto sol = detail::hungarian(cost);
    for (size_t i = 0; i < rows.size(); ++i) {
      phi[rows[i]] = cols[sol[i]];
      double s = -cost[i][sol[i]];
      if (out.swapped) {
        out.mapping[cols[sol[i]]] = rows[i];
        out.pairSim[{cols[sol[i]], rows[i]}] = s;
      } else {
        out.mapping[rows[i]] = cols[sol[i]];
        out.pairSim[{rows[i], cols[sol[i]]}] = s;
      }
    }
  }

  out.replacements = flag_replacements(out.pairSim, config.k, &out.mean, &out.stddev);

  // Unaligned nodes of the larger graph within two undirected steps of a
  // replacement's counterpart.
  std::set<int> near;
  for (const auto& [c, i] : out.replacements) {
    int anchor = out.swapped ? c : i;
    for (const auto& [v, d] : undirected_distances(second, anchor, 2)) near.insert(v);
  }
  std::set<int> range;
  for (const auto& [a, b] : phi) range.insert(b);
  for (int v : cols) {
    if (range.count(v) || !near.count(v)) continue;
    (out.swapped ? out.additions : out.removals).push_back(v);
  }
  out.edgeCorrectness = edge_correctness(first, second, phi);
  return out;
}

}  // namespace flexrepair
