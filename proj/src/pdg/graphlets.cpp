#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>

#include "flexrepair/pdg.hpp"

namespace flexrepair {

namespace {

using Edges = std::vector<std::pair<int, int>>;

Edges permuted(const Edges& edges, const std::vector<int>& p) {
  Edges out;
  for (auto [a, b] : edges) out.emplace_back(p[a], p[b]);
  std::sort(out.begin(), out.end());
  return out;
}

bool weakly_connected(int n, const Edges& edges) {
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (auto [a, b] : edges) comp[find(a)] = find(b);
  for (int i = 1; i < n; ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

std::pair<int, int> degree(const Edges& edges, int v) {
  int in = 0, out = 0;
  for (auto [a, b] : edges) {
    if (b == v) ++in;
    if (a == v) ++out;
  }
  return {in, out};
}

struct Shape {
  int n;
  Edges edges;  // canonical: smallest over relabelings
  std::vector<std::pair<int, int>> degrees;  // sorted
  std::vector<std::vector<int>> orbits;      // node classes, ordered
};

std::vector<Shape> enumerate_shapes(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::set<Edges> seen;
  std::vector<Shape> out;
  std::vector<int> choice(pairs.size(), 0);
  size_t total = 1;
  for (size_t k = 0; k < pairs.size(); ++k) total *= 3;
  for (size_t code = 0; code < total; ++code) {
    size_t c = code;
    Edges edges;
    for (auto [i, j] : pairs) {
      int pick = static_cast<int>(c % 3);
      c /= 3;
      if (pick == 1) edges.emplace_back(i, j);
      if (pick == 2) edges.emplace_back(j, i);
    }
    if (!weakly_connected(n, edges)) continue;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    Edges canon = permuted(edges, p);
    do {
      canon = std::min(canon, permuted(edges, p));
    } while (std::next_permutation(p.begin(), p.end()));
    if (!seen.insert(canon).second) continue;

    Shape s{n, canon, {}, {}};
    for (int v = 0; v < n; ++v) s.degrees.push_back(degree(canon, v));
    std::sort(s.degrees.begin(), s.degrees.end());
    // Automorphism classes.
    std::vector<int> cls(n, -1);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::set<int>> reach(n);
    do {
      if (permuted(canon, p) == canon) {
        for (int v = 0; v < n; ++v) reach[v].insert(p[v]);
      }
    } while (std::next_permutation(p.begin(), p.end()));
    for (int v = 0; v < n; ++v) {
      if (cls[v] != -1) continue;
      std::vector<int> members(reach[v].begin(), reach[v].end());
      for (int m : members) cls[m] = static_cast<int>(s.orbits.size());
      s.orbits.push_back(members);
    }
    std::sort(s.orbits.begin(), s.orbits.end(), [&](const auto& a, const auto& b) {
      return std::make_pair(degree(canon, a[0]), a[0]) < std::make_pair(degree(canon, b[0]), b[0]);
    });
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Shape& a, const Shape& b) {
    return std::make_tuple(a.edges.size(), a.degrees, a.edges) < std::make_tuple(b.edges.size(), b.degrees, b.edges);
  });
  return out;
}

std::vector<Graphlet> make_catalog(int maxNodes) {
  std::vector<Graphlet> out;
  int next = 0;
  for (int n = 2; n <= maxNodes; ++n) {
    for (const auto& s : enumerate_shapes(n)) {
      Graphlet g;
      g.size = n;
      g.edges = s.edges;
      g.orbit.assign(n, -1);
      for (const auto& members : s.orbits) {
        for (int m : members) g.orbit[m] = next;
        ++next;
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace

const std::vector<Graphlet>& graphlet_catalog(int maxNodes) {
  if (maxNodes < 2 || maxNodes > 4) throw std::invalid_argument("graphlets are supported on 2 to 4 nodes");
  static std::mutex mu;
  static std::map<int, std::vector<Graphlet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(maxNodes);
  if (it == cache.end()) it = cache.emplace(maxNodes, make_catalog(maxNodes)).first;
  return it->second;
}

int orbit_count(int maxNodes) {
  int n = 0;
  for (const auto& g : graphlet_catalog(maxNodes)) n = std::max(n, *std::max_element(g.orbit.begin(), g.orbit.end()) + 1);
  return n;
}

std::map<int, OrbitSignature> orbit_signatures(const Pdg& g, int maxNodes) {
  const auto& catalog = graphlet_catalog(maxNodes);
  const int orbits = orbit_count(maxNodes);
  const std::vector<int> ids = g.ids();
  const int n = static_cast<int>(ids.size());
  std::map<int, int> index;
  for (int i = 0; i < n; ++i) index[ids[i]] = i;
  std::vector<std::vector<char>> dir(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges) dir[index.at(e.src)][index.at(e.dst)] = 1;
  std::vector<std::vector<int>> nbr(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && (dir[i][j] || dir[j][i])) nbr[i].push_back(j);
    }
  }

  std::map<int, OrbitSignature> sig;
  for (int id : ids) sig[id] = OrbitSignature(orbits, 0);

  auto count = [&](const std::vector<int>& sub) {
    const int k = static_cast<int>(sub.size());
    std::vector<int> p(k);
    for (const auto& gl : catalog) {
      if (gl.size != k) continue;
      std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
      for (auto [a, b] : gl.edges) adj[a][b] = adj[b][a] = 1;
      std::vector<std::set<int>> taken(k);
      std::iota(p.begin(), p.end(), 0);
      do {
        bool ok = true;
        for (int a = 0; a < k && ok; ++a) {
          for (int b = a + 1; b < k && ok; ++b) {
            int x = sub[p[a]], y = sub[p[b]];
            ok = static_cast<bool>(adj[a][b]) == static_cast<bool>(dir[x][y] || dir[y][x]);
          }
        }
        for (auto [a, b] : gl.edges) {
          if (ok && !dir[sub[p[a]]][sub[p[b]]]) ok = false;
        }
        if (!ok) continue;
        for (int a = 0; a < k; ++a) taken[p[a]].insert(gl.orbit[a]);
      } while (std::next_permutation(p.begin(), p.end()));
      for (int a = 0; a < k; ++a) {
        for (int o : taken[a]) sig[ids[sub[a]]][o] += 1;
      }
    }
  };

  // Connected induced node sets of each size, each produced once (ESU).
  for (int k = 2; k <= maxNodes; ++k) {
    for (int v = 0; v < n; ++v) {
      std::function<void(std::vector<int>&, std::set<int>)> extend = [&](std::vector<int>& sub, std::set<int> ext) {
        if (static_cast<int>(sub.size()) == k) {
          count(sub);
          return;
        }
        while (!ext.empty()) {
          int w = *ext.begin();
          ext.erase(ext.begin());
          std::set<int> next = ext;
          for (int u : nbr[w]) {
            if (u <= v || std::find(sub.begin(), sub.end(), u) != sub.end()) continue;
            bool exclusive = true;
            for (int s : sub) {
              if (s == u || dir[s][u] || dir[u][s]) exclusive = false;
            }
            if (exclusive) next.insert(u);
          }
          sub.push_back(w);
          extend(sub, next);
          sub.pop_back();
        }
      };
      std::vector<int> sub{v};
      std::set<int> ext;
      for (int u : nbr[v]) {
        if (u > v) ext.insert(u);
      }
      extend(sub, ext);
    }
  }
  return sig;
}

double topological_similarity(const OrbitSignature& a, const OrbitSignature& b, const std::vector<double>& weights) {
  const size_t n = std::max(a.size(), b.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double sa = i < a.size() ? a[i] : 0, sb = i < b.size() ? b[i] : 0;
    double w = i < weights.size() ? weights[i] : 1.0;
    num += w * std::abs(std::log(sa + 1) - std::log(sb + 1)) / std::log(std::max(sa, sb) + 2);
    den += w;
  }
  return den == 0.0 ? 1.0 : 1.0 - num / den;
}

}  // namespace flexrepair
