#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "flexrepair/cfg.hpp"
#include "flexrepair/model.hpp"

namespace flexrepair {

enum class DepKind { Ctrl, Data };

std::string to_string(DepKind kind);

struct PdgNode {
  int id = 0;
  LabelMultiset labels;
  int location = 0;
  std::string variable;  // binding this node stands for, empty for hand-built graphs
  std::string description;
};

struct PdgEdge {
  int src = 0;
  int dst = 0;
  DepKind kind = DepKind::Data;

  bool operator==(const PdgEdge&) const = default;
  bool operator<(const PdgEdge& o) const {
    return std::tie(src, dst, kind) < std::tie(o.src, o.dst, o.kind);
  }
};

/// Program dependence graph. Self-edges never survive construction: a
/// control self-edge turns into a Loop label, a data self-edge is dropped.
class Pdg {
 public:
  std::vector<PdgNode> nodes;
  std::vector<PdgEdge> edges;

  const PdgNode& node(int id) const;
  std::vector<int> ids() const;
  bool has_edge(int src, int dst) const;
  bool has_edge(int src, int dst, DepKind kind) const;
  bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
  std::vector<int> neighbors(int id) const;

  /// Adds an edge, applying the self-edge rules. Duplicates are ignored.
  void add_edge(int src, int dst, DepKind kind);
  void add_node(PdgNode n);

 private:
  std::map<int, size_t> index_;
};

/// One node per binding of `fn`. Control edges come from post-dominance over
/// the location graph, data edges from reaching definitions.
Pdg build_pdg(const ModelFunction& fn);

/// Reads `{"nodes": [{"id", "labels": [...]}], "edges": [[src, dst, "Ctrl"|"Data"]]}`.
Pdg pdg_from_json(const std::string& text);
std::string pdg_to_json(const Pdg& g);

/// A small connected oriented graph and the orbit index of each of its nodes.
struct Graphlet {
  int size = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> orbit;  // global orbit id per graphlet node
};

/// Weakly connected oriented graphs on 2..maxNodes nodes, ordered by size,
/// edge count and sorted (in, out) degree sequence. Orbits are numbered in
/// the same order, by (in, out) degree inside each graphlet.
const std::vector<Graphlet>& graphlet_catalog(int maxNodes = 3);
int orbit_count(int maxNodes = 3);

using OrbitSignature = std::vector<int>;

/// Orbit counts per node. An occurrence is a node set whose undirected
/// adjacency equals the graphlet's; every graphlet edge must exist with its
/// direction, and a pair joined both ways supports either direction. Each
/// (node set, graphlet) occurrence adds one to every orbit u can take in it.
std::map<int, OrbitSignature> orbit_signatures(const Pdg& g, int maxNodes = 3);

/// Topological similarity from two signatures, uniform weights unless given.
double topological_similarity(const OrbitSignature& a, const OrbitSignature& b,
                              const std::vector<double>& weights = {});

struct PdgConfig {
  double alpha = 0.5;
  double k = 1.5;
  int maxNodes = 3;
  std::vector<double> weights;  // per orbit; empty means all ones
};

struct PdgAlignment {
  bool swapped = false;             // true if the incorrect graph is the smaller one
  std::map<int, int> mapping;       // correct node -> incorrect node
  std::map<std::pair<int, int>, double> pairSim;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::vector<std::pair<int, int>> replacements;  // (correct, incorrect)
  std::vector<int> additions;  // correct nodes to add
  std::vector<int> removals;   // incorrect nodes to remove
  double edgeCorrectness = 0.0;
};

double pdg_similarity(const PdgNode& u, const OrbitSignature& su, const PdgNode& v, const OrbitSignature& sv,
                      const PdgConfig& config = {});

/// Pairs whose similarity is below mean - k * stddev.
std::vector<std::pair<int, int>> flag_replacements(const std::map<std::pair<int, int>, double>& sims, double k,
                                                   double* mean = nullptr, double* stddev = nullptr);

/// Maximum-weight matching of the smaller graph into the larger one, plus
/// replacement, addition and removal suggestions.
PdgAlignment pdg_align(const Pdg& correct, const Pdg& incorrect, const PdgConfig& config = {});

/// Share of `first`'s edges whose image under `phi` exists in `second` with
/// the same label.
double edge_correctness(const Pdg& first, const Pdg& second, const std::map<int, int>& phi);

}  // namespace flexrepair
