#include "flexrepair/pdg.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace flexrepair {

std::string to_string(DepKind kind) { return kind == DepKind::Ctrl ? "Ctrl" : "Data"; }

const PdgNode& Pdg::node(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("no PDG node " + std::to_string(id));
  return nodes[it->second];
}

std::vector<int> Pdg::ids() const {
  std::vector<int> out;
  for (const auto& n : nodes) out.push_back(n.id);
  return out;
}

bool Pdg::has_edge(int src, int dst) const {
  return std::any_of(edges.begin(), edges.end(), [&](const PdgEdge& e) { return e.src == src && e.dst == dst; });
}

bool Pdg::has_edge(int src, int dst, DepKind kind) const {
  return std::find(edges.begin(), edges.end(), PdgEdge{src, dst, kind}) != edges.end();
}

std::vector<int> Pdg::neighbors(int id) const {
  std::set<int> out;
  for (const auto& e : edges) {
    if (e.src == id) out.insert(e.dst);
    if (e.dst == id) out.insert(e.src);
  }
  return {out.begin(), out.end()};
}

void Pdg::add_node(PdgNode n) {
  if (index_.count(n.id)) throw std::invalid_argument("duplicate PDG node " + std::to_string(n.id));
  index_[n.id] = nodes.size();
  nodes.push_back(std::move(n));
}

void Pdg::add_edge(int src, int dst, DepKind kind) {
  node(src);
  node(dst);
  if (src == dst) {
    if (kind == DepKind::Ctrl) {
      auto& labels = nodes[index_.at(src)].labels;
      if (!labels.count("Loop")) labels["Loop"] = 1;
    }
    return;
  }
  if (!has_edge(src, dst, kind)) edges.push_back(PdgEdge{src, dst, kind});
}

namespace {

std::string statement_kind(const std::string& var) {
  if (var == "$cond") return "Ctrl";
  if (var == "$out") return "Call";
  if (var == "$ret") return "Return";
  return "Assign";
}

// Post-dominator sets over locations; kSinkId stands for the exit.
std::map<int, std::set<int>> post_dominators(const ModelFunction& fn) {
  std::set<int> all{kSinkId};
  for (const auto& [id, loc] : fn.locations) all.insert(id);
  std::map<int, std::set<int>> pd;
  for (int id : all) pd[id] = id == kSinkId ? std::set<int>{kSinkId} : all;
  auto succ = [&](const Location& loc) {
    std::set<int> s{loc.trueNext.value_or(kSinkId)};
    if (loc.falseNext) s.insert(*loc.falseNext);
    return s;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [id, loc] : fn.locations) {
      std::set<int> meet;
      bool first = true;
      for (int s : succ(loc)) {
        if (first) {
          meet = pd.at(s);
          first = false;
          continue;
        }
        std::set<int> both;
        std::set_intersection(meet.begin(), meet.end(), pd.at(s).begin(), pd.at(s).end(),
                              std::inserter(both, both.begin()));
        meet = std::move(both);
      }
      meet.insert(id);
      if (meet != pd[id]) {
        pd[id] = std::move(meet);
        changed = true;
      }
    }
  }
  return pd;
}

}  // namespace

Pdg build_pdg(const ModelFunction& fn) {
  Pdg g;
  std::map<std::pair<int, std::string>, int> node_of;
  int next = 0;
  for (const auto& [id, loc] : fn.locations) {
    for (const auto& b : loc.bindings) {
      PdgNode n;
      n.id = ++next;
      n.location = id;
      n.variable = b.first;
      n.labels = binding_labels(b);
      n.labels[statement_kind(b.first)] += 1;
      n.description = "Loc " + std::to_string(id) + ": " + b.first + " := " + b.second.str();
      node_of[{id, b.first}] = n.id;
      g.add_node(std::move(n));
    }
  }

  // Control dependence: Y depends on branch A if Y post-dominates a successor
  // of A without strictly post-dominating A.
  auto pd = post_dominators(fn);
  for (const auto& [a, loc] : fn.locations) {
    if (!loc.falseNext) continue;
    auto cond = node_of.find({a, "$cond"});
    if (cond == node_of.end()) continue;
    std::set<int> dependents;
    for (int s : {loc.trueNext.value_or(kSinkId), *loc.falseNext}) {
      for (int y : pd.at(s)) {
        if (y == kSinkId) continue;
        if (y == a || !pd.at(a).count(y)) dependents.insert(y);
      }
    }
    for (int y : dependents) {
      for (const auto& b : fn.at(y).bindings) g.add_edge(cond->second, node_of.at({y, b.first}), DepKind::Ctrl);
    }
  }

  // Reaching definitions, one definition per (location, variable).
  using Defs = std::set<std::pair<int, std::string>>;
  std::map<int, Defs> in, out;
  std::map<int, std::vector<int>> preds;
  for (const auto& [id, loc] : fn.locations) {
    if (loc.trueNext && *loc.trueNext != kSinkId) preds[*loc.trueNext].push_back(id);
    if (loc.falseNext && *loc.falseNext != kSinkId) preds[*loc.falseNext].push_back(id);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [id, loc] : fn.locations) {
      Defs d;
      for (int p : preds[id]) d.insert(out[p].begin(), out[p].end());
      Defs o;
      for (const auto& def : d) {
        if (!loc.binds(def.second)) o.insert(def);
      }
      for (const auto& b : loc.bindings) o.insert({id, b.first});
      if (d != in[id] || o != out[id]) {
        in[id] = std::move(d);
        out[id] = std::move(o);
        changed = true;
      }
    }
  }
  for (const auto& [id, loc] : fn.locations) {
    for (const auto& b : loc.bindings) {
      int user = node_of.at({id, b.first});
      for (const auto& u : b.second.vars(true)) {
        if (loc.binds(u)) g.add_edge(node_of.at({id, u}), user, DepKind::Data);
      }
      std::set<std::string> reads = b.second.vars(false);
      for (const auto& u : b.second.vars(true)) {
        if (!loc.binds(u)) reads.insert(u);
      }
      for (const auto& u : reads) {
        if (u == "$out") continue;
        for (const auto& def : in[id]) {
          if (def.second == u) g.add_edge(node_of.at(def), user, DepKind::Data);
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Pdg pdg_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Pdg g;
  for (const auto& jn : j.at("nodes")) {
    PdgNode n;
    n.id = jn.at("id").get<int>();
    for (const auto& l : jn.at("labels")) n.labels[l.get<std::string>()] += 1;
    if (jn.contains("description")) n.description = jn["description"].get<std::string>();
    g.add_node(std::move(n));
  }
  for (const auto& je : j.at("edges")) {
    std::string kind = je.at(2).get<std::string>();
    if (kind != "Ctrl" && kind != "Data") throw std::invalid_argument("unknown edge kind " + kind);
    g.add_edge(je.at(0).get<int>(), je.at(1).get<int>(), kind == "Ctrl" ? DepKind::Ctrl : DepKind::Data);
  }
  return g;
}

std::string pdg_to_json(const Pdg& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : g.nodes) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& [l, c] : n.labels) {
      for (int k = 0; k < c; ++k) labels.push_back(l);
    }
    nlohmann::json jn{{"id", n.id}, {"labels", labels}};
    if (!n.description.empty()) jn["description"] = n.description;
    j["nodes"].push_back(jn);
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.src, e.dst, to_string(e.kind)});
  return j.dump(2);
}

}  // namespace flexrepair
