#include "modx/registry/ontology.h"

#include <cmath>
#include <deque>

#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::registry {

using core::DocValue;
using core::Error;
using core::ErrorCode;

void OntologyGraph::add_node(const std::string& iri) {
  if (class_of_.count(iri)) return;
  int idx = static_cast<int>(parent_.size());
  parent_.push_back(idx);
  class_of_[iri] = idx;
}

int OntologyGraph::find(int idx) const {
  while (parent_[idx] != idx) {
    parent_[idx] = parent_[parent_[idx]];
    idx = parent_[idx];
  }
  return idx;
}

OntologyGraph OntologyGraph::from_doc(const DocValue& doc) {
  OntologyGraph graph;
  auto edge_list = [&](const char* key) {
    std::vector<std::pair<std::string, std::string>> edges;
    if (const DocValue* list = doc.find(key); list && list->is_array()) {
      for (const DocValue& pair : list->as_array()) {
        if (!pair.is_array() || pair.as_array().size() != 2 ||
            !pair.as_array()[0].is_string() || !pair.as_array()[1].is_string()) {
          throw Error(ErrorCode::ParseError, std::string("ontology ") + key +
                                                 " entries must be [iri, iri] pairs");
        }
        edges.emplace_back(pair.as_array()[0].as_string(), pair.as_array()[1].as_string());
      }
    }
    return edges;
  };

  auto equivalent = edge_list("equivalent");
  auto subclass = edge_list("subclass");
  if (const DocValue* nodes = doc.find("nodes"); nodes && nodes->is_array()) {
    for (const DocValue& n : nodes->as_array()) {
      if (n.is_string()) graph.add_node(n.as_string());
    }
  }
  for (const auto& [a, b] : equivalent) {
    graph.add_node(a);
    graph.add_node(b);
    int ra = graph.find(graph.class_of_[a]);
    int rb = graph.find(graph.class_of_[b]);
    if (ra != rb) graph.parent_[ra] = rb;
  }
  for (const auto& [child, parent] : subclass) {
    graph.add_node(child);
    graph.add_node(parent);
    int rc = graph.find(graph.class_of_[child]);
    int rp = graph.find(graph.class_of_[parent]);
    if (rc != rp) graph.superclass_[rc].insert(rp);
  }
  graph.validate_acyclic();
  return graph;
}

OntologyGraph OntologyGraph::load(const std::string& path) {
  return from_doc(core::load_doc(path));
}

void OntologyGraph::validate_acyclic() const {
  // Kahn's algorithm over the contracted class graph.
  std::map<int, std::set<int>> edges;  // contracted child -> contracted parents
  std::map<int, int> indegree;
  for (const auto& [child, parents] : superclass_) {
    int c = find(child);
    indegree.try_emplace(c, 0);
    for (int raw : parents) {
      int p = find(raw);
      if (p == c) {
        throw Error(ErrorCode::ParseError,
                    "subclass closure is cyclic after contracting equivalences");
      }
      if (edges[c].insert(p).second) {
        indegree.try_emplace(p, 0);
        ++indegree[p];
      }
    }
  }
  std::deque<int> ready;
  for (const auto& [node, deg] : indegree) {
    if (deg == 0) ready.push_back(node);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    int node = ready.front();
    ready.pop_front();
    ++processed;
    auto it = edges.find(node);
    if (it == edges.end()) continue;
    for (int parent : it->second) {
      if (--indegree[parent] == 0) ready.push_back(parent);
    }
  }
  if (processed != indegree.size()) {
    throw Error(ErrorCode::ParseError,
                "subclass closure is cyclic after contracting equivalences");
  }
}

std::optional<int> OntologyGraph::subclass_distance(const std::string& from,
                                                    const std::string& to) const {
  auto from_it = class_of_.find(from);
  auto to_it = class_of_.find(to);
  if (from_it == class_of_.end() || to_it == class_of_.end()) return std::nullopt;
  int start = find(from_it->second);
  int goal = find(to_it->second);
  if (start == goal) return 0;
  std::deque<std::pair<int, int>> frontier{{start, 0}};
  std::set<int> seen{start};
  while (!frontier.empty()) {
    auto [node, dist] = frontier.front();
    frontier.pop_front();
    auto adj = superclass_.find(node);
    if (adj == superclass_.end()) continue;
    for (int raw_parent : adj->second) {
      int parent = find(raw_parent);
      if (parent == goal) return dist + 1;
      if (seen.insert(parent).second) frontier.emplace_back(parent, dist + 1);
    }
  }
  return std::nullopt;
}

bool OntologyGraph::equivalent(const std::string& a, const std::string& b) const {
  auto ia = class_of_.find(a);
  auto ib = class_of_.find(b);
  if (ia == class_of_.end() || ib == class_of_.end()) return false;
  return find(ia->second) == find(ib->second);
}

OntoScore onto_score(const OntologyGraph& graph, const std::optional<std::string>& need_iri,
                     const std::string& offered_iri, double decay) {
  if (!need_iri || need_iri->empty()) {
    return {1.0, "unconstrained"};
  }
  if (!graph.contains(*need_iri) || !graph.contains(offered_iri)) {
    return {0.0, "MissingTerm"};
  }
  std::optional<int> dist = graph.subclass_distance(offered_iri, *need_iri);
  if (!dist) return {0.0, ""};
  return {std::pow(decay, *dist), ""};
}

}  // namespace modx::registry
