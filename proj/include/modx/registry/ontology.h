#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"

namespace modx::registry {

/// Subclass/equivalence graph over ontology IRIs, loaded from a JSON edge
/// list: {"subclass": [[child, parent], ...], "equivalent": [[a, b], ...]}.
/// Equivalence classes are contracted up front; the subclass closure over
/// the contracted graph must be acyclic (validated on construction).
class OntologyGraph {
 public:
  static OntologyGraph from_doc(const core::DocValue& doc);
  static OntologyGraph load(const std::string& path);

  bool contains(const std::string& iri) const { return class_of_.count(iri) > 0; }

  /// Shortest subclass distance from `from` up to `to`, through
  /// equivalence-contracted nodes; nullopt when unreachable.
  std::optional<int> subclass_distance(const std::string& from, const std::string& to) const;

  bool equivalent(const std::string& a, const std::string& b) const;

 private:
  void add_node(const std::string& iri);
  int find(int idx) const;
  void validate_acyclic() const;

  std::map<std::string, int> class_of_;      // IRI -> union-find slot
  mutable std::vector<int> parent_;          // union-find storage
  std::map<int, std::set<int>> superclass_;  // contracted child -> parents
};

struct OntoScore {
  double score = 0.0;
  std::string flag;  // "", "unconstrained", "MissingTerm"
};

/// 1.0 for identical/equivalent IRIs, decay^d along the shortest subclass
/// path from offered up to need, 0 when unreachable or unknown (MissingTerm
/// flag), and a neutral 1.0 with the "unconstrained" flag when the need
/// names no ontology at all.
OntoScore onto_score(const OntologyGraph& graph, const std::optional<std::string>& need_iri,
                     const std::string& offered_iri, double decay = 0.9);

}  // namespace modx::registry
