#pragma once

#include <map>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/core/ids.h"

namespace modx::registry {

using core::AgentId;
using core::DocValue;

/// Typed surface of one operation: parameter semantic types ("?" suffix
/// marks optional) plus the output type and, when declared, the output
/// fields a post-processing filter could use.
struct OperationSig {
  std::map<std::string, std::string> inputs;
  std::string output_type;
  std::vector<std::string> output_fields;
};

/// One registered capability, flattened from the agent's AIDL document:
/// identity, semantics (ontology IRI + embedding + operations) and the
/// typed interface.
struct CapabilityRecord {
  AgentId agent_id;
  std::string name;
  std::string version;
  std::string ontology_iri;
  std::vector<double> embedding;
  std::string embedding_model;  // empty = already in the shared space
  std::vector<std::string> operations;
  std::map<std::string, OperationSig> interface_ops;

  /// Parses an AIDL document ({"agentId", "capabilities": [...]}) into one
  /// record per capability.
  static std::vector<CapabilityRecord> from_aidl(const DocValue& doc);

  /// Single-capability AIDL document; registration signatures cover the
  /// canonical bytes of this form.
  DocValue to_aidl_doc() const;

  /// Structural invariants: finite embedding entries, non-empty operations,
  /// every interface key listed in operations.
  void validate() const;
};

/// Numeric-component version comparison; negative/zero/positive like strcmp.
int compare_versions(const std::string& a, const std::string& b);

}  // namespace modx::registry
