#include "modx/trust/classify.h"

namespace modx::trust {

const char* to_string(Tier tier) {
  return tier == Tier::HighValue ? "HighValue" : "Routine";
}

Tier classify(const OperationDescriptor& op) {
  if (op.workflow_high_value) return Tier::HighValue;
  if (op.record_type) {
    switch (*op.record_type) {
      case RecordType::AgentRegistration:
      case RecordType::Transaction:
      case RecordType::ReputationUpdate:
      case RecordType::SecurityPolicy:
        return Tier::HighValue;
      case RecordType::BatchAnchor:
        return Tier::Routine;
    }
  }
  // All plain bus traffic (capability queries, requests, events, state ops)
  // is routine.
  return Tier::Routine;
}

}  // namespace modx::trust
