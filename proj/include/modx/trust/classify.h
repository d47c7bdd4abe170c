#pragma once

#include <optional>

#include "modx/core/envelope.h"
#include "modx/trust/ledger.h"

namespace modx::trust {

enum class Tier { HighValue, Routine };

const char* to_string(Tier tier);

/// What is being classified: a ledger record type, a bus message type, or a
/// workflow node (which may be flagged high-value regardless of its traffic).
struct OperationDescriptor {
  std::optional<RecordType> record_type;
  std::optional<core::MessageType> message_type;
  bool workflow_high_value = false;
};

/// Tiered security split: registrations, transactions, reputation updates
/// and security policies go on the chain individually; messages, queries and
/// status updates stay routine (signed + batch anchored).
Tier classify(const OperationDescriptor& op);

}  // namespace modx::trust
