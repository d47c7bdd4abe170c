#pragma once

#include <map>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/core/ids.h"
#include "modx/core/time.h"

namespace modx::state {

using core::AgentId;
using core::DocValue;
using core::Millis;

/// Per-writer monotone counters; the partial order behind conflict
/// resolution.
struct VersionVector {
  std::map<AgentId, std::uint64_t> counters;

  enum class Order { Equal, Dominates, DominatedBy, Concurrent };
  static Order compare(const VersionVector& a, const VersionVector& b);

  void bump(const AgentId& writer) { ++counters[writer]; }
  void merge(const VersionVector& other);

  DocValue to_doc() const;
  static VersionVector from_doc(const DocValue& doc);

  bool operator==(const VersionVector&) const = default;
};

/// One stored value with its provenance.
struct StateEntry {
  DocValue value;
  std::string state_type;
  VersionVector version;
  AgentId writer;
  Millis written_at = 0;
};

/// Pairwise resolution: a dominating version wins regardless of timestamps;
/// concurrent entries fall back to the later writtenAt, then the
/// lexicographically smaller writer id.
StateEntry resolve_conflict(const StateEntry& a, const StateEntry& b);

/// Set resolution (order-independent): entries dominated by any other are
/// discarded, then the concurrent survivors resolve by the same
/// timestamp/writer rule.
StateEntry resolve_entries(const std::vector<StateEntry>& entries);

}  // namespace modx::state
