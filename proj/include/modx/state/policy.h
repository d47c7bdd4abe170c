#pragma once

#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/core/ids.h"
#include "modx/core/time.h"

namespace modx::state {

using core::AgentId;
using core::DocValue;
using core::Millis;

/// An agent's declared state-autonomy model: stateless by default, with
/// explicit opt-in to named shared contexts, a whitelist of shareable state
/// types, a lifespan rule and a revocation right.
struct StatePolicy {
  enum class Mode { Stateless, Stateful };
  enum class Lifespan { TaskBounded, TimeBounded };

  AgentId agent_id;
  Mode default_mode = Mode::Stateless;
  bool contextual_sharing_enabled = false;
  std::vector<std::string> contexts;
  std::vector<std::string> shareable_state_types;
  Lifespan lifespan = Lifespan::TaskBounded;
  Millis lifespan_duration_ms = 0;  // TimeBounded only
  bool revocable = false;

  /// Parses the wire shape:
  /// {"agentId": ..., "statePolicy": {"defaultMode": ..., "contextualSharing":
  ///  {"enabled": ..., "contexts": [...], "shareableStateTypes": [...],
  ///   "stateLifespan": "task-bounded" | "time-bounded(<ms>)", "revocable": ...}}}
  static StatePolicy from_doc(const DocValue& doc);
  DocValue to_doc() const;

  bool consents_to(const std::string& context_name) const;
  bool can_share(const std::string& state_type) const;
};

}  // namespace modx::state
