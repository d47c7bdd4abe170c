#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modx/core/envelope.h"
#include "modx/state/policy.h"
#include "modx/state/version_vector.h"

namespace modx::state {

enum class ContextStatus { Active, Completed, Expired, Revoked };
const char* to_string(ContextStatus status);

/// A consented, versioned, expiring shared-state domain among named
/// participants. Entries are readable only while Active; a revoking agent's
/// entries are tombstoned rather than deleted.
struct ContextSpace {
  std::string context_id;
  std::string name;
  std::map<AgentId, Millis> participants;  // join timestamps
  std::map<std::string, StateEntry> entries;
  ContextStatus status = ContextStatus::Active;
  std::optional<std::string> bound_task_id;
  Millis created_at = 0;
  std::optional<Millis> expires_at;  // time-bounded lifespan
  std::set<AgentId> revoked;
};

/// Centralized context-sharing engine: consent-gated membership, type-gated
/// writes, deterministic conflict resolution, task-bounded expiry and
/// revocation tombstones. Writes to one context serialize; reads are
/// snapshots.
class ContextStore {
 public:
  using PolicySink = std::function<void(const StatePolicy&)>;
  using Event = core::DocValue;

  explicit ContextStore(const core::Clock* clock) : clock_(clock) {}

  /// Declares/replaces an agent's policy; the sink lets the trust layer
  /// ledger it as a SecurityPolicy record.
  void register_policy(StatePolicy policy);
  void set_policy_sink(PolicySink sink) { policy_sink_ = std::move(sink); }
  const StatePolicy* policy(const AgentId& agent) const;

  ContextSpace create_context(const std::string& name, std::optional<std::string> task_id,
                              const AgentId& initiator);
  void join_context(const std::string& context_id, const AgentId& agent);
  VersionVector write_state(const std::string& context_id, const AgentId& agent,
                            const std::string& key, core::DocValue value,
                            const std::string& state_type);
  struct ReadResult {
    core::DocValue value;
    VersionVector version;
  };
  ReadResult read_state(const std::string& context_id, const AgentId& agent,
                        const std::string& key);
  void revoke(const std::string& context_id, const AgentId& agent);
  std::vector<std::string> complete_task(const std::string& task_id);

  std::optional<ContextSpace> get(const std::string& context_id) const;
  const std::vector<Event>& events() const { return events_; }

  /// StateOp wire surface: payload {"op": "create"|"join"|"write"|"read"|
  /// "revoke"|"completeTask", ...}; answers with a Response or Error
  /// envelope correlated to the request.
  core::MessageEnvelope handle_state_op(const core::MessageEnvelope& op,
                                        core::AgentSession& responder);

 private:
  ContextSpace& live_context(const std::string& context_id);
  void refresh_status(ContextSpace& ctx);
  void record_event(const std::string& kind, const ContextSpace& ctx, core::DocMap extra = {});

  const core::Clock* clock_;
  std::map<AgentId, StatePolicy> policies_;
  std::map<std::string, ContextSpace> contexts_;
  std::vector<Event> events_;
  PolicySink policy_sink_;
  std::uint64_t next_context_ = 1;
  mutable std::mutex mu_;
};

}  // namespace modx::state
