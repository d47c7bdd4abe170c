#include "modx/state/context_store.h"

#include "modx/core/errors.h"

namespace modx::state {

using core::DocMap;
using core::DocValue;
using core::Error;
using core::ErrorCode;

const char* to_string(ContextStatus status) {
  switch (status) {
    case ContextStatus::Active: return "Active";
    case ContextStatus::Completed: return "Completed";
    case ContextStatus::Expired: return "Expired";
    case ContextStatus::Revoked: return "Revoked";
  }
  return "Active";
}

void ContextStore::register_policy(StatePolicy policy) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    policies_[policy.agent_id] = policy;
  }
  if (policy_sink_) policy_sink_(policy);
}

const StatePolicy* ContextStore::policy(const AgentId& agent) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = policies_.find(agent);
  return it == policies_.end() ? nullptr : &it->second;
}

void ContextStore::record_event(const std::string& kind, const ContextSpace& ctx, DocMap extra) {
  extra["event"] = DocValue(kind);
  extra["contextId"] = DocValue(ctx.context_id);
  extra["contextName"] = DocValue(ctx.name);
  extra["at"] = DocValue(core::to_iso8601(clock_->now()));
  events_.push_back(DocValue(std::move(extra)));
}

ContextSpace ContextStore::create_context(const std::string& name,
                                          std::optional<std::string> task_id,
                                          const AgentId& initiator) {
  std::lock_guard<std::mutex> lock(mu_);
  auto pit = policies_.find(initiator);
  if (pit == policies_.end() || !pit->second.consents_to(name)) {
    throw Error(ErrorCode::ConsentMissing, "\"" + initiator.value +
                                               "\" has not consented to context \"" + name +
                                               "\"");
  }
  ContextSpace ctx;
  ctx.context_id = "ctx-" + std::to_string(next_context_++);
  ctx.name = name;
  ctx.participants[initiator] = clock_->now();
  ctx.status = ContextStatus::Active;
  ctx.bound_task_id = std::move(task_id);
  ctx.created_at = clock_->now();
  if (!ctx.bound_task_id && pit->second.lifespan == StatePolicy::Lifespan::TimeBounded) {
    ctx.expires_at = ctx.created_at + pit->second.lifespan_duration_ms;
  }
  contexts_[ctx.context_id] = ctx;
  record_event("contextCreated", ctx, DocMap{{"initiator", DocValue(initiator.value)}});
  return ctx;
}

void ContextStore::refresh_status(ContextSpace& ctx) {
  if (ctx.status == ContextStatus::Active && ctx.expires_at &&
      clock_->now() >= *ctx.expires_at) {
    ctx.status = ContextStatus::Expired;
    record_event("contextExpired", ctx, DocMap{{"reason", DocValue("time-bounded")}});
  }
}

ContextSpace& ContextStore::live_context(const std::string& context_id) {
  auto it = contexts_.find(context_id);
  if (it == contexts_.end()) {
    throw Error(ErrorCode::ContextClosed, "no context \"" + context_id + "\"");
  }
  refresh_status(it->second);
  if (it->second.status != ContextStatus::Active) {
    throw Error(ErrorCode::ContextClosed, "context \"" + context_id + "\" is " +
                                              to_string(it->second.status));
  }
  return it->second;
}

void ContextStore::join_context(const std::string& context_id, const AgentId& agent) {
  std::lock_guard<std::mutex> lock(mu_);
  ContextSpace& ctx = live_context(context_id);
  auto pit = policies_.find(agent);
  if (pit == policies_.end() || !pit->second.consents_to(ctx.name)) {
    throw Error(ErrorCode::ConsentMissing, "\"" + agent.value +
                                               "\" has not consented to context \"" + ctx.name +
                                               "\"");
  }
  if (ctx.participants.count(agent)) return;  // idempotent
  ctx.participants[agent] = clock_->now();
  ctx.revoked.erase(agent);  // rejoining re-establishes consent
  record_event("participantJoined", ctx, DocMap{{"agent", DocValue(agent.value)}});
}

VersionVector ContextStore::write_state(const std::string& context_id, const AgentId& agent,
                                        const std::string& key, DocValue value,
                                        const std::string& state_type) {
  std::lock_guard<std::mutex> lock(mu_);
  ContextSpace& ctx = live_context(context_id);
  if (!ctx.participants.count(agent)) {
    throw Error(ErrorCode::NotParticipant,
                "\"" + agent.value + "\" is not a participant of " + context_id);
  }
  const StatePolicy& policy = policies_.at(agent);
  if (!policy.can_share(state_type)) {
    throw Error(ErrorCode::TypeNotShareable, "\"" + agent.value + "\" does not share type \"" +
                                                 state_type + "\"");
  }
  StateEntry entry;
  auto existing = ctx.entries.find(key);
  if (existing != ctx.entries.end()) entry.version = existing->second.version;
  entry.version.bump(agent);
  entry.value = std::move(value);
  entry.state_type = state_type;
  entry.writer = agent;
  entry.written_at = clock_->now();
  VersionVector version = entry.version;
  ctx.entries[key] = std::move(entry);
  record_event("stateWritten", ctx,
               DocMap{{"agent", DocValue(agent.value)},
                      {"key", DocValue(key)},
                      {"stateType", DocValue(state_type)}});
  return version;
}

ContextStore::ReadResult ContextStore::read_state(const std::string& context_id,
                                                  const AgentId& agent, const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  ContextSpace& ctx = live_context(context_id);
  if (!ctx.participants.count(agent)) {
    throw Error(ErrorCode::NotParticipant,
                "\"" + agent.value + "\" is not a participant of " + context_id);
  }
  auto it = ctx.entries.find(key);
  if (it == ctx.entries.end() || ctx.revoked.count(it->second.writer)) {
    throw Error(ErrorCode::KeyAbsent, "no readable entry \"" + key + "\" in " + context_id);
  }
  return {it->second.value, it->second.version};
}

void ContextStore::revoke(const std::string& context_id, const AgentId& agent) {
  std::lock_guard<std::mutex> lock(mu_);
  ContextSpace& ctx = live_context(context_id);
  if (!ctx.participants.count(agent)) {
    throw Error(ErrorCode::NotParticipant,
                "\"" + agent.value + "\" is not a participant of " + context_id);
  }
  const StatePolicy& policy = policies_.at(agent);
  if (!policy.revocable) {
    throw Error(ErrorCode::NotRevocable,
                "\"" + agent.value + "\" declared revocable=false");
  }
  ctx.participants.erase(agent);
  ctx.revoked.insert(agent);  // tombstones this writer's entries
  record_event("participantRevoked", ctx, DocMap{{"agent", DocValue(agent.value)}});
  if (ctx.participants.size() < 2) {
    ctx.status = ContextStatus::Revoked;
    record_event("contextRevoked", ctx,
                 DocMap{{"reason", DocValue("fewer than two participants remain")}});
  }
}

std::vector<std::string> ContextStore::complete_task(const std::string& task_id) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> expired;
  for (auto& [id, ctx] : contexts_) {
    if (ctx.status == ContextStatus::Active && ctx.bound_task_id == task_id) {
      ctx.status = ContextStatus::Expired;
      expired.push_back(id);
      record_event("contextExpired", ctx,
                   DocMap{{"reason", DocValue("task-bounded")}, {"taskId", DocValue(task_id)}});
    }
  }
  return expired;
}

std::optional<ContextSpace> ContextStore::get(const std::string& context_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = contexts_.find(context_id);
  if (it == contexts_.end()) return std::nullopt;
  return it->second;
}

core::MessageEnvelope ContextStore::handle_state_op(const core::MessageEnvelope& op,
                                                    core::AgentSession& responder) {
  core::Topic reply_topic = core::Topic::parse("reply." + op.sender.value);
  auto respond = [&](DocValue payload, bool error) {
    return responder.make(error ? core::MessageType::Error : core::MessageType::Response,
                          reply_topic, std::move(payload), op.correlation_id, clock_->now());
  };
  try {
    std::string kind = op.payload.string_or("op", "");
    const AgentId& agent = op.sender;
    if (kind == "create") {
      std::optional<std::string> task;
      if (const DocValue* t = op.payload.find("taskId"); t && t->is_string()) {
        task = t->as_string();
      }
      ContextSpace ctx = create_context(op.payload.string_or("contextName", ""), task, agent);
      return respond(DocValue(DocMap{{"contextId", DocValue(ctx.context_id)},
                                     {"status", DocValue(to_string(ctx.status))}}),
                     false);
    }
    if (kind == "join") {
      join_context(op.payload.string_or("contextId", ""), agent);
      return respond(DocValue(DocMap{{"ok", DocValue(true)}}), false);
    }
    if (kind == "write") {
      const DocValue* value = op.payload.find("value");
      VersionVector version = write_state(
          op.payload.string_or("contextId", ""), agent, op.payload.string_or("key", ""),
          value ? *value : DocValue(nullptr), op.payload.string_or("stateType", ""));
      return respond(DocValue(DocMap{{"version", version.to_doc()}}), false);
    }
    if (kind == "read") {
      ReadResult result = read_state(op.payload.string_or("contextId", ""), agent,
                                     op.payload.string_or("key", ""));
      return respond(DocValue(DocMap{{"value", result.value}, {"version", result.version.to_doc()}}),
                     false);
    }
    if (kind == "revoke") {
      revoke(op.payload.string_or("contextId", ""), agent);
      return respond(DocValue(DocMap{{"ok", DocValue(true)}}), false);
    }
    if (kind == "completeTask") {
      core::DocArray ids;
      for (const std::string& id : complete_task(op.payload.string_or("taskId", ""))) {
        ids.push_back(DocValue(id));
      }
      return respond(DocValue(DocMap{{"expired", DocValue(std::move(ids))}}), false);
    }
    throw Error(ErrorCode::ParseError, "unknown state op \"" + kind + "\"");
  } catch (const Error& e) {
    return respond(DocValue(DocMap{{"error", DocValue(core::error_name(e.code()))},
                                   {"message", DocValue(e.what())}}),
                   true);
  }
}

}  // namespace modx::state
