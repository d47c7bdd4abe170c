#include "modx/state/policy.h"

#include <algorithm>

#include "modx/core/errors.h"

namespace modx::state {

using core::DocArray;
using core::DocMap;
using core::Error;
using core::ErrorCode;

StatePolicy StatePolicy::from_doc(const DocValue& doc) {
  StatePolicy policy;
  policy.agent_id = AgentId::parse(doc.string_or("agentId", ""));
  const DocValue* sp = doc.find("statePolicy");
  if (!sp) sp = &doc;  // tolerate the bare inner object
  std::string mode = sp->string_or("defaultMode", "stateless");
  policy.default_mode = (mode == "stateful") ? Mode::Stateful : Mode::Stateless;
  if (const DocValue* cs = sp->find("contextualSharing")) {
    policy.contextual_sharing_enabled = cs->bool_or("enabled", false);
    if (const DocValue* ctxs = cs->find("contexts"); ctxs && ctxs->is_array()) {
      for (const DocValue& c : ctxs->as_array()) {
        if (c.is_string()) policy.contexts.push_back(c.as_string());
      }
    }
    if (const DocValue* types = cs->find("shareableStateTypes"); types && types->is_array()) {
      for (const DocValue& t : types->as_array()) {
        if (t.is_string()) policy.shareable_state_types.push_back(t.as_string());
      }
    }
    std::string lifespan = cs->string_or("stateLifespan", "task-bounded");
    if (lifespan == "task-bounded") {
      policy.lifespan = Lifespan::TaskBounded;
    } else if (lifespan.rfind("time-bounded", 0) == 0) {
      policy.lifespan = Lifespan::TimeBounded;
      std::size_t open = lifespan.find('(');
      std::size_t close = lifespan.find(')');
      if (open != std::string::npos && close != std::string::npos && close > open + 1) {
        policy.lifespan_duration_ms = std::stoll(lifespan.substr(open + 1, close - open - 1));
      }
      if (policy.lifespan_duration_ms <= 0) {
        throw Error(ErrorCode::ParseError,
                    "time-bounded lifespan needs a positive duration: \"" + lifespan + "\"");
      }
    } else {
      throw Error(ErrorCode::ParseError, "unknown stateLifespan \"" + lifespan + "\"");
    }
    policy.revocable = cs->bool_or("revocable", false);
  }
  if (policy.contextual_sharing_enabled && policy.contexts.empty()) {
    throw Error(ErrorCode::ParseError,
                "contextual sharing enabled but no contexts declared for \"" +
                    policy.agent_id.value + "\"");
  }
  return policy;
}

DocValue StatePolicy::to_doc() const {
  DocArray ctxs, types;
  for (const std::string& c : contexts) ctxs.push_back(DocValue(c));
  for (const std::string& t : shareable_state_types) types.push_back(DocValue(t));
  std::string lifespan_text =
      lifespan == Lifespan::TaskBounded
          ? "task-bounded"
          : "time-bounded(" + std::to_string(lifespan_duration_ms) + ")";
  DocMap sharing{{"enabled", DocValue(contextual_sharing_enabled)},
                 {"contexts", DocValue(std::move(ctxs))},
                 {"shareableStateTypes", DocValue(std::move(types))},
                 {"stateLifespan", DocValue(lifespan_text)},
                 {"revocable", DocValue(revocable)}};
  DocMap sp{{"defaultMode",
             DocValue(default_mode == Mode::Stateful ? "stateful" : "stateless")},
            {"contextualSharing", DocValue(std::move(sharing))}};
  return DocValue(DocMap{{"agentId", DocValue(agent_id.value)},
                         {"statePolicy", DocValue(std::move(sp))}});
}

bool StatePolicy::consents_to(const std::string& context_name) const {
  if (!contextual_sharing_enabled) return false;
  return std::find(contexts.begin(), contexts.end(), context_name) != contexts.end();
}

bool StatePolicy::can_share(const std::string& state_type) const {
  return std::find(shareable_state_types.begin(), shareable_state_types.end(), state_type) !=
         shareable_state_types.end();
}

}  // namespace modx::state
