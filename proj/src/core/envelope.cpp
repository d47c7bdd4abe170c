#include "modx/core/envelope.h"

#include "modx/core/canonical.h"
#include "modx/core/errors.h"

namespace modx::core {

const char* to_string(MessageType type) {
  switch (type) {
    case MessageType::CapabilityQuery: return "CapabilityQuery";
    case MessageType::CapabilityResponse: return "CapabilityResponse";
    case MessageType::Request: return "Request";
    case MessageType::Response: return "Response";
    case MessageType::Event: return "Event";
    case MessageType::StateOp: return "StateOp";
    case MessageType::WorkflowOp: return "WorkflowOp";
    case MessageType::Error: return "Error";
  }
  return "Event";
}

MessageType message_type_from_string(const std::string& text) {
  if (text == "CapabilityQuery") return MessageType::CapabilityQuery;
  if (text == "CapabilityResponse") return MessageType::CapabilityResponse;
  if (text == "Request") return MessageType::Request;
  if (text == "Response") return MessageType::Response;
  if (text == "Event") return MessageType::Event;
  if (text == "StateOp") return MessageType::StateOp;
  if (text == "WorkflowOp") return MessageType::WorkflowOp;
  if (text == "Error") return MessageType::Error;
  throw Error(ErrorCode::ParseError, "unknown messageType \"" + text + "\"");
}

DocValue MessageEnvelope::unsigned_doc() const {
  DocMap m;
  m["messageId"] = message_id;
  m["messageType"] = to_string(type);
  m["topic"] = topic.str();
  m["sender"] = sender.value;
  if (correlation_id) m["correlationId"] = *correlation_id;
  m["timestamp"] = to_iso8601(timestamp);
  m["payload"] = payload;
  return DocValue(std::move(m));
}

DocValue MessageEnvelope::to_doc() const {
  DocValue doc = unsigned_doc();
  doc.as_map()["signature"] = to_hex(signature);
  return doc;
}

MessageEnvelope MessageEnvelope::from_doc(const DocValue& doc) {
  if (!doc.is_map()) throw Error(ErrorCode::ParseError, "envelope must be a JSON object");
  auto require_string = [&](const char* key) -> const std::string& {
    const DocValue* v = doc.find(key);
    if (!v || !v->is_string()) {
      throw Error(ErrorCode::ParseError, std::string("envelope missing string field ") + key);
    }
    return v->as_string();
  };
  MessageEnvelope env;
  env.message_id = require_string("messageId");
  env.type = message_type_from_string(require_string("messageType"));
  env.topic = Topic::parse(require_string("topic"));
  env.sender = AgentId::parse(require_string("sender"));
  if (const DocValue* c = doc.find("correlationId"); c && c->is_string()) {
    env.correlation_id = c->as_string();
  }
  env.timestamp = parse_iso8601(require_string("timestamp"));
  if (const DocValue* p = doc.find("payload")) env.payload = *p;
  if (const DocValue* s = doc.find("signature"); s && s->is_string()) {
    env.signature = from_hex(s->as_string());
  }
  return env;
}

Bytes envelope_digest(const MessageEnvelope& env) {
  return sha256(canonicalize(env.unsigned_doc()));
}

void sign_envelope(MessageEnvelope& env, const Bytes& private_key) {
  env.signature = ed25519_sign(canonicalize(env.unsigned_doc()), private_key);
}

bool verify_envelope(const MessageEnvelope& env, const Bytes& public_key) {
  return ed25519_verify(canonicalize(env.unsigned_doc()), env.signature, public_key);
}

MessageEnvelope AgentSession::make(MessageType type, const Topic& topic, DocValue payload,
                                   std::optional<std::string> correlation_id, Millis now) {
  MessageEnvelope env;
  env.message_id = id_.value + "-" + std::to_string(++seq_);
  env.type = type;
  env.topic = topic;
  env.sender = id_;
  env.correlation_id = std::move(correlation_id);
  last_ts_ = std::max(last_ts_, now);
  env.timestamp = last_ts_;
  env.payload = std::move(payload);
  sign_envelope(env, keys_.private_key);
  return env;
}

}  // namespace modx::core
