#pragma once

#include <optional>
#include <string>

#include "modx/core/crypto.h"
#include "modx/core/doc_value.h"
#include "modx/core/ids.h"
#include "modx/core/time.h"

namespace modx::core {

enum class MessageType {
  CapabilityQuery,
  CapabilityResponse,
  Request,
  Response,
  Event,
  StateOp,
  WorkflowOp,
  Error,
};

const char* to_string(MessageType type);
MessageType message_type_from_string(const std::string& text);

/// Signed, topic-addressed unit of exchange on the bus. correlationId pairs
/// requests with responses and doubles as the workflow trace id.
struct MessageEnvelope {
  std::string message_id;
  MessageType type = MessageType::Event;
  Topic topic;
  AgentId sender;
  std::optional<std::string> correlation_id;
  Millis timestamp = 0;
  DocValue payload;
  Bytes signature;

  /// Document over every field except the signature; its canonical bytes
  /// are what gets signed and digested.
  DocValue unsigned_doc() const;

  DocValue to_doc() const;
  static MessageEnvelope from_doc(const DocValue& doc);
};

/// SHA-256 over the canonical form of the envelope minus its signature.
Bytes envelope_digest(const MessageEnvelope& env);

void sign_envelope(MessageEnvelope& env, const Bytes& private_key);
bool verify_envelope(const MessageEnvelope& env, const Bytes& public_key);

/// Per-agent sending session: hands out unique message ids and keeps
/// timestamps monotone non-decreasing, then signs.
class AgentSession {
 public:
  AgentSession(AgentId id, KeyPair keys) : id_(std::move(id)), keys_(std::move(keys)) {}

  const AgentId& id() const { return id_; }
  const KeyPair& keys() const { return keys_; }

  MessageEnvelope make(MessageType type, const Topic& topic, DocValue payload,
                       std::optional<std::string> correlation_id, Millis now);

 private:
  AgentId id_;
  KeyPair keys_;
  std::uint64_t seq_ = 0;
  Millis last_ts_ = 0;
};

}  // namespace modx::core
