#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modx/bus/pattern.h"
#include "modx/core/envelope.h"
#include "modx/core/time.h"
#include "modx/trust/identity.h"

namespace modx::bus {

using core::AgentId;
using core::MessageEnvelope;
using core::Millis;
using core::Topic;

struct Subscription {
  std::string subscription_id;
  AgentId subscriber;
  TopicPattern pattern;
  Millis created_at = 0;
};

enum class DeliveryStatus { Delivered, Queued, Expired };
const char* to_string(DeliveryStatus status);

struct DeliveryReceipt {
  std::string message_id;
  AgentId subscriber;
  DeliveryStatus status = DeliveryStatus::Delivered;
  int attempt = 1;
};

struct BrokerConfig {
  Millis retention_window_ms = 60000;
  std::size_t max_queue_per_subscriber = 128;
  Millis fallback_poll_interval_ms = 1000;
  Millis request_timeout_ms = 5000;
  std::string bind_host = "127.0.0.1";
  int http_port = 0;    // 0 picks an ephemeral port
  int stream_port = 0;
  std::size_t embedder_dimension = 64;
  std::uint64_t embedder_seed = 42;

  static BrokerConfig from_doc(const core::DocValue& doc);
  static BrokerConfig load(const std::string& path);
};

/// Called with each envelope delivered to an attached (stream-connected)
/// subscriber. Handlers may publish from inside the callback; the broker
/// never holds its registry lock while invoking them.
using DeliveryHandler = std::function<void(const MessageEnvelope&)>;

/// Observer fed every accepted publish (envelope + digest); wires the bus
/// into batch anchoring and trace capture.
using EnvelopeObserver = std::function<void(const MessageEnvelope&, const core::Bytes&)>;

/// Topic-based publish-subscribe core with at-least-once delivery: attached
/// subscribers get synchronous delivery, detached ones queue up to the
/// retention window, and request/response round trips ride correlation ids.
/// Publishers never see subscriber identities.
class Broker {
 public:
  Broker(BrokerConfig config, const trust::KeyDirectory* keys, const core::Clock* clock);

  Subscription subscribe(const AgentId& subscriber, const std::string& pattern);
  void unsubscribe(const std::string& subscription_id);

  /// Delivers to every subscriber whose pattern matches. The returned list
  /// carries one receipt per matching subscriber for this message, plus an
  /// Expired receipt for any message evicted by queue overflow.
  std::vector<DeliveryReceipt> publish(const MessageEnvelope& env);

  /// Four-step request/response exchange: deliver the Request to the
  /// capability topic's subscriber, wait for the correlated Response, hand
  /// it back. Late responses are dropped and logged. Throws NoSubscriber /
  /// Timeout.
  MessageEnvelope route_request(const MessageEnvelope& env, const Topic& capability_topic,
                                std::optional<Millis> timeout_ms = {});

  struct PollResult {
    std::vector<MessageEnvelope> messages;
    std::uint64_t cursor = 0;
  };
  /// Cursor-stable queue read: entries after `cursor` in publish order;
  /// re-polling with the same cursor returns the same list; presenting an
  /// advanced cursor releases everything at or before it.
  PollResult fallback_poll(const AgentId& subscriber, std::uint64_t cursor);

  /// Stream-session attach: flushes the queue through the handler, then
  /// delivers future matches synchronously.
  void attach(const AgentId& subscriber, DeliveryHandler handler);
  void detach(const AgentId& subscriber);

  void set_envelope_observer(EnvelopeObserver observer);

  std::vector<DeliveryReceipt> receipts_for(const std::string& message_id) const;
  std::vector<std::string> late_responses() const;
  const BrokerConfig& config() const { return config_; }

 private:
  struct QueuedMessage {
    MessageEnvelope env;
    std::uint64_t seq = 0;
    Millis enqueued_at = 0;
  };
  struct SubscriberState {
    DeliveryHandler handler;  // empty when detached
    std::deque<QueuedMessage> queue;
    std::uint64_t next_seq = 1;
    std::uint64_t released_to = 0;
  };
  struct PendingRequest {
    Millis deadline = 0;
    bool fulfilled = false;
    MessageEnvelope response;
    Millis arrival = 0;
  };

  void verify_publish(const MessageEnvelope& env) const;
  void expire_stale_locked(const AgentId& subscriber, SubscriberState& state);
  void record_receipt_locked(const DeliveryReceipt& receipt);

  BrokerConfig config_;
  const trust::KeyDirectory* keys_;
  const core::Clock* clock_;

  mutable std::mutex mu_;
  std::condition_variable response_cv_;
  std::map<std::string, Subscription> subscriptions_;
  std::map<std::pair<AgentId, std::string>, std::string> by_subscriber_pattern_;
  PatternIndex index_;
  std::map<AgentId, SubscriberState> states_;
  std::map<std::string, std::vector<DeliveryReceipt>> receipts_;
  std::map<std::string, PendingRequest> pending_;
  std::set<std::string> timed_out_;
  std::vector<std::string> late_responses_;
  std::uint64_t next_subscription_ = 1;
  EnvelopeObserver observer_;
};

}  // namespace modx::bus
