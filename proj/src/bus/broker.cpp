#include "modx/bus/broker.h"

#include <algorithm>

#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::bus {

using core::Error;
using core::ErrorCode;

const char* to_string(DeliveryStatus status) {
  switch (status) {
    case DeliveryStatus::Delivered: return "Delivered";
    case DeliveryStatus::Queued: return "Queued";
    case DeliveryStatus::Expired: return "Expired";
  }
  return "Delivered";
}

BrokerConfig BrokerConfig::from_doc(const core::DocValue& doc) {
  BrokerConfig config;
  config.retention_window_ms =
      static_cast<Millis>(doc.number_or("retentionWindowMs", config.retention_window_ms));
  config.max_queue_per_subscriber = static_cast<std::size_t>(
      doc.number_or("maxQueuePerSubscriber", config.max_queue_per_subscriber));
  config.fallback_poll_interval_ms = static_cast<Millis>(
      doc.number_or("fallbackPollIntervalMs", config.fallback_poll_interval_ms));
  config.request_timeout_ms =
      static_cast<Millis>(doc.number_or("requestTimeoutMs", config.request_timeout_ms));
  config.bind_host = doc.string_or("bindHost", config.bind_host);
  config.http_port = static_cast<int>(doc.number_or("httpPort", config.http_port));
  config.stream_port = static_cast<int>(doc.number_or("streamPort", config.stream_port));
  if (const core::DocValue* emb = doc.find("embedder")) {
    config.embedder_dimension =
        static_cast<std::size_t>(emb->number_or("dimension", config.embedder_dimension));
    config.embedder_seed = static_cast<std::uint64_t>(emb->number_or("seed", config.embedder_seed));
  }
  if (config.retention_window_ms <= 0) {
    throw Error(ErrorCode::ParseError, "retentionWindowMs must be positive");
  }
  if (config.max_queue_per_subscriber < 1) {
    throw Error(ErrorCode::ParseError, "maxQueuePerSubscriber must be at least 1");
  }
  return config;
}

BrokerConfig BrokerConfig::load(const std::string& path) {
  return from_doc(core::load_doc(path));
}

Broker::Broker(BrokerConfig config, const trust::KeyDirectory* keys, const core::Clock* clock)
    : config_(std::move(config)), keys_(keys), clock_(clock) {}

void Broker::verify_publish(const MessageEnvelope& env) const {
  if (!keys_) return;
  auto key = keys_->public_key(env.sender, env.timestamp);
  if (!key) {
    throw Error(ErrorCode::UnknownSender,
                "publisher \"" + env.sender.value + "\" is not registered");
  }
  if (!core::verify_envelope(env, *key)) {
    throw Error(ErrorCode::InvalidSignature,
                "envelope " + env.message_id + " signature does not verify");
  }
}

Subscription Broker::subscribe(const AgentId& subscriber, const std::string& pattern_text) {
  TopicPattern pattern = TopicPattern::parse(pattern_text);
  if (keys_ && !keys_->public_key(subscriber, clock_->now())) {
    throw Error(ErrorCode::UnknownAgent,
                "subscriber \"" + subscriber.value + "\" is not registered");
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(subscriber, pattern.str());
  auto existing = by_subscriber_pattern_.find(key);
  if (existing != by_subscriber_pattern_.end()) {
    return subscriptions_.at(existing->second);  // idempotent
  }
  Subscription sub;
  sub.subscription_id = "sub-" + std::to_string(next_subscription_++);
  sub.subscriber = subscriber;
  sub.pattern = pattern;
  sub.created_at = clock_->now();
  index_.add(sub.subscription_id, pattern);
  by_subscriber_pattern_[key] = sub.subscription_id;
  subscriptions_[sub.subscription_id] = sub;
  states_.try_emplace(subscriber);
  return sub;
}

void Broker::unsubscribe(const std::string& subscription_id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = subscriptions_.find(subscription_id);
  if (it == subscriptions_.end()) {
    throw Error(ErrorCode::UnknownSubscription, "no subscription \"" + subscription_id + "\"");
  }
  Subscription sub = it->second;
  index_.remove(subscription_id, sub.pattern);
  by_subscriber_pattern_.erase({sub.subscriber, sub.pattern.str()});
  subscriptions_.erase(it);

  // drop queued messages no other pattern of this subscriber still matches
  auto state_it = states_.find(sub.subscriber);
  if (state_it != states_.end()) {
    auto& queue = state_it->second.queue;
    auto still_matched = [&](const QueuedMessage& qm) {
      for (const auto& [id, other] : subscriptions_) {
        if (other.subscriber == sub.subscriber && other.pattern.matches(qm.env.topic)) {
          return true;
        }
      }
      return false;
    };
    queue.erase(std::remove_if(queue.begin(), queue.end(),
                               [&](const QueuedMessage& qm) { return !still_matched(qm); }),
                queue.end());
  }
}

void Broker::expire_stale_locked(const AgentId& subscriber, SubscriberState& state) {
  Millis now = clock_->now();
  while (!state.queue.empty() &&
         state.queue.front().enqueued_at + config_.retention_window_ms <= now) {
    record_receipt_locked(
        {state.queue.front().env.message_id, subscriber, DeliveryStatus::Expired, 1});
    state.queue.pop_front();
  }
}

void Broker::record_receipt_locked(const DeliveryReceipt& receipt) {
  receipts_[receipt.message_id].push_back(receipt);
}

std::vector<DeliveryReceipt> Broker::publish(const MessageEnvelope& env) {
  verify_publish(env);

  std::vector<DeliveryReceipt> out;
  std::vector<std::pair<AgentId, DeliveryHandler>> to_deliver;
  {
    std::lock_guard<std::mutex> lock(mu_);

    // response capture for in-flight route_request exchanges
    if (env.type == core::MessageType::Response && env.correlation_id) {
      auto pending = pending_.find(*env.correlation_id);
      if (pending != pending_.end() && !pending->second.fulfilled) {
        pending->second.fulfilled = true;
        pending->second.response = env;
        pending->second.arrival = std::max(clock_->now(), env.timestamp);
        response_cv_.notify_all();
      } else if (timed_out_.count(*env.correlation_id)) {
        late_responses_.push_back(env.message_id + " (correlation " + *env.correlation_id +
                                  ") arrived after timeout; dropped");
        return out;  // dropped, not routed
      }
    }

    if (observer_) observer_(env, core::envelope_digest(env));

    std::set<AgentId> matched;
    for (const std::string& sub_id : index_.collect(env.topic)) {
      matched.insert(subscriptions_.at(sub_id).subscriber);
    }
    for (const AgentId& subscriber : matched) {  // std::set: deterministic order
      SubscriberState& state = states_[subscriber];
      expire_stale_locked(subscriber, state);
      if (state.handler) {
        DeliveryReceipt receipt{env.message_id, subscriber, DeliveryStatus::Delivered, 1};
        record_receipt_locked(receipt);
        out.push_back(receipt);
        to_deliver.emplace_back(subscriber, state.handler);
      } else {
        if (state.queue.size() >= config_.max_queue_per_subscriber) {
          // overflow expires oldest-first; surface the eviction in receipts
          DeliveryReceipt evicted{state.queue.front().env.message_id, subscriber,
                                  DeliveryStatus::Expired, 1};
          record_receipt_locked(evicted);
          out.push_back(evicted);
          state.queue.pop_front();
        }
        QueuedMessage qm{env, state.next_seq++, clock_->now()};
        state.queue.push_back(std::move(qm));
        DeliveryReceipt receipt{env.message_id, subscriber, DeliveryStatus::Queued, 1};
        record_receipt_locked(receipt);
        out.push_back(receipt);
      }
    }
  }
  // handlers run outside the lock; they may publish responses reentrantly
  for (auto& [subscriber, handler] : to_deliver) {
    handler(env);
  }
  return out;
}

MessageEnvelope Broker::route_request(const MessageEnvelope& env, const Topic& capability_topic,
                                      std::optional<Millis> timeout_ms) {
  if (env.type != core::MessageType::Request) {
    throw Error(ErrorCode::MalformedQuery, "route_request needs a Request envelope");
  }
  if (!env.correlation_id) {
    throw Error(ErrorCode::MalformedQuery, "route_request needs a correlationId");
  }
  Millis timeout = timeout_ms.value_or(config_.request_timeout_ms);
  Millis deadline;
  {
    std::lock_guard<std::mutex> lock(mu_);
    bool any = false;
    for (const std::string& sub_id : index_.collect(capability_topic)) {
      (void)sub_id;
      any = true;
      break;
    }
    if (!any) {
      throw Error(ErrorCode::NoSubscriber,
                  "no agent subscribed to capability topic \"" + capability_topic.str() + "\"");
    }
    deadline = clock_->now() + timeout;
    pending_[*env.correlation_id] = PendingRequest{deadline, false, {}, 0};
  }

  MessageEnvelope request = env;
  request.topic = capability_topic;
  publish(request);

  std::unique_lock<std::mutex> lock(mu_);
  const std::string corr = *env.correlation_id;
  // Synchronous responders fulfilled the slot during publish; otherwise wait
  // out the remaining (wall-clock) window.
  response_cv_.wait_for(lock, std::chrono::milliseconds(timeout), [&] {
    return pending_.at(corr).fulfilled || clock_->now() >= deadline;
  });
  PendingRequest pending = pending_.at(corr);
  pending_.erase(corr);
  if (pending.fulfilled && pending.arrival <= deadline) {
    return pending.response;
  }
  timed_out_.insert(corr);
  if (pending.fulfilled) {
    late_responses_.push_back(pending.response.message_id + " (correlation " + corr +
                              ") arrived after the deadline; dropped");
  }
  throw Error(ErrorCode::Timeout, "no response for correlation \"" + corr + "\" within " +
                                      std::to_string(timeout) + "ms");
}

Broker::PollResult Broker::fallback_poll(const AgentId& subscriber, std::uint64_t cursor) {
  if (keys_ && !keys_->public_key(subscriber, clock_->now())) {
    throw Error(ErrorCode::UnknownAgent,
                "subscriber \"" + subscriber.value + "\" is not registered");
  }
  std::lock_guard<std::mutex> lock(mu_);
  SubscriberState& state = states_[subscriber];
  expire_stale_locked(subscriber, state);
  if (cursor > state.next_seq - 1) {
    throw Error(ErrorCode::InvalidCursor, "cursor " + std::to_string(cursor) +
                                              " was never issued for \"" + subscriber.value +
                                              "\"");
  }
  // presenting a cursor acknowledges (releases) everything at or before it
  if (cursor > state.released_to) {
    state.released_to = cursor;
    while (!state.queue.empty() && state.queue.front().seq <= cursor) {
      record_receipt_locked(
          {state.queue.front().env.message_id, subscriber, DeliveryStatus::Delivered, 1});
      state.queue.pop_front();
    }
  }
  PollResult result;
  result.cursor = cursor;
  for (const QueuedMessage& qm : state.queue) {
    if (qm.seq > cursor) {
      result.messages.push_back(qm.env);
      result.cursor = qm.seq;
    }
  }
  return result;
}

void Broker::attach(const AgentId& subscriber, DeliveryHandler handler) {
  std::vector<MessageEnvelope> backlog;
  DeliveryHandler h;
  {
    std::lock_guard<std::mutex> lock(mu_);
    SubscriberState& state = states_[subscriber];
    expire_stale_locked(subscriber, state);
    state.handler = std::move(handler);
    h = state.handler;
    for (QueuedMessage& qm : state.queue) {
      record_receipt_locked({qm.env.message_id, subscriber, DeliveryStatus::Delivered, 1});
      backlog.push_back(std::move(qm.env));
    }
    state.queue.clear();
    state.released_to = state.next_seq - 1;
  }
  // backlog flush runs outside the registry lock, like live deliveries
  for (const MessageEnvelope& env : backlog) h(env);
}

void Broker::detach(const AgentId& subscriber) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = states_.find(subscriber);
  if (it != states_.end()) it->second.handler = nullptr;
}

void Broker::set_envelope_observer(EnvelopeObserver observer) {
  std::lock_guard<std::mutex> lock(mu_);
  observer_ = std::move(observer);
}

std::vector<DeliveryReceipt> Broker::receipts_for(const std::string& message_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = receipts_.find(message_id);
  return it == receipts_.end() ? std::vector<DeliveryReceipt>{} : it->second;
}

std::vector<std::string> Broker::late_responses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return late_responses_;
}

}  // namespace modx::bus
