#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modx/bus/broker.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"
#include "modx/trust/identity.h"

using namespace modx::core;
using namespace modx::bus;
using namespace modx::trust;

namespace {

struct BusRig {
  SimClock clock{1000};
  IdentityRegistry identities;
  BrokerConfig config;
  std::unique_ptr<Broker> broker;
  std::map<std::string, AgentSession> sessions;

  explicit BusRig(BrokerConfig cfg = {}) : config(cfg) {
    broker = std::make_unique<Broker>(config, &identities, &clock);
  }

  AgentSession& agent(const std::string& id) {
    auto it = sessions.find(id);
    if (it != sessions.end()) return it->second;
    AgentId agent_id = AgentId::parse(id);
    identities.generate(agent_id, derive_key_seed(11, agent_id), clock.now());
    auto [ins, _] =
        sessions.emplace(id, AgentSession(agent_id, *identities.keys(agent_id)));
    return ins->second;
  }

  MessageEnvelope make(const std::string& sender, MessageType type, const std::string& topic,
                       DocValue payload = DocValue(DocMap{}),
                       std::optional<std::string> corr = {}) {
    return agent(sender).make(type, Topic::parse(topic), std::move(payload), std::move(corr),
                              clock.now());
  }
};

// Brute-force routing oracle: recursive matcher + full subscription scan.
bool oracle_match(const std::vector<std::string>& pat, const std::vector<std::string>& topic,
                  std::size_t pi = 0, std::size_t ti = 0) {
  if (pi == pat.size()) return ti == topic.size();
  if (pat[pi] == "#") return true;
  if (ti == topic.size()) return false;
  if (pat[pi] == "*" || pat[pi] == topic[ti]) return oracle_match(pat, topic, pi + 1, ti + 1);
  return false;
}

}  // namespace

TEST_CASE("publish: three matching subscribers get one copy each") {
  BusRig rig;
  int delivered = 0;
  for (const char* id : {"planner-agent-001", "planner-agent-002", "planner-agent-003"}) {
    rig.agent(id);
    rig.broker->subscribe(AgentId::parse(id), "flight-disruption");
    rig.broker->attach(AgentId::parse(id), [&](const MessageEnvelope&) { ++delivered; });
  }
  auto receipts =
      rig.broker->publish(rig.make("weather-agent-001", MessageType::Event, "flight-disruption"));
  CHECK(receipts.size() == 3);
  for (const auto& r : receipts) CHECK(r.status == DeliveryStatus::Delivered);
  CHECK(delivered == 3);
}

TEST_CASE("publish: no subscribers means empty receipts, no error") {
  BusRig rig;
  auto receipts =
      rig.broker->publish(rig.make("weather-agent-001", MessageType::Event, "quiet-topic"));
  CHECK(receipts.empty());
}

TEST_CASE("publish: unknown sender and broken signatures are rejected") {
  BusRig rig;
  MessageEnvelope env = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  env.sender = AgentId::parse("ghost-agent-404");
  CHECK_THROWS_AS(rig.broker->publish(env), Error);

  MessageEnvelope tampered =
      rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  tampered.payload = DocValue(DocMap{{"tampered", DocValue(true)}});
  CHECK_THROWS_AS(rig.broker->publish(tampered), Error);
}

TEST_CASE("queued messages survive a disconnect and deliver exactly once") {
  BusRig rig;
  rig.agent("planner-agent-001");
  rig.broker->subscribe(AgentId::parse("planner-agent-001"), "flight-disruption");
  MessageEnvelope env =
      rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  auto receipts = rig.broker->publish(env);
  REQUIRE(receipts.size() == 1);
  CHECK(receipts[0].status == DeliveryStatus::Queued);

  rig.clock.advance(1000);  // inside the retention window
  int delivered = 0;
  rig.broker->attach(AgentId::parse("planner-agent-001"),
                     [&](const MessageEnvelope&) { ++delivered; });
  CHECK(delivered == 1);

  auto history = rig.broker->receipts_for(env.message_id);
  REQUIRE(history.size() == 2);
  CHECK(history[0].status == DeliveryStatus::Queued);
  CHECK(history[1].status == DeliveryStatus::Delivered);

  // nothing left on the fallback path either
  auto poll = rig.broker->fallback_poll(AgentId::parse("planner-agent-001"), 0);
  CHECK(poll.messages.empty());
}

TEST_CASE("queued messages expire after the retention window") {
  BusRig rig;
  rig.agent("planner-agent-001");
  rig.broker->subscribe(AgentId::parse("planner-agent-001"), "flight-disruption");
  MessageEnvelope env = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  rig.broker->publish(env);
  rig.clock.advance(rig.config.retention_window_ms + 1);
  int delivered = 0;
  rig.broker->attach(AgentId::parse("planner-agent-001"),
                     [&](const MessageEnvelope&) { ++delivered; });
  CHECK(delivered == 0);
  auto history = rig.broker->receipts_for(env.message_id);
  REQUIRE(history.size() == 2);
  CHECK(history[1].status == DeliveryStatus::Expired);
}

TEST_CASE("subscribe: idempotent for identical subscriber and pattern") {
  BusRig rig;
  rig.agent("budget-agent-001");
  Subscription a = rig.broker->subscribe(AgentId::parse("budget-agent-001"), "expense-transaction");
  Subscription b = rig.broker->subscribe(AgentId::parse("budget-agent-001"), "expense-transaction");
  CHECK(a.subscription_id == b.subscription_id);

  int delivered = 0;
  rig.broker->attach(AgentId::parse("budget-agent-001"),
                     [&](const MessageEnvelope&) { ++delivered; });
  rig.broker->publish(rig.make("flight-agent-001", MessageType::Event, "expense-transaction"));
  CHECK(delivered == 1);  // one delivery despite the duplicate subscribe
}

TEST_CASE("one pattern monitors spending across multiple booking agents") {
  BusRig rig;
  rig.agent("budget-agent-001");
  rig.broker->subscribe(AgentId::parse("budget-agent-001"), "expense-transaction");
  std::vector<std::string> senders;
  rig.broker->attach(AgentId::parse("budget-agent-001"),
                     [&](const MessageEnvelope& env) { senders.push_back(env.sender.value); });
  rig.broker->publish(rig.make("flight-agent-001", MessageType::Event, "expense-transaction"));
  rig.broker->publish(rig.make("hotel-agent-002", MessageType::Event, "expense-transaction"));
  CHECK(senders == std::vector<std::string>{"flight-agent-001", "hotel-agent-002"});
}

TEST_CASE("subscribe validates pattern and subscriber") {
  BusRig rig;
  rig.agent("budget-agent-001");
  CHECK_THROWS_AS(rig.broker->subscribe(AgentId::parse("budget-agent-001"), "a.#.b"), Error);
  CHECK_THROWS_AS(rig.broker->subscribe(AgentId::parse("budget-agent-001"), ""), Error);
  CHECK_THROWS_AS(rig.broker->subscribe(AgentId::parse("never-registered-1"), "a.b"), Error);
}

TEST_CASE("unsubscribe: stops deliveries, keeps other patterns, rejects repeats") {
  BusRig rig;
  rig.agent("planner-agent-001");
  AgentId planner = AgentId::parse("planner-agent-001");
  Subscription disruption = rig.broker->subscribe(planner, "flight-disruption");
  rig.broker->subscribe(planner, "expense-transaction");
  int delivered = 0;
  rig.broker->attach(planner, [&](const MessageEnvelope&) { ++delivered; });

  rig.broker->unsubscribe(disruption.subscription_id);
  rig.broker->publish(rig.make("weather-agent-001", MessageType::Event, "flight-disruption"));
  CHECK(delivered == 0);
  rig.broker->publish(rig.make("flight-agent-001", MessageType::Event, "expense-transaction"));
  CHECK(delivered == 1);

  CHECK_THROWS_AS(rig.broker->unsubscribe(disruption.subscription_id), Error);
}

TEST_CASE("unsubscribe drops queued-but-undelivered messages for that pattern") {
  BusRig rig;
  rig.agent("planner-agent-001");
  AgentId planner = AgentId::parse("planner-agent-001");
  Subscription sub = rig.broker->subscribe(planner, "flight-disruption");
  rig.broker->publish(rig.make("weather-agent-001", MessageType::Event, "flight-disruption"));
  rig.broker->unsubscribe(sub.subscription_id);
  int delivered = 0;
  rig.broker->attach(planner, [&](const MessageEnvelope&) { ++delivered; });
  CHECK(delivered == 0);
}

TEST_CASE("queue overflow expires oldest-first and reports it") {
  BrokerConfig cfg;
  cfg.max_queue_per_subscriber = 2;
  BusRig rig(cfg);
  rig.agent("planner-agent-001");
  AgentId planner = AgentId::parse("planner-agent-001");
  rig.broker->subscribe(planner, "flight-disruption");

  MessageEnvelope m1 = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  MessageEnvelope m2 = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  MessageEnvelope m3 = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  rig.broker->publish(m1);
  rig.broker->publish(m2);
  auto receipts = rig.broker->publish(m3);
  REQUIRE(receipts.size() == 2);
  CHECK(receipts[0].message_id == m1.message_id);
  CHECK(receipts[0].status == DeliveryStatus::Expired);
  CHECK(receipts[1].message_id == m3.message_id);
  CHECK(receipts[1].status == DeliveryStatus::Queued);

  auto poll = rig.broker->fallback_poll(planner, 0);
  REQUIRE(poll.messages.size() == 2);
  CHECK(poll.messages[0].message_id == m2.message_id);
  CHECK(poll.messages[1].message_id == m3.message_id);
}

TEST_CASE("fallback_poll: cursor-stable reads, acknowledgement releases") {
  BusRig rig;
  rig.agent("planner-agent-001");
  AgentId planner = AgentId::parse("planner-agent-001");
  rig.broker->subscribe(planner, "flight-disruption");
  MessageEnvelope m1 = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  MessageEnvelope m2 = rig.make("weather-agent-001", MessageType::Event, "flight-disruption");
  rig.broker->publish(m1);
  rig.broker->publish(m2);

  auto first = rig.broker->fallback_poll(planner, 0);
  REQUIRE(first.messages.size() == 2);
  CHECK(first.messages[0].message_id == m1.message_id);  // publish order
  CHECK(first.messages[1].message_id == m2.message_id);

  auto again = rig.broker->fallback_poll(planner, 0);
  REQUIRE(again.messages.size() == 2);  // cursor-stable
  CHECK(again.cursor == first.cursor);

  auto after_ack = rig.broker->fallback_poll(planner, first.cursor);
  CHECK(after_ack.messages.empty());

  CHECK_THROWS_AS(rig.broker->fallback_poll(planner, 999), Error);
  CHECK_THROWS_AS(rig.broker->fallback_poll(AgentId::parse("never-registered-1"), 0), Error);
}

TEST_CASE("route_request: correlation id rides the round trip") {
  BusRig rig;
  rig.agent("calendar-agent-001");
  AgentId calendar = AgentId::parse("calendar-agent-001");
  rig.broker->subscribe(calendar, "calendar");
  rig.broker->attach(calendar, [&](const MessageEnvelope& env) {
    if (env.type != MessageType::Request) return;
    DocValue payload(DocMap{{"slots", DocValue(DocArray{DocValue("2025-06-10")})}});
    rig.broker->publish(rig.agent("calendar-agent-001")
                            .make(MessageType::Response, Topic::parse("reply"),
                                  std::move(payload), env.correlation_id, rig.clock.now()));
  });

  MessageEnvelope request =
      rig.make("coordinator-agent-main", MessageType::Request, "calendar",
               DocValue(DocMap{{"operation", DocValue("check")}}), std::string("trip-12345"));
  MessageEnvelope response = rig.broker->route_request(request, Topic::parse("calendar"));
  CHECK(response.correlation_id == request.correlation_id);
  CHECK(response.sender.value == "calendar-agent-001");
}

TEST_CASE("route_request: no subscriber on the capability topic") {
  BusRig rig;
  MessageEnvelope request =
      rig.make("coordinator-agent-main", MessageType::Request, "nothing-here",
               DocValue(DocMap{}), std::string("corr-1"));
  CHECK_THROWS_AS(rig.broker->route_request(request, Topic::parse("nothing-here")), Error);
}

TEST_CASE("route_request: virtually delayed response times out and is dropped") {
  BusRig rig;
  rig.agent("slow-agent-001");
  AgentId slow = AgentId::parse("slow-agent-001");
  rig.broker->subscribe(slow, "slowcap");
  rig.broker->attach(slow, [&](const MessageEnvelope& env) {
    if (env.type != MessageType::Request) return;
    // responds, but with a send timestamp far past the deadline
    MessageEnvelope response = rig.agent("slow-agent-001")
                                   .make(MessageType::Response, Topic::parse("reply"),
                                         DocValue(DocMap{}), env.correlation_id,
                                         rig.clock.now() + 60000);
    rig.broker->publish(response);
  });
  MessageEnvelope request = rig.make("coordinator-agent-main", MessageType::Request, "slowcap",
                                     DocValue(DocMap{}), std::string("corr-slow"));
  try {
    rig.broker->route_request(request, Topic::parse("slowcap"), 50);
    FAIL("expected Timeout");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Timeout);
  }
  CHECK_FALSE(rig.broker->late_responses().empty());
}

TEST_CASE("route_request: response after the requester gave up is logged and dropped") {
  BusRig rig;
  rig.agent("mute-agent-001");
  AgentId mute = AgentId::parse("mute-agent-001");
  rig.broker->subscribe(mute, "mutecap");
  std::optional<MessageEnvelope> held;
  rig.broker->attach(mute, [&](const MessageEnvelope& env) {
    if (env.type == MessageType::Request) held = env;  // never responds in time
  });
  MessageEnvelope request = rig.make("coordinator-agent-main", MessageType::Request, "mutecap",
                                     DocValue(DocMap{}), std::string("corr-late"));
  CHECK_THROWS_AS(rig.broker->route_request(request, Topic::parse("mutecap"), 30), Error);
  REQUIRE(held.has_value());
  auto receipts = rig.broker->publish(
      rig.agent("mute-agent-001")
          .make(MessageType::Response, Topic::parse("reply"), DocValue(DocMap{}),
                held->correlation_id, rig.clock.now()));
  CHECK(receipts.empty());  // dropped, not routed
  CHECK_FALSE(rig.broker->late_responses().empty());
}

TEST_CASE("ordering: per publisher and topic, deliveries follow publish order") {
  BusRig rig;
  rig.agent("planner-agent-001");
  AgentId planner = AgentId::parse("planner-agent-001");
  rig.broker->subscribe(planner, "seq.topic");
  std::vector<std::string> seen;
  rig.broker->attach(planner,
                     [&](const MessageEnvelope& env) { seen.push_back(env.message_id); });
  std::vector<std::string> sent;
  for (int i = 0; i < 10; ++i) {
    MessageEnvelope env = rig.make("weather-agent-001", MessageType::Event, "seq.topic");
    sent.push_back(env.message_id);
    rig.broker->publish(env);
  }
  CHECK(seen == sent);
}

TEST_CASE("routing oracle: trie deliveries equal brute-force pattern scans") {
  BusRig rig;
  std::mt19937_64 rng(2025);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  auto random_topic = [&](bool pattern) {
    std::vector<std::string> segs;
    std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      if (pattern) {
        std::uint64_t roll = rng() % 10;
        if (roll == 0 && i + 1 == n) {
          segs.push_back("#");
          continue;
        }
        if (roll <= 2) {
          segs.push_back("*");
          continue;
        }
      }
      segs.push_back(alphabet[rng() % alphabet.size()]);
    }
    return segs;
  };

  // 30 subscribers, up to 3 patterns each
  std::vector<std::pair<AgentId, std::vector<std::string>>> subs;  // (agent, pattern)
  for (int i = 0; i < 30; ++i) {
    std::string id = "sub-agent-" + std::to_string(100 + i);
    rig.agent(id);
    std::size_t patterns = 1 + rng() % 3;
    for (std::size_t p = 0; p < patterns; ++p) {
      std::vector<std::string> pat = random_topic(true);
      std::string pat_str;
      for (std::size_t s = 0; s < pat.size(); ++s) pat_str += (s ? "." : "") + pat[s];
      rig.broker->subscribe(AgentId::parse(id), pat_str);
      subs.emplace_back(AgentId::parse(id), pat);
    }
  }

  std::map<AgentId, std::set<std::string>> received;
  for (const auto& [agent, _] : subs) {
    AgentId a = agent;
    if (received.count(a)) continue;
    received[a] = {};
    rig.broker->attach(a, [&received, a](const MessageEnvelope& env) {
      received[a].insert(env.message_id);
    });
  }

  for (int round = 0; round < 300; ++round) {
    std::vector<std::string> topic_segs = random_topic(false);
    std::string topic_str;
    for (std::size_t s = 0; s < topic_segs.size(); ++s) topic_str += (s ? "." : "") + topic_segs[s];
    MessageEnvelope env = rig.make("weather-agent-001", MessageType::Event, topic_str);
    rig.broker->publish(env);

    std::set<AgentId> expected;
    for (const auto& [agent, pat] : subs) {
      if (oracle_match(pat, topic_segs)) expected.insert(agent);
    }
    for (const auto& [agent, inbox] : received) {
      bool got = inbox.count(env.message_id) > 0;
      bool should = expected.count(agent) > 0;
      CHECK(got == should);  // no phantom deliveries, no misses
    }
  }
}
