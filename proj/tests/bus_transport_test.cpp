#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "modx/bus/broker.h"
#include "modx/bus/http_server.h"
#include "modx/bus/stream_server.h"
#include "modx/core/canonical.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"
#include "modx/trust/identity.h"

using namespace modx::core;
using namespace modx::bus;
using namespace modx::trust;

namespace {

struct TransportRig {
  SystemClock clock;  // transports run on wall time
  IdentityRegistry identities;
  Broker broker{BrokerConfig{}, &identities, &clock};
  std::map<std::string, AgentSession> sessions;

  AgentSession& agent(const std::string& id) {
    auto it = sessions.find(id);
    if (it != sessions.end()) return it->second;
    AgentId agent_id = AgentId::parse(id);
    identities.generate(agent_id, derive_key_seed(3, agent_id), clock.now());
    auto [ins, _] = sessions.emplace(id, AgentSession(agent_id, *identities.keys(agent_id)));
    return ins->second;
  }

  MessageEnvelope make(const std::string& sender, const std::string& topic) {
    return agent(sender).make(MessageType::Event, Topic::parse(topic),
                              DocValue(DocMap{{"n", DocValue(1)}}), {}, clock.now());
  }
};

int connect_to(int port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  return fd;
}

DocValue roundtrip_frame(int fd, const DocValue& frame) {
  REQUIRE(write_frame(fd, canonicalize(frame)));
  std::string payload;
  REQUIRE(read_frame(fd, payload));
  return parse_doc(payload);
}

}  // namespace

TEST_CASE("http fallback: subscribe, publish, poll, unsubscribe") {
  TransportRig rig;
  rig.agent("planner-agent-001");
  rig.agent("weather-agent-001");
  HttpServer server(rig.broker, "127.0.0.1", 0);
  REQUIRE(server.start());
  httplib::Client client("127.0.0.1", server.port());

  auto sub_res = client.Post("/subscribe",
                             R"({"subscriber":"planner-agent-001","pattern":"flight-disruption"})",
                             "application/json");
  REQUIRE(sub_res);
  CHECK(sub_res->status == 200);
  DocValue sub_doc = parse_doc(sub_res->body);
  std::string sub_id = sub_doc.string_or("subscriptionId", "");
  CHECK_FALSE(sub_id.empty());

  MessageEnvelope env = rig.make("weather-agent-001", "flight-disruption");
  auto pub_res =
      client.Post("/publish", canonicalize(env.to_doc()), "application/json");
  REQUIRE(pub_res);
  CHECK(pub_res->status == 200);
  DocValue receipts = parse_doc(pub_res->body);
  REQUIRE(receipts.find("receipts")->as_array().size() == 1);
  CHECK(receipts.find("receipts")->as_array()[0].string_or("status", "") == "Queued");

  auto poll_res = client.Get("/poll?subscriber=planner-agent-001&cursor=0");
  REQUIRE(poll_res);
  CHECK(poll_res->status == 200);
  DocValue polled = parse_doc(poll_res->body);
  REQUIRE(polled.find("messages")->as_array().size() == 1);
  MessageEnvelope back =
      MessageEnvelope::from_doc(polled.find("messages")->as_array()[0]);
  CHECK(back.message_id == env.message_id);
  CHECK(verify_envelope(back, rig.identities.keys(back.sender)->public_key));
  double cursor = polled.find("cursor")->as_number();

  // stable re-read, then acknowledge
  auto again = client.Get("/poll?subscriber=planner-agent-001&cursor=0");
  CHECK(parse_doc(again->body).find("messages")->as_array().size() == 1);
  auto acked = client.Get(("/poll?subscriber=planner-agent-001&cursor=" +
                           std::to_string(static_cast<std::uint64_t>(cursor)))
                              .c_str());
  CHECK(parse_doc(acked->body).find("messages")->as_array().empty());

  auto unsub_res = client.Post("/unsubscribe", R"({"subscriptionId":")" + sub_id + R"("})",
                               "application/json");
  CHECK(unsub_res->status == 200);
  auto unsub_again = client.Post("/unsubscribe", R"({"subscriptionId":")" + sub_id + R"("})",
                                 "application/json");
  CHECK(unsub_again->status == 400);
  DocValue err = parse_doc(unsub_again->body);
  CHECK(err.string_or("error", "") == "UnknownSubscription");

  server.stop();
}

TEST_CASE("http fallback: malformed publish reports the domain error") {
  TransportRig rig;
  HttpServer server(rig.broker, "127.0.0.1", 0);
  REQUIRE(server.start());
  httplib::Client client("127.0.0.1", server.port());
  auto res = client.Post("/publish", R"({"messageId": 42})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(parse_doc(res->body).string_or("error", "") == "ParseError");
  server.stop();
}

TEST_CASE("stream transport: attach receives live frames; fallback queue stays empty") {
  TransportRig rig;
  rig.agent("planner-agent-001");
  rig.agent("weather-agent-001");
  StreamServer server(rig.broker, "127.0.0.1", 0);
  REQUIRE(server.start());

  int subscriber_fd = connect_to(server.port());
  DocValue ack = roundtrip_frame(
      subscriber_fd, DocValue(DocMap{{"op", DocValue("subscribe")},
                                     {"subscriber", DocValue("planner-agent-001")},
                                     {"pattern", DocValue("flight-disruption")}}));
  CHECK(ack.string_or("op", "") == "ack");
  ack = roundtrip_frame(subscriber_fd,
                        DocValue(DocMap{{"op", DocValue("attach")},
                                        {"subscriber", DocValue("planner-agent-001")}}));
  CHECK(ack.string_or("op", "") == "ack");

  int publisher_fd = connect_to(server.port());
  MessageEnvelope env = rig.make("weather-agent-001", "flight-disruption");
  DocValue pub_ack = roundtrip_frame(
      publisher_fd,
      DocValue(DocMap{{"op", DocValue("publish")}, {"envelope", env.to_doc()}}));
  CHECK(pub_ack.string_or("op", "") == "ack");
  REQUIRE(pub_ack.find("receipts")->as_array().size() == 1);
  CHECK(pub_ack.find("receipts")->as_array()[0].string_or("status", "") == "Delivered");

  std::string payload;
  REQUIRE(read_frame(subscriber_fd, payload));
  DocValue deliver = parse_doc(payload);
  CHECK(deliver.string_or("op", "") == "deliver");
  CHECK(MessageEnvelope::from_doc(*deliver.find("envelope")).message_id == env.message_id);

  // stream already drained the queue: fallback poll sees nothing
  CHECK(rig.broker.fallback_poll(AgentId::parse("planner-agent-001"), 0).messages.empty());

  // bad op surfaces as an error frame
  DocValue err = roundtrip_frame(publisher_fd, DocValue(DocMap{{"op", DocValue("warp")}}));
  CHECK(err.string_or("op", "") == "error");

  ::close(subscriber_fd);
  ::close(publisher_fd);
  server.stop();
}
