#include "modx/bus/http_server.h"

#include <httplib.h>

#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::bus {

using core::DocArray;
using core::DocMap;
using core::DocValue;
using core::Error;

namespace {

DocValue receipt_doc(const DeliveryReceipt& receipt) {
  return DocValue(DocMap{{"messageId", DocValue(receipt.message_id)},
                         {"subscriber", DocValue(receipt.subscriber.value)},
                         {"status", DocValue(to_string(receipt.status))},
                         {"attempt", DocValue(receipt.attempt)}});
}

void reply_json(httplib::Response& res, int status, const DocValue& doc) {
  res.status = status;
  res.set_content(core::pretty_print(doc), "application/json");
}

void reply_error(httplib::Response& res, const Error& e) {
  reply_json(res, 400,
             DocValue(DocMap{{"error", DocValue(core::error_name(e.code()))},
                             {"message", DocValue(e.what())}}));
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    reply_error(res, e);
  } catch (const std::exception& e) {
    reply_json(res, 500,
               DocValue(DocMap{{"error", DocValue("Internal")}, {"message", DocValue(e.what())}}));
  }
}

}  // namespace

HttpServer::HttpServer(Broker& broker, std::string host, int port, Hooks hooks)
    : broker_(broker), host_(std::move(host)), port_(port), hooks_(std::move(hooks)),
      server_(std::make_unique<httplib::Server>()) {}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::start() {
  server_->Post("/publish", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto env = core::MessageEnvelope::from_doc(core::parse_doc(req.body));
      DocArray receipts;
      for (const DeliveryReceipt& r : broker_.publish(env)) receipts.push_back(receipt_doc(r));
      reply_json(res, 200, DocValue(DocMap{{"receipts", DocValue(std::move(receipts))}}));
    });
  });

  server_->Post("/subscribe", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      DocValue body = core::parse_doc(req.body);
      Subscription sub = broker_.subscribe(core::AgentId::parse(body.string_or("subscriber", "")),
                                           body.string_or("pattern", ""));
      reply_json(res, 200,
                 DocValue(DocMap{{"subscriptionId", DocValue(sub.subscription_id)},
                                 {"subscriber", DocValue(sub.subscriber.value)},
                                 {"pattern", DocValue(sub.pattern.str())},
                                 {"createdAt", DocValue(core::to_iso8601(sub.created_at))}}));
    });
  });

  server_->Post("/unsubscribe", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      DocValue body = core::parse_doc(req.body);
      broker_.unsubscribe(body.string_or("subscriptionId", ""));
      reply_json(res, 200, DocValue(DocMap{{"ok", DocValue(true)}}));
    });
  });

  server_->Get("/poll", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string subscriber = req.get_param_value("subscriber");
      std::uint64_t cursor = 0;
      if (req.has_param("cursor")) cursor = std::stoull(req.get_param_value("cursor"));
      Broker::PollResult result =
          broker_.fallback_poll(core::AgentId::parse(subscriber), cursor);
      DocArray messages;
      for (const core::MessageEnvelope& env : result.messages) messages.push_back(env.to_doc());
      reply_json(res, 200,
                 DocValue(DocMap{{"messages", DocValue(std::move(messages))},
                                 {"cursor", DocValue(static_cast<double>(result.cursor))}}));
    });
  });

  if (hooks_.register_capability) {
    server_->Post("/register", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res,
              [&] { reply_json(res, 200, hooks_.register_capability(core::parse_doc(req.body))); });
    });
  }
  if (hooks_.discover) {
    server_->Post("/discover", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply_json(res, 200, hooks_.discover(core::parse_doc(req.body))); });
    });
  }

  if (port_ == 0) {
    port_ = server_->bind_to_any_port(host_);
    if (port_ < 0) return false;
    thread_ = std::thread([this] { server_->listen_after_bind(); });
  } else {
    if (!server_->bind_to_port(host_, port_)) return false;
    thread_ = std::thread([this] { server_->listen_after_bind(); });
  }
  server_->wait_until_ready();
  return true;
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace modx::bus
