#include "modx/bus/stream_server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "modx/core/canonical.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::bus {

using core::DocArray;
using core::DocMap;
using core::DocValue;
using core::Error;

bool write_frame(int fd, const std::string& payload) {
  std::uint32_t len = htonl(static_cast<std::uint32_t>(payload.size()));
  std::string framed(reinterpret_cast<const char*>(&len), 4);
  framed += payload;
  std::size_t sent = 0;
  while (sent < framed.size()) {
    ssize_t n = ::send(fd, framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

static bool read_exact(int fd, void* buf, std::size_t size) {
  std::size_t got = 0;
  while (got < size) {
    ssize_t n = ::recv(fd, static_cast<char*>(buf) + got, size - got, 0);
    if (n <= 0) return false;
    got += static_cast<std::size_t>(n);
  }
  return true;
}

bool read_frame(int fd, std::string& payload) {
  std::uint32_t len_be = 0;
  if (!read_exact(fd, &len_be, 4)) return false;
  std::uint32_t len = ntohl(len_be);
  if (len > (1u << 24)) return false;  // 16 MiB frame cap
  payload.resize(len);
  return read_exact(fd, payload.data(), len);
}

struct StreamServer::Connection {
  int fd = -1;
  std::mutex write_mu;
  std::optional<core::AgentId> attached_as;

  bool send(const DocValue& doc) {
    std::lock_guard<std::mutex> lock(write_mu);
    return write_frame(fd, core::canonicalize(doc));
  }
};

StreamServer::StreamServer(Broker& broker, std::string host, int port)
    : broker_(broker), host_(std::move(host)), port_(port) {}

StreamServer::~StreamServer() { stop(); }

bool StreamServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) return false;
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port_));
  if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) return false;
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) return false;
  if (::listen(listen_fd_, 16) != 0) return false;
  if (port_ == 0) {
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
  }
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  return true;
}

void StreamServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  {
    std::lock_guard<std::mutex> lock(conns_mu_);
    for (auto& conn : conns_) {
      ::shutdown(conn->fd, SHUT_RDWR);
    }
  }
  if (accept_thread_.joinable()) accept_thread_.join();
}

void StreamServer::accept_loop() {
  std::vector<std::thread> workers;
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    {
      std::lock_guard<std::mutex> lock(conns_mu_);
      conns_.push_back(conn);
    }
    workers.emplace_back([this, conn] { serve(conn); });
  }
  for (auto& w : workers) {
    if (w.joinable()) w.join();
  }
}

void StreamServer::serve(std::shared_ptr<Connection> conn) {
  std::string payload;
  while (running_ && read_frame(conn->fd, payload)) {
    DocValue reply;
    try {
      DocValue frame = core::parse_doc(payload);
      std::string op = frame.string_or("op", "");
      if (op == "attach") {
        core::AgentId agent = core::AgentId::parse(frame.string_or("subscriber", ""));
        conn->attached_as = agent;
        std::weak_ptr<Connection> weak = conn;
        broker_.attach(agent, [weak](const core::MessageEnvelope& env) {
          if (auto c = weak.lock()) {
            c->send(DocValue(
                DocMap{{"op", DocValue("deliver")}, {"envelope", env.to_doc()}}));
          }
        });
        reply = DocValue(DocMap{{"op", DocValue("ack")}, {"ok", DocValue(true)}});
      } else if (op == "subscribe") {
        Subscription sub =
            broker_.subscribe(core::AgentId::parse(frame.string_or("subscriber", "")),
                              frame.string_or("pattern", ""));
        reply = DocValue(DocMap{{"op", DocValue("ack")},
                                {"subscriptionId", DocValue(sub.subscription_id)}});
      } else if (op == "unsubscribe") {
        broker_.unsubscribe(frame.string_or("subscriptionId", ""));
        reply = DocValue(DocMap{{"op", DocValue("ack")}, {"ok", DocValue(true)}});
      } else if (op == "publish") {
        const DocValue* env_doc = frame.find("envelope");
        if (!env_doc) throw Error(core::ErrorCode::ParseError, "publish frame without envelope");
        auto receipts = broker_.publish(core::MessageEnvelope::from_doc(*env_doc));
        DocArray receipt_docs;
        for (const DeliveryReceipt& r : receipts) {
          receipt_docs.push_back(DocValue(DocMap{{"messageId", DocValue(r.message_id)},
                                                 {"subscriber", DocValue(r.subscriber.value)},
                                                 {"status", DocValue(to_string(r.status))},
                                                 {"attempt", DocValue(r.attempt)}}));
        }
        reply = DocValue(DocMap{{"op", DocValue("ack")},
                                {"receipts", DocValue(std::move(receipt_docs))}});
      } else {
        throw Error(core::ErrorCode::ParseError, "unknown op \"" + op + "\"");
      }
    } catch (const Error& e) {
      reply = DocValue(DocMap{{"op", DocValue("error")},
                              {"error", DocValue(core::error_name(e.code()))},
                              {"message", DocValue(e.what())}});
    } catch (const std::exception& e) {
      reply = DocValue(
          DocMap{{"op", DocValue("error")}, {"error", DocValue("Internal")},
                 {"message", DocValue(e.what())}});
    }
    if (!conn->send(reply)) break;
  }
  if (conn->attached_as) broker_.detach(*conn->attached_as);
  ::close(conn->fd);
}

}  // namespace modx::bus
