#pragma once

#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "modx/bus/broker.h"

namespace httplib {
class Server;
}

namespace modx::bus {

/// Request-response fallback transport:
///   POST /publish      envelope JSON -> {"receipts": [...]}
///   POST /subscribe    {"subscriber","pattern"} -> subscription JSON
///   POST /unsubscribe  {"subscriptionId"} -> {"ok": true}
///   GET  /poll?subscriber=...&cursor=... -> {"messages": [...], "cursor": N}
/// plus optional hook-backed endpoints POST /register and POST /discover
/// when the hosting process wires in a capability registry.
class HttpServer {
 public:
  struct Hooks {
    std::function<core::DocValue(const core::DocValue&)> register_capability;
    std::function<core::DocValue(const core::DocValue&)> discover;
  };

  HttpServer(Broker& broker, std::string host, int port, Hooks hooks = {});
  ~HttpServer();

  bool start();
  void stop();
  int port() const { return port_; }

 private:
  Broker& broker_;
  std::string host_;
  int port_;
  Hooks hooks_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace modx::bus
