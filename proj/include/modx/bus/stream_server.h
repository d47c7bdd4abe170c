#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "modx/bus/broker.h"

namespace modx::bus {

/// Persistent bidirectional stream transport: length-delimited UTF-8 JSON
/// frames (4-byte big-endian length prefix) over TCP. Clients send
/// {"op": "attach"|"subscribe"|"unsubscribe"|"publish", ...} frames; the
/// server pushes {"op": "deliver", "envelope": ...} frames to attached
/// subscribers and answers every client op with an ack or error frame.
class StreamServer {
 public:
  StreamServer(Broker& broker, std::string host, int port);
  ~StreamServer();

  bool start();
  void stop();
  int port() const { return port_; }

 private:
  struct Connection;
  void accept_loop();
  void serve(std::shared_ptr<Connection> conn);

  Broker& broker_;
  std::string host_;
  int port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex conns_mu_;
  std::vector<std::shared_ptr<Connection>> conns_;
};

/// Frame helpers shared with the test client.
bool write_frame(int fd, const std::string& payload);
bool read_frame(int fd, std::string& payload);

}  // namespace modx::bus
