#pragma once

// Local stream-socket transport for the session service.
//
// Native clients send length-delimited frames: a 4-byte big-endian payload
// length followed by one UTF-8 JSON object. A connection that opens with an
// HTTP `GET` is upgraded to WebSocket instead, and each text message carries
// one JSON object; that is the endpoint browsers use.

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gaze/service.hpp"

namespace gaze::service {

inline constexpr std::size_t kMaxFrameBytes = 16u << 20;

std::string encode_frame(std::string_view payload);

class FrameDecoder {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  // Throws gaze::Error(ProtocolViolation) for a frame above kMaxFrameBytes.
  std::optional<std::string> next();

 private:
  std::string buffer_;
};

// PURSUIT_PORT when set to a valid port, else kDefaultPort.
int port_from_env();

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;  // 0 picks an ephemeral port
};

class Server {
 public:
  Server(Service& service, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds, listens and starts the acceptor thread. Throws IoError.
  void start();
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

  int port() const noexcept { return port_; }

 private:
  void accept_loop();
  void serve_client(int fd);
  void serve_framed(int fd, std::string pending);
  void serve_websocket(int fd, std::string pending);

  Service& service_;
  ServerOptions options_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex clients_mutex_;
  std::vector<std::thread> client_threads_;
  std::vector<int> client_fds_;
};

// Blocking client for the framed protocol, used by tests and tools.
class FramedClient {
 public:
  FramedClient(const std::string& host, int port);
  ~FramedClient();

  FramedClient(const FramedClient&) = delete;
  FramedClient& operator=(const FramedClient&) = delete;

  void send(std::string_view payload);
  void send_raw(std::string_view bytes);
  std::string receive();

 private:
  int fd_ = -1;
  FrameDecoder decoder_;
};

}  // namespace gaze::service
