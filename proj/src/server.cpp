#include "gaze/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "gaze/error.hpp"
#include "gaze/websocket.hpp"

namespace gaze::service {

namespace {

bool write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// Empty result means the peer closed or the socket failed.
std::string read_some(int fd) {
  char buf[8192];
  for (;;) {
    const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return {};
    return std::string(buf, static_cast<std::size_t>(n));
  }
}

sockaddr_in make_address(const std::string& host, int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid IPv4 address '" + host + "'");
  }
  return addr;
}

}  // namespace

std::string encode_frame(std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) throw Error(ErrorCode::InvalidArgument, "frame payload too large");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out.append(payload);
  return out;
}

std::optional<std::string> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<std::uint8_t>(buffer_[static_cast<std::size_t>(i)]);
  if (n > kMaxFrameBytes) throw Error(ErrorCode::ProtocolViolation, "frame exceeds size limit");
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  std::string payload = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  return payload;
}

int port_from_env() {
  if (const char* env = std::getenv("PURSUIT_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return kDefaultPort;
}

Server::Server(Service& service, ServerOptions options) : service_(service), options_(std::move(options)) {}

Server::~Server() { stop(); }

void Server::start() {
  if (running_) return;
  const sockaddr_in addr = make_address(options_.host, options_.port);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::IoError, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::IoError, "cannot listen on " + options_.host + ":" + std::to_string(options_.port) +
                                        ": " + reason);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(clients_mutex_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    threads.swap(client_threads_);
  }
  for (auto& t : threads) {
    if (t.joinable()) t.join();
  }
}

void Server::wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (!running_) break;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(clients_mutex_);
    if (!running_) {
      ::close(fd);
      break;
    }
    client_fds_.push_back(fd);
    client_threads_.emplace_back([this, fd] { serve_client(fd); });
  }
}

void Server::serve_client(int fd) {
  std::string pending;
  while (pending.size() < 4) {
    std::string chunk = read_some(fd);
    if (chunk.empty()) break;
    pending += chunk;
  }
  if (pending.starts_with("GET ")) {
    serve_websocket(fd, std::move(pending));
  } else if (!pending.empty()) {
    serve_framed(fd, std::move(pending));
  }
  std::lock_guard lock(clients_mutex_);
  std::erase(client_fds_, fd);
  ::close(fd);
}

void Server::serve_framed(int fd, std::string pending) {
  FrameDecoder decoder;
  decoder.feed(pending);
  for (;;) {
    try {
      while (auto payload = decoder.next()) {
        for (const auto& reply : service_.handle_frame(*payload)) {
          if (!write_all(fd, encode_frame(reply))) return;
        }
      }
    } catch (const Error& e) {
      write_all(fd, encode_frame(error_message("ProtocolViolation", e.what()).dump()));
      return;
    }
    const std::string chunk = read_some(fd);
    if (chunk.empty()) return;
    decoder.feed(chunk);
  }
}

void Server::serve_websocket(int fd, std::string pending) {
  while (pending.find("\r\n\r\n") == std::string::npos) {
    if (pending.size() > 16384) return;
    std::string chunk = read_some(fd);
    if (chunk.empty()) return;
    pending += chunk;
  }
  const auto head_end = pending.find("\r\n\r\n") + 4;
  const auto key = ws::upgrade_key(std::string_view(pending).substr(0, head_end));
  if (!key) {
    write_all(fd, "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    return;
  }
  if (!write_all(fd, ws::upgrade_response(*key))) return;

  ws::FrameParser parser(kMaxFrameBytes);
  parser.feed(std::string_view(pending).substr(head_end));
  std::string message;
  for (;;) {
    try {
      while (auto frame = parser.next()) {
        switch (frame->opcode) {
          case ws::kPing:
            if (!write_all(fd, ws::encode_frame(ws::kPong, frame->payload))) return;
            continue;
          case ws::kPong:
            continue;
          case ws::kClose:
            write_all(fd, ws::encode_frame(ws::kClose, frame->payload.substr(0, 2)));
            return;
          default:
            break;
        }
        message += frame->payload;
        if (!frame->fin) continue;
        for (const auto& reply : service_.handle_frame(message)) {
          if (!write_all(fd, ws::encode_frame(ws::kText, reply))) return;
        }
        message.clear();
      }
    } catch (const Error&) {
      write_all(fd, ws::encode_frame(ws::kClose, std::string("\x03\xF1", 2)));  // 1009 message too big
      return;
    }
    const std::string chunk = read_some(fd);
    if (chunk.empty()) return;
    parser.feed(chunk);
  }
}

FramedClient::FramedClient(const std::string& host, int port) {
  const sockaddr_in addr = make_address(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(ErrorCode::IoError, std::string("socket: ") + std::strerror(errno));
  if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::IoError, "cannot connect to " + host + ":" + std::to_string(port) + ": " + reason);
  }
}

FramedClient::~FramedClient() {
  if (fd_ >= 0) ::close(fd_);
}

void FramedClient::send(std::string_view payload) { send_raw(encode_frame(payload)); }

void FramedClient::send_raw(std::string_view bytes) {
  if (!write_all(fd_, bytes)) throw Error(ErrorCode::IoError, "send failed");
}

std::string FramedClient::receive() {
  for (;;) {
    if (auto frame = decoder_.next()) return *frame;
    const std::string chunk = read_some(fd_);
    if (chunk.empty()) throw Error(ErrorCode::IoError, "connection closed");
    decoder_.feed(chunk);
  }
}

}  // namespace gaze::service
