#pragma once

// Minimal RFC 6455 pieces for the browser-facing endpoint: upgrade
// handshake, frame encoding and incremental frame parsing.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gaze::ws {

enum Opcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

struct Frame {
  bool fin = true;
  std::uint8_t opcode = kText;
  std::string payload;
};

// base64(SHA-1(key + RFC 6455 GUID)).
std::string accept_key(std::string_view client_key);

// Sec-WebSocket-Key of a well-formed GET upgrade request, else nullopt.
std::optional<std::string> upgrade_key(std::string_view request_head);
std::string upgrade_response(std::string_view client_key);

// Server frames are unmasked; clients must mask (pass a mask key).
std::string encode_frame(std::uint8_t opcode, std::string_view payload,
                         std::optional<std::uint32_t> mask_key = std::nullopt, bool fin = true);

class FrameParser {
 public:
  explicit FrameParser(std::size_t max_payload = 16u << 20) : max_payload_(max_payload) {}

  void feed(std::string_view bytes) { buffer_.append(bytes); }
  // Next complete frame, unmasked. Throws gaze::Error(ProtocolViolation) on
  // oversize payloads.
  std::optional<Frame> next();

 private:
  std::string buffer_;
  std::size_t max_payload_;
};

}  // namespace gaze::ws
