#include "gaze/websocket.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>

#include "gaze/error.hpp"
#include "gaze/textio.hpp"

namespace gaze::ws {

namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string accept_key(std::string_view client_key) {
  const std::string input = std::string(client_key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
  unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int len = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<const char*>(encoded), static_cast<std::size_t>(len));
}

std::optional<std::string> upgrade_key(std::string_view request_head) {
  const auto lines = textio::split_lines(request_head);
  if (lines.empty() || !lines[0].starts_with("GET ")) return std::nullopt;
  bool upgrade = false;
  bool connection = false;
  std::optional<std::string> key;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto colon = lines[i].find(':');
    if (colon == std::string_view::npos) continue;
    const std::string name = lower(trim(lines[i].substr(0, colon)));
    const std::string_view value = trim(lines[i].substr(colon + 1));
    if (name == "upgrade" && lower(value) == "websocket") upgrade = true;
    if (name == "connection" && lower(value).find("upgrade") != std::string::npos) connection = true;
    if (name == "sec-websocket-key" && !value.empty()) key = std::string(value);
  }
  if (!upgrade || !connection) return std::nullopt;
  return key;
}

std::string upgrade_response(std::string_view client_key) {
  return "HTTP/1.1 101 Switching Protocols\r\n"
         "Upgrade: websocket\r\n"
         "Connection: Upgrade\r\n"
         "Sec-WebSocket-Accept: " +
         accept_key(client_key) + "\r\n\r\n";
}

std::string encode_frame(std::uint8_t opcode, std::string_view payload, std::optional<std::uint32_t> mask_key,
                         bool fin) {
  std::string out;
  out.push_back(static_cast<char>((fin ? 0x80 : 0x00) | (opcode & 0x0F)));
  const std::uint8_t mask_bit = mask_key ? 0x80 : 0x00;
  const std::size_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>((n >> 8) & 0xFF));
    out.push_back(static_cast<char>(n & 0xFF));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> shift) & 0xFF));
  }
  if (!mask_key) {
    out.append(payload);
    return out;
  }
  const std::uint8_t mask[4] = {static_cast<std::uint8_t>(*mask_key >> 24), static_cast<std::uint8_t>(*mask_key >> 16),
                                static_cast<std::uint8_t>(*mask_key >> 8), static_cast<std::uint8_t>(*mask_key)};
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(mask[i]));
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>(payload[i] ^ mask[i % 4]));
  return out;
}

std::optional<Frame> FrameParser::next() {
  if (buffer_.size() < 2) return std::nullopt;
  const auto b0 = static_cast<std::uint8_t>(buffer_[0]);
  const auto b1 = static_cast<std::uint8_t>(buffer_[1]);
  std::size_t pos = 2;
  std::uint64_t len = b1 & 0x7F;
  if (len == 126) {
    if (buffer_.size() < 4) return std::nullopt;
    len = (static_cast<std::uint64_t>(static_cast<std::uint8_t>(buffer_[2])) << 8) |
          static_cast<std::uint8_t>(buffer_[3]);
    pos = 4;
  } else if (len == 127) {
    if (buffer_.size() < 10) return std::nullopt;
    len = 0;
    for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<std::uint8_t>(buffer_[2 + i]);
    pos = 10;
  }
  if (len > max_payload_) throw Error(ErrorCode::ProtocolViolation, "websocket frame exceeds size limit");
  const bool masked = (b1 & 0x80) != 0;
  const std::size_t header = pos + (masked ? 4 : 0);
  if (buffer_.size() < header + len) return std::nullopt;

  Frame frame;
  frame.fin = (b0 & 0x80) != 0;
  frame.opcode = b0 & 0x0F;
  frame.payload = buffer_.substr(header, static_cast<std::size_t>(len));
  if (masked) {
    for (std::size_t i = 0; i < frame.payload.size(); ++i) {
      frame.payload[i] = static_cast<char>(frame.payload[i] ^ buffer_[pos + (i % 4)]);
    }
  }
  buffer_.erase(0, header + static_cast<std::size_t>(len));
  return frame;
}

}  // namespace gaze::ws
