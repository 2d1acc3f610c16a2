#pragma once

// Message-level session service. Each client message is a JSON object with a
// mandatory "type"; handle() returns the replies and engine events it causes,
// in order. Transport (framing, sockets) lives in server.hpp.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gaze/gesture.hpp"

namespace gaze::service {

using Json = nlohmann::json;

inline constexpr int kProtocolVersion = 1;
inline constexpr int kDefaultPort = 7317;

class Service {
 public:
  // A null store starts the service with the bundled gesture templates.
  explicit Service(StoreSnapshot store = nullptr);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Thread-safe. Never throws for client mistakes: they become `error`
  // replies and leave the service state unchanged.
  std::vector<Json> handle(const Json& message);

  // Parses one frame payload (UTF-8 JSON) and returns serialized replies.
  std::vector<std::string> handle_frame(std::string_view payload);

  StoreSnapshot store() const;
  std::size_t session_count() const;

 private:
  struct Session;

  std::vector<Json> dispatch(const Json& message);
  std::vector<Json> start_session(const Json& message);
  std::vector<Json> route(const Json& message, const std::string& type);

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
  StoreSnapshot store_;
};

Json error_message(std::string_view code, std::string_view detail);

}  // namespace gaze::service
