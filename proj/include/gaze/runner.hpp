#pragma once

// Drives one replay file through a session mode, either directly against
// the module APIs or through the session service, producing the same event
// objects in the same order.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gaze/arbiter.hpp"
#include "gaze/error.hpp"
#include "gaze/auth.hpp"
#include "gaze/gesture.hpp"
#include "gaze/replay.hpp"
#include "gaze/service.hpp"
#include "gaze/typing.hpp"

namespace gaze {

enum class Mode { Arbiter, Gesture, Auth, Typing };

std::string_view mode_name(Mode mode) noexcept;
Mode parse_mode(std::string_view name);

struct RunOptions {
  Mode mode = Mode::Arbiter;
  ArbiterConfig arbiter;
  StoreSnapshot store;  // null means the bundled templates
  PathSource source = PathSource::FixationCentroids;
  FixationParams fixation;
  AuthConfig auth;
  std::uint64_t seed = 0;
  std::vector<std::string> password;  // empty runs an enrollment
  KeyboardLayout layout = KeyboardLayout::default_qwerty();
  std::string phrase;
};

// The start_session message equivalent to the options.
nlohmann::json start_session_message(const RunOptions& options);

// Engine events followed by the end-of-session events, without session ids
// or acknowledgements. Engine errors propagate as gaze::Error.
std::vector<nlohmann::json> run_replay_direct(const Replay& replay, const RunOptions& options);

// Same stream obtained by sending every record to the service. An error
// reply is raised as gaze::Error carrying the reported code.
std::vector<nlohmann::json> run_replay_service(service::Service& service, const Replay& replay,
                                               const RunOptions& options);

// One compact JSON object per line.
std::string format_event_log(const std::vector<nlohmann::json>& events);

ErrorCode parse_error_code(std::string_view name);

}  // namespace gaze
