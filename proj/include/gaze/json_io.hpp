#pragma once

// JSON shapes of engine outputs, shared by the session service and the
// direct replay runner so that both emit identical event objects.

#include <json.hpp>

#include "gaze/arbiter.hpp"
#include "gaze/auth.hpp"
#include "gaze/gesture.hpp"
#include "gaze/typing.hpp"

namespace gaze::json_io {

using Json = nlohmann::json;

Json action_event(const PointerAction& action);

// index counts captured gestures from 0; result empty when rejected.
Json recognition_event(int index, TimeMs t_ms, const std::optional<RecognitionResult>& result,
                       std::string_view reject_reason = {});
Json gesture_captured_event(int index, TimeMs t_ms, std::size_t point_count);

Json epoch_event(const EpochResult& epoch, std::span<const ShapeTrajectory> trajectories);
Json keystroke_event(const Keystroke& stroke, const std::string& transcribed);

Json metrics_json(const TypingMetrics& m);
Json trajectory_json(const ShapeTrajectory& t);
Json auth_config_json(const AuthConfig& c);
Json layout_json(const KeyboardLayout& layout);
Json template_json(const GestureTemplate& t);

// Rebuilds a transcript from epoch_result events plus the final outcome, the
// way a client would.
std::string transcript_from_events(std::uint64_t seed, int password_length, int shape_count,
                                   const std::vector<Json>& epoch_events, std::string_view outcome,
                                   TimeMs wall_ms);

}  // namespace gaze::json_io
