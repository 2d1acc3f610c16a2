#pragma once

// Seeded synthetic gaze: shape followers, gesture tracers and a closed-loop
// typist. All generators are pure functions of their inputs and seed (see
// gaze::Rng for the generator and Gaussian transform).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaze/auth.hpp"
#include "gaze/gesture.hpp"
#include "gaze/typing.hpp"

namespace gaze {

struct NoiseModel {
  double sigma_px = 0.0;  // per-axis Gaussian
  TimeMs latency_ms = 0;
  std::uint64_t seed = 0;
};

// t_k = floor(k * 1000 / rate_hz) for every t_k < duration_ms.
std::vector<TimeMs> sample_times(TimeMs duration_ms, double rate_hz);

// Samples at shape_position(t - latency) plus noise; rate_hz in [30, 300].
std::vector<GazeSample> synth_follow(const ShapeTrajectory& traj, TimeMs duration_ms, double rate_hz,
                                     const NoiseModel& noise);

// Follower of a whole authentication session: during epoch i (and the gap
// before it) the gaze pursues the shape named by pursued[i].
std::vector<GazeSample> synth_pursuit(std::span<const ShapeTrajectory> trajectories, const AuthConfig& config,
                                      std::span<const std::string> pursued, double rate_hz,
                                      const NoiseModel& noise);

// Template points mapped to origin + point * scale_px, with per-point noise.
GesturePath synth_gesture(const GestureTemplate& tpl, double scale_px, Point origin, const NoiseModel& noise);

struct GestureTraceOptions {
  double speed_px_s = 250.0;
  double rate_hz = 60.0;
  TimeMs dwell_ms = 200;
  TimeMs start_ms = 0;
};

// Gaze trace drawing a screen-space path at constant speed, with a dwell at
// both ends, framed by a trigger press and release.
std::vector<InputEvent> synth_gesture_trace(std::span<const Point> screen_path, const GestureTraceOptions& options,
                                            const NoiseModel& noise);

struct TypistModel {
  TimeMs keystroke_interval_ms = 900;
  TimeMs sample_interval_ms = 20;
  TimeMs press_duration_ms = 100;
  double sigma_px = 0.0;
  double error_rate = 0.0;  // chance of deliberately aiming at a wrong letter
  std::uint64_t seed = 1;
};

struct TypistRun {
  std::vector<InputEvent> events;
  TypingSession session;
  bool completed = false;  // transcribed == phrase when the typist stopped
};

// Closed-loop typist: looks at the next needed key (Backspace after an
// error), presses, and reacts to the resulting text. Gives up after
// 4 * |phrase| + 10 keystrokes.
TypistRun synth_typist(const KeyboardLayout& layout, const std::string& phrase, const TypistModel& model);

}  // namespace gaze
