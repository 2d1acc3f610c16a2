#pragma once

// Batch drivers behind the command-line tool: training from a paths file,
// recognition reports, authentication and typing simulations, benchmarks
// and replay generation. Reports are deterministic text for fixed inputs
// (bench timings excepted).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/auth.hpp"
#include "gaze/gesture.hpp"
#include "gaze/replay.hpp"
#include "gaze/runner.hpp"
#include "gaze/synth.hpp"
#include "gaze/typing.hpp"

namespace gaze::tools {

// Paths file: one stroke per line, `path <name> <action_id> x1 y1 x2 y2 ...`;
// blank lines and lines starting with '#' are skipped.
struct PathEntry {
  std::string name;
  std::string action_id;
  std::vector<Point> points;
};

std::vector<PathEntry> parse_paths(std::string_view text);
std::string serialize_paths(const std::vector<PathEntry>& entries);

// Trains one template per distinct name (first-appearance order) into
// `store`. DuplicateName when the store already has the name,
// InvalidArgument when one name is bound to two actions.
void train_from_paths(TemplateStore& store, const std::vector<PathEntry>& entries);

// One line per captured gesture of the replay. EmptyStore for an empty store.
std::string recognize_report(const TemplateStore& store, const Replay& replay, PathSource source,
                             const FixationParams& fixation = {});

struct AuthSimOptions {
  AuthConfig config;
  std::uint64_t seed_base = 1;
  int seeds = 100;
  double noise_px = 15.0;
  TimeMs latency_ms = 0;
  double rate_hz = 60.0;
  double offset_px = 30.0;  // calibration offset of the disturbed condition
  std::string transcript_dir;  // empty: no transcript files
};

struct AuthConditionStats {
  std::string name;
  int sessions = 0;
  int accepted = 0;
  int epochs = 0;
  int epochs_correct = 0;

  double epoch_accuracy() const noexcept { return epochs ? static_cast<double>(epochs_correct) / epochs : 0.0; }
  double accept_rate() const noexcept { return sessions ? static_cast<double>(accepted) / sessions : 0.0; }
};

struct AuthSimResult {
  AuthConditionStats calibrated;
  AuthConditionStats disturbed;
};

// Per seed: trajectories and a random password from the seed, a noisy
// pursuit of that password, scored with true calibration and again after a
// calibration offset of offset_px in a seed-chosen direction.
AuthSimResult auth_sim(const AuthSimOptions& options);
std::string auth_sim_report(const AuthSimOptions& options, const AuthSimResult& result);

struct TypeSimOptions {
  TypistModel typist;
  RbaBasis rba_basis = RbaBasis::Keystrokes;
};

struct TypeSimRow {
  std::string phrase;
  TypingMetrics metrics;
  bool completed = false;
};

std::vector<TypeSimRow> type_sim(const KeyboardLayout& layout, const std::vector<std::string>& phrases,
                                 const TypeSimOptions& options);
std::string type_sim_report(const std::vector<TypeSimRow>& rows, const TypeSimOptions& options);

std::vector<std::string> parse_phrases(std::string_view text);

struct BenchOptions {
  std::uint64_t seed = 1;
  int gestures = 2000;
  int epochs = 400;
};

std::string bench_report(const BenchOptions& options);

struct SynthOptions {
  Mode mode = Mode::Gesture;
  std::uint64_t seed = 1;
  double noise_px = 0.0;
  double rate_hz = 60.0;
  AuthConfig auth;
  std::vector<std::string> password;  // auth: pursued shapes, random when empty
  std::string phrase = "hello world";
  KeyboardLayout layout = KeyboardLayout::default_qwerty();
  int count = 8;  // gestures or arbiter presses
};

struct SynthResult {
  Replay replay;
  std::string description;  // e.g. the gesture order or pursued password
};

SynthResult synth_replay(const SynthOptions& options);

}  // namespace gaze::tools
