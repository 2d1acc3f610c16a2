#pragma once

// Replay file: the shared on-disk stand-in for an eye tracker plus trigger.
//
//   gaze 1 <screen_w> <screen_h> <rate_hz>
//   s <t_ms> <x> <y> <0|1>
//   t <t_ms> <P|R>
//
// Records are in time order; sample timestamps strictly increase and trigger
// markers alternate P, R, P, ...

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/arbiter.hpp"

namespace gaze {

struct ReplayRecord {
  enum class Kind { Sample, Trigger };

  Kind kind = Kind::Sample;
  TimeMs t_ms = 0;
  double x = 0.0;
  double y = 0.0;
  bool valid = true;
  TriggerKind trigger = TriggerKind::Press;

  static ReplayRecord sample(const GazeSample& s) {
    return {Kind::Sample, s.t_ms, s.x, s.y, s.valid, TriggerKind::Press};
  }
  static ReplayRecord marker(TimeMs t, TriggerKind k) { return {Kind::Trigger, t, 0.0, 0.0, true, k}; }

  InputEvent event() const;
  friend bool operator==(const ReplayRecord&, const ReplayRecord&) = default;
};

struct Replay {
  ScreenSize screen{};
  double rate_hz = 60.0;
  std::vector<ReplayRecord> records;

  // Throws ParseError naming the first offending record (1-based line).
  void validate() const;

  std::vector<InputEvent> events() const;
  std::vector<GazeSample> samples() const;

  std::string serialize() const;
  static Replay parse(std::string_view text);
  static Replay load(const std::string& path);
  void save(const std::string& path) const;

  static Replay from_events(std::span<const InputEvent> events, ScreenSize screen = {},
                            double rate_hz = 60.0);
};

}  // namespace gaze
