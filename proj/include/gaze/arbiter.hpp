#pragma once

// Gaze + binary trigger fusion. The gaze point only aims; the trigger
// commits. Produces click, double-click, click-and-hold and
// hold-and-release actions at the point of regard.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaze/core.hpp"

namespace gaze {

enum class TriggerKind { Press, Release };

struct TriggerEvent {
  TimeMs t_ms = 0;
  TriggerKind kind = TriggerKind::Press;

  friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

using InputEvent = std::variant<GazeSample, TriggerEvent>;

inline TimeMs event_time(const InputEvent& e) {
  return std::visit([](const auto& v) { return v.t_ms; }, e);
}

enum class ActionKind { Click, DoubleClick, HoldStart, HoldEnd };

std::string_view action_kind_name(ActionKind kind) noexcept;

struct PointerAction {
  ActionKind kind = ActionKind::Click;
  double x = 0.0;
  double y = 0.0;
  TimeMs t_ms = 0;

  friend bool operator==(const PointerAction&, const PointerAction&) = default;
};

struct ArbiterConfig {
  TimeMs double_click_window_ms = 400;
  TimeMs hold_threshold_ms = 300;

  void validate() const;
};

// Event-serial state machine, one per session.
//
// A press held for hold_threshold_ms emits HoldStart at the threshold instant
// (coordinates of the gaze at press time); its release emits HoldEnd at the
// gaze current at release. A shorter press is a candidate click, located at
// the gaze current at its release. A candidate is promoted to DoubleClick when
// the next press starts no more than double_click_window_ms after its release
// and is itself short; otherwise it is emitted as Click once the window has
// passed (t = release + window), or at the moment the next press turns into a
// hold.
class Arbiter {
 public:
  explicit Arbiter(ArbiterConfig config = {});

  // Errors leave the state unchanged: NoGazeFix for a press before any
  // valid gaze sample, ProtocolViolation for double press, release without
  // press, or an event earlier than the previous one.
  void step(const GazeSample& sample, std::vector<PointerAction>& out);
  void step(const TriggerEvent& trigger, std::vector<PointerAction>& out);
  void step(const InputEvent& event, std::vector<PointerAction>& out);
  std::vector<PointerAction> step(const InputEvent& event);

  // Fires every timer due at or before t without consuming an input.
  void advance_to(TimeMs t, std::vector<PointerAction>& out);

  // End of stream: a pending candidate click fires, an unreleased short
  // press resolves as a hold.
  void finish(std::vector<PointerAction>& out);

  const ArbiterConfig& config() const noexcept { return config_; }
  bool pressed() const noexcept { return pressed_; }
  bool holding() const noexcept { return holding_; }
  std::optional<Point> gaze() const noexcept { return gaze_; }

 private:
  struct PendingClick {
    TimeMs release_ms;
    Point at;
  };

  void check_time(TimeMs t) const;

  ArbiterConfig config_;
  TimeMs now_ = 0;
  bool started_ = false;
  std::optional<Point> gaze_;
  bool pressed_ = false;
  bool holding_ = false;
  TimeMs press_ms_ = 0;
  Point press_at_{};
  std::optional<PendingClick> pending_;
};

struct Target {
  std::string id;
  Rect rect;
};

// Topmost (last listed) target containing p, boundary-inclusive.
std::optional<std::string> resolve_target(Point p, std::span<const Target> targets);

}  // namespace gaze
