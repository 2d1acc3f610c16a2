#include "gaze/arbiter.hpp"

#include <string>

#include "gaze/error.hpp"

namespace gaze {

std::string_view action_kind_name(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::Click: return "Click";
    case ActionKind::DoubleClick: return "DoubleClick";
    case ActionKind::HoldStart: return "HoldStart";
    case ActionKind::HoldEnd: return "HoldEnd";
  }
  return "Unknown";
}

void ArbiterConfig::validate() const {
  if (double_click_window_ms <= 0 || hold_threshold_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "arbiter timing constants must be positive");
  }
}

Arbiter::Arbiter(ArbiterConfig config) : config_(config) { config_.validate(); }

void Arbiter::check_time(TimeMs t) const {
  if (started_ && t < now_) {
    throw Error(ErrorCode::ProtocolViolation,
                "event at t=" + std::to_string(t) + " arrived after t=" +
                    std::to_string(now_));
  }
}

void Arbiter::advance_to(TimeMs t, std::vector<PointerAction>& out) {
  if (pressed_ && !holding_ && t >= press_ms_ + config_.hold_threshold_ms) {
    const TimeMs at = press_ms_ + config_.hold_threshold_ms;
    if (pending_) {
      out.push_back({ActionKind::Click, pending_->at.x, pending_->at.y, at});
      pending_.reset();
    }
    out.push_back({ActionKind::HoldStart, press_at_.x, press_at_.y, at});
    holding_ = true;
  }
  if (!pressed_ && pending_ &&
      t > pending_->release_ms + config_.double_click_window_ms) {
    out.push_back({ActionKind::Click, pending_->at.x, pending_->at.y,
                   pending_->release_ms + config_.double_click_window_ms});
    pending_.reset();
  }
  if (!started_ || t > now_) now_ = t;
  started_ = true;
}

void Arbiter::step(const GazeSample& sample, std::vector<PointerAction>& out) {
  check_time(sample.t_ms);
  advance_to(sample.t_ms, out);
  if (sample.valid) gaze_ = sample.point();
}

void Arbiter::step(const TriggerEvent& trigger, std::vector<PointerAction>& out) {
  check_time(trigger.t_ms);
  if (trigger.kind == TriggerKind::Press) {
    if (!gaze_) throw Error(ErrorCode::NoGazeFix, "trigger press before any valid gaze sample");
    if (pressed_) throw Error(ErrorCode::ProtocolViolation, "press while already pressed");
  } else if (!pressed_) {
    throw Error(ErrorCode::ProtocolViolation, "release without a press");
  }

  advance_to(trigger.t_ms, out);

  if (trigger.kind == TriggerKind::Press) {
    pressed_ = true;
    holding_ = false;
    press_ms_ = trigger.t_ms;
    press_at_ = *gaze_;
    return;
  }

  pressed_ = false;
  if (holding_) {
    holding_ = false;
    out.push_back({ActionKind::HoldEnd, gaze_->x, gaze_->y, trigger.t_ms});
  } else if (pending_) {
    // The press began inside the pending click's window.
    out.push_back({ActionKind::DoubleClick, gaze_->x, gaze_->y, trigger.t_ms});
    pending_.reset();
  } else {
    pending_ = PendingClick{trigger.t_ms, *gaze_};
  }
}

void Arbiter::step(const InputEvent& event, std::vector<PointerAction>& out) {
  std::visit([&](const auto& e) { step(e, out); }, event);
}

std::vector<PointerAction> Arbiter::step(const InputEvent& event) {
  std::vector<PointerAction> out;
  step(event, out);
  return out;
}

void Arbiter::finish(std::vector<PointerAction>& out) {
  if (pressed_ && !holding_) {
    advance_to(press_ms_ + config_.hold_threshold_ms, out);
  }
  if (!pressed_ && pending_) {
    advance_to(pending_->release_ms + config_.double_click_window_ms + 1, out);
  }
}

std::optional<std::string> resolve_target(Point p, std::span<const Target> targets) {
  for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
    if (it->rect.contains(p)) return it->id;
  }
  return std::nullopt;
}

}  // namespace gaze
