#pragma once

// Reference implementations used only by the tests. Each one restates a
// rule directly and favours obviousness over speed; none of them calls the
// engine code it is compared with.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaze/arbiter.hpp"
#include "gaze/auth.hpp"
#include "gaze/core.hpp"

namespace oracle {

using gaze::GazeSample;
using gaze::TimeMs;

// Dispersion of samples[first..last], recomputed from scratch.
inline double window_dispersion(std::span<const GazeSample> s, std::size_t first, std::size_t last) {
  double min_x = s[first].x, max_x = s[first].x, min_y = s[first].y, max_y = s[first].y;
  for (std::size_t k = first + 1; k <= last; ++k) {
    min_x = std::min(min_x, s[k].x);
    max_x = std::max(max_x, s[k].x);
    min_y = std::min(min_y, s[k].y);
    max_y = std::max(max_y, s[k].y);
  }
  return (max_x - min_x) + (max_y - min_y);
}

// Sliding-window I-DT straight from the textbook description, over the
// whole stream: a window may never contain an invalid sample.
inline std::vector<gaze::Fixation> fixations(std::span<const GazeSample> s, double max_dispersion, TimeMs min_duration) {
  std::vector<gaze::Fixation> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!s[i].valid) {
      ++i;
      continue;
    }
    std::optional<std::size_t> j;
    std::size_t blocked = 0;
    for (std::size_t k = i; k < s.size(); ++k) {
      if (!s[k].valid) {
        blocked = k;
        break;
      }
      if (s[k].t_ms - s[i].t_ms >= min_duration) {
        j = k;
        break;
      }
    }
    if (!j) {
      i = blocked > i ? blocked + 1 : i + 1;
      continue;
    }
    if (window_dispersion(s, i, *j) > max_dispersion) {
      ++i;
      continue;
    }
    std::size_t end = *j;
    while (end + 1 < s.size() && s[end + 1].valid && window_dispersion(s, i, end + 1) <= max_dispersion) ++end;
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = i; k <= end; ++k) {
      sx += s[k].x;
      sy += s[k].y;
    }
    const double n = static_cast<double>(end - i + 1);
    out.push_back({sx / n, sy / n, s[i].t_ms, s[end].t_ms, static_cast<int>(end - i + 1)});
    i = end + 1;
  }
  return out;
}

// Trigger-trace simulator for the arbiter rules. `gaze_at(t)` must return
// the gaze in effect at the trigger instant t. Writes into `out` (capacity
// at least 2 actions per press) and returns the action count.
struct Press {
  TimeMs press;
  std::optional<TimeMs> release;
};

template <typename GazeAt>
std::size_t arbiter_trace(std::span<const Press> presses, const gaze::ArbiterConfig& cfg, GazeAt&& gaze_at,
                          gaze::PointerAction* out) {
  using gaze::ActionKind;
  const TimeMs W = cfg.double_click_window_ms;
  const TimeMs H = cfg.hold_threshold_ms;
  std::size_t n = 0;
  bool pending = false;
  TimeMs pending_release = 0;
  gaze::Point pending_at{};
  const auto emit = [&](ActionKind kind, gaze::Point p, TimeMs t) { out[n++] = {kind, p.x, p.y, t}; };

  for (const Press& k : presses) {
    if (pending && k.press - pending_release > W) {
      emit(ActionKind::Click, pending_at, pending_release + W);
      pending = false;
    }
    const bool short_press = k.release && *k.release - k.press < H;
    if (short_press) {
      if (pending) {
        emit(ActionKind::DoubleClick, gaze_at(*k.release), *k.release);
        pending = false;
      } else {
        pending = true;
        pending_release = *k.release;
        pending_at = gaze_at(*k.release);
      }
      continue;
    }
    if (pending) {
      emit(ActionKind::Click, pending_at, k.press + H);
      pending = false;
    }
    emit(ActionKind::HoldStart, gaze_at(k.press), k.press + H);
    if (k.release) emit(ActionKind::HoldEnd, gaze_at(*k.release), *k.release);
  }
  if (pending) emit(ActionKind::Click, pending_at, pending_release + W);
  return n;
}

// Epoch matcher restated from its definition: per shape, the smallest mean
// distance over the lag grid; lowest index wins ties.
struct EpochScore {
  std::size_t winner = 0;
  std::vector<double> distances;
};

inline EpochScore epoch_score(std::span<const GazeSample> samples, std::span<const gaze::ShapeTrajectory> shapes,
                              gaze::EpochWindow window, std::span<const TimeMs> lags) {
  EpochScore r;
  for (const auto& shape : shapes) {
    double best = INFINITY;
    for (const TimeMs lag : lags) {
      double total = 0.0;
      int count = 0;
      for (const auto& s : samples) {
        if (!s.valid || s.t_ms < window.start_ms || s.t_ms >= window.end_ms) continue;
        const gaze::Point p = gaze::trajectory_position(shape, static_cast<double>(s.t_ms - lag));
        total += std::hypot(s.x - p.x, s.y - p.y);
        ++count;
      }
      best = std::min(best, total / count);
    }
    r.distances.push_back(best);
  }
  for (std::size_t k = 1; k < r.distances.size(); ++k) {
    if (r.distances[k] < r.distances[r.winner]) r.winner = k;
  }
  return r;
}

// WPM, KSPC and RBA from their textbook formulas.
struct TextEntry {
  double wpm, kspc, rba;
};

inline TextEntry text_entry(std::size_t characters, std::size_t keystrokes, std::size_t backspaces, double seconds) {
  return {(static_cast<double>(characters) - 1.0) / seconds * 60.0 / 5.0,
          static_cast<double>(keystrokes) / static_cast<double>(characters),
          static_cast<double>(backspaces) / static_cast<double>(keystrokes)};
}

}  // namespace oracle
