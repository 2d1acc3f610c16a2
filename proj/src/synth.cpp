#include "gaze/synth.hpp"

#include <algorithm>
#include <cmath>

#include "gaze/error.hpp"
#include "gaze/rng.hpp"

namespace gaze {

std::vector<TimeMs> sample_times(TimeMs duration_ms, double rate_hz) {
  if (!(rate_hz >= 30.0 && rate_hz <= 300.0)) {
    throw Error(ErrorCode::InvalidArgument, "sampling rate must lie in [30, 300] Hz");
  }
  std::vector<TimeMs> out;
  for (std::int64_t k = 0;; ++k) {
    const auto t = static_cast<TimeMs>(std::floor(static_cast<double>(k) * 1000.0 / rate_hz));
    if (t >= duration_ms) break;
    out.push_back(t);
  }
  return out;
}

std::vector<GazeSample> synth_follow(const ShapeTrajectory& traj, TimeMs duration_ms, double rate_hz,
                                     const NoiseModel& noise) {
  Rng rng(noise.seed);
  std::vector<GazeSample> out;
  for (const TimeMs t : sample_times(duration_ms, rate_hz)) {
    const Point p = trajectory_position(traj, static_cast<double>(t - noise.latency_ms));
    GazeSample s{t, p.x, p.y, true};
    if (noise.sigma_px > 0.0) {
      s.x += rng.gaussian(noise.sigma_px);
      s.y += rng.gaussian(noise.sigma_px);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<GazeSample> synth_pursuit(std::span<const ShapeTrajectory> trajectories, const AuthConfig& config,
                                      std::span<const std::string> pursued, double rate_hz,
                                      const NoiseModel& noise) {
  if (static_cast<int>(pursued.size()) != config.password_length) {
    throw Error(ErrorCode::InvalidArgument, "pursuit plan must name one shape per epoch");
  }
  std::vector<const ShapeTrajectory*> plan;
  for (const auto& id : pursued) {
    auto it = std::find_if(trajectories.begin(), trajectories.end(),
                           [&](const ShapeTrajectory& t) { return t.shape_id == id; });
    if (it == trajectories.end()) throw Error(ErrorCode::InvalidArgument, "unknown shape id '" + id + "'");
    plan.push_back(&*it);
  }
  Rng rng(noise.seed);
  std::vector<GazeSample> out;
  int epoch = 0;
  for (const TimeMs t : sample_times(config.nominal_duration_ms(), rate_hz)) {
    while (epoch + 1 < config.password_length && t >= config.epoch_window(epoch).end_ms) ++epoch;
    const Point p = trajectory_position(*plan[static_cast<std::size_t>(epoch)],
                                        static_cast<double>(t - noise.latency_ms));
    GazeSample s{t, p.x, p.y, true};
    if (noise.sigma_px > 0.0) {
      s.x += rng.gaussian(noise.sigma_px);
      s.y += rng.gaussian(noise.sigma_px);
    }
    out.push_back(s);
  }
  return out;
}

GesturePath synth_gesture(const GestureTemplate& tpl, double scale_px, Point origin, const NoiseModel& noise) {
  if (!(scale_px > 0.0)) throw Error(ErrorCode::InvalidArgument, "gesture scale must be positive");
  Rng rng(noise.seed);
  GesturePath path;
  path.source = PathSource::RawSamples;
  path.points.reserve(tpl.points.size());
  for (const auto& p : tpl.points) {
    Point q{origin.x + p.x * scale_px, origin.y + p.y * scale_px};
    if (noise.sigma_px > 0.0) {
      q.x += rng.gaussian(noise.sigma_px);
      q.y += rng.gaussian(noise.sigma_px);
    }
    path.points.push_back(q);
  }
  return path;
}

std::vector<InputEvent> synth_gesture_trace(std::span<const Point> screen_path, const GestureTraceOptions& options,
                                            const NoiseModel& noise) {
  if (screen_path.size() < 2) throw Error(ErrorCode::DegeneratePath, "gesture trace needs at least two points");
  if (!(options.speed_px_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "trace speed must be positive");

  std::vector<double> cumulative(screen_path.size(), 0.0);
  for (std::size_t i = 1; i < screen_path.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + distance(screen_path[i - 1], screen_path[i]);
  }
  const double length = cumulative.back();
  const auto travel_ms = static_cast<TimeMs>(std::ceil(length / options.speed_px_s * 1000.0));
  const TimeMs total = 2 * options.dwell_ms + travel_ms;

  const auto position = [&](TimeMs rel) {
    const double s = std::clamp(static_cast<double>(rel - options.dwell_ms) / 1000.0 * options.speed_px_s, 0.0, length);
    std::size_t seg = 1;
    while (seg + 1 < screen_path.size() && cumulative[seg] < s) ++seg;
    const double seg_len = cumulative[seg] - cumulative[seg - 1];
    const double u = seg_len > 0.0 ? (s - cumulative[seg - 1]) / seg_len : 0.0;
    const Point a = screen_path[seg - 1];
    const Point b = screen_path[seg];
    return Point{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
  };

  Rng rng(noise.seed);
  std::vector<InputEvent> out;
  const auto times = sample_times(total + 1, options.rate_hz);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Point p = position(times[i]);
    GazeSample s{options.start_ms + times[i], p.x, p.y, true};
    if (noise.sigma_px > 0.0) {
      s.x += rng.gaussian(noise.sigma_px);
      s.y += rng.gaussian(noise.sigma_px);
    }
    out.emplace_back(s);
    if (i == 0) out.emplace_back(TriggerEvent{s.t_ms, TriggerKind::Press});
  }
  out.emplace_back(TriggerEvent{options.start_ms + times.back(), TriggerKind::Release});
  return out;
}

TypistRun synth_typist(const KeyboardLayout& layout, const std::string& phrase, const TypistModel& model) {
  if (model.keystroke_interval_ms <= model.press_duration_ms || model.sample_interval_ms <= 0 ||
      model.press_duration_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument, "typist timing must satisfy interval > press duration > 0");
  }
  // Phrase characters must all be typeable.
  std::vector<std::string> chars;
  for (std::size_t i = 0; i < phrase.size();) {
    std::size_t len = 1;
    while (i + len < phrase.size() && (static_cast<unsigned char>(phrase[i + len]) & 0xC0) == 0x80) ++len;
    chars.push_back(phrase.substr(i, len));
    if (!layout.key_for(chars.back())) {
      throw Error(ErrorCode::InvalidArgument, "phrase character '" + chars.back() + "' has no key");
    }
    i += len;
  }
  const Key* backspace = nullptr;
  std::vector<const Key*> letters;
  for (const auto& k : layout.keys()) {
    if (k.action == KeyAction::Backspace && !backspace) backspace = &k;
    if (k.action == KeyAction::Character) letters.push_back(&k);
  }

  Rng rng(model.seed);
  TypistRun run{{}, TypingSession(layout, phrase), false};
  const std::size_t max_keystrokes = 4 * chars.size() + 10;
  TimeMs last_sample = -model.sample_interval_ms;
  TimeMs pending_release = -1;  // -1 when no release is due

  const auto push_sample = [&](TimeMs t, Point aim) {
    if (pending_release >= 0 && pending_release <= t) {
      run.events.emplace_back(TriggerEvent{pending_release, TriggerKind::Release});
      pending_release = -1;
    }
    GazeSample s{t, aim.x, aim.y, true};
    if (model.sigma_px > 0.0) {
      s.x += rng.gaussian(model.sigma_px);
      s.y += rng.gaussian(model.sigma_px);
    }
    run.events.emplace_back(s);
    run.session.step(s);
    last_sample = t;
  };

  for (std::size_t k = 1; k <= max_keystrokes; ++k) {
    const std::string& text = run.session.transcribed();
    if (text == phrase) break;
    // Longest run of phrase characters the text agrees with.
    std::size_t typed = 0;
    std::size_t agreed = 0;
    while (typed < chars.size() && agreed + chars[typed].size() <= text.size() &&
           text.compare(agreed, chars[typed].size(), chars[typed]) == 0) {
      agreed += chars[typed].size();
      ++typed;
    }

    const Key* aim = nullptr;
    if (text.size() > agreed) {
      aim = backspace;
      if (!aim) break;
    } else {
      aim = layout.key_for(chars[typed]);
      if (model.error_rate > 0.0 && letters.size() > 1 && rng.uniform() < model.error_rate) {
        const Key* wrong = letters[rng.below(letters.size())];
        if (wrong != aim) aim = wrong;
      }
    }

    const TimeMs press_t = static_cast<TimeMs>(k) * model.keystroke_interval_ms;
    for (TimeMs t = last_sample + model.sample_interval_ms; t < press_t; t += model.sample_interval_ms) {
      push_sample(t, aim->rect.center());
    }
    if (pending_release >= 0) {
      run.events.emplace_back(TriggerEvent{pending_release, TriggerKind::Release});
      pending_release = -1;
    }
    const TriggerEvent press{press_t, TriggerKind::Press};
    run.events.emplace_back(press);
    run.session.step(press);
    pending_release = press_t + model.press_duration_ms;
  }
  if (pending_release >= 0) run.events.emplace_back(TriggerEvent{pending_release, TriggerKind::Release});
  run.completed = run.session.transcribed() == phrase;
  return run;
}

}  // namespace gaze
