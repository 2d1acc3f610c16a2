#include "gaze/json_io.hpp"

#include "gaze/textio.hpp"

namespace gaze::json_io {

Json action_event(const PointerAction& action) {
  return Json{{"type", "action"},
              {"kind", std::string(action_kind_name(action.kind))},
              {"x", action.x},
              {"y", action.y},
              {"t_ms", action.t_ms}};
}

Json recognition_event(int index, TimeMs t_ms, const std::optional<RecognitionResult>& result,
                       std::string_view reject_reason) {
  Json j{{"type", "recognition"}, {"index", index}, {"t_ms", t_ms}, {"matched", result.has_value()}};
  if (result) {
    j["template"] = result->template_name;
    j["action_id"] = result->action_id;
    j["score"] = result->score;
    j["distance"] = result->distance;
  } else if (!reject_reason.empty()) {
    j["reason"] = std::string(reject_reason);
  }
  return j;
}

Json gesture_captured_event(int index, TimeMs t_ms, std::size_t point_count) {
  return Json{{"type", "gesture_captured"}, {"index", index}, {"t_ms", t_ms}, {"points", point_count}};
}

Json epoch_event(const EpochResult& epoch, std::span<const ShapeTrajectory> trajectories) {
  Json distances = Json::array();
  for (std::size_t k = 0; k < epoch.distances.size(); ++k) {
    distances.push_back({{"shape_id", trajectories[k].shape_id},
                         {"distance", epoch.distances[k]},
                         {"lag_ms", epoch.best_lags[k]}});
  }
  return Json{{"type", "epoch_result"},
              {"epoch", epoch.index + 1},
              {"expected", epoch.expected},
              {"winner", epoch.winner},
              {"matched", epoch.matched},
              {"distances", distances}};
}

Json keystroke_event(const Keystroke& stroke, const std::string& transcribed) {
  return Json{{"type", "keystroke"},
              {"t_ms", stroke.t_ms},
              {"key_id", stroke.miss() ? Json(nullptr) : Json(stroke.key_id)},
              {"miss", stroke.miss()},
              {"transcribed", transcribed}};
}

Json metrics_json(const TypingMetrics& m) {
  return Json{{"wpm", m.wpm},
              {"kspc", m.kspc},
              {"rba", m.rba},
              {"keystrokes", m.keystrokes},
              {"backspaces", m.backspaces},
              {"misses", m.misses},
              {"characters", m.characters},
              {"duration_ms", m.duration_ms}};
}

Json trajectory_json(const ShapeTrajectory& t) {
  return Json{{"shape_id", t.shape_id},
              {"kind", std::string(trajectory_kind_name(t.kind))},
              {"center_x", t.center_x},
              {"center_y", t.center_y},
              {"amplitude", t.amplitude},
              {"omega", t.omega},
              {"phase", t.phase},
              {"heading", t.heading},
              {"ratio", t.ratio}};
}

Json auth_config_json(const AuthConfig& c) {
  return Json{{"shape_count", c.shape_count},
              {"epoch_ms", c.epoch_ms},
              {"inter_epoch_ms", c.inter_epoch_ms},
              {"password_length", c.password_length},
              {"lag_min_ms", c.lag_min_ms},
              {"lag_max_ms", c.lag_max_ms},
              {"lag_step_ms", c.lag_step_ms},
              {"accept_margin", c.accept_margin},
              {"min_separation_px", c.min_separation_px},
              {"min_valid_samples", c.min_valid_samples},
              {"screen_w", c.screen.width},
              {"screen_h", c.screen.height},
              {"nominal_duration_ms", c.nominal_duration_ms()}};
}

Json layout_json(const KeyboardLayout& layout) {
  Json keys = Json::array();
  for (const auto& k : layout.keys()) {
    std::string output;
    switch (k.action) {
      case KeyAction::Character: output = k.output; break;
      case KeyAction::Backspace: output = "BACKSPACE"; break;
      case KeyAction::Space: output = "SPACE"; break;
      case KeyAction::Enter: output = "ENTER"; break;
    }
    keys.push_back({{"id", k.id},
                    {"label", k.label},
                    {"output", output},
                    {"x", k.rect.x},
                    {"y", k.rect.y},
                    {"w", k.rect.w},
                    {"h", k.rect.h}});
  }
  return keys;
}

Json template_json(const GestureTemplate& t) {
  Json points = Json::array();
  for (const auto& p : t.points) points.push_back({p.x, p.y});
  return Json{{"name", t.name}, {"action_id", t.action_id}, {"points", points}};
}

std::string transcript_from_events(std::uint64_t seed, int password_length, int shape_count,
                                   const std::vector<Json>& epoch_events, std::string_view outcome,
                                   TimeMs wall_ms) {
  std::string out = "auth 1 " + std::to_string(seed) + " " + std::to_string(password_length) + " " +
                    std::to_string(shape_count) + "\n";
  for (const auto& e : epoch_events) {
    out += "epoch " + std::to_string(e.at("epoch").get<int>()) + " winner " + e.at("winner").get<std::string>() +
           " distances";
    for (const auto& d : e.at("distances")) {
      out += " " + d.at("shape_id").get<std::string>() + ":" + textio::format_fixed(d.at("distance").get<double>(), 6);
    }
    out += "\n";
  }
  out += "outcome " + std::string(outcome) + " " + std::to_string(wall_ms) + "\n";
  return out;
}

}  // namespace gaze::json_io
