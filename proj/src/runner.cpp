#include "gaze/runner.hpp"

#include "gaze/error.hpp"
#include "gaze/json_io.hpp"

namespace gaze {

using Json = nlohmann::json;

std::string_view mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::Arbiter: return "arbiter";
    case Mode::Gesture: return "gesture";
    case Mode::Auth: return "auth";
    case Mode::Typing: return "typing";
  }
  return "arbiter";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Arbiter, Mode::Gesture, Mode::Auth, Mode::Typing}) {
    if (mode_name(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

ErrorCode parse_error_code(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::UnknownSession); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (error_code_name(code) == name) return code;
  }
  return ErrorCode::ProtocolViolation;
}

Json start_session_message(const RunOptions& options) {
  Json cfg = Json::object();
  switch (options.mode) {
    case Mode::Arbiter:
      cfg["double_click_window_ms"] = options.arbiter.double_click_window_ms;
      cfg["hold_threshold_ms"] = options.arbiter.hold_threshold_ms;
      break;
    case Mode::Gesture:
      cfg["capture"] = "recognize";
      cfg["source"] = std::string(path_source_name(options.source));
      cfg["dispersion_px"] = options.fixation.dispersion_px;
      cfg["min_duration_ms"] = options.fixation.min_duration_ms;
      if (options.store) cfg["store"] = options.store->serialize();
      break;
    case Mode::Auth: {
      const AuthConfig& c = options.auth;
      cfg = {{"shape_count", c.shape_count},
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
             {"seed", options.seed}};
      if (!options.password.empty()) cfg["password"] = options.password;
      break;
    }
    case Mode::Typing:
      cfg["phrase"] = options.phrase;
      cfg["layout"] = options.layout.serialize();
      break;
  }
  return Json{{"type", "start_session"}, {"mode", std::string(mode_name(options.mode))}, {"config", cfg}};
}

namespace {

void run_arbiter(const std::vector<InputEvent>& events, const RunOptions& options, std::vector<Json>& out) {
  Arbiter arbiter(options.arbiter);
  std::vector<PointerAction> actions;
  for (const auto& e : events) arbiter.step(e, actions);
  arbiter.finish(actions);
  for (const auto& a : actions) out.push_back(json_io::action_event(a));
  out.push_back(Json{{"type", "session_ended"}, {"mode", "arbiter"}, {"actions", actions.size()}});
}

void run_gesture(const std::vector<InputEvent>& events, const RunOptions& options, std::vector<Json>& out) {
  const StoreSnapshot store =
      options.store ? options.store : std::make_shared<const TemplateStore>(bundled_store());
  std::vector<GazeSample> capture;
  bool capturing = false;
  int index = 0;
  int matched = 0;
  for (const auto& e : events) {
    if (const auto* s = std::get_if<GazeSample>(&e)) {
      if (capturing) capture.push_back(*s);
      continue;
    }
    const auto& trig = std::get<TriggerEvent>(e);
    if (trig.kind == TriggerKind::Press) {
      capturing = true;
      capture.clear();
      continue;
    }
    capturing = false;
    const GesturePath path = path_from_samples(capture, options.source, options.fixation);
    capture.clear();
    std::optional<RecognitionResult> result;
    std::string_view reason = "BelowThreshold";
    if (store->empty()) {
      reason = "EmptyStore";
    } else {
      try {
        result = store->recognize(path.points);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::DegeneratePath) throw;
        reason = "DegeneratePath";
      }
    }
    if (result) ++matched;
    out.push_back(json_io::recognition_event(index++, trig.t_ms, result, result ? "" : reason));
  }
  out.push_back(Json{{"type", "session_ended"}, {"mode", "gesture"}, {"captured", index}, {"matched", matched}});
}

Json auth_summary(const AuthRunner& runner) {
  const AuthSession& s = runner.session();
  Json j{{"type", "session_ended"},
         {"mode", "auth"},
         {"outcome", std::string(auth_outcome_name(s.outcome))},
         {"wall_ms", s.wall_ms},
         {"seed", s.seed},
         {"epochs_evaluated", s.epochs.size()},
         {"transcript", s.transcript()}};
  if (runner.enrolling()) {
    j["enrolled_password"] = runner.enrolled_password();
  } else {
    j["password"] = s.password;
  }
  if (!s.abort_reason.empty()) j["abort_reason"] = s.abort_reason;
  return j;
}

void run_auth(const Replay& replay, const RunOptions& options, std::vector<Json>& out) {
  AuthRunner runner(options.auth, options.seed, options.password);
  std::vector<EpochResult> closed;
  for (const auto& s : replay.samples()) {
    runner.feed(s, closed);
    for (const auto& ep : closed) out.push_back(json_io::epoch_event(ep, runner.trajectories()));
    closed.clear();
    if (runner.done()) {
      // The service announces the outcome as soon as it is known and
      // repeats it when the session is closed.
      out.push_back(auth_summary(runner));
      break;
    }
  }
  runner.finish(closed);
  for (const auto& ep : closed) out.push_back(json_io::epoch_event(ep, runner.trajectories()));
  out.push_back(auth_summary(runner));
}

void run_typing(const std::vector<InputEvent>& events, const RunOptions& options, std::vector<Json>& out) {
  TypingSession session(options.layout, options.phrase);
  for (const auto& e : events) {
    if (const auto stroke = session.step(e)) out.push_back(json_io::keystroke_event(*stroke, session.transcribed()));
  }
  Json j{{"type", "session_ended"},
         {"mode", "typing"},
         {"transcribed", session.transcribed()},
         {"target", session.target()},
         {"keystrokes", session.keystrokes().size()}};
  j["metrics"] = session.keystrokes().empty() ? Json(nullptr) : json_io::metrics_json(compute_metrics(session));
  out.push_back(std::move(j));
}

}  // namespace

std::vector<Json> run_replay_direct(const Replay& replay, const RunOptions& options) {
  replay.validate();
  std::vector<Json> out;
  switch (options.mode) {
    case Mode::Arbiter: run_arbiter(replay.events(), options, out); break;
    case Mode::Gesture: run_gesture(replay.events(), options, out); break;
    case Mode::Auth: run_auth(replay, options, out); break;
    case Mode::Typing: run_typing(replay.events(), options, out); break;
  }
  return out;
}

std::vector<Json> run_replay_service(service::Service& service, const Replay& replay, const RunOptions& options) {
  replay.validate();
  std::vector<Json> out;
  std::string session_id;
  const auto send = [&](Json message, bool keep) {
    if (!session_id.empty()) message["session_id"] = session_id;
    for (auto& reply : service.handle(message)) {
      const std::string type = reply.value("type", "");
      if (type == "error") {
        throw Error(parse_error_code(reply.value("code", "")), reply.value("detail", ""));
      }
      if (type == "session_started") {
        session_id = reply.at("session_id").get<std::string>();
        continue;
      }
      if (type == "ack" || !keep) continue;
      reply.erase("session_id");
      reply.erase("seq");
      out.push_back(std::move(reply));
    }
  };

  send(start_session_message(options), true);
  bool auth_done = false;
  for (const auto& r : replay.records) {
    if (r.kind == ReplayRecord::Kind::Sample) {
      send(Json{{"type", "sample"}, {"t_ms", r.t_ms}, {"x", r.x}, {"y", r.y}, {"valid", r.valid}}, !auth_done);
      if (options.mode == Mode::Auth && !out.empty() && out.back().value("type", "") == "session_ended") {
        auth_done = true;
      }
    } else {
      send(Json{{"type", "trigger"}, {"t_ms", r.t_ms}, {"kind", r.trigger == TriggerKind::Press ? "P" : "R"}}, true);
    }
  }
  send(Json{{"type", "end_session"}}, true);
  return out;
}

std::string format_event_log(const std::vector<Json>& events) {
  std::string text;
  for (const auto& e : events) {
    text += e.dump();
    text += '\n';
  }
  return text;
}

}  // namespace gaze
