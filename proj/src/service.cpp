#include "gaze/service.hpp"

#include <optional>
#include <stdexcept>
#include <variant>

#include "gaze/arbiter.hpp"
#include "gaze/auth.hpp"
#include "gaze/error.hpp"
#include "gaze/json_io.hpp"
#include "gaze/typing.hpp"

namespace gaze::service {

namespace {

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const Json& field(const Json& msg, const char* name) {
  auto it = msg.find(name);
  if (it == msg.end()) throw BadRequest(std::string("missing field '") + name + "'");
  return *it;
}

std::string get_string(const Json& msg, const char* name) {
  const Json& v = field(msg, name);
  if (!v.is_string()) throw BadRequest(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

double get_number(const Json& msg, const char* name) {
  const Json& v = field(msg, name);
  if (!v.is_number()) throw BadRequest(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

TimeMs get_time(const Json& msg, const char* name) {
  const Json& v = field(msg, name);
  if (!v.is_number_integer()) throw BadRequest(std::string("field '") + name + "' must be an integer");
  const auto t = v.get<std::int64_t>();
  if (t < 0) throw BadRequest(std::string("field '") + name + "' must be non-negative");
  return t;
}

template <typename T>
void maybe(const Json& cfg, const char* name, T& out) {
  auto it = cfg.find(name);
  if (it == cfg.end()) return;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw BadRequest(std::string("field '") + name + "' must be a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw BadRequest(std::string("config field '") + name + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw BadRequest(std::string("config field '") + name + "' must be an integer");
  } else {
    if (!it->is_number()) throw BadRequest(std::string("config field '") + name + "' must be a number");
  }
  out = it->get<T>();
}

struct ArbiterSession {
  Arbiter arbiter;
  int actions = 0;
};

struct GestureSession {
  bool train = false;
  std::string name;
  std::string action_id;
  PathSource source = PathSource::FixationCentroids;
  FixationParams fixation;
  StoreSnapshot store;
  bool capturing = false;
  std::vector<GazeSample> capture;
  int index = 0;
  int matched = 0;
  std::vector<GesturePath> captured;
};

struct AuthLive {
  AuthRunner runner;
};

struct TypingLive {
  TypingSession session;
};

using Engine = std::variant<ArbiterSession, GestureSession, AuthLive, TypingLive>;

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

Json typing_summary(const TypingSession& session) {
  Json j{{"type", "session_ended"},
         {"mode", "typing"},
         {"transcribed", session.transcribed()},
         {"target", session.target()},
         {"keystrokes", session.keystrokes().size()}};
  if (session.keystrokes().empty()) {
    j["metrics"] = nullptr;
  } else {
    j["metrics"] = json_io::metrics_json(compute_metrics(session));
  }
  return j;
}

}  // namespace

struct Service::Session {
  std::mutex mutex;
  std::string id;
  Engine engine;
  std::optional<TimeMs> last_sample;
  std::optional<TimeMs> last_event;
  bool ended = false;
  Json end_summary;

  Session(std::string session_id, Engine e) : id(std::move(session_id)), engine(std::move(e)) {}
};

Json error_message(std::string_view code, std::string_view detail) {
  return Json{{"type", "error"}, {"code", std::string(code)}, {"detail", std::string(detail)}};
}

Service::Service(StoreSnapshot store) : store_(std::move(store)) {
  if (!store_) store_ = std::make_shared<const TemplateStore>(bundled_store());
}

Service::~Service() = default;

StoreSnapshot Service::store() const {
  std::lock_guard lock(mutex_);
  return store_;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::vector<Json> Service::handle(const Json& message) {
  std::vector<Json> replies;
  try {
    if (!message.is_object()) throw BadRequest("message must be a JSON object");
    replies = dispatch(message);
  } catch (const BadRequest& e) {
    replies = {error_message("BadRequest", e.what())};
  } catch (const Error& e) {
    replies = {error_message(error_code_name(e.code()), e.what())};
  } catch (const nlohmann::json::exception& e) {
    replies = {error_message("BadRequest", e.what())};
  } catch (const std::exception& e) {
    replies = {error_message("Internal", e.what())};
  }
  if (message.is_object()) {
    if (auto it = message.find("seq"); it != message.end()) {
      for (auto& r : replies) r["seq"] = *it;
    }
  }
  return replies;
}

std::vector<std::string> Service::handle_frame(std::string_view payload) {
  std::vector<Json> replies;
  Json message = Json::parse(payload.begin(), payload.end(), nullptr, false);
  if (message.is_discarded()) {
    replies = {error_message("BadRequest", "frame is not valid JSON")};
  } else {
    replies = handle(message);
  }
  std::vector<std::string> out;
  out.reserve(replies.size());
  for (const auto& r : replies) out.push_back(r.dump());
  return out;
}

std::vector<Json> Service::dispatch(const Json& message) {
  const std::string type = get_string(message, "type");
  if (type == "hello") {
    return {Json{{"type", "hello_ok"},
                 {"version", kProtocolVersion},
                 {"capabilities", {"arbiter", "gesture", "gesture-train", "auth", "auth-enroll", "typing",
                                   "debug_position", "list_templates"}}}};
  }
  if (type == "start_session") return start_session(message);
  if (type == "list_templates") {
    const auto snapshot = store();
    Json list = Json::array();
    for (const auto& t : snapshot->templates()) list.push_back({{"name", t.name}, {"action_id", t.action_id}});
    return {Json{{"type", "templates"},
                 {"n", snapshot->resample_count()},
                 {"reject_threshold", snapshot->reject_threshold()},
                 {"templates", list}}};
  }
  if (type == "sample" || type == "trigger" || type == "end_session" || type == "debug_position") {
    return route(message, type);
  }
  return {error_message("UnknownType", "unknown message type '" + type + "'")};
}

std::vector<Json> Service::start_session(const Json& message) {
  const std::string mode = get_string(message, "mode");
  const Json cfg = message.contains("config") ? message.at("config") : Json::object();
  if (!cfg.is_object()) throw BadRequest("config must be an object");

  Json started{{"type", "session_started"}, {"mode", mode}};
  std::optional<Engine> engine;

  if (mode == "arbiter") {
    ArbiterConfig c;
    maybe(cfg, "double_click_window_ms", c.double_click_window_ms);
    maybe(cfg, "hold_threshold_ms", c.hold_threshold_ms);
    engine = ArbiterSession{Arbiter(c), 0};
    started["config"] = {{"double_click_window_ms", c.double_click_window_ms},
                         {"hold_threshold_ms", c.hold_threshold_ms}};
  } else if (mode == "gesture") {
    GestureSession g;
    std::string capture = "recognize";
    std::string source = "fixations";
    maybe(cfg, "capture", capture);
    maybe(cfg, "source", source);
    maybe(cfg, "dispersion_px", g.fixation.dispersion_px);
    maybe(cfg, "min_duration_ms", g.fixation.min_duration_ms);
    if (capture != "recognize" && capture != "train") throw BadRequest("capture must be 'recognize' or 'train'");
    g.train = capture == "train";
    g.source = parse_path_source(source);
    if (cfg.contains("store")) {
      if (!cfg.at("store").is_string()) throw BadRequest("store must be template store text");
      g.store = std::make_shared<const TemplateStore>(TemplateStore::parse(cfg.at("store").get<std::string>()));
    } else {
      g.store = store();
    }
    if (g.train) {
      g.name = get_string(cfg, "name");
      g.action_id = get_string(cfg, "action_id");
      if (store()->find(g.name)) throw Error(ErrorCode::DuplicateName, "template '" + g.name + "' already exists");
    }
    started["config"] = {{"capture", capture},
                         {"source", std::string(path_source_name(g.source))},
                         {"dispersion_px", g.fixation.dispersion_px},
                         {"min_duration_ms", g.fixation.min_duration_ms},
                         {"templates", g.store->size()}};
    engine = std::move(g);
  } else if (mode == "auth") {
    AuthConfig c;
    maybe(cfg, "shape_count", c.shape_count);
    maybe(cfg, "epoch_ms", c.epoch_ms);
    maybe(cfg, "inter_epoch_ms", c.inter_epoch_ms);
    maybe(cfg, "password_length", c.password_length);
    maybe(cfg, "lag_min_ms", c.lag_min_ms);
    maybe(cfg, "lag_max_ms", c.lag_max_ms);
    maybe(cfg, "lag_step_ms", c.lag_step_ms);
    maybe(cfg, "accept_margin", c.accept_margin);
    maybe(cfg, "min_separation_px", c.min_separation_px);
    maybe(cfg, "min_valid_samples", c.min_valid_samples);
    maybe(cfg, "screen_w", c.screen.width);
    maybe(cfg, "screen_h", c.screen.height);
    std::uint64_t seed = 0;
    maybe(cfg, "seed", seed);
    std::vector<std::string> password;
    if (cfg.contains("password")) {
      const Json& p = cfg.at("password");
      if (!p.is_array()) throw BadRequest("password must be an array of shape ids");
      for (const auto& id : p) {
        if (!id.is_string()) throw BadRequest("password must be an array of shape ids");
        password.push_back(id.get<std::string>());
      }
    }
    AuthRunner runner(c, seed, std::move(password));
    Json trajectories = Json::array();
    for (const auto& t : runner.trajectories()) trajectories.push_back(json_io::trajectory_json(t));
    Json epochs = Json::array();
    for (int i = 0; i < c.password_length; ++i) {
      const auto w = c.epoch_window(i);
      epochs.push_back({{"start_ms", w.start_ms}, {"end_ms", w.end_ms}});
    }
    started["config"] = json_io::auth_config_json(c);
    started["seed"] = seed;
    started["enroll"] = runner.enrolling();
    started["trajectories"] = trajectories;
    started["epochs"] = epochs;
    engine = AuthLive{std::move(runner)};
  } else if (mode == "typing") {
    std::string phrase;
    maybe(cfg, "phrase", phrase);
    KeyboardLayout layout = KeyboardLayout::default_qwerty();
    if (cfg.contains("layout")) {
      if (!cfg.at("layout").is_string()) throw BadRequest("layout must be layout file text");
      layout = KeyboardLayout::parse(cfg.at("layout").get<std::string>());
    }
    started["config"] = {{"phrase", phrase}, {"layout", json_io::layout_json(layout)}};
    engine = TypingLive{TypingSession(std::move(layout), std::move(phrase))};
  } else {
    throw BadRequest("unknown session mode '" + mode + "'");
  }

  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_session_++);
  sessions_.emplace(id, std::make_shared<Session>(id, std::move(*engine)));
  started["session_id"] = id;
  return {started};
}

std::vector<Json> Service::route(const Json& message, const std::string& type) {
  const std::string id = get_string(message, "session_id");
  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return {error_message("UnknownSession", "no session '" + id + "'")};
    session = it->second;
  }
  std::lock_guard session_lock(session->mutex);

  std::vector<Json> out;
  const auto tag = [&](std::vector<Json> events) {
    for (auto& e : events) e["session_id"] = id;
    return events;
  };

  if (type == "debug_position") {
    auto* auth = std::get_if<AuthLive>(&session->engine);
    if (!auth) throw Error(ErrorCode::ProtocolViolation, "debug_position needs an auth session");
    const std::string shape = get_string(message, "shape_id");
    const TimeMs t = get_time(message, "t_ms");
    for (const auto& traj : auth->runner.trajectories()) {
      if (traj.shape_id == shape) {
        const Point p = shape_position(traj, static_cast<double>(t));
        return tag({Json{{"type", "position"}, {"shape_id", shape}, {"t_ms", t}, {"x", p.x}, {"y", p.y}}});
      }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown shape id '" + shape + "'");
  }

  if (type == "end_session") {
    if (session->ended) {
      out.push_back(session->end_summary);
    } else {
      Engine candidate = session->engine;
      std::visit(
          [&](auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, ArbiterSession>) {
              std::vector<PointerAction> actions;
              e.arbiter.finish(actions);
              for (const auto& a : actions) out.push_back(json_io::action_event(a));
              e.actions += static_cast<int>(actions.size());
              out.push_back(Json{{"type", "session_ended"}, {"mode", "arbiter"}, {"actions", e.actions}});
            } else if constexpr (std::is_same_v<T, GestureSession>) {
              Json summary{{"type", "session_ended"}, {"mode", "gesture"}, {"captured", e.index}};
              if (e.train) {
                if (e.captured.empty()) throw Error(ErrorCode::InvalidArgument, "no gestures captured for training");
                std::lock_guard lock(mutex_);
                auto next = std::make_shared<TemplateStore>(*store_);
                const auto& tpl = next->train(e.name, e.captured, e.action_id);
                summary["template"] = json_io::template_json(tpl);
                store_ = std::move(next);
              } else {
                summary["matched"] = e.matched;
              }
              out.push_back(std::move(summary));
            } else if constexpr (std::is_same_v<T, AuthLive>) {
              std::vector<EpochResult> closed;
              e.runner.finish(closed);
              for (const auto& ep : closed) out.push_back(json_io::epoch_event(ep, e.runner.trajectories()));
              out.push_back(auth_summary(e.runner));
            } else {
              out.push_back(typing_summary(e.session));
            }
          },
          candidate);
    }
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
    return tag(std::move(out));
  }

  const TimeMs t = get_time(message, "t_ms");
  if (session->last_event && t < *session->last_event) {
    throw Error(ErrorCode::NonMonotonicTimestamp, "event at t=" + std::to_string(t) + " precedes t=" +
                                                      std::to_string(*session->last_event));
  }

  std::variant<GazeSample, TriggerEvent> event;
  if (type == "sample") {
    if (session->last_sample && t <= *session->last_sample) {
      throw Error(ErrorCode::NonMonotonicTimestamp, "sample at t=" + std::to_string(t) +
                                                        " does not follow t=" + std::to_string(*session->last_sample));
    }
    bool valid = true;
    maybe(message, "valid", valid);
    double x = 0.0;
    double y = 0.0;
    if (valid || message.contains("x")) x = get_number(message, "x");
    if (valid || message.contains("y")) y = get_number(message, "y");
    event = GazeSample{t, x, y, valid};
  } else {
    const std::string kind = get_string(message, "kind");
    if (kind == "P" || kind == "press" || kind == "Press") {
      event = TriggerEvent{t, TriggerKind::Press};
    } else if (kind == "R" || kind == "release" || kind == "Release") {
      event = TriggerEvent{t, TriggerKind::Release};
    } else {
      throw BadRequest("trigger kind must be 'P' or 'R'");
    }
  }

  if (!session->ended) {
    Engine candidate = session->engine;
    bool finished = false;
    std::visit(
        [&](auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, ArbiterSession>) {
            std::vector<PointerAction> actions;
            std::visit([&](const auto& ev) { e.arbiter.step(ev, actions); }, event);
            for (const auto& a : actions) out.push_back(json_io::action_event(a));
            e.actions += static_cast<int>(actions.size());
          } else if constexpr (std::is_same_v<T, GestureSession>) {
            if (const auto* s = std::get_if<GazeSample>(&event)) {
              if (e.capturing) e.capture.push_back(*s);
              return;
            }
            const auto& trig = std::get<TriggerEvent>(event);
            if (trig.kind == TriggerKind::Press) {
              if (e.capturing) throw Error(ErrorCode::ProtocolViolation, "press while already capturing");
              e.capturing = true;
              e.capture.clear();
              return;
            }
            if (!e.capturing) throw Error(ErrorCode::ProtocolViolation, "release without a press");
            e.capturing = false;
            const int index = e.index++;
            GesturePath path = path_from_samples(e.capture, e.source, e.fixation);
            e.capture.clear();
            if (e.train) {
              try {
                (void)normalize(path.points, e.store->resample_count());
              } catch (const Error& err) {
                if (err.code() != ErrorCode::DegeneratePath) throw;
                out.push_back(json_io::recognition_event(index, trig.t_ms, std::nullopt, "DegeneratePath"));
                return;
              }
              out.push_back(json_io::gesture_captured_event(index, trig.t_ms, path.points.size()));
              e.captured.push_back(std::move(path));
              return;
            }
            std::optional<RecognitionResult> result;
            std::string_view reason = "BelowThreshold";
            if (e.store->empty()) {
              reason = "EmptyStore";
            } else {
              try {
                result = e.store->recognize(path.points);
              } catch (const Error& err) {
                if (err.code() != ErrorCode::DegeneratePath) throw;
                reason = "DegeneratePath";
              }
            }
            if (result) ++e.matched;
            out.push_back(json_io::recognition_event(index, trig.t_ms, result, result ? "" : reason));
          } else if constexpr (std::is_same_v<T, AuthLive>) {
            const auto* s = std::get_if<GazeSample>(&event);
            if (!s) return;
            std::vector<EpochResult> closed;
            e.runner.feed(*s, closed);
            for (const auto& ep : closed) out.push_back(json_io::epoch_event(ep, e.runner.trajectories()));
            if (e.runner.done()) {
              out.push_back(auth_summary(e.runner));
              finished = true;
            }
          } else {
            if (const auto stroke = e.session.step(event)) {
              out.push_back(json_io::keystroke_event(*stroke, e.session.transcribed()));
            }
          }
        },
        candidate);
    session->engine = std::move(candidate);
    if (finished) {
      session->ended = true;
      session->end_summary = out.back();
    }
  }
  session->last_event = t;
  if (type == "sample") session->last_sample = t;
  if (out.empty()) out.push_back(Json{{"type", "ack"}});
  return tag(std::move(out));
}

}  // namespace gaze::service
