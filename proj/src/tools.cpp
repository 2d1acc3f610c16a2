#include "gaze/tools.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>

#include "gaze/error.hpp"
#include "gaze/rng.hpp"
#include "gaze/synth.hpp"
#include "gaze/textio.hpp"

namespace gaze::tools {

namespace {

std::string fixed(double v, int decimals) { return textio::format_fixed(v, decimals); }

}  // namespace

std::vector<PathEntry> parse_paths(std::string_view text) {
  std::vector<PathEntry> out;
  const auto lines = textio::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = textio::split_ws(lines[i]);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;
    const std::size_t line = i + 1;
    if (tokens[0] != "path") throw ParseError(line, "expected 'path', got '" + std::string(tokens[0]) + "'");
    if (tokens.size() < 3) throw ParseError(line, "path needs a name and an action id");
    if ((tokens.size() - 3) % 2 != 0) throw ParseError(line, "odd number of coordinates");
    PathEntry e{std::string(tokens[1]), std::string(tokens[2]), {}};
    for (std::size_t k = 3; k < tokens.size(); k += 2) {
      Point p;
      if (!textio::parse_real(tokens[k], p.x) || !textio::parse_real(tokens[k + 1], p.y)) {
        throw ParseError(line, "bad coordinate pair '" + std::string(tokens[k]) + " " + std::string(tokens[k + 1]) + "'");
      }
      e.points.push_back(p);
    }
    if (e.points.size() < 2) throw ParseError(line, "path needs at least two points");
    out.push_back(std::move(e));
  }
  return out;
}

std::string serialize_paths(const std::vector<PathEntry>& entries) {
  std::string text;
  for (const auto& e : entries) {
    text += "path " + e.name + " " + e.action_id;
    for (const auto& p : e.points) text += " " + textio::format_real(p.x) + " " + textio::format_real(p.y);
    text += '\n';
  }
  return text;
}

void train_from_paths(TemplateStore& store, const std::vector<PathEntry>& entries) {
  std::vector<std::string> order;
  for (const auto& e : entries) {
    if (std::find(order.begin(), order.end(), e.name) == order.end()) order.push_back(e.name);
  }
  for (const auto& name : order) {
    if (store.find(name)) throw Error(ErrorCode::DuplicateName, "template '" + name + "' already exists");
  }
  for (const auto& name : order) {
    std::vector<GesturePath> samples;
    std::string action;
    for (const auto& e : entries) {
      if (e.name != name) continue;
      if (!action.empty() && e.action_id != action) {
        throw Error(ErrorCode::InvalidArgument, "gesture '" + name + "' is bound to two actions");
      }
      action = e.action_id;
      samples.push_back(GesturePath{e.points, PathSource::RawSamples});
    }
    store.train(name, samples, action);
  }
}

std::string recognize_report(const TemplateStore& store, const Replay& replay, PathSource source,
                             const FixationParams& fixation) {
  if (store.empty()) throw Error(ErrorCode::EmptyStore, "template store is empty");
  RunOptions options;
  options.mode = Mode::Gesture;
  options.store = std::make_shared<const TemplateStore>(store);
  options.source = source;
  options.fixation = fixation;
  const auto events = run_replay_direct(replay, options);

  std::ostringstream out;
  out << "# templates " << store.size() << " source " << path_source_name(source) << " threshold "
      << textio::format_real(store.reject_threshold()) << '\n';
  out << "# index t_ms result template action score distance\n";
  for (const auto& e : events) {
    if (e.at("type") != "recognition") continue;
    out << e.at("index").get<int>() << ' ' << e.at("t_ms").get<TimeMs>() << ' ';
    if (e.at("matched").get<bool>()) {
      out << "match " << e.at("template").get<std::string>() << ' ' << e.at("action_id").get<std::string>() << ' '
          << fixed(e.at("score").get<double>(), 6) << ' ' << fixed(e.at("distance").get<double>(), 6) << '\n';
    } else {
      out << "nomatch " << e.value("reason", "BelowThreshold") << " - - -\n";
    }
  }
  const auto& summary = events.back();
  out << "captured " << summary.at("captured").get<int>() << " matched " << summary.at("matched").get<int>()
      << '\n';
  return out.str();
}

namespace {

void score_condition(AuthConditionStats& stats, const AuthSession& session) {
  ++stats.sessions;
  if (session.outcome == AuthOutcome::Accept) ++stats.accepted;
  for (const auto& e : session.epochs) {
    ++stats.epochs;
    if (e.winner == e.expected) ++stats.epochs_correct;
  }
}

}  // namespace

AuthSimResult auth_sim(const AuthSimOptions& options) {
  options.config.validate();
  if (options.seeds < 1) throw Error(ErrorCode::InvalidArgument, "seeds must be at least 1");
  if (options.noise_px < 0.0) throw Error(ErrorCode::InvalidArgument, "noise must be non-negative");
  if (options.latency_ms < 0) throw Error(ErrorCode::InvalidArgument, "latency must be non-negative");
  if (!options.transcript_dir.empty()) std::filesystem::create_directories(options.transcript_dir);

  AuthSimResult result;
  result.calibrated.name = "calibrated";
  result.disturbed.name = "disturbed";
  for (int i = 0; i < options.seeds; ++i) {
    const std::uint64_t seed = options.seed_base + static_cast<std::uint64_t>(i);
    const auto trajectories = gen_trajectories(options.config, seed);
    const auto password = random_password(options.config, seed);
    const NoiseModel noise{options.noise_px, options.latency_ms, derive_seed(seed, 0x51)};
    const auto gaze = synth_pursuit(trajectories, options.config, password, options.rate_hz, noise);

    Rng direction(derive_seed(seed, 0xD1));
    const double angle = direction.uniform() * 2.0 * std::numbers::pi;
    const CalibrationDisturbance offset{options.offset_px * std::cos(angle), options.offset_px * std::sin(angle), 1.0};
    const auto disturbed = apply_disturbance(gaze, offset, options.config.screen);

    const AuthSession a = run_auth_session(gaze, options.config, seed, password);
    const AuthSession b = run_auth_session(disturbed, options.config, seed, password);
    score_condition(result.calibrated, a);
    score_condition(result.disturbed, b);
    if (!options.transcript_dir.empty()) {
      const std::filesystem::path dir(options.transcript_dir);
      textio::write_file((dir / ("seed_" + std::to_string(seed) + "_calibrated.txt")).string(), a.transcript());
      textio::write_file((dir / ("seed_" + std::to_string(seed) + "_disturbed.txt")).string(), b.transcript());
    }
  }
  return result;
}

std::string auth_sim_report(const AuthSimOptions& options, const AuthSimResult& result) {
  std::ostringstream out;
  out << "# auth-sim seeds " << options.seeds << " seed_base " << options.seed_base << " noise_px "
      << textio::format_real(options.noise_px) << " latency_ms " << options.latency_ms << " rate_hz "
      << textio::format_real(options.rate_hz) << " offset_px " << textio::format_real(options.offset_px) << '\n';
  out << "# shapes " << options.config.shape_count << " password_length " << options.config.password_length
      << " nominal_duration_ms " << options.config.nominal_duration_ms() << '\n';
  out << std::left << std::setw(12) << "condition" << std::right << std::setw(10) << "sessions" << std::setw(10)
      << "accepted" << std::setw(13) << "accept_rate" << std::setw(8) << "epochs" << std::setw(9) << "correct"
      << std::setw(16) << "epoch_accuracy" << '\n';
  for (const auto* c : {&result.calibrated, &result.disturbed}) {
    out << std::left << std::setw(12) << c->name << std::right << std::setw(10) << c->sessions << std::setw(10)
        << c->accepted << std::setw(13) << fixed(c->accept_rate(), 4) << std::setw(8) << c->epochs << std::setw(9)
        << c->epochs_correct << std::setw(16) << fixed(c->epoch_accuracy(), 4) << '\n';
  }
  const double drop = (result.calibrated.epoch_accuracy() - result.disturbed.epoch_accuracy()) * 100.0;
  out << "drop_pp " << fixed(drop, 2) << '\n';
  out << "reference calibrated " << fixed(reference::kAuthAccuracyTrueCalibration, 2) << " disturbed "
      << fixed(reference::kAuthAccuracyDisturbedCalibration, 2) << '\n';
  return out.str();
}

std::vector<std::string> parse_phrases(std::string_view text) {
  std::vector<std::string> out;
  for (auto line : textio::split_lines(text)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::vector<TypeSimRow> type_sim(const KeyboardLayout& layout, const std::vector<std::string>& phrases,
                                 const TypeSimOptions& options) {
  if (phrases.empty()) throw Error(ErrorCode::InvalidArgument, "phrase set is empty");
  std::vector<TypeSimRow> rows;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    TypistModel model = options.typist;
    model.seed = derive_seed(options.typist.seed, i);
    TypistRun run = synth_typist(layout, phrases[i], model);
    rows.push_back(TypeSimRow{phrases[i], compute_metrics(run.session, options.rba_basis), run.completed});
  }
  return rows;
}

std::string type_sim_report(const std::vector<TypeSimRow>& rows, const TypeSimOptions& options) {
  std::ostringstream out;
  out << "# type-sim phrases " << rows.size() << " sigma_px " << textio::format_real(options.typist.sigma_px)
      << " error_rate " << textio::format_real(options.typist.error_rate) << " interval_ms "
      << options.typist.keystroke_interval_ms << " seed " << options.typist.seed << " rba_basis "
      << (options.rba_basis == RbaBasis::Keystrokes ? "keystrokes" : "characters") << '\n';
  const auto row = [&](std::string_view label, double wpm, double kspc, double rba, std::string_view rest) {
    out << std::left << std::setw(12) << label << std::right << std::setw(9) << fixed(wpm, 3) << std::setw(8)
        << fixed(kspc, 4) << std::setw(8) << fixed(rba, 4) << "  " << rest << '\n';
  };
  out << std::left << std::setw(12) << "row" << std::right << std::setw(9) << "wpm" << std::setw(8) << "kspc"
      << std::setw(8) << "rba" << "  keys bksp miss done phrase\n";
  double wpm = 0.0;
  double kspc = 0.0;
  double rba = 0.0;
  int completed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i].metrics;
    std::ostringstream rest;
    rest << m.keystrokes << ' ' << m.backspaces << ' ' << m.misses << ' ' << (rows[i].completed ? "yes" : "no")
         << ' ' << rows[i].phrase;
    row("phrase" + std::to_string(i + 1), m.wpm, m.kspc, m.rba, rest.str());
    wpm += m.wpm;
    kspc += m.kspc;
    rba += m.rba;
    completed += rows[i].completed ? 1 : 0;
  }
  const auto n = static_cast<double>(rows.size());
  row("mean", wpm / n, kspc / n, rba / n, "completed " + std::to_string(completed) + "/" + std::to_string(rows.size()));
  row("ref-impair", reference::kTypingImpairedWpm, reference::kTypingImpairedKspc, reference::kTypingImpairedRba,
      "baseline");
  row("ref-able", reference::kTypingAbleBodiedWpm, reference::kTypingAbleBodiedKspc, reference::kTypingAbleBodiedRba,
      "baseline");
  return out.str();
}

std::string bench_report(const BenchOptions& options) {
  using Clock = std::chrono::steady_clock;
  if (options.gestures < 1 || options.epochs < 1) throw Error(ErrorCode::InvalidArgument, "bench sizes must be positive");
  const TemplateStore store = bundled_store();
  std::vector<GesturePath> paths;
  Rng pick(derive_seed(options.seed, 1));
  for (int i = 0; i < options.gestures; ++i) {
    const auto& tpl = store.templates()[pick.below(store.size())];
    paths.push_back(synth_gesture(tpl, 300.0, {960, 540}, {6.0, 0, derive_seed(options.seed, 100 + i)}));
  }
  int matched = 0;
  const auto t0 = Clock::now();
  for (const auto& p : paths) matched += store.recognize(p.points) ? 1 : 0;
  const auto t1 = Clock::now();

  const AuthConfig config;
  const auto lags = config.lags();
  struct Corpus {
    std::vector<ShapeTrajectory> trajectories;
    std::vector<GazeSample> gaze;
  };
  std::vector<Corpus> corpora;
  const int sessions = (options.epochs + config.password_length - 1) / config.password_length;
  for (int s = 0; s < sessions; ++s) {
    const std::uint64_t seed = derive_seed(options.seed, 5000 + s);
    Corpus c{gen_trajectories(config, seed), {}};
    c.gaze = synth_pursuit(c.trajectories, config, random_password(config, seed), 60.0, {15.0, 0, seed});
    corpora.push_back(std::move(c));
  }
  int evaluated = 0;
  const auto t2 = Clock::now();
  for (const auto& c : corpora) {
    for (int e = 0; e < config.password_length && evaluated < options.epochs; ++e, ++evaluated) {
      (void)match_epoch(c.gaze, c.trajectories, config.epoch_window(e), lags, config.min_valid_samples);
    }
  }
  const auto t3 = Clock::now();

  const auto us = [](auto d) { return std::chrono::duration<double, std::micro>(d).count(); };
  std::ostringstream out;
  out << "# bench seed " << options.seed << '\n';
  out << "recognize    calls " << options.gestures << " matched " << matched << " total_ms "
      << fixed(us(t1 - t0) / 1000.0, 3) << " per_call_us " << fixed(us(t1 - t0) / options.gestures, 3) << '\n';
  out << "match_epoch  calls " << evaluated << " shapes " << config.shape_count << " lags " << lags.size()
      << " total_ms " << fixed(us(t3 - t2) / 1000.0, 3) << " per_call_us " << fixed(us(t3 - t2) / evaluated, 3)
      << '\n';
  return out.str();
}

namespace {

SynthResult synth_gestures(const SynthOptions& o) {
  Rng pick(derive_seed(o.seed, 1));
  const auto& gestures = bundled_gestures();
  std::vector<InputEvent> events;
  std::string names;
  TimeMs start = 0;
  for (int i = 0; i < o.count; ++i) {
    const auto& g = gestures[pick.below(gestures.size())];
    std::vector<Point> screen;
    for (const auto& p : g.path) screen.push_back({p.x + 760.0, p.y + 340.0});
    GestureTraceOptions trace;
    trace.rate_hz = o.rate_hz;
    trace.start_ms = start;
    const auto part = synth_gesture_trace(screen, trace, {o.noise_px, 0, derive_seed(o.seed, 10 + i)});
    events.insert(events.end(), part.begin(), part.end());
    start = event_time(part.back()) + 600;
    if (!names.empty()) names += ' ';
    names += g.name;
  }
  return {Replay::from_events(events, {}, o.rate_hz), names};
}

SynthResult synth_auth(const SynthOptions& o) {
  const auto trajectories = gen_trajectories(o.auth, o.seed);
  const auto password = o.password.empty() ? random_password(o.auth, o.seed) : o.password;
  const auto gaze = synth_pursuit(trajectories, o.auth, password, o.rate_hz, {o.noise_px, 0, derive_seed(o.seed, 2)});
  std::vector<InputEvent> events(gaze.begin(), gaze.end());
  std::string desc;
  for (const auto& id : password) desc += (desc.empty() ? "" : ",") + id;
  return {Replay::from_events(events, o.auth.screen, o.rate_hz), desc};
}

SynthResult synth_typing(const SynthOptions& o) {
  TypistModel model;
  model.sigma_px = o.noise_px;
  model.seed = o.seed;
  const auto run = synth_typist(o.layout, o.phrase, model);
  const double rate = 1000.0 / static_cast<double>(model.sample_interval_ms);
  return {Replay::from_events(run.events, {}, rate), run.session.transcribed()};
}

SynthResult synth_arbiter(const SynthOptions& o) {
  Rng rng(derive_seed(o.seed, 3));
  std::vector<TriggerEvent> triggers;
  TimeMs t = 200;
  for (int i = 0; i < o.count; ++i) {
    const TimeMs hold = 40 + static_cast<TimeMs>(rng.below(560));
    triggers.push_back({t, TriggerKind::Press});
    triggers.push_back({t + hold, TriggerKind::Release});
    t += hold + 60 + static_cast<TimeMs>(rng.below(700));
  }
  const TimeMs end = t + 600;
  std::vector<InputEvent> events;
  std::size_t next = 0;
  Point focus{960, 540};
  TimeMs focus_until = 0;
  for (const TimeMs s : sample_times(end, o.rate_hz)) {
    while (next < triggers.size() && triggers[next].t_ms < s) events.emplace_back(triggers[next++]);
    if (s >= focus_until) {
      focus = {100.0 + rng.uniform() * 1720.0, 100.0 + rng.uniform() * 880.0};
      focus_until = s + 150 + static_cast<TimeMs>(rng.below(500));
    }
    GazeSample g{s, focus.x, focus.y, true};
    if (o.noise_px > 0.0) {
      g.x += rng.gaussian(o.noise_px);
      g.y += rng.gaussian(o.noise_px);
    }
    events.emplace_back(g);
  }
  while (next < triggers.size()) events.emplace_back(triggers[next++]);
  return {Replay::from_events(events, {}, o.rate_hz), std::to_string(o.count) + " presses"};
}

}  // namespace

SynthResult synth_replay(const SynthOptions& options) {
  if (options.noise_px < 0.0) throw Error(ErrorCode::InvalidArgument, "noise must be non-negative");
  if (options.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
  switch (options.mode) {
    case Mode::Gesture: return synth_gestures(options);
    case Mode::Auth: return synth_auth(options);
    case Mode::Typing: return synth_typing(options);
    case Mode::Arbiter: return synth_arbiter(options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode");
}

}  // namespace gaze::tools
