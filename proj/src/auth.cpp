#include "gaze/auth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaze/error.hpp"
#include "gaze/rng.hpp"
#include "gaze/textio.hpp"

namespace gaze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxRedraws = 1000;
constexpr double kEdgeMarginPx = 40.0;

// Triangle wave with period 2*pi in [-1, 1]; 0 at u = 0, peak at pi/2.
double triangle(double u) noexcept {
  double p = u / kTwoPi;
  p -= std::floor(p);
  if (p < 0.25) return 4.0 * p;
  if (p < 0.75) return 2.0 - 4.0 * p;
  return 4.0 * p - 4.0;
}

}  // namespace

std::string_view trajectory_kind_name(TrajectoryKind kind) noexcept {
  switch (kind) {
    case TrajectoryKind::CircleOrbit: return "circle-orbit";
    case TrajectoryKind::LinearBounce: return "linear-bounce";
    case TrajectoryKind::Lissajous: return "lissajous";
  }
  return "unknown";
}

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "circle-orbit") return TrajectoryKind::CircleOrbit;
  if (name == "linear-bounce") return TrajectoryKind::LinearBounce;
  if (name == "lissajous") return TrajectoryKind::Lissajous;
  throw Error(ErrorCode::InvalidArgument, "unknown trajectory kind '" + std::string(name) + "'");
}

Point trajectory_position(const ShapeTrajectory& traj, double t_ms) noexcept {
  const double u = traj.omega * (t_ms / 1000.0) + traj.phase;
  switch (traj.kind) {
    case TrajectoryKind::CircleOrbit:
      return {traj.center_x + traj.amplitude * std::cos(u),
              traj.center_y + traj.amplitude * std::sin(u)};
    case TrajectoryKind::LinearBounce: {
      const double s = traj.amplitude * triangle(u);
      return {traj.center_x + s * std::cos(traj.heading),
              traj.center_y + s * std::sin(traj.heading)};
    }
    case TrajectoryKind::Lissajous:
      return {traj.center_x + traj.amplitude * std::sin(u),
              traj.center_y + traj.amplitude * std::sin(traj.ratio * u)};
  }
  return {traj.center_x, traj.center_y};
}

Point shape_position(const ShapeTrajectory& traj, double t_ms) {
  if (!(t_ms >= 0.0)) throw Error(ErrorCode::InvalidArgument, "shape position requested for t < 0");
  return trajectory_position(traj, t_ms);
}

void AuthConfig::validate() const {
  if (shape_count < 2) throw Error(ErrorCode::InvalidArgument, "shape_count must be at least 2");
  if (shape_count > 26) throw Error(ErrorCode::InvalidArgument, "shape_count must be at most 26");
  if (password_length < 1) throw Error(ErrorCode::InvalidArgument, "password length must be at least 1");
  if (epoch_ms <= 0 || inter_epoch_ms < 0) throw Error(ErrorCode::InvalidArgument, "invalid epoch timing");
  if (lag_step_ms <= 0 || lag_min_ms < 0 || lag_max_ms < lag_min_ms) {
    throw Error(ErrorCode::InvalidArgument, "invalid lag search range");
  }
  if (!(accept_margin >= 1.0)) throw Error(ErrorCode::InvalidArgument, "accept_margin must be >= 1");
  if (!(min_separation_px >= 0.0) || separation_step_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument, "invalid separation constraint");
  }
  if (min_valid_samples < 1) throw Error(ErrorCode::InvalidArgument, "min_valid_samples must be >= 1");
}

EpochWindow AuthConfig::epoch_window(int index) const noexcept {
  const TimeMs start = static_cast<TimeMs>(index) * (epoch_ms + inter_epoch_ms);
  return {start, start + epoch_ms};
}

std::vector<TimeMs> AuthConfig::lags() const {
  std::vector<TimeMs> out;
  for (TimeMs lag = lag_min_ms; lag <= lag_max_ms; lag += lag_step_ms) out.push_back(lag);
  return out;
}

std::string shape_id_for(int index) {
  return std::string(1, static_cast<char>('A' + index));
}

namespace {

ShapeTrajectory draw_trajectory(Rng& rng, const AuthConfig& config, int index) {
  ShapeTrajectory t;
  t.shape_id = shape_id_for(index);
  t.kind = static_cast<TrajectoryKind>(rng.below(3));
  const double max_amplitude =
      std::min({180.0, config.screen.width / 2.0 - kEdgeMarginPx - 1.0,
                config.screen.height / 2.0 - kEdgeMarginPx - 1.0});
  if (max_amplitude < 20.0) throw Error(ErrorCode::InvalidArgument, "screen too small for moving shapes");
  t.amplitude = rng.uniform(std::min(60.0, max_amplitude / 2.0), max_amplitude);
  const double margin = t.amplitude + kEdgeMarginPx;
  t.center_x = rng.uniform(margin, config.screen.width - margin);
  t.center_y = rng.uniform(margin, config.screen.height - margin);
  t.omega = rng.uniform(0.6, 1.6) * (rng.below(2) == 0 ? 1.0 : -1.0);
  t.phase = rng.uniform(0.0, kTwoPi);
  t.heading = rng.uniform(0.0, std::numbers::pi);
  t.ratio = rng.below(2) == 0 ? 2.0 : 3.0;
  return t;
}

bool separated(const ShapeTrajectory& candidate, std::span<const ShapeTrajectory> placed,
               const AuthConfig& config) {
  const TimeMs duration = config.nominal_duration_ms();
  for (TimeMs t = 0; t <= duration; t += config.separation_step_ms) {
    const Point p = trajectory_position(candidate, static_cast<double>(t));
    for (const auto& other : placed) {
      if (distance(p, trajectory_position(other, static_cast<double>(t))) < config.min_separation_px) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<ShapeTrajectory> gen_trajectories(const AuthConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<ShapeTrajectory> out;
  out.reserve(static_cast<std::size_t>(config.shape_count));
  for (int i = 0; i < config.shape_count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      auto candidate = draw_trajectory(rng, config, i);
      if (separated(candidate, out, config)) {
        out.push_back(std::move(candidate));
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::SeparationUnsatisfiable,
                  "could not place shape " + shape_id_for(i) + " with " +
                      textio::format_real(config.min_separation_px) + " px separation after " +
                      std::to_string(kMaxRedraws) + " attempts");
    }
  }
  return out;
}

double min_pairwise_separation(std::span<const ShapeTrajectory> trajectories, const AuthConfig& config) {
  double best = std::numeric_limits<double>::infinity();
  const TimeMs duration = config.nominal_duration_ms();
  for (TimeMs t = 0; t <= duration; t += config.separation_step_ms) {
    for (std::size_t a = 0; a < trajectories.size(); ++a) {
      for (std::size_t b = a + 1; b < trajectories.size(); ++b) {
        best = std::min(best, distance(trajectory_position(trajectories[a], static_cast<double>(t)),
                                       trajectory_position(trajectories[b], static_cast<double>(t))));
      }
    }
  }
  return best;
}

EpochMatch match_epoch(std::span<const GazeSample> samples,
                       std::span<const ShapeTrajectory> trajectories, EpochWindow window,
                       std::span<const TimeMs> lags, int min_valid_samples) {
  if (trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "no trajectories to match against");
  if (lags.empty()) throw Error(ErrorCode::InvalidArgument, "lag grid is empty");

  std::vector<const GazeSample*> in_window;
  for (const auto& s : samples) {
    if (s.valid && window.contains(s.t_ms)) in_window.push_back(&s);
  }
  const int valid = static_cast<int>(in_window.size());
  if (valid < min_valid_samples) {
    throw Error(ErrorCode::InsufficientGaze,
                std::to_string(valid) + " valid samples in epoch [" + std::to_string(window.start_ms) +
                    ", " + std::to_string(window.end_ms) + "), need " +
                    std::to_string(min_valid_samples));
  }

  EpochMatch match;
  match.valid_samples = valid;
  match.distances.assign(trajectories.size(), std::numeric_limits<double>::infinity());
  match.best_lags.assign(trajectories.size(), lags.front());
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    for (const TimeMs lag : lags) {
      double sum = 0.0;
      for (const auto* s : in_window) {
        sum += distance(s->point(),
                        trajectory_position(trajectories[k], static_cast<double>(s->t_ms - lag)));
      }
      const double mean = sum / valid;
      if (mean < match.distances[k]) {
        match.distances[k] = mean;
        match.best_lags[k] = lag;
      }
    }
    if (match.distances[k] < match.distances[match.winner]) match.winner = k;
  }
  return match;
}

std::string_view auth_outcome_name(AuthOutcome outcome) noexcept {
  switch (outcome) {
    case AuthOutcome::Accept: return "Accept";
    case AuthOutcome::Reject: return "Reject";
    case AuthOutcome::Abort: return "Abort";
  }
  return "Unknown";
}

std::string AuthSession::transcript() const {
  std::string out = "auth 1 " + std::to_string(seed) + " " + std::to_string(config.password_length) + " " +
                    std::to_string(config.shape_count) + "\n";
  for (const auto& e : epochs) {
    out += "epoch " + std::to_string(e.index + 1) + " winner " + e.winner + " distances";
    for (std::size_t k = 0; k < e.distances.size(); ++k) {
      out += " " + trajectories[k].shape_id + ":" + textio::format_fixed(e.distances[k], 6);
    }
    out += "\n";
  }
  out += "outcome " + std::string(auth_outcome_name(outcome)) + " " + std::to_string(wall_ms) + "\n";
  return out;
}

AuthRunner::AuthRunner(const AuthConfig& config, std::uint64_t seed, std::vector<std::string> password)
    : AuthRunner(config, seed, std::move(password), gen_trajectories(config, seed)) {}

AuthRunner::AuthRunner(const AuthConfig& config, std::uint64_t seed, std::vector<std::string> password,
                       std::vector<ShapeTrajectory> trajectories) {
  config.validate();
  enrolling_ = password.empty();
  if (!enrolling_ && static_cast<int>(password.size()) != config.password_length) {
    throw Error(ErrorCode::InvalidArgument, "password has " + std::to_string(password.size()) +
                                                " elements, expected " +
                                                std::to_string(config.password_length));
  }
  for (const auto& id : password) {
    const bool known = std::any_of(trajectories.begin(), trajectories.end(),
                                   [&](const ShapeTrajectory& t) { return t.shape_id == id; });
    if (!known) throw Error(ErrorCode::InvalidArgument, "password element '" + id + "' is not a shape id");
  }
  session_.seed = seed;
  session_.config = config;
  session_.trajectories = std::move(trajectories);
  session_.password = std::move(password);
  lags_ = config.lags();
}

void AuthRunner::close_epoch(std::vector<EpochResult>& closed) {
  const auto& config = session_.config;
  const EpochWindow window = config.epoch_window(current_);
  EpochResult result;
  result.index = current_;
  if (!enrolling_) result.expected = session_.password[static_cast<std::size_t>(current_)];
  try {
    const auto match = match_epoch(buffer_, session_.trajectories, window, lags_, config.min_valid_samples);
    result.winner = session_.trajectories[match.winner].shape_id;
    result.distances = match.distances;
    result.best_lags = match.best_lags;
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < match.distances.size(); ++k) {
      if (k != match.winner) runner_up = std::min(runner_up, match.distances[k]);
    }
    const bool decisive = runner_up >= config.accept_margin * match.distances[match.winner];
    result.matched = decisive && (enrolling_ || result.winner == result.expected);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientGaze) throw;
    session_.outcome = AuthOutcome::Abort;
    session_.abort_reason = e.what();
    session_.wall_ms = window.end_ms;
    done_ = true;
    buffer_.clear();
    return;
  }
  buffer_.clear();
  session_.epochs.push_back(result);
  closed.push_back(std::move(result));
  if (!session_.epochs.back().matched) rejected_ = true;
  session_.wall_ms = window.end_ms;
  ++current_;
  if (current_ == config.password_length) {
    session_.outcome = rejected_ ? AuthOutcome::Reject : AuthOutcome::Accept;
    done_ = true;
  }
}

void AuthRunner::feed(const GazeSample& sample, std::vector<EpochResult>& closed) {
  if (done_) return;
  if (last_t_ && sample.t_ms <= *last_t_) {
    throw Error(ErrorCode::NonMonotonicTimestamp, "auth samples must have increasing timestamps");
  }
  last_t_ = sample.t_ms;
  while (!done_ && sample.t_ms >= session_.config.epoch_window(current_).end_ms) close_epoch(closed);
  if (done_) return;
  if (session_.config.epoch_window(current_).contains(sample.t_ms)) buffer_.push_back(sample);
}

std::vector<std::string> AuthRunner::enrolled_password() const {
  std::vector<std::string> out;
  if (!enrolling_ || session_.outcome != AuthOutcome::Accept) return out;
  for (const auto& e : session_.epochs) out.push_back(e.winner);
  return out;
}

void AuthRunner::finish(std::vector<EpochResult>& closed) {
  while (!done_) close_epoch(closed);
}

AuthSession run_auth_session(std::span<const GazeSample> stream, const AuthConfig& config,
                             std::uint64_t seed, std::span<const std::string> password) {
  AuthRunner runner(config, seed, std::vector<std::string>(password.begin(), password.end()));
  std::vector<EpochResult> closed;
  for (const auto& s : stream) {
    runner.feed(s, closed);
    if (runner.done()) break;
  }
  runner.finish(closed);
  return runner.session();
}

std::vector<std::string> random_password(const AuthConfig& config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x9A55));
  std::vector<std::string> out;
  for (int i = 0; i < config.password_length; ++i) {
    out.push_back(shape_id_for(static_cast<int>(rng.below(static_cast<std::uint64_t>(config.shape_count)))));
  }
  return out;
}

}  // namespace gaze
