#pragma once

// Moving-shape pursuit authentication. Shapes follow seed-derived closed-form
// trajectories; in each timed epoch the user pursues one shape and the gaze
// is matched to the closest shape path. The password is the ordered list of
// pursued shapes.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/core.hpp"

namespace gaze {

enum class TrajectoryKind { CircleOrbit, LinearBounce, Lissajous };

std::string_view trajectory_kind_name(TrajectoryKind kind) noexcept;
TrajectoryKind parse_trajectory_kind(std::string_view name);

struct ShapeTrajectory {
  std::string shape_id;
  TrajectoryKind kind = TrajectoryKind::CircleOrbit;
  double center_x = 0.0;
  double center_y = 0.0;
  double amplitude = 0.0;  // px
  double omega = 0.0;      // rad/s, sign gives direction
  double phase = 0.0;      // rad
  double heading = 0.0;    // rad, axis of a linear bounce
  double ratio = 1.0;      // vertical/horizontal frequency ratio of a lissajous

  friend bool operator==(const ShapeTrajectory&, const ShapeTrajectory&) = default;
};

// Closed-form position, defined and continuous for every real t (negative t
// is the backwards extension used by lag search). The public contract only
// promises t >= 0.
Point trajectory_position(const ShapeTrajectory& traj, double t_ms) noexcept;

// Checked variant: InvalidArgument for t_ms < 0.
Point shape_position(const ShapeTrajectory& traj, double t_ms);

struct EpochWindow {
  TimeMs start_ms = 0;
  TimeMs end_ms = 0;  // exclusive

  bool contains(TimeMs t) const noexcept { return t >= start_ms && t < end_ms; }
};

struct AuthConfig {
  int shape_count = 6;
  TimeMs epoch_ms = 1500;
  TimeMs inter_epoch_ms = 250;
  int password_length = 4;
  TimeMs lag_min_ms = 0;
  TimeMs lag_max_ms = 300;
  TimeMs lag_step_ms = 50;
  // An epoch only counts as a match when the runner-up distance is at least
  // accept_margin times the winner's; 1.0 accepts any strict winner.
  double accept_margin = 1.0;
  double min_separation_px = 80.0;
  TimeMs separation_step_ms = 20;
  int min_valid_samples = 10;
  ScreenSize screen{};

  void validate() const;
  TimeMs nominal_duration_ms() const noexcept {
    return epoch_ms * password_length + inter_epoch_ms * (password_length - 1);
  }
  EpochWindow epoch_window(int index) const noexcept;
  std::vector<TimeMs> lags() const;
};

std::string shape_id_for(int index);

// Seeded trajectories with pairwise separation >= min_separation_px at every
// separation_step_ms instant of one nominal session. Each shape is redrawn
// until it clears the shapes already placed; SeparationUnsatisfiable after
// 1000 redraws of a single shape.
std::vector<ShapeTrajectory> gen_trajectories(const AuthConfig& config, std::uint64_t seed);

// Smallest pairwise distance over the separation grid of one session.
double min_pairwise_separation(std::span<const ShapeTrajectory> trajectories,
                               const AuthConfig& config);

struct EpochMatch {
  std::size_t winner = 0;  // index into the trajectory list
  std::vector<double> distances;
  std::vector<TimeMs> best_lags;
  int valid_samples = 0;
};

// For every shape: the minimum over lags of the mean distance between each
// valid in-window sample at t and the shape at t - lag. Lowest index wins
// ties. InsufficientGaze below min_valid_samples.
EpochMatch match_epoch(std::span<const GazeSample> samples,
                       std::span<const ShapeTrajectory> trajectories, EpochWindow window,
                       std::span<const TimeMs> lags, int min_valid_samples = 10);

enum class AuthOutcome { Accept, Reject, Abort };

std::string_view auth_outcome_name(AuthOutcome outcome) noexcept;

struct EpochResult {
  int index = 0;  // 0-based
  std::string expected;
  std::string winner;
  std::vector<double> distances;
  std::vector<TimeMs> best_lags;
  bool matched = false;
};

struct AuthSession {
  std::uint64_t seed = 0;
  AuthConfig config;
  std::vector<ShapeTrajectory> trajectories;
  std::vector<std::string> password;
  std::vector<EpochResult> epochs;
  AuthOutcome outcome = AuthOutcome::Abort;
  TimeMs wall_ms = 0;
  std::string abort_reason;

  // `auth 1 <seed> <K> <shape_count>`, one `epoch` line per evaluated epoch,
  // then `outcome <Accept|Reject|Abort> <wall_ms>`.
  std::string transcript() const;
};

// Incremental session driver: samples are fed in time order and each epoch
// is scored as soon as a sample at or past its end arrives (or at finish).
// An empty password runs an enrollment: every decisive epoch counts, and the
// winners become the enrolled password.
class AuthRunner {
 public:
  AuthRunner(const AuthConfig& config, std::uint64_t seed, std::vector<std::string> password);
  AuthRunner(const AuthConfig& config, std::uint64_t seed, std::vector<std::string> password,
             std::vector<ShapeTrajectory> trajectories);

  // Appends the epochs closed by this sample to `closed`.
  void feed(const GazeSample& sample, std::vector<EpochResult>& closed);
  void finish(std::vector<EpochResult>& closed);

  bool done() const noexcept { return done_; }
  bool enrolling() const noexcept { return enrolling_; }
  // Winners of an accepted enrollment, otherwise empty.
  std::vector<std::string> enrolled_password() const;
  const AuthSession& session() const noexcept { return session_; }
  std::span<const ShapeTrajectory> trajectories() const noexcept { return session_.trajectories; }

 private:
  void close_epoch(std::vector<EpochResult>& closed);

  AuthSession session_;
  std::vector<TimeMs> lags_;
  std::vector<GazeSample> buffer_;
  std::optional<TimeMs> last_t_;
  int current_ = 0;
  bool rejected_ = false;
  bool enrolling_ = false;
  bool done_ = false;
};

AuthSession run_auth_session(std::span<const GazeSample> stream, const AuthConfig& config,
                             std::uint64_t seed, std::span<const std::string> password);

// Uniformly drawn password of config.password_length shape ids (repeats allowed).
std::vector<std::string> random_password(const AuthConfig& config, std::uint64_t seed);

// Reference authentication baselines, kept for reports only.
namespace reference {
inline constexpr double kAuthAccuracyTrueCalibration = 0.99;
inline constexpr double kAuthAccuracyDisturbedCalibration = 0.96;
inline constexpr TimeMs kAuthCurrentDurationMs = 15000;
inline constexpr TimeMs kAuthTargetDurationMs = 7000;
}  // namespace reference

}  // namespace gaze
