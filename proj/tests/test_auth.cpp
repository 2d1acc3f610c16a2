#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "gaze/auth.hpp"
#include "gaze/error.hpp"
#include "gaze/synth.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

ShapeTrajectory circle(double cx, double cy, double amp, double omega, double phase) {
  return {"A", TrajectoryKind::CircleOrbit, cx, cy, amp, omega, phase, 0.0, 1.0};
}

std::vector<GazeSample> follow(const ShapeTrajectory& t, EpochWindow w, TimeMs delay = 0, double dx = 0) {
  std::vector<GazeSample> out;
  for (TimeMs s = w.start_ms; s < w.end_ms; s += 16) {
    const Point p = trajectory_position(t, static_cast<double>(s - delay));
    out.push_back({s, p.x + dx, p.y, true});
  }
  return out;
}

}  // namespace

TEST_CASE("default session fits the duration goal") {
  const AuthConfig c;
  CHECK(c.nominal_duration_ms() == 6750);
  CHECK(c.nominal_duration_ms() < reference::kAuthTargetDurationMs);
  CHECK(c.epoch_window(0).start_ms == 0);
  CHECK(c.epoch_window(1).start_ms == 1750);
  CHECK(c.epoch_window(3).end_ms == 6750);
  CHECK(c.lags() == std::vector<TimeMs>{0, 50, 100, 150, 200, 250, 300});
}

TEST_CASE("closed-form shape positions") {
  const auto c = circle(500, 500, 100, 1.0, 0.0);
  const Point p0 = shape_position(c, 0);
  CHECK(p0.x == 600.0);
  CHECK(p0.y == 500.0);
  const Point half = shape_position(c, std::numbers::pi * 1000.0);
  CHECK(half.x == doctest::Approx(400.0));
  CHECK(half.y == doctest::Approx(500.0));
  CHECK_THROWS_AS((void)shape_position(c, -1.0), Error);

  // Bounce along +x with amplitude 100 and a half period of one second.
  const ShapeTrajectory bounce{"B", TrajectoryKind::LinearBounce, 300, 200, 100, std::numbers::pi, 0.0, 0.0, 1.0};
  CHECK(shape_position(bounce, 0).x == doctest::Approx(300));
  CHECK(shape_position(bounce, 250).x == doctest::Approx(350));
  CHECK(shape_position(bounce, 500).x == doctest::Approx(400));
  CHECK(shape_position(bounce, 1000).x == doctest::Approx(300));
  CHECK(shape_position(bounce, 1500).x == doctest::Approx(200));
  CHECK(shape_position(bounce, 1500).y == doctest::Approx(200));

  const ShapeTrajectory liss{"C", TrajectoryKind::Lissajous, 0, 0, 50, 1.0, 0.3, 0.0, 2.0};
  const Point q = shape_position(liss, 700);
  CHECK(q.x == doctest::Approx(50 * std::sin(0.7 + 0.3)));
  CHECK(q.y == doctest::Approx(50 * std::sin(2 * (0.7 + 0.3))));
}

TEST_CASE("trajectories are continuous") {
  const AuthConfig c;
  for (const auto& t : gen_trajectories(c, 5)) {
    for (double ms = -500; ms < 7000; ms += 1) {
      CHECK(distance(trajectory_position(t, ms), trajectory_position(t, ms + 1)) < 2.0);
    }
  }
}

TEST_CASE("trajectory generation") {
  const AuthConfig c;
  CHECK(gen_trajectories(c, 42) == gen_trajectories(c, 42));
  for (std::uint64_t s = 0; s < 100; ++s) CHECK(gen_trajectories(c, s) != gen_trajectories(c, s + 1000));

  const auto t = gen_trajectories(c, 9);
  REQUIRE(t.size() == 6);
  CHECK(t[0].shape_id == "A");
  CHECK(t[5].shape_id == "F");
  CHECK(min_pairwise_separation(t, c) >= 80.0);
  for (const auto& traj : t) {
    for (TimeMs ms = 0; ms <= c.nominal_duration_ms(); ms += 10) {
      const Point p = shape_position(traj, static_cast<double>(ms));
      CHECK(p.x >= 0);
      CHECK(p.x <= 1920);
      CHECK(p.y >= 0);
      CHECK(p.y <= 1080);
    }
  }

  AuthConfig one;
  one.shape_count = 1;
  CHECK_THROWS_AS(gen_trajectories(one, 1), Error);

  AuthConfig crowded;
  crowded.shape_count = 26;
  crowded.min_separation_px = 900;
  try {
    (void)gen_trajectories(crowded, 1);
    FAIL("expected SeparationUnsatisfiable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeparationUnsatisfiable);
  }
}

TEST_CASE("distinct seeds give distinct parameter sets") {
  const AuthConfig c;
  std::set<std::vector<double>> seen;
  const int seeds = 10000;
  int collisions = 0;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> key;
    for (const auto& t : gen_trajectories(c, static_cast<std::uint64_t>(s))) {
      key.insert(key.end(), {t.center_x, t.center_y, t.amplitude, t.omega, t.phase});
    }
    collisions += seen.insert(key).second ? 0 : 1;
  }
  CHECK(collisions < seeds / 1000);
}

TEST_CASE("epoch matching") {
  const AuthConfig c;
  const auto shapes = gen_trajectories(c, 3);
  const auto lags = c.lags();
  const EpochWindow w = c.epoch_window(1);

  const auto perfect = match_epoch(follow(shapes[0], w), shapes, w, lags);
  CHECK(perfect.winner == 0);
  CHECK(perfect.distances[0] == 0.0);
  CHECK(perfect.best_lags[0] == 0);

  const auto shifted_samples = follow(shapes[1], w, 0, 2.0);
  const auto shifted = match_epoch(shifted_samples, shapes, w, lags);
  const auto expect = oracle::epoch_score(shifted_samples, shapes, w, lags);
  CHECK(shifted.winner == 1);
  CHECK(expect.winner == 1);
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    CHECK(shifted.distances[k] == doctest::Approx(expect.distances[k]).epsilon(1e-12));
  }

  const auto delayed = match_epoch(follow(shapes[0], w, 100), shapes, w, lags);
  CHECK(delayed.winner == 0);
  CHECK(delayed.best_lags[0] == 100);
  CHECK(delayed.distances[0] == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<GazeSample> sparse = follow(shapes[0], w);
  sparse.resize(9);
  try {
    (void)match_epoch(sparse, shapes, w, lags);
    FAIL("expected InsufficientGaze");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientGaze);
  }
}

TEST_CASE("epoch matching agrees with the brute-force table on noisy followers") {
  const AuthConfig c;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto shapes = gen_trajectories(c, seed);
    const auto password = random_password(c, seed);
    const auto gaze = synth_pursuit(shapes, c, password, 60.0, {20.0, 80, seed});
    for (int e = 0; e < c.password_length; ++e) {
      const auto got = match_epoch(gaze, shapes, c.epoch_window(e), c.lags());
      const auto want = oracle::epoch_score(gaze, shapes, c.epoch_window(e), c.lags());
      CHECK(got.winner == want.winner);
      for (std::size_t k = 0; k < shapes.size(); ++k) {
        CHECK(got.distances[k] == doctest::Approx(want.distances[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("authentication sessions") {
  const AuthConfig c;
  const std::uint64_t seed = 77;
  const auto shapes = gen_trajectories(c, seed);
  const std::vector<std::string> password{"B", "D", "A", "B"};

  const auto ideal = synth_pursuit(shapes, c, password, 60.0, {});
  const auto ok = run_auth_session(ideal, c, seed, password);
  CHECK(ok.outcome == AuthOutcome::Accept);
  CHECK(ok.wall_ms == 6750);
  REQUIRE(ok.epochs.size() == 4);
  for (const auto& e : ok.epochs) {
    CHECK(e.matched);
    CHECK(e.winner == e.expected);
  }
  CHECK(ok.epochs[0].distances[1] == 0.0);

  const std::vector<std::string> wrong{"C", "D", "A", "B"};
  const auto rejected = run_auth_session(synth_pursuit(shapes, c, wrong, 60.0, {}), c, seed, password);
  CHECK(rejected.outcome == AuthOutcome::Reject);
  REQUIRE(rejected.epochs.size() == 4);
  CHECK_FALSE(rejected.epochs[0].matched);
  CHECK(rejected.epochs[0].winner == "C");
  CHECK(rejected.epochs[1].matched);

  std::vector<GazeSample> truncated(ideal.begin(), ideal.begin() + 150);
  const auto aborted = run_auth_session(truncated, c, seed, password);
  CHECK(aborted.outcome == AuthOutcome::Abort);
  CHECK_FALSE(aborted.abort_reason.empty());

  CHECK_THROWS_AS(run_auth_session(ideal, c, seed, std::vector<std::string>{"A"}), Error);
  CHECK_THROWS_AS(run_auth_session(ideal, c, seed, std::vector<std::string>{"A", "B", "C", "Z"}), Error);
}

TEST_CASE("runner validates timestamps and supports enrollment") {
  const AuthConfig c;
  const auto shapes = gen_trajectories(c, 8);
  const std::vector<std::string> password{"F", "E", "D", "C"};
  const auto gaze = synth_pursuit(shapes, c, password, 60.0, {5.0, 0, 1});

  AuthRunner enroll(c, 8, {});
  CHECK(enroll.enrolling());
  std::vector<EpochResult> closed;
  for (const auto& s : gaze) enroll.feed(s, closed);
  enroll.finish(closed);
  CHECK(closed.size() == 4);
  CHECK(enroll.session().outcome == AuthOutcome::Accept);
  CHECK(enroll.enrolled_password() == password);

  AuthRunner runner(c, 8, password);
  runner.feed(gaze[0], closed);
  CHECK_THROWS_AS(runner.feed(gaze[0], closed), Error);
}

TEST_CASE("accept margin demands a decisive winner") {
  AuthConfig c;
  c.accept_margin = 50.0;
  const auto shapes = gen_trajectories(c, 21);
  const std::vector<std::string> password{"A", "A", "A", "A"};
  const auto noisy = synth_pursuit(shapes, c, password, 60.0, {15.0, 0, 4});
  const auto s = run_auth_session(noisy, c, 21, password);
  CHECK(s.outcome == AuthOutcome::Reject);
  for (const auto& e : s.epochs) CHECK(e.winner == "A");
}

TEST_CASE("session transcript format") {
  const AuthConfig c;
  const auto shapes = gen_trajectories(c, 2);
  const std::vector<std::string> password{"A", "B", "C", "D"};
  const auto s = run_auth_session(synth_pursuit(shapes, c, password, 60.0, {}), c, 2, password);
  const std::string text = s.transcript();
  CHECK(text.starts_with("auth 1 2 4 6\nepoch 1 winner A distances A:0.000000 B:"));
  CHECK(text.ends_with("outcome Accept 6750\n"));
}

TEST_CASE("random passwords are seed-deterministic") {
  const AuthConfig c;
  CHECK(random_password(c, 5) == random_password(c, 5));
  CHECK(random_password(c, 5).size() == 4);
}
