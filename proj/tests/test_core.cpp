#include <doctest.h>

#include "gaze/core.hpp"
#include "gaze/error.hpp"
#include "gaze/rng.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

std::vector<GazeSample> random_stream(Rng& rng, int n) {
  std::vector<GazeSample> out;
  TimeMs t = static_cast<TimeMs>(rng.below(20));
  Point focus{rng.uniform(0, 1920), rng.uniform(0, 1080)};
  for (int i = 0; i < n; ++i) {
    t += 1 + static_cast<TimeMs>(rng.below(30));
    if (rng.uniform() < 0.08) focus = {rng.uniform(0, 1920), rng.uniform(0, 1080)};
    const bool valid = rng.uniform() > 0.05;
    out.push_back({t, focus.x + rng.gaussian(8.0), focus.y + rng.gaussian(8.0), valid});
  }
  return out;
}

}  // namespace

TEST_CASE("stream ingestion enforces strictly increasing time") {
  GazeStream stream;
  stream.ingest({0, 100, 100, true});
  CHECK(stream.size() == 1);
  stream.ingest({10, 100, 100, true});
  try {
    stream.ingest({10, 5, 5, true});
    FAIL("expected NonMonotonicTimestamp");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotonicTimestamp);
  }
  CHECK(stream.size() == 2);
  stream.ingest({20, 1, 1, false});
  CHECK(stream.size() == 3);
  CHECK(*stream.last_time() == 20);
  CHECK_THROWS_AS(stream.ingest({3, 1, 1, true}), Error);
}

TEST_CASE("dispersion is the bounding-box width plus height") {
  std::vector<GazeSample> w{{0, 0, 0, true}, {1, 10, 3, true}, {2, 4, -2, true}};
  CHECK(dispersion(w) == doctest::Approx(15.0));
  CHECK(dispersion({}) == 0.0);
}

TEST_CASE("fixation detection examples") {
  CHECK(detect_fixations({}, 40, 100).empty());

  std::vector<GazeSample> steady;
  for (int i = 0; i < 20; ++i) steady.push_back({i * 10, 100, 100, true});
  const auto one = detect_fixations(steady, 40, 100);
  REQUIRE(one.size() == 1);
  CHECK(one[0].cx == 100.0);
  CHECK(one[0].cy == 100.0);
  CHECK(one[0].duration_ms() == 190);
  CHECK(one[0].sample_count == 20);

  std::vector<GazeSample> two;
  const double jitter[] = {-5, 3, 5, -2, 0, 4, -4, 1};
  for (int i = 0; i < 8; ++i) two.push_back({i * 10, 100 + jitter[i], 100 - jitter[i] / 2, true});
  for (int i = 0; i < 6; ++i) two.push_back({80 + i * 10, 300 + jitter[i], 300 + jitter[7 - i], true});
  const auto pair = detect_fixations(two, 40, 50);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].cx == doctest::Approx(100).epsilon(0.05));
  CHECK(pair[1].cy == doctest::Approx(300).epsilon(0.05));
  CHECK(pair == oracle::fixations(two, 40, 50));
}

TEST_CASE("invalid samples split fixation windows") {
  std::vector<GazeSample> s;
  for (int i = 0; i < 30; ++i) s.push_back({i * 10, 50, 50, i != 15});
  const auto f = detect_fixations(s, 40, 100);
  REQUIRE(f.size() == 2);
  CHECK(f[0].end_ms == 140);
  CHECK(f[1].start_ms == 160);
}

TEST_CASE("fixation thresholds must be positive") {
  std::vector<GazeSample> s{{0, 0, 0, true}};
  CHECK_THROWS_AS(detect_fixations(s, 0.0, 100), Error);
  CHECK_THROWS_AS(detect_fixations(s, 40.0, 0), Error);
}

TEST_CASE("fixation detection agrees with the sliding-window oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_stream(rng, 1 + static_cast<int>(rng.below(200)));
    const double disp = rng.uniform(10, 80);
    const TimeMs dur = 20 + static_cast<TimeMs>(rng.below(150));
    const auto got = detect_fixations(s, disp, dur);
    REQUIRE(got == oracle::fixations(s, disp, dur));
    for (const auto& f : got) {
      CHECK(f.duration_ms() >= dur);
      std::vector<GazeSample> members;
      for (const auto& x : s) {
        if (x.t_ms >= f.start_ms && x.t_ms <= f.end_ms) members.push_back(x);
      }
      CHECK(dispersion(members) <= disp);
    }
    CHECK(got == detect_fixations(s, disp, dur));
  }
}

TEST_CASE("scan-path saccade length") {
  CHECK(build_scanpath({}).total_saccade_length == 0.0);
  CHECK(build_scanpath({{50, 50, 0, 100, 5}}).total_saccade_length == 0.0);
  const auto sp = build_scanpath({{0, 0, 0, 100, 5}, {3, 4, 200, 300, 5}});
  CHECK(sp.total_saccade_length == 5.0);
  CHECK(sp.fixations.size() == 2);
  try {
    build_scanpath({{0, 0, 0, 250, 5}, {3, 4, 200, 300, 5}});
    FAIL("expected OverlappingFixations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingFixations);
  }
}

TEST_CASE("calibration disturbance") {
  std::vector<GazeSample> s{{0, 100, 100, true}, {10, 7, 8, false}, {20, 1000.25, 3.5, true}};
  CHECK(apply_disturbance(s, {}) == s);

  const auto moved = apply_disturbance(s, {10, -5, 1.0});
  CHECK(moved[0].x == 110.0);
  CHECK(moved[0].y == 95.0);
  CHECK(moved[1] == s[1]);
  CHECK(apply_disturbance(moved, {-10, 5, 1.0}) == s);
  CHECK(distance(moved[0].point(), moved[2].point()) == doctest::Approx(distance(s[0].point(), s[2].point())));

  const auto scaled = apply_disturbance(s, {0, 0, 2.0});
  CHECK(scaled[0].x == doctest::Approx((100 - 960) * 2.0 + 960));
  CHECK(scaled[0].y == doctest::Approx((100 - 540) * 2.0 + 540));
  CHECK(scaled[0].t_ms == 0);
}
