#include <doctest.h>

#include "gaze/arbiter.hpp"
#include "gaze/error.hpp"
#include "gaze/rng.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

using Trace = std::vector<InputEvent>;

GazeSample at(TimeMs t, double x, double y) { return {t, x, y, true}; }
TriggerEvent press(TimeMs t) { return {t, TriggerKind::Press}; }
TriggerEvent release(TimeMs t) { return {t, TriggerKind::Release}; }

std::vector<PointerAction> run(const Trace& trace, ArbiterConfig cfg = {}) {
  Arbiter a(cfg);
  std::vector<PointerAction> out;
  for (const auto& e : trace) a.step(e, out);
  a.finish(out);
  return out;
}

}  // namespace

TEST_CASE("single click fires after the double-click window") {
  Arbiter a;
  std::vector<PointerAction> out;
  a.step(at(0, 100, 100), out);
  a.step(press(0), out);
  a.step(release(120), out);
  a.step(at(500, 100, 100), out);
  CHECK(out.empty());
  a.step(at(521, 100, 100), out);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == PointerAction{ActionKind::Click, 100, 100, 520});
}

TEST_CASE("hold and release drag") {
  const auto out = run({at(0, 10, 20), press(0), at(200, 300, 300), release(500)});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == PointerAction{ActionKind::HoldStart, 10, 20, 300});
  CHECK(out[1] == PointerAction{ActionKind::HoldEnd, 300, 300, 500});
}

TEST_CASE("double click suppresses both clicks") {
  const auto out = run({at(0, 5, 5), press(0), release(100), press(300), release(400)});
  REQUIRE(out.size() == 1);
  CHECK(out[0].kind == ActionKind::DoubleClick);
  CHECK(out[0].t_ms == 400);
}

TEST_CASE("double-click window is inclusive") {
  CHECK(run({at(0, 5, 5), press(0), release(100), press(500), release(550)}).size() == 1);
  const auto late = run({at(0, 5, 5), press(0), release(100), press(501), release(550)});
  REQUIRE(late.size() == 2);
  CHECK(late[0] == PointerAction{ActionKind::Click, 5, 5, 500});
  CHECK(late[1] == PointerAction{ActionKind::Click, 5, 5, 950});
}

TEST_CASE("a press held exactly the threshold is a hold") {
  const auto out = run({at(0, 1, 1), press(0), release(300)});
  REQUIRE(out.size() == 2);
  CHECK(out[0].kind == ActionKind::HoldStart);
  CHECK(out[1].kind == ActionKind::HoldEnd);
}

TEST_CASE("click pending when the follow-up press becomes a hold") {
  const auto out = run({at(0, 1, 1), press(0), release(100), at(150, 7, 7), press(200), release(900)});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == PointerAction{ActionKind::Click, 1, 1, 500});
  CHECK(out[1] == PointerAction{ActionKind::HoldStart, 7, 7, 500});
  CHECK(out[2] == PointerAction{ActionKind::HoldEnd, 7, 7, 900});
}

TEST_CASE("finish resolves unreleased presses and pending clicks") {
  const auto held = run({at(0, 1, 1), press(0)});
  REQUIRE(held.size() == 1);
  CHECK(held[0] == PointerAction{ActionKind::HoldStart, 1, 1, 300});
  const auto pending = run({at(0, 1, 1), press(0), release(50)});
  REQUIRE(pending.size() == 1);
  CHECK(pending[0] == PointerAction{ActionKind::Click, 1, 1, 450});
}

TEST_CASE("protocol errors leave the arbiter unchanged") {
  Arbiter a;
  std::vector<PointerAction> out;
  try {
    a.step(press(0), out);
    FAIL("expected NoGazeFix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGazeFix);
  }
  a.step(at(0, 1, 1), out);
  try {
    a.step(release(5), out);
    FAIL("expected ProtocolViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProtocolViolation);
  }
  a.step(press(10), out);
  CHECK_THROWS_AS(a.step(press(20), out), Error);
  CHECK(a.pressed());
  CHECK_THROWS_AS(a.step(at(5, 1, 1), out), Error);
  a.step(release(30), out);
  CHECK_FALSE(a.pressed());
  CHECK_THROWS_AS(Arbiter(ArbiterConfig{0, 300}), Error);
}

TEST_CASE("invalid gaze samples do not move the point of regard") {
  const auto out = run({at(0, 1, 1), GazeSample{10, 999, 999, false}, press(20), release(40)});
  REQUIRE(out.size() == 1);
  CHECK(out[0].x == 1.0);
}

TEST_CASE("random traces agree with the trace oracle and keep the invariants") {
  Rng rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    Trace trace;
    std::vector<oracle::Press> presses;
    std::vector<std::pair<TimeMs, Point>> gaze;
    TimeMs t = 0;
    trace.push_back(at(0, 0, 0));
    gaze.push_back({0, {0, 0}});
    const int n = static_cast<int>(rng.below(7));
    for (int k = 0; k < n; ++k) {
      t += 1 + static_cast<TimeMs>(rng.below(500));
      const Point p{rng.uniform(0, 100), rng.uniform(0, 100)};
      trace.push_back(at(t, p.x, p.y));
      gaze.push_back({t, p});
      const TimeMs down = t + 1 + static_cast<TimeMs>(rng.below(50));
      trace.push_back(press(down));
      oracle::Press pr{down, std::nullopt};
      if (k + 1 < n || rng.uniform() < 0.7) {
        t = down + 1 + static_cast<TimeMs>(rng.below(450));
        trace.push_back(release(t));
        pr.release = t;
      }
      presses.push_back(pr);
      if (!pr.release) break;
    }
    const auto gaze_at = [&](TimeMs when) {
      Point p{};
      for (const auto& [gt, gp] : gaze) {
        if (gt <= when) p = gp;
      }
      return p;
    };
    const ArbiterConfig cfg{100 + static_cast<TimeMs>(rng.below(400)), 100 + static_cast<TimeMs>(rng.below(300))};
    std::vector<PointerAction> expected(2 * presses.size() + 1);
    expected.resize(oracle::arbiter_trace(presses, cfg, gaze_at, expected.data()));
    const auto got = run(trace, cfg);
    REQUIRE(got == expected);

    int starts = 0, ends = 0, attributed = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (i > 0) CHECK(got[i - 1].t_ms <= got[i].t_ms);
      if (got[i].kind == ActionKind::HoldStart) ++starts;
      if (got[i].kind == ActionKind::HoldEnd) ++ends;
      attributed += got[i].kind == ActionKind::DoubleClick ? 2 : got[i].kind == ActionKind::HoldEnd ? 0 : 1;
    }
    CHECK(attributed == static_cast<int>(presses.size()));
    if (presses.empty() || presses.back().release) CHECK(starts == ends);
  }
}

TEST_CASE("target resolution is boundary-inclusive and last-listed wins") {
  const std::vector<Target> one{{"A", {0, 0, 10, 10}}};
  CHECK(resolve_target({5, 5}, one) == "A");
  CHECK(resolve_target({10, 10}, one) == "A");
  CHECK_FALSE(resolve_target({50, 50}, {}));
  const std::vector<Target> two{{"A", {0, 0, 10, 10}}, {"B", {0, 0, 6, 6}}};
  CHECK(resolve_target({5, 5}, two) == "B");
  CHECK(resolve_target({8, 8}, two) == "A");
}
