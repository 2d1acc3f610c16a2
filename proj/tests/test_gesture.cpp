#include <doctest.h>

#include <cmath>

#include "gaze/error.hpp"
#include "gaze/gesture.hpp"
#include "gaze/rng.hpp"
#include "gaze/synth.hpp"

using namespace gaze;

namespace {

std::vector<Point> line(Point a, Point b) { return {a, b}; }

// Resampled L (down 100, right 100) computed from its arc-length formula.
std::vector<Point> l_points(int n, bool mirrored) {
  std::vector<Point> out;
  for (int k = 0; k < n; ++k) {
    const double s = 200.0 * k / (n - 1);
    Point p = s <= 100.0 ? Point{0, s} : Point{s - 100.0, 100.0};
    if (mirrored) p.x = -p.x;
    out.push_back(p);
  }
  return out;
}

std::vector<Point> canonical(std::vector<Point> pts) {
  double cx = 0, cy = 0;
  for (auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (auto& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double side = std::max(hi_x - lo_x, hi_y - lo_y);
  for (auto& p : pts) p = {(p.x - cx) / side, (p.y - cy) / side};
  return pts;
}

void check_close(const std::vector<Point>& a, const std::vector<Point>& b, double tol = 1e-9) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].x - b[i].x) <= tol);
    CHECK(std::abs(a[i].y - b[i].y) <= tol);
  }
}

}  // namespace

TEST_CASE("normalize a straight segment") {
  const auto pts = normalize(line({0, 0}, {100, 0}), 4);
  check_close(pts, {{-0.5, 0}, {-1.0 / 6, 0}, {1.0 / 6, 0}, {0.5, 0}}, 1e-12);
}

TEST_CASE("normalize rejects degenerate paths") {
  try {
    (void)normalize(std::vector<Point>{{5, 5}, {5, 5}, {5, 5}});
    FAIL("expected DegeneratePath");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePath);
  }
  CHECK_THROWS_AS((void)normalize(line({0, 0}, {1, 0}), 1), Error);
}

TEST_CASE("normalize is idempotent on canonical paths") {
  for (const auto& path : {line({0, 0}, {100, 0}), line({3, 9}, {3, -40}), line({0, 0}, {30, 40}),
                           std::vector<Point>{{0, 0}, {0, 100}, {100, 100}}}) {
    const auto once = normalize(path, 65);
    check_close(normalize(once, 65), once);
  }
}

TEST_CASE("normalize is invariant to translation and uniform scale") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> path;
    for (int i = 0; i < 12; ++i) path.push_back({rng.uniform(0, 500), rng.uniform(0, 500)});
    const double a = rng.uniform(0.1, 10);
    const Point b{rng.uniform(-1000, 1000), rng.uniform(-1000, 1000)};
    std::vector<Point> moved;
    for (auto p : path) moved.push_back({a * p.x + b.x, a * p.y + b.y});
    check_close(normalize(moved), normalize(path));
  }
}

TEST_CASE("canonical frame invariants") {
  const auto pts = normalize(std::vector<Point>{{0, 0}, {200, 300}, {400, 0}});
  REQUIRE(pts.size() == 64);
  double cx = 0, cy = 0, lo_x = 1, hi_x = -1, lo_y = 1, hi_y = -1;
  for (auto p : pts) {
    cx += p.x;
    cy += p.y;
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  CHECK(std::abs(cx / 64) < 1e-12);
  CHECK(std::abs(cy / 64) < 1e-12);
  CHECK(std::max(hi_x - lo_x, hi_y - lo_y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("training") {
  const GesturePath l{{{0, 0}, {0, 100}, {100, 100}}, PathSource::RawSamples};
  const auto one = train_template("l", std::span(&l, 1), "act", 8);
  CHECK(one.points == normalize(l.points, 8));
  const std::vector<GesturePath> twice{l, l};
  check_close(train_template("l", twice, "act", 8).points, one.points, 1e-12);

  const std::vector<GesturePath> mirrors{{{{0, 0}, {0, 100}, {100, 100}}, PathSource::RawSamples},
                                         {{{0, 0}, {0, 100}, {-100, 100}}, PathSource::RawSamples}};
  const auto a = canonical(l_points(8, false));
  const auto b = canonical(l_points(8, true));
  std::vector<Point> mean;
  for (int i = 0; i < 8; ++i) mean.push_back({(a[i].x + b[i].x) / 2, (a[i].y + b[i].y) / 2});
  check_close(train_template("t", mirrors, "act", 8).points, canonical(mean));
}

TEST_CASE("store rejects duplicate names and bad tokens") {
  TemplateStore store;
  const GesturePath p{line({0, 0}, {10, 0}), PathSource::RawSamples};
  store.train("a", std::span(&p, 1), "x.y");
  try {
    store.train("a", std::span(&p, 1), "x.y");
    FAIL("expected DuplicateName");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateName);
  }
  CHECK_THROWS_AS(store.train("has space", std::span(&p, 1), "x"), Error);
  CHECK(store.size() == 1);
}

TEST_CASE("recognition against horizontal and vertical strokes") {
  TemplateStore store;
  const GesturePath h{line({0, 0}, {100, 0}), PathSource::RawSamples};
  const GesturePath v{line({0, 0}, {0, 100}), PathSource::RawSamples};
  CHECK_FALSE(store.recognize(h.points));
  store.train("horizontal", std::span(&h, 1), "h");
  store.train("vertical", std::span(&v, 1), "v");

  const auto self = store.recognize(line({5, 5}, {205, 5}));
  REQUIRE(self);
  CHECK(self->template_name == "horizontal");
  CHECK(self->distance <= 1e-9);
  CHECK(self->score == 1.0);

  // Distance between the two canonical strokes by direct summation.
  double expected = 0.0;
  for (int k = 0; k < 64; ++k) expected += std::sqrt(2.0) * std::abs(-0.5 + k / 63.0);
  expected /= 64;
  const auto& t = store.templates();
  CHECK(path_distance(t[0].points, t[1].points) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(path_distance(t[0].points, t[1].points) == path_distance(t[1].points, t[0].points));
  CHECK(score_from_distance(expected) == doctest::Approx(1.0 - expected / kHalfDiagonal));
  CHECK(score_from_distance(10.0) == 0.0);

  const GesturePath d{line({0, 0}, {100, 100}), PathSource::RawSamples};
  const auto diag = recognize(normalize(d.points), t, 0.0);
  REQUIRE(diag);
  CHECK(diag->template_name == "horizontal");  // equidistant: earliest trained wins
  CHECK_FALSE(recognize(d.points, t, 0.99));
}

TEST_CASE("recognition winner is stable under translation and scale") {
  const auto store = bundled_store();
  Rng rng(11);
  for (const auto& g : bundled_gestures()) {
    std::vector<Point> wobbly;
    for (auto p : g.path) wobbly.push_back({p.x + rng.gaussian(8), p.y + rng.gaussian(8)});
    const auto base = store.recognize(wobbly);
    std::vector<Point> moved;
    for (auto p : wobbly) moved.push_back({3.5 * p.x - 70, 3.5 * p.y + 12});
    const auto shifted = store.recognize(moved);
    REQUIRE(base);
    REQUIRE(shifted);
    CHECK(base->template_name == shifted->template_name);
    CHECK(base->distance == doctest::Approx(shifted->distance).epsilon(1e-9));
  }
}

TEST_CASE("bundled templates self-match and stay apart") {
  const auto store = bundled_store();
  REQUIRE(store.size() == 8);
  for (const auto& g : bundled_gestures()) {
    const auto r = store.recognize(g.path);
    REQUIRE(r);
    CHECK(r->template_name == g.name);
    CHECK(r->action_id == g.action_id);
    CHECK(r->distance <= 1e-9);
  }
  const auto t = store.templates();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) CHECK(path_distance(t[i].points, t[j].points) > 0.1);
  }
}

TEST_CASE("synthetic gestures with small noise are recognized") {
  const auto store = bundled_store();
  int correct = 0;
  for (int i = 0; i < 80; ++i) {
    const auto& tpl = store.templates()[static_cast<std::size_t>(i) % store.size()];
    const auto path = synth_gesture(tpl, 1.0, {0, 0}, {0.02, 0, static_cast<std::uint64_t>(i)});
    const auto r = store.recognize(path.points);
    correct += r && r->template_name == tpl.name ? 1 : 0;
  }
  CHECK(correct >= 79);
  const auto exact = synth_gesture(store.templates()[3], 250.0, {400, 300}, {});
  CHECK(store.recognize(exact.points)->distance <= 1e-9);
}

TEST_CASE("evaluation metrics") {
  TemplateStore store;
  const GesturePath h{line({0, 0}, {100, 0}), PathSource::RawSamples};
  const GesturePath v{line({0, 0}, {0, 100}), PathSource::RawSamples};
  store.train("h", std::span(&h, 1), "h");
  store.train("v", std::span(&v, 1), "v");

  std::vector<LabeledPath> all_right;
  for (int i = 0; i < 3; ++i) all_right.push_back({h, "h"});
  all_right.push_back({v, "v"});
  const auto perfect = evaluate(store, all_right);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.macro_f1 == 1.0);

  std::vector<LabeledPath> set;
  for (int i = 0; i < 4; ++i) set.push_back({h, "h"});
  set.push_back({v, "h"});
  for (int i = 0; i < 5; ++i) set.push_back({v, "v"});
  const auto ev = evaluate(store, set);
  CHECK(ev.accuracy == doctest::Approx(0.9));
  // h: precision 1, recall 4/5; v: precision 5/6, recall 1.
  const double f1_h = 2 * 1.0 * 0.8 / (1.0 + 0.8);
  const double f1_v = 2 * (5.0 / 6) * 1.0 / (5.0 / 6 + 1.0);
  CHECK(ev.macro_f1 == doctest::Approx((f1_h + f1_v) / 2).epsilon(1e-12));
  CHECK(ev.confusion[0][1] == 1);
  CHECK(ev.confusion[0].size() == 3);

  try {
    (void)evaluate(store, std::vector<LabeledPath>{{h, "nope"}});
    FAIL("expected UnknownLabel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownLabel);
  }
}

TEST_CASE("template store file round trip") {
  const auto store = bundled_store();
  const auto text = store.serialize();
  const auto back = TemplateStore::parse(text);
  CHECK(back.serialize() == text);
  REQUIRE(back.size() == store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    CHECK(back.templates()[i].points == store.templates()[i].points);
    CHECK(back.templates()[i].action_id == store.templates()[i].action_id);
  }
  CHECK(back.reject_threshold() == store.reject_threshold());

  try {
    (void)TemplateStore::parse("gtpl 1 2 0.75\na b 0 0 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS((void)TemplateStore::parse("nope\n"), ParseError);
}

TEST_CASE("gesture paths from captured samples") {
  std::vector<GazeSample> s;
  for (int i = 0; i < 20; ++i) s.push_back({i * 10, 100, 100, true});
  for (int i = 0; i < 20; ++i) s.push_back({200 + i * 10, 400, 100, true});
  const auto fix = path_from_samples(s, PathSource::FixationCentroids);
  REQUIRE(fix.points.size() == 2);
  CHECK(fix.points[1].x == 400.0);
  s[5].valid = false;
  CHECK(path_from_samples(s, PathSource::RawSamples).points.size() == 39);
  CHECK(parse_path_source("raw") == PathSource::RawSamples);
  CHECK(path_source_name(PathSource::FixationCentroids) == "fixations");
}
