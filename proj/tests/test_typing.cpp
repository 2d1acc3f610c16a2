#include <doctest.h>

#include "gaze/error.hpp"
#include "gaze/synth.hpp"
#include "gaze/textio.hpp"
#include "gaze/typing.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

void tap(TypingSession& s, const std::string& key_id, TimeMs t) {
  const Key* k = s.layout().find(key_id);
  REQUIRE(k);
  const Point c = k->rect.center();
  s.step(GazeSample{t - 5, c.x, c.y, true});
  s.step(TriggerEvent{t, TriggerKind::Press});
  s.step(TriggerEvent{t + 50, TriggerKind::Release});
}

std::vector<std::string> keys_for(const std::string& text) {
  std::vector<std::string> out;
  for (char ch : text) out.push_back(ch == ' ' ? "space" : std::string(1, ch));
  return out;
}

}  // namespace

TEST_CASE("hit testing") {
  const auto layout = KeyboardLayout::default_qwerty();
  const Key* a = layout.find("a");
  REQUIRE(a);
  CHECK(key_at(layout, a->rect.center()) == "a");
  CHECK_FALSE(key_at(layout, {444 + 4, 480}));  // gap between q and w
  CHECK(key_at(layout, {324, 420}) == "q");
  CHECK(key_at(layout, {444, 540}) == "q");
  CHECK_FALSE(key_at(layout, {10, 10}));
  CHECK(layout.key_for(" ")->id == "space");
  CHECK(layout.key_for("m")->id == "m");
  CHECK(layout.keys().size() == 29);
}

TEST_CASE("layouts validate their keys") {
  CHECK_THROWS_AS(KeyboardLayout({{"a", "a", KeyAction::Character, "a", {0, 0, 10, 10}},
                                  {"b", "b", KeyAction::Character, "b", {5, 5, 10, 10}}}),
                  Error);
  CHECK_THROWS_AS(KeyboardLayout({{"a", "a", KeyAction::Character, "a", {0, 0, 0, 10}}}), Error);
  CHECK_THROWS_AS(KeyboardLayout({{"a", "a", KeyAction::Character, "a", {0, 0, 10, 10}},
                                  {"a", "b", KeyAction::Character, "b", {20, 0, 10, 10}}}),
                  Error);
  const KeyboardLayout touching({{"a", "a", KeyAction::Character, "a", {0, 0, 10, 10}},
                                 {"b", "b", KeyAction::Character, "b", {10, 0, 10, 10}}});
  CHECK(touching.keys().size() == 2);
}

TEST_CASE("layout file round trip") {
  const auto layout = KeyboardLayout::default_qwerty();
  const auto back = KeyboardLayout::parse(layout.serialize());
  CHECK(std::equal(back.keys().begin(), back.keys().end(), layout.keys().begin(), layout.keys().end()));
  CHECK(KeyboardLayout::parse("# comment\n\nkey x x x 0 0 10 10\n").keys().size() == 1);
  try {
    (void)KeyboardLayout::parse("key x x x 0 0 10 10\nkey y y yy 20 0 10 10\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS((void)KeyboardLayout::parse("key é é é 0 0 10 10\nkey z z z 0 0 10 10\n"), ParseError);
}

TEST_CASE("bundled layout file equals the default layout") {
  CHECK(textio::read_file(GAZE_DATA_DIR "/qwerty.layout") == KeyboardLayout::default_qwerty().serialize());
}

TEST_CASE("typing steps") {
  TypingSession s(KeyboardLayout::default_qwerty(), "he");
  try {
    s.step(TriggerEvent{0, TriggerKind::Press});
    FAIL("expected NoGazeFix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGazeFix);
  }
  tap(s, "h", 100);
  CHECK(s.transcribed() == "h");
  CHECK(s.keystrokes().size() == 1);
  tap(s, "e", 200);
  tap(s, "backspace", 300);
  CHECK(s.transcribed() == "h");
  tap(s, "enter", 400);
  CHECK(s.transcribed() == "h");

  s.step(GazeSample{495, 10, 10, true});
  const auto miss = s.step(TriggerEvent{500, TriggerKind::Press});
  REQUIRE(miss);
  CHECK(miss->miss());
  CHECK(s.transcribed() == "h");
  CHECK_FALSE(s.step(TriggerEvent{550, TriggerKind::Release}));
  CHECK(s.keystrokes().size() == 5);
  CHECK(TypingSession::fold(s.layout(), s.keystrokes()) == s.transcribed());

  TypingSession empty(KeyboardLayout::default_qwerty(), "");
  tap(empty, "backspace", 10);
  CHECK(empty.transcribed().empty());
  CHECK(empty.keystrokes().size() == 1);
}

TEST_CASE("metrics for the hand-computed cases") {
  TypingSession plain(KeyboardLayout::default_qwerty(), "hello world");
  const auto keys = keys_for("hello world");
  for (std::size_t i = 0; i < keys.size(); ++i) tap(plain, keys[i], 1000 + static_cast<TimeMs>(i) * 6000);
  const auto m = compute_metrics(plain);
  const auto want = oracle::text_entry(11, 11, 0, 60.0);
  CHECK(std::abs(m.wpm - 2.0) <= 1e-9);
  CHECK(std::abs(m.wpm - want.wpm) <= 1e-9);
  CHECK(m.kspc == 1.0);
  CHECK(m.rba == 0.0);

  TypingSession fixed(KeyboardLayout::default_qwerty(), "hello world");
  const std::vector<std::string> with_error{"h", "e", "l", "l", "x", "backspace", "o",
                                            "space", "w", "o", "r", "l", "d"};
  for (std::size_t i = 0; i < with_error.size(); ++i) tap(fixed, with_error[i], 100 + static_cast<TimeMs>(i) * 700);
  CHECK(fixed.transcribed() == "hello world");
  const auto f = compute_metrics(fixed);
  CHECK(std::abs(f.kspc - 13.0 / 11.0) <= 1e-9);
  CHECK(std::abs(f.rba - 1.0 / 13.0) <= 1e-9);
  CHECK(f.backspaces == 1);
  CHECK(std::abs(compute_metrics(fixed, RbaBasis::Characters).rba - 1.0 / 11.0) <= 1e-9);

  TypingSession none(KeyboardLayout::default_qwerty(), "x");
  try {
    (void)compute_metrics(none);
    FAIL("expected EmptySession");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySession);
  }
}

TEST_CASE("wpm under time translation and dilation") {
  const auto keys = keys_for("the quick fox");
  const auto run = [&](TimeMs offset, TimeMs spacing) {
    TypingSession s(KeyboardLayout::default_qwerty(), "the quick fox");
    for (std::size_t i = 0; i < keys.size(); ++i) tap(s, keys[i], offset + static_cast<TimeMs>(i) * spacing);
    return compute_metrics(s).wpm;
  };
  const double base = run(100, 400);
  CHECK(run(50100, 400) == doctest::Approx(base).epsilon(1e-12));
  CHECK(run(100, 800) == doctest::Approx(base / 2).epsilon(1e-12));
}

TEST_CASE("utf-8 helpers") {
  CHECK(utf8_length("héllo") == 5);
  std::string s = "añ";
  utf8_pop_back(s);
  CHECK(s == "a");
  std::string empty;
  utf8_pop_back(empty);
  CHECK(empty.empty());
}

TEST_CASE("synthetic typists") {
  const auto layout = KeyboardLayout::default_qwerty();
  const auto perfect = synth_typist(layout, "gaze typing works", {});
  CHECK(perfect.completed);
  const auto m = compute_metrics(perfect.session);
  CHECK(m.kspc == 1.0);
  CHECK(m.rba == 0.0);
  CHECK(m.misses == 0);

  TypistModel sloppy;
  sloppy.error_rate = 0.2;
  sloppy.seed = 12;
  const auto run = synth_typist(layout, "gaze typing works", sloppy);
  CHECK(run.completed);
  const auto e = compute_metrics(run.session);
  CHECK(e.kspc > 1.0);
  CHECK(e.backspaces > 0);
  CHECK(TypingSession::fold(layout, run.session.keystrokes()) == run.session.transcribed());

  CHECK_THROWS_AS(synth_typist(layout, "Ünknown", {}), Error);
}
