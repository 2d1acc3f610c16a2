#pragma once

// Dwell-free gaze typing: the key under the gaze is committed by a trigger
// press. Sessions keep the keystroke log; metrics follow the usual text-entry
// conventions (WPM with 5-character words, KSPC, rate of backspace activation).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/arbiter.hpp"

namespace gaze {

enum class KeyAction { Character, Backspace, Space, Enter };

struct Key {
  std::string id;
  std::string label;
  KeyAction action = KeyAction::Character;
  std::string output;  // one UTF-8 character for Character keys
  Rect rect;

  friend bool operator==(const Key&, const Key&) = default;
};

class KeyboardLayout {
 public:
  KeyboardLayout() = default;
  // Throws InvalidArgument for overlapping or empty rectangles and
  // duplicate ids.
  explicit KeyboardLayout(std::vector<Key> keys);

  const Key* key_at(Point p) const noexcept;
  const Key* find(std::string_view id) const noexcept;
  // Key producing the given character (space maps to the Space key).
  const Key* key_for(std::string_view character) const noexcept;
  std::span<const Key> keys() const noexcept { return keys_; }

  // One key per line: `key <id> <label> <output|BACKSPACE|SPACE|ENTER> <x> <y> <w> <h>`.
  std::string serialize() const;
  static KeyboardLayout parse(std::string_view text);
  static KeyboardLayout load(const std::string& path);

  // QWERTY grid of 120x120 px keys with 8 px gaps and a bottom row of
  // Space, Backspace and Enter.
  static KeyboardLayout default_qwerty();

 private:
  std::vector<Key> keys_;
};

// Boundary-inclusive hit test; returns the key id.
std::optional<std::string> key_at(const KeyboardLayout& layout, Point p);

struct Keystroke {
  TimeMs t_ms = 0;
  std::string key_id;  // empty for a press over no key

  bool miss() const noexcept { return key_id.empty(); }
  friend bool operator==(const Keystroke&, const Keystroke&) = default;
};

std::size_t utf8_length(std::string_view s) noexcept;
void utf8_pop_back(std::string& s) noexcept;

class TypingSession {
 public:
  TypingSession(KeyboardLayout layout, std::string target_phrase);

  void step(const GazeSample& sample);
  // A press activates the key under the latest valid gaze point; releases
  // are ignored. NoGazeFix when no valid gaze has been seen yet.
  std::optional<Keystroke> step(const TriggerEvent& trigger);
  std::optional<Keystroke> step(const InputEvent& event);

  const KeyboardLayout& layout() const noexcept { return layout_; }
  const std::string& target() const noexcept { return target_; }
  const std::string& transcribed() const noexcept { return transcribed_; }
  std::span<const Keystroke> keystrokes() const noexcept { return log_; }
  std::optional<Point> gaze() const noexcept { return gaze_; }

  // Folds a keystroke log into text: Character and Space keys append,
  // Backspace removes the last character, Enter and misses leave it alone.
  static std::string fold(const KeyboardLayout& layout, std::span<const Keystroke> log);

 private:
  KeyboardLayout layout_;
  std::string target_;
  std::string transcribed_;
  std::vector<Keystroke> log_;
  std::optional<Point> gaze_;
};

enum class RbaBasis { Keystrokes, Characters };

struct TypingMetrics {
  double wpm = 0.0;
  double kspc = 0.0;
  double rba = 0.0;
  int keystrokes = 0;
  int backspaces = 0;
  int misses = 0;
  int characters = 0;
  TimeMs duration_ms = 0;
};

// wpm = (|T| - 1) / seconds * 60 / 5 over the first-to-last keystroke span
// (0 when the span or |T| - 1 is zero); kspc = keystrokes / |T| (0 for empty
// text); rba = backspaces / keystrokes, or / |T| with RbaBasis::Characters.
// EmptySession without keystrokes.
TypingMetrics compute_metrics(const TypingSession& session, RbaBasis basis = RbaBasis::Keystrokes);

// Reference text-entry baselines, kept for reports only.
namespace reference {
inline constexpr double kTypingImpairedWpm = 7.39;
inline constexpr double kTypingImpairedKspc = 1.06;
inline constexpr double kTypingImpairedRba = 0.06;
inline constexpr double kTypingAbleBodiedWpm = 10.48;
inline constexpr double kTypingAbleBodiedKspc = 1.09;
inline constexpr double kTypingAbleBodiedRba = 0.09;
inline constexpr double kTypingTypicalWpm = 6.97;
}  // namespace reference

}  // namespace gaze
