#include "gaze/typing.hpp"

#include <algorithm>

#include "gaze/error.hpp"
#include "gaze/textio.hpp"

namespace gaze {

namespace {

bool overlaps(const Rect& a, const Rect& b) noexcept {
  // Shared edges are allowed; only interiors may not intersect.
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

std::string_view output_token(const Key& k) noexcept {
  switch (k.action) {
    case KeyAction::Backspace: return "BACKSPACE";
    case KeyAction::Space: return "SPACE";
    case KeyAction::Enter: return "ENTER";
    case KeyAction::Character: return k.output;
  }
  return "";
}

}  // namespace

std::size_t utf8_length(std::string_view s) noexcept {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void utf8_pop_back(std::string& s) noexcept {
  while (!s.empty()) {
    const auto c = static_cast<unsigned char>(s.back());
    s.pop_back();
    if ((c & 0xC0) != 0x80) return;
  }
}

KeyboardLayout::KeyboardLayout(std::vector<Key> keys) : keys_(std::move(keys)) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    const Key& k = keys_[i];
    if (!textio::is_token(k.id) || !textio::is_token(k.label)) {
      throw Error(ErrorCode::InvalidArgument, "key id and label must be non-empty tokens");
    }
    if (!(k.rect.w > 0.0 && k.rect.h > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "key '" + k.id + "' has no area");
    }
    if (k.action == KeyAction::Character && utf8_length(k.output) != 1) {
      throw Error(ErrorCode::InvalidArgument, "key '" + k.id + "' must output exactly one character");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (keys_[j].id == k.id) throw Error(ErrorCode::InvalidArgument, "duplicate key id '" + k.id + "'");
      if (overlaps(keys_[j].rect, k.rect)) {
        throw Error(ErrorCode::InvalidArgument, "keys '" + keys_[j].id + "' and '" + k.id + "' overlap");
      }
    }
  }
}

const Key* KeyboardLayout::key_at(Point p) const noexcept {
  for (const auto& k : keys_) {
    if (k.rect.contains(p)) return &k;
  }
  return nullptr;
}

const Key* KeyboardLayout::find(std::string_view id) const noexcept {
  for (const auto& k : keys_) {
    if (k.id == id) return &k;
  }
  return nullptr;
}

const Key* KeyboardLayout::key_for(std::string_view character) const noexcept {
  for (const auto& k : keys_) {
    if (character == " " && k.action == KeyAction::Space) return &k;
    if (k.action == KeyAction::Character && k.output == character) return &k;
  }
  return nullptr;
}

std::string KeyboardLayout::serialize() const {
  std::string out;
  for (const auto& k : keys_) {
    out += "key " + k.id + " " + k.label + " " + std::string(output_token(k)) + " " +
           textio::format_real(k.rect.x) + " " + textio::format_real(k.rect.y) + " " +
           textio::format_real(k.rect.w) + " " + textio::format_real(k.rect.h) + "\n";
  }
  return out;
}

KeyboardLayout KeyboardLayout::parse(std::string_view text) {
  const auto lines = textio::split_lines(text);
  std::vector<Key> keys;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = textio::split_ws(lines[i]);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;
    if (tokens.size() != 8 || tokens[0] != "key") {
      throw ParseError(i + 1, "expected 'key <id> <label> <output> <x> <y> <w> <h>'");
    }
    Key k;
    k.id = tokens[1];
    k.label = tokens[2];
    if (tokens[3] == "BACKSPACE") {
      k.action = KeyAction::Backspace;
    } else if (tokens[3] == "SPACE") {
      k.action = KeyAction::Space;
    } else if (tokens[3] == "ENTER") {
      k.action = KeyAction::Enter;
    } else if (utf8_length(tokens[3]) == 1) {
      k.action = KeyAction::Character;
      k.output = tokens[3];
    } else {
      throw ParseError(i + 1, "key output must be one character or BACKSPACE, SPACE, ENTER");
    }
    if (!textio::parse_real(tokens[4], k.rect.x) || !textio::parse_real(tokens[5], k.rect.y) ||
        !textio::parse_real(tokens[6], k.rect.w) || !textio::parse_real(tokens[7], k.rect.h)) {
      throw ParseError(i + 1, "malformed key rectangle");
    }
    keys.push_back(std::move(k));
  }
  try {
    return KeyboardLayout(std::move(keys));
  } catch (const Error& e) {
    throw ParseError(lines.size(), e.what());
  }
}

KeyboardLayout KeyboardLayout::load(const std::string& path) {
  return parse(textio::read_file(path));
}

KeyboardLayout KeyboardLayout::default_qwerty() {
  constexpr double kKey = 120.0;
  constexpr double kGap = 8.0;
  constexpr double kPitch = kKey + kGap;
  constexpr double kLeft = 324.0;
  constexpr double kTop = 420.0;
  const char* rows[] = {"qwertyuiop", "asdfghjkl", "zxcvbnm"};
  std::vector<Key> keys;
  for (int r = 0; r < 3; ++r) {
    const double indent = r * kPitch / 2.0;
    const std::string_view row = rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string ch(1, row[c]);
      keys.push_back({ch, ch, KeyAction::Character, ch,
                      Rect{kLeft + indent + static_cast<double>(c) * kPitch, kTop + r * kPitch, kKey, kKey}});
    }
  }
  const double bottom = kTop + 3 * kPitch;
  const double space_w = 5 * kKey + 4 * kGap;
  const double wide = 2 * kKey + kGap;
  keys.push_back({"space", "space", KeyAction::Space, "", Rect{kLeft, bottom, space_w, kKey}});
  keys.push_back({"backspace", "bksp", KeyAction::Backspace, "", Rect{kLeft + 5 * kPitch, bottom, wide, kKey}});
  keys.push_back({"enter", "enter", KeyAction::Enter, "", Rect{kLeft + 7 * kPitch, bottom, wide, kKey}});
  return KeyboardLayout(std::move(keys));
}

std::optional<std::string> key_at(const KeyboardLayout& layout, Point p) {
  const Key* k = layout.key_at(p);
  if (!k) return std::nullopt;
  return k->id;
}

TypingSession::TypingSession(KeyboardLayout layout, std::string target_phrase)
    : layout_(std::move(layout)), target_(std::move(target_phrase)) {}

void TypingSession::step(const GazeSample& sample) {
  if (sample.valid) gaze_ = sample.point();
}

std::optional<Keystroke> TypingSession::step(const TriggerEvent& trigger) {
  if (trigger.kind != TriggerKind::Press) return std::nullopt;
  if (!gaze_) throw Error(ErrorCode::NoGazeFix, "trigger press before any valid gaze sample");
  Keystroke stroke{trigger.t_ms, {}};
  if (const Key* k = layout_.key_at(*gaze_)) {
    stroke.key_id = k->id;
    switch (k->action) {
      case KeyAction::Character: transcribed_ += k->output; break;
      case KeyAction::Space: transcribed_ += ' '; break;
      case KeyAction::Backspace: utf8_pop_back(transcribed_); break;
      case KeyAction::Enter: break;
    }
  }
  log_.push_back(stroke);
  return stroke;
}

std::optional<Keystroke> TypingSession::step(const InputEvent& event) {
  if (const auto* s = std::get_if<GazeSample>(&event)) {
    step(*s);
    return std::nullopt;
  }
  return step(std::get<TriggerEvent>(event));
}

std::string TypingSession::fold(const KeyboardLayout& layout, std::span<const Keystroke> log) {
  std::string text;
  for (const auto& stroke : log) {
    if (stroke.miss()) continue;
    const Key* k = layout.find(stroke.key_id);
    if (!k) throw Error(ErrorCode::InvalidArgument, "keystroke names unknown key '" + stroke.key_id + "'");
    switch (k->action) {
      case KeyAction::Character: text += k->output; break;
      case KeyAction::Space: text += ' '; break;
      case KeyAction::Backspace: utf8_pop_back(text); break;
      case KeyAction::Enter: break;
    }
  }
  return text;
}

TypingMetrics compute_metrics(const TypingSession& session, RbaBasis basis) {
  const auto log = session.keystrokes();
  if (log.empty()) throw Error(ErrorCode::EmptySession, "typing session has no keystrokes");
  TypingMetrics m;
  m.keystrokes = static_cast<int>(log.size());
  for (const auto& stroke : log) {
    if (stroke.miss()) {
      ++m.misses;
    } else if (const Key* k = session.layout().find(stroke.key_id); k && k->action == KeyAction::Backspace) {
      ++m.backspaces;
    }
  }
  m.characters = static_cast<int>(utf8_length(session.transcribed()));
  m.duration_ms = log.back().t_ms - log.front().t_ms;
  const double seconds = static_cast<double>(m.duration_ms) / 1000.0;
  if (seconds > 0.0 && m.characters > 1) {
    m.wpm = (static_cast<double>(m.characters - 1) / seconds) * 60.0 / 5.0;
  }
  if (m.characters > 0) m.kspc = static_cast<double>(m.keystrokes) / m.characters;
  if (basis == RbaBasis::Keystrokes) {
    m.rba = static_cast<double>(m.backspaces) / m.keystrokes;
  } else if (m.characters > 0) {
    m.rba = static_cast<double>(m.backspaces) / m.characters;
  }
  return m;
}

}  // namespace gaze
