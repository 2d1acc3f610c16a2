#include "gaze/replay.hpp"

#include <optional>

#include "gaze/error.hpp"
#include "gaze/textio.hpp"

namespace gaze {

InputEvent ReplayRecord::event() const {
  if (kind == Kind::Sample) return GazeSample{t_ms, x, y, valid};
  return TriggerEvent{t_ms, trigger};
}

void Replay::validate() const {
  std::optional<TimeMs> last_event;
  std::optional<TimeMs> last_sample;
  TriggerKind expected = TriggerKind::Press;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::size_t line = i + 2;  // header is line 1
    if (r.t_ms < 0) throw ParseError(line, "negative timestamp");
    if (last_event && r.t_ms < *last_event) throw ParseError(line, "record out of time order");
    if (r.kind == ReplayRecord::Kind::Sample) {
      if (last_sample && r.t_ms <= *last_sample) throw ParseError(line, "sample timestamps must strictly increase");
      last_sample = r.t_ms;
    } else {
      if (r.trigger != expected) throw ParseError(line, "trigger markers must alternate P and R starting with P");
      expected = expected == TriggerKind::Press ? TriggerKind::Release : TriggerKind::Press;
    }
    last_event = r.t_ms;
  }
}

std::vector<InputEvent> Replay::events() const {
  std::vector<InputEvent> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.event());
  return out;
}

std::vector<GazeSample> Replay::samples() const {
  std::vector<GazeSample> out;
  for (const auto& r : records) {
    if (r.kind == ReplayRecord::Kind::Sample) out.push_back({r.t_ms, r.x, r.y, r.valid});
  }
  return out;
}

std::string Replay::serialize() const {
  std::string out = "gaze 1 " + textio::format_real(screen.width) + " " + textio::format_real(screen.height) +
                    " " + textio::format_real(rate_hz) + "\n";
  for (const auto& r : records) {
    if (r.kind == ReplayRecord::Kind::Sample) {
      out += "s " + std::to_string(r.t_ms) + " " + textio::format_real(r.x) + " " + textio::format_real(r.y) +
             (r.valid ? " 1\n" : " 0\n");
    } else {
      out += "t " + std::to_string(r.t_ms) + (r.trigger == TriggerKind::Press ? " P\n" : " R\n");
    }
  }
  return out;
}

Replay Replay::parse(std::string_view text) {
  const auto lines = textio::split_lines(text);
  Replay replay;
  if (lines.empty()) throw ParseError(1, "missing 'gaze' header");
  const auto header = textio::split_ws(lines[0]);
  std::int64_t version = 0;
  if (header.size() != 5 || header[0] != "gaze" || !textio::parse_int(header[1], version) ||
      !textio::parse_real(header[2], replay.screen.width) || !textio::parse_real(header[3], replay.screen.height) ||
      !textio::parse_real(header[4], replay.rate_hz)) {
    throw ParseError(1, "expected 'gaze 1 <screen_w> <screen_h> <rate_hz>'");
  }
  if (version != 1) throw ParseError(1, "unsupported replay version " + std::to_string(version));
  if (!(replay.screen.width > 0 && replay.screen.height > 0 && replay.rate_hz > 0)) {
    throw ParseError(1, "screen size and rate must be positive");
  }

  // Line numbers of records, for validation messages.
  std::vector<std::size_t> line_of;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto tokens = textio::split_ws(lines[i]);
    if (tokens.empty()) continue;
    ReplayRecord r;
    if (tokens[0] == "s") {
      std::int64_t valid = 0;
      if (tokens.size() != 5 || !textio::parse_int(tokens[1], r.t_ms) || !textio::parse_real(tokens[2], r.x) ||
          !textio::parse_real(tokens[3], r.y) || !textio::parse_int(tokens[4], valid) || (valid != 0 && valid != 1)) {
        throw ParseError(i + 1, "expected 's <t_ms> <x> <y> <0|1>'");
      }
      r.kind = ReplayRecord::Kind::Sample;
      r.valid = valid == 1;
    } else if (tokens[0] == "t") {
      if (tokens.size() != 3 || !textio::parse_int(tokens[1], r.t_ms) || (tokens[2] != "P" && tokens[2] != "R")) {
        throw ParseError(i + 1, "expected 't <t_ms> <P|R>'");
      }
      r.kind = ReplayRecord::Kind::Trigger;
      r.trigger = tokens[2] == "P" ? TriggerKind::Press : TriggerKind::Release;
    } else {
      throw ParseError(i + 1, "unknown record '" + std::string(tokens[0]) + "'");
    }
    replay.records.push_back(r);
    line_of.push_back(i + 1);
  }
  try {
    replay.validate();
  } catch (const ParseError& e) {
    // validate() counts records as if there were no blank lines.
    const std::size_t idx = e.line() - 2;
    const std::string what = e.what();
    throw ParseError(line_of[idx], what.substr(what.find(": ") + 2));
  }
  return replay;
}

Replay Replay::load(const std::string& path) { return parse(textio::read_file(path)); }

void Replay::save(const std::string& path) const { textio::write_file(path, serialize()); }

Replay Replay::from_events(std::span<const InputEvent> events, ScreenSize screen, double rate_hz) {
  Replay replay;
  replay.screen = screen;
  replay.rate_hz = rate_hz;
  for (const auto& e : events) {
    if (const auto* s = std::get_if<GazeSample>(&e)) {
      replay.records.push_back(ReplayRecord::sample(*s));
    } else {
      const auto& t = std::get<TriggerEvent>(e);
      replay.records.push_back(ReplayRecord::marker(t.t_ms, t.kind));
    }
  }
  replay.validate();
  return replay;
}

}  // namespace gaze
