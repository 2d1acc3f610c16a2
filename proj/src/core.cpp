#include "gaze/core.hpp"

#include <algorithm>
#include <string>

#include "gaze/error.hpp"

namespace gaze {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::OverlappingFixations: return "OverlappingFixations";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NoGazeFix: return "NoGazeFix";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::InsufficientGaze: return "InsufficientGaze";
    case ErrorCode::SeparationUnsatisfiable: return "SeparationUnsatisfiable";
    case ErrorCode::EmptySession: return "EmptySession";
    case ErrorCode::EmptyStore: return "EmptyStore";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

void GazeStream::ingest(const GazeSample& sample) {
  if (!samples_.empty() && sample.t_ms <= samples_.back().t_ms) {
    throw Error(ErrorCode::NonMonotonicTimestamp,
                "sample at t=" + std::to_string(sample.t_ms) +
                    " does not follow t=" + std::to_string(samples_.back().t_ms));
  }
  samples_.push_back(sample);
}

std::optional<TimeMs> GazeStream::last_time() const noexcept {
  if (samples_.empty()) return std::nullopt;
  return samples_.back().t_ms;
}

double dispersion(std::span<const GazeSample> window) noexcept {
  if (window.empty()) return 0.0;
  auto [min_x, max_x] = std::minmax_element(
      window.begin(), window.end(),
      [](const GazeSample& a, const GazeSample& b) { return a.x < b.x; });
  auto [min_y, max_y] = std::minmax_element(
      window.begin(), window.end(),
      [](const GazeSample& a, const GazeSample& b) { return a.y < b.y; });
  return (max_x->x - min_x->x) + (max_y->y - min_y->y);
}

namespace {

struct Bounds {
  double min_x, max_x, min_y, max_y;

  explicit Bounds(const GazeSample& s)
      : min_x(s.x), max_x(s.x), min_y(s.y), max_y(s.y) {}

  void add(const GazeSample& s) noexcept {
    min_x = std::min(min_x, s.x);
    max_x = std::max(max_x, s.x);
    min_y = std::min(min_y, s.y);
    max_y = std::max(max_y, s.y);
  }
  double dispersion_with(const GazeSample& s) const noexcept {
    return (std::max(max_x, s.x) - std::min(min_x, s.x)) +
           (std::max(max_y, s.y) - std::min(min_y, s.y));
  }
  double dispersion() const noexcept { return (max_x - min_x) + (max_y - min_y); }
};

Fixation make_fixation(std::span<const GazeSample> window) {
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& s : window) {
    sx += s.x;
    sy += s.y;
  }
  const auto n = static_cast<double>(window.size());
  return Fixation{sx / n, sy / n, window.front().t_ms, window.back().t_ms,
                  static_cast<int>(window.size())};
}

// I-DT over one run of consecutive valid samples.
void detect_in_run(std::span<const GazeSample> run, double dispersion_px,
                   TimeMs min_duration_ms, std::vector<Fixation>& out) {
  std::size_t start = 0;
  while (start < run.size()) {
    // Smallest window covering the minimum duration.
    std::size_t end = start;
    Bounds bounds(run[start]);
    while (end + 1 < run.size() &&
           run[end].t_ms - run[start].t_ms < min_duration_ms) {
      ++end;
      bounds.add(run[end]);
    }
    if (run[end].t_ms - run[start].t_ms < min_duration_ms) return;

    if (bounds.dispersion() > dispersion_px) {
      ++start;
      continue;
    }
    while (end + 1 < run.size() &&
           bounds.dispersion_with(run[end + 1]) <= dispersion_px) {
      ++end;
      bounds.add(run[end]);
    }
    out.push_back(make_fixation(run.subspan(start, end - start + 1)));
    start = end + 1;
  }
}

}  // namespace

std::vector<Fixation> detect_fixations(std::span<const GazeSample> samples,
                                       double dispersion_px,
                                       TimeMs min_duration_ms) {
  if (!(dispersion_px > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dispersion threshold must be > 0");
  }
  if (min_duration_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument, "minimum fixation duration must be > 0");
  }
  std::vector<Fixation> out;
  std::size_t i = 0;
  while (i < samples.size()) {
    if (!samples[i].valid) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < samples.size() && samples[j].valid) ++j;
    detect_in_run(samples.subspan(i, j - i), dispersion_px, min_duration_ms, out);
    i = j;
  }
  return out;
}

double saccade_length(std::span<const Fixation> fixations) noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < fixations.size(); ++i) {
    total += distance(fixations[i - 1].centroid(), fixations[i].centroid());
  }
  return total;
}

ScanPath build_scanpath(std::vector<Fixation> fixations) {
  for (std::size_t i = 1; i < fixations.size(); ++i) {
    if (fixations[i - 1].end_ms > fixations[i].start_ms) {
      throw Error(ErrorCode::OverlappingFixations,
                  "fixation " + std::to_string(i - 1) + " ends at " +
                      std::to_string(fixations[i - 1].end_ms) +
                      " after the next starts at " +
                      std::to_string(fixations[i].start_ms));
    }
  }
  ScanPath path;
  path.total_saccade_length = saccade_length(fixations);
  path.fixations = std::move(fixations);
  return path;
}

std::vector<GazeSample> apply_disturbance(std::span<const GazeSample> samples,
                                          const CalibrationDisturbance& d,
                                          ScreenSize screen) {
  if (!(d.scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "disturbance scale must be > 0");
  }
  std::vector<GazeSample> out(samples.begin(), samples.end());
  if (d.is_identity()) return out;
  const Point c = screen.center();
  for (auto& s : out) {
    if (!s.valid) continue;
    if (d.scale != 1.0) {
      s.x = (s.x - c.x) * d.scale + c.x;
      s.y = (s.y - c.y) * d.scale + c.y;
    }
    s.x += d.dx;
    s.y += d.dy;
  }
  return out;
}

}  // namespace gaze
