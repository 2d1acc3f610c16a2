#pragma once

// Raw gaze samples, I-DT fixation segmentation, scan-paths and the
// calibration-disturbance transform.

#include <optional>
#include <span>
#include <vector>

#include "gaze/geometry.hpp"

namespace gaze {

struct GazeSample {
  TimeMs t_ms = 0;
  double x = 0.0;
  double y = 0.0;
  bool valid = true;

  Point point() const noexcept { return {x, y}; }
  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct Fixation {
  double cx = 0.0;
  double cy = 0.0;
  TimeMs start_ms = 0;
  TimeMs end_ms = 0;
  int sample_count = 0;

  Point centroid() const noexcept { return {cx, cy}; }
  TimeMs duration_ms() const noexcept { return end_ms - start_ms; }
  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct ScanPath {
  std::vector<Fixation> fixations;
  double total_saccade_length = 0.0;
};

struct CalibrationDisturbance {
  double dx = 0.0;
  double dy = 0.0;
  double scale = 1.0;

  bool is_identity() const noexcept {
    return dx == 0.0 && dy == 0.0 && scale == 1.0;
  }
};

struct FixationParams {
  double dispersion_px = 40.0;
  TimeMs min_duration_ms = 100;
};

// Single-owner accumulator enforcing strictly increasing timestamps.
class GazeStream {
 public:
  // Throws NonMonotonicTimestamp when t_ms is not after the last accepted
  // sample; the stream is left untouched in that case.
  void ingest(const GazeSample& sample);

  std::span<const GazeSample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::optional<TimeMs> last_time() const noexcept;

 private:
  std::vector<GazeSample> samples_;
};

// Window dispersion as used by I-DT: (max x - min x) + (max y - min y).
double dispersion(std::span<const GazeSample> window) noexcept;

// Dispersion-threshold identification. Invalid samples terminate any open
// window; windows never span them.
std::vector<Fixation> detect_fixations(std::span<const GazeSample> samples,
                                       double dispersion_px,
                                       TimeMs min_duration_ms);

inline std::vector<Fixation> detect_fixations(std::span<const GazeSample> samples,
                                              const FixationParams& params = {}) {
  return detect_fixations(samples, params.dispersion_px, params.min_duration_ms);
}

ScanPath build_scanpath(std::vector<Fixation> fixations);

double saccade_length(std::span<const Fixation> fixations) noexcept;

// x' = (x - cx) * scale + cx + dx, likewise for y, about the screen center.
// Invalid samples pass through unchanged.
std::vector<GazeSample> apply_disturbance(std::span<const GazeSample> samples,
                                          const CalibrationDisturbance& d,
                                          ScreenSize screen = {});

}  // namespace gaze
