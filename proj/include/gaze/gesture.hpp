#pragma once

// Unistroke gaze-gesture templates: arc-length resampling, translation and
// scale normalization (no rotation normalization, direction is semantic),
// mean pointwise distance matching, and a text template store.

#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/core.hpp"

namespace gaze {

enum class PathSource { FixationCentroids, RawSamples };

std::string_view path_source_name(PathSource source) noexcept;
PathSource parse_path_source(std::string_view name);

struct GesturePath {
  std::vector<Point> points;
  PathSource source = PathSource::FixationCentroids;
};

struct GestureTemplate {
  std::string name;
  std::vector<Point> points;  // canonical frame, exactly n points
  std::string action_id;
};

struct RecognitionResult {
  std::string template_name;
  std::string action_id;
  double score = 0.0;
  double distance = 0.0;
};

inline constexpr int kDefaultResampleCount = 64;
inline constexpr double kDefaultRejectThreshold = 0.75;
// Half diagonal of the unit canonical frame.
inline constexpr double kHalfDiagonal = std::numbers::sqrt2 / 2.0;

// Uniform arc-length resampling to n points (first and last points kept).
std::vector<Point> resample(std::span<const Point> path, int n);

// Resample, move centroid to the origin, scale the longer bounding-box side
// to 1. Throws DegeneratePath when the path has no extent.
std::vector<Point> normalize(std::span<const Point> path, int n = kDefaultResampleCount);

// Centroid to origin and longer bounding-box side to 1, without resampling.
std::vector<Point> recenter_and_scale(std::span<const Point> points);

// Mean pointwise Euclidean distance; both sequences must have equal length.
double path_distance(std::span<const Point> a, std::span<const Point> b);

double score_from_distance(double distance) noexcept;

// Pointwise mean of the normalized samples, re-centred and re-scaled.
GestureTemplate train_template(std::string name, std::span<const GesturePath> samples,
                               std::string action_id, int n = kDefaultResampleCount);

// Closest template by mean pointwise distance; earliest-trained wins ties.
// Returns nullopt when the store is empty or the winner scores below the
// threshold.
std::optional<RecognitionResult> recognize(std::span<const Point> path,
                                           std::span<const GestureTemplate> templates,
                                           double reject_threshold);

// Gesture path from a captured sample window: fixation centroids (default)
// or the raw valid samples.
GesturePath path_from_samples(std::span<const GazeSample> samples, PathSource source,
                              const FixationParams& params = {});

class TemplateStore {
 public:
  explicit TemplateStore(int n = kDefaultResampleCount,
                         double reject_threshold = kDefaultRejectThreshold);

  const GestureTemplate& train(std::string name, std::span<const GesturePath> samples,
                               std::string action_id);
  // Adds an already-normalized template (as read from a store file).
  void add(GestureTemplate tpl);

  std::optional<RecognitionResult> recognize(std::span<const Point> path) const;

  const GestureTemplate* find(std::string_view name) const noexcept;
  std::span<const GestureTemplate> templates() const noexcept { return templates_; }
  std::size_t size() const noexcept { return templates_.size(); }
  bool empty() const noexcept { return templates_.empty(); }
  int resample_count() const noexcept { return n_; }
  double reject_threshold() const noexcept { return reject_threshold_; }

  // `gtpl 1 <n> <reject_threshold>` then `name action_id x1 y1 ... xn yn`.
  std::string serialize() const;
  static TemplateStore parse(std::string_view text);
  static TemplateStore load(const std::string& path);
  void save(const std::string& path) const;

 private:
  void check_new_name(std::string_view name) const;

  int n_;
  double reject_threshold_;
  std::vector<GestureTemplate> templates_;
};

using StoreSnapshot = std::shared_ptr<const TemplateStore>;

struct LabeledPath {
  GesturePath path;
  std::string true_name;
};

struct Evaluation {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  // Row = true class, column = predicted class; the extra last column counts
  // rejections (NoMatch).
  std::vector<std::string> labels;
  std::vector<std::vector<int>> confusion;
  int total = 0;
  int correct = 0;
};

Evaluation evaluate(const TemplateStore& store, std::span<const LabeledPath> labeled);

// Eight stroke gestures bundled with the engine, as defining paths in
// screen pixels.
struct BundledGesture {
  std::string name;
  std::string action_id;
  std::vector<Point> path;
};

const std::vector<BundledGesture>& bundled_gestures();
TemplateStore bundled_store(int n = kDefaultResampleCount,
                            double reject_threshold = kDefaultRejectThreshold);

// Reference recognition baselines, kept for reports only.
namespace reference {
inline constexpr double kGestureStudyAccuracy = 0.93;
inline constexpr double kGestureStudyFMeasure = 0.96;
}  // namespace reference

}  // namespace gaze
