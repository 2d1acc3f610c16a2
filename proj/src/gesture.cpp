#include "gaze/gesture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaze/error.hpp"
#include "gaze/textio.hpp"

namespace gaze {

std::string_view path_source_name(PathSource source) noexcept {
  return source == PathSource::RawSamples ? "raw" : "fixations";
}

PathSource parse_path_source(std::string_view name) {
  if (name == "fixations" || name == "fixation-centroids") return PathSource::FixationCentroids;
  if (name == "raw" || name == "raw-samples") return PathSource::RawSamples;
  throw Error(ErrorCode::InvalidArgument, "unknown gesture path source '" + std::string(name) + "'");
}

std::vector<Point> resample(std::span<const Point> path, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample count must be at least 2");
  if (path.empty()) throw Error(ErrorCode::DegeneratePath, "empty gesture path");

  std::vector<double> cumulative(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + distance(path[i - 1], path[i]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw Error(ErrorCode::DegeneratePath, "gesture path has no extent");

  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(path.front());
  std::size_t seg = 1;
  for (int k = 1; k < n - 1; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 1 < path.size() && cumulative[seg] < target) ++seg;
    const double seg_len = cumulative[seg] - cumulative[seg - 1];
    const double u = seg_len > 0.0 ? (target - cumulative[seg - 1]) / seg_len : 0.0;
    const Point a = path[seg - 1];
    const Point b = path[seg];
    out.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)});
  }
  out.push_back(path.back());
  return out;
}

std::vector<Point> recenter_and_scale(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::DegeneratePath, "empty point list");
  double cx = 0.0;
  double cy = 0.0;
  double min_x = points.front().x, max_x = min_x;
  double min_y = points.front().y, max_y = min_y;
  for (const auto& p : points) {
    cx += p.x;
    cy += p.y;
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const auto count = static_cast<double>(points.size());
  cx /= count;
  cy /= count;
  const double side = std::max(max_x - min_x, max_y - min_y);
  if (!(side > 0.0)) throw Error(ErrorCode::DegeneratePath, "gesture path has no extent");

  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({(p.x - cx) / side, (p.y - cy) / side});
  return out;
}

std::vector<Point> normalize(std::span<const Point> path, int n) {
  const auto resampled = resample(path, n);
  return recenter_and_scale(resampled);
}

double path_distance(std::span<const Point> a, std::span<const Point> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::InvalidArgument, "paths must have equal, non-zero point counts");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += distance(a[i], b[i]);
  return sum / static_cast<double>(a.size());
}

double score_from_distance(double d) noexcept {
  return std::clamp(1.0 - d / kHalfDiagonal, 0.0, 1.0);
}

GestureTemplate train_template(std::string name, std::span<const GesturePath> samples,
                               std::string action_id, int n) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "training needs at least one sample path");
  if (!textio::is_token(name)) throw Error(ErrorCode::InvalidArgument, "template name must be a non-empty token");
  if (!textio::is_token(action_id)) throw Error(ErrorCode::InvalidArgument, "action id must be a non-empty token");

  if (samples.size() == 1) {
    return GestureTemplate{std::move(name), normalize(samples.front().points, n), std::move(action_id)};
  }
  std::vector<Point> mean(static_cast<std::size_t>(n), Point{});
  for (const auto& sample : samples) {
    const auto norm = normalize(sample.points, n);
    for (std::size_t i = 0; i < mean.size(); ++i) {
      mean[i].x += norm[i].x;
      mean[i].y += norm[i].y;
    }
  }
  const auto count = static_cast<double>(samples.size());
  for (auto& p : mean) {
    p.x /= count;
    p.y /= count;
  }
  return GestureTemplate{std::move(name), recenter_and_scale(mean), std::move(action_id)};
}

std::optional<RecognitionResult> recognize(std::span<const Point> path,
                                           std::span<const GestureTemplate> templates,
                                           double reject_threshold) {
  if (templates.empty()) return std::nullopt;
  const int n = static_cast<int>(templates.front().points.size());
  const auto input = normalize(path, n);

  const GestureTemplate* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& tpl : templates) {
    const double d = path_distance(input, tpl.points);
    if (d < best_distance) {
      best_distance = d;
      best = &tpl;
    }
  }
  const double score = score_from_distance(best_distance);
  if (score < reject_threshold) return std::nullopt;
  return RecognitionResult{best->name, best->action_id, score, best_distance};
}

GesturePath path_from_samples(std::span<const GazeSample> samples, PathSource source,
                              const FixationParams& params) {
  GesturePath path;
  path.source = source;
  if (source == PathSource::RawSamples) {
    for (const auto& s : samples) {
      if (s.valid) path.points.push_back(s.point());
    }
  } else {
    for (const auto& f : detect_fixations(samples, params)) path.points.push_back(f.centroid());
  }
  return path;
}

TemplateStore::TemplateStore(int n, double reject_threshold)
    : n_(n), reject_threshold_(reject_threshold) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample count must be at least 2");
  if (!(reject_threshold >= 0.0 && reject_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "reject threshold must lie in [0, 1]");
  }
}

void TemplateStore::check_new_name(std::string_view name) const {
  if (find(name)) {
    throw Error(ErrorCode::DuplicateName, "template '" + std::string(name) + "' already exists");
  }
}

const GestureTemplate& TemplateStore::train(std::string name, std::span<const GesturePath> samples,
                                            std::string action_id) {
  check_new_name(name);
  templates_.push_back(train_template(std::move(name), samples, std::move(action_id), n_));
  return templates_.back();
}

void TemplateStore::add(GestureTemplate tpl) {
  if (!textio::is_token(tpl.name) || !textio::is_token(tpl.action_id)) {
    throw Error(ErrorCode::InvalidArgument, "template name and action id must be non-empty tokens");
  }
  if (static_cast<int>(tpl.points.size()) != n_) {
    throw Error(ErrorCode::InvalidArgument, "template '" + tpl.name + "' has " +
                                                std::to_string(tpl.points.size()) + " points, expected " +
                                                std::to_string(n_));
  }
  check_new_name(tpl.name);
  templates_.push_back(std::move(tpl));
}

std::optional<RecognitionResult> TemplateStore::recognize(std::span<const Point> path) const {
  return gaze::recognize(path, templates_, reject_threshold_);
}

const GestureTemplate* TemplateStore::find(std::string_view name) const noexcept {
  for (const auto& t : templates_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string TemplateStore::serialize() const {
  std::string out = "gtpl 1 " + std::to_string(n_) + " " + textio::format_real(reject_threshold_) + "\n";
  for (const auto& t : templates_) {
    out += t.name;
    out += ' ';
    out += t.action_id;
    for (const auto& p : t.points) {
      out += ' ';
      out += textio::format_real(p.x);
      out += ' ';
      out += textio::format_real(p.y);
    }
    out += '\n';
  }
  return out;
}

TemplateStore TemplateStore::parse(std::string_view text) {
  const auto lines = textio::split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && textio::split_ws(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ParseError(1, "missing 'gtpl' header");
  const auto header = textio::split_ws(lines[i]);
  std::int64_t version = 0;
  std::int64_t n = 0;
  double threshold = 0.0;
  if (header.size() != 4 || header[0] != "gtpl" || !textio::parse_int(header[1], version) ||
      !textio::parse_int(header[2], n) || !textio::parse_real(header[3], threshold)) {
    throw ParseError(i + 1, "expected 'gtpl 1 <n> <reject_threshold>'");
  }
  if (version != 1) throw ParseError(i + 1, "unsupported template store version " + std::to_string(version));
  if (n < 2 || n > 100000) throw ParseError(i + 1, "resample count out of range");
  if (threshold < 0.0 || threshold > 1.0) throw ParseError(i + 1, "reject threshold out of range");

  TemplateStore store(static_cast<int>(n), threshold);
  for (++i; i < lines.size(); ++i) {
    const auto tokens = textio::split_ws(lines[i]);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 + 2 * static_cast<std::size_t>(n)) {
      throw ParseError(i + 1, "expected name, action id and " + std::to_string(2 * n) + " coordinates");
    }
    GestureTemplate tpl{std::string(tokens[0]), {}, std::string(tokens[1])};
    tpl.points.reserve(static_cast<std::size_t>(n));
    for (std::size_t k = 2; k < tokens.size(); k += 2) {
      Point p;
      if (!textio::parse_real(tokens[k], p.x) || !textio::parse_real(tokens[k + 1], p.y)) {
        throw ParseError(i + 1, "malformed coordinate");
      }
      tpl.points.push_back(p);
    }
    if (store.find(tpl.name)) throw ParseError(i + 1, "duplicate template name '" + tpl.name + "'");
    store.add(std::move(tpl));
  }
  return store;
}

TemplateStore TemplateStore::load(const std::string& path) {
  return parse(textio::read_file(path));
}

void TemplateStore::save(const std::string& path) const {
  textio::write_file(path, serialize());
}

Evaluation evaluate(const TemplateStore& store, std::span<const LabeledPath> labeled) {
  if (labeled.empty()) throw Error(ErrorCode::InvalidArgument, "labeled set is empty");
  Evaluation ev;
  for (const auto& t : store.templates()) ev.labels.push_back(t.name);
  const std::size_t k = ev.labels.size();
  const auto index_of = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < k; ++i) {
      if (ev.labels[i] == name) return i;
    }
    return k;
  };
  for (const auto& item : labeled) {
    if (index_of(item.true_name) == k) {
      throw Error(ErrorCode::UnknownLabel, "label '" + item.true_name + "' is not in the template store");
    }
  }

  ev.confusion.assign(k, std::vector<int>(k + 1, 0));
  for (const auto& item : labeled) {
    const std::size_t truth = index_of(item.true_name);
    const auto result = store.recognize(item.path.points);
    const std::size_t predicted = result ? index_of(result->template_name) : k;
    ++ev.confusion[truth][predicted];
    ++ev.total;
    if (predicted == truth) ++ev.correct;
  }
  ev.accuracy = static_cast<double>(ev.correct) / static_cast<double>(ev.total);

  double f1_sum = 0.0;
  int classes = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const int tp = ev.confusion[c][c];
    int fp = 0;
    int fn = 0;
    for (std::size_t r = 0; r < k; ++r) {
      if (r != c) fp += ev.confusion[r][c];
    }
    for (std::size_t p = 0; p <= k; ++p) {
      if (p != c) fn += ev.confusion[c][p];
    }
    const int denom = 2 * tp + fp + fn;
    if (denom == 0) continue;  // no instances and no predictions
    f1_sum += 2.0 * tp / denom;
    ++classes;
  }
  ev.macro_f1 = classes > 0 ? f1_sum / classes : 0.0;
  return ev;
}

const std::vector<BundledGesture>& bundled_gestures() {
  // Screen-pixel defining paths, y grows downwards.
  static const std::vector<BundledGesture> gestures = {
      {"swipe_up", "window.maximize", {{0, 400}, {0, 0}}},
      {"swipe_down", "window.minimize", {{0, 0}, {0, 400}}},
      {"swipe_left", "window.restore", {{400, 0}, {0, 0}}},
      {"swipe_right", "browser.new_tab", {{0, 0}, {400, 0}}},
      {"l_shape", "browser.refresh", {{0, 0}, {0, 300}, {300, 300}}},
      {"v_shape", "browser.scroll_down", {{0, 0}, {200, 300}, {400, 0}}},
      {"caret", "browser.scroll_up", {{0, 300}, {200, 0}, {400, 300}}},
      {"z_shape", "window.close", {{0, 0}, {300, 0}, {0, 300}, {300, 300}}},
  };
  return gestures;
}

TemplateStore bundled_store(int n, double reject_threshold) {
  TemplateStore store(n, reject_threshold);
  for (const auto& g : bundled_gestures()) {
    const GesturePath sample{g.path, PathSource::RawSamples};
    store.train(g.name, std::span<const GesturePath>(&sample, 1), g.action_id);
  }
  return store;
}

}  // namespace gaze
