#pragma once

#include <cmath>
#include <cstdint>

namespace gaze {

using TimeMs = std::int64_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct ScreenSize {
  double width = 1920.0;
  double height = 1080.0;

  Point center() const noexcept { return {width / 2.0, height / 2.0}; }
  friend bool operator==(const ScreenSize&, const ScreenSize&) = default;
};

// Axis-aligned rectangle, boundary-inclusive on all four edges.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool contains(Point p) const noexcept {
    return p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h;
  }
  Point center() const noexcept { return {x + w / 2.0, y + h / 2.0}; }
  double area() const noexcept { return w * h; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace gaze
