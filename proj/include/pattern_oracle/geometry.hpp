#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace pattern_oracle {

// Floating-point 2D vector, used for trajectories (pixels) and for
// cipher vectors (grid units).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Integer grid point. Grid coordinates are small, so all predicates on
// IPoint are exact.
struct IPoint {
  int x = 0;
  int y = 0;

  friend IPoint operator-(IPoint a, IPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend auto operator<=>(IPoint, IPoint) = default;
};

inline Vec2 to_vec(IPoint p) { return {double(p.x), double(p.y)}; }
inline std::int64_t cross(IPoint a, IPoint b) {
  return std::int64_t(a.x) * b.y - std::int64_t(a.y) * b.x;
}
inline std::int64_t dot(IPoint a, IPoint b) {
  return std::int64_t(a.x) * b.x + std::int64_t(a.y) * b.y;
}

template <typename P>
struct Segment {
  P a;
  P b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

using ISegment = Segment<IPoint>;
using FSegment = Segment<Vec2>;

// Exact predicates on grid segments.
bool properly_cross(const ISegment& s, const ISegment& t);
bool touch_or_cross(const ISegment& s, const ISegment& t);
bool collinear_overlap(const ISegment& s, const ISegment& t);

// Floating-point proper crossing. Orientation values are normalised to
// the sine of the angle at the pivot and treated as zero below `eps`.
inline constexpr double kTrajectoryEps = 1e-9;
bool properly_cross(const FSegment& s, const FSegment& t,
                    double eps = kTrajectoryEps);

// Distance from `p` to the segment [a, b]: perpendicular distance when the
// projection falls inside the segment, endpoint distance otherwise.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Consecutive points -> segments.
std::vector<FSegment> segments_of(std::span<const Vec2> polyline);

}  // namespace pattern_oracle
