#include "pattern_oracle/geometry.hpp"

#include <algorithm>

namespace pattern_oracle {

namespace {

int sign(std::int64_t v) { return (v > 0) - (v < 0); }

bool on_segment(IPoint p, const ISegment& s) {
  return cross(s.b - s.a, p - s.a) == 0 &&
         std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

int fsign(Vec2 pivot, Vec2 to, Vec2 p, double eps) {
  const Vec2 u = to - pivot;
  const Vec2 v = p - pivot;
  const double scale = norm(u) * norm(v);
  if (scale == 0.0) return 0;
  const double s = cross(u, v) / scale;
  if (std::abs(s) <= eps) return 0;
  return s > 0 ? 1 : -1;
}

}  // namespace

bool properly_cross(const ISegment& s, const ISegment& t) {
  const int d1 = sign(cross(s.b - s.a, t.a - s.a));
  const int d2 = sign(cross(s.b - s.a, t.b - s.a));
  const int d3 = sign(cross(t.b - t.a, s.a - t.a));
  const int d4 = sign(cross(t.b - t.a, s.b - t.a));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

bool touch_or_cross(const ISegment& s, const ISegment& t) {
  if (properly_cross(s, t)) return true;
  return on_segment(t.a, s) || on_segment(t.b, s) || on_segment(s.a, t) ||
         on_segment(s.b, t);
}

bool collinear_overlap(const ISegment& s, const ISegment& t) {
  const IPoint dir = s.b - s.a;
  if (cross(dir, t.a - s.a) != 0 || cross(dir, t.b - s.a) != 0) return false;
  auto proj = [&](IPoint p) { return dot(p - s.a, dir); };
  const auto [lo1, hi1] = std::minmax({proj(s.a), proj(s.b)});
  const auto [lo2, hi2] = std::minmax({proj(t.a), proj(t.b)});
  return std::min(hi1, hi2) > std::max(lo1, lo2);
}

bool properly_cross(const FSegment& s, const FSegment& t, double eps) {
  const int d1 = fsign(s.a, s.b, t.a, eps);
  const int d2 = fsign(s.a, s.b, t.b, eps);
  const int d3 = fsign(t.a, t.b, s.a, eps);
  const int d4 = fsign(t.a, t.b, s.b, eps);
  return d1 * d2 < 0 && d3 * d4 < 0;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = dot(p - a, ab) / len2;
  if (t < 0.0) return distance(p, a);
  if (t > 1.0) return distance(p, b);
  return std::abs(cross(ab, p - a)) / std::sqrt(len2);
}

std::vector<FSegment> segments_of(std::span<const Vec2> polyline) {
  std::vector<FSegment> out;
  for (std::size_t i = 1; i < polyline.size(); ++i)
    out.push_back({polyline[i - 1], polyline[i]});
  return out;
}

}  // namespace pattern_oracle
