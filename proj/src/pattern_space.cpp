#include "pattern_oracle/pattern_space.hpp"

#include <charconv>
#include <cmath>

namespace pattern_oracle {

Pattern Pattern::from_valid(std::span<const int> keys) {
  Pattern p;
  p.size_ = static_cast<std::uint8_t>(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    p.keys_[i] = static_cast<std::uint8_t>(keys[i]);
  return p;
}

std::optional<PatternError> find_violation(std::span<const int> keys) {
  using K = PatternErrorKind;
  unsigned visited = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const int k = keys[i];
    if (k < 1 || k > kGridKeys)
      return PatternError(K::KeyOutOfRange,
                          "key " + std::to_string(k) + " is outside 1..9");
    if (visited & (1u << k))
      return PatternError(K::DuplicateKey,
                          "key " + std::to_string(k) + " is used twice");
    if (i > 0) {
      const int m = midpoint_key(keys[i - 1], k);
      if (m != 0 && !(visited & (1u << m)))
        return PatternError(K::SkippedUnvisitedPoint,
                            std::to_string(keys[i - 1]) + "->" +
                                std::to_string(k) + " skips unvisited " +
                                std::to_string(m),
                            keys[i - 1], k, m);
    }
    visited |= 1u << k;
  }
  if (keys.size() < std::size_t(kMinPatternLength))
    return PatternError(K::TooShort, "pattern needs at least 4 keys");
  return std::nullopt;
}

Pattern validate_pattern(std::span<const int> keys) {
  if (auto err = find_violation(keys)) throw *err;
  return Pattern::from_valid(keys);
}

std::vector<int> parse_keys(std::string_view text) {
  std::vector<int> keys;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dash = std::min(text.find('-', pos), text.size());
    const std::string_view tok = text.substr(pos, dash - pos);
    int value = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size())
      throw PatternError(PatternErrorKind::Malformed,
                         "malformed pattern text '" + std::string(text) + "'");
    keys.push_back(value);
    pos = dash + 1;
  }
  return keys;
}

Pattern parse_pattern(std::string_view text) {
  const auto keys = parse_keys(text);
  return validate_pattern(keys);
}

std::string format_keys(std::span<const int> keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(keys[i]);
  }
  return out;
}

std::string to_string(const Pattern& p) { return format_keys(p.keys()); }

SegmentList merge_collinear(std::span<const IPoint> points) {
  SegmentList out;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const IPoint next = points[i];
    if (!out.empty()) {
      ISegment& last = out.back();
      const IPoint d1 = last.b - last.a;
      const IPoint d2 = next - last.b;
      if (cross(d1, d2) == 0 && dot(d1, d2) > 0) {
        last.b = next;
        continue;
      }
    }
    out.push_back({points[i - 1], next});
  }
  return out;
}

SegmentList pattern_to_segments(const Pattern& p) {
  std::vector<IPoint> pts;
  for (int k : p) pts.push_back(grid_position(k));
  return merge_collinear(pts);
}

namespace {

template <typename Seg, typename Cross>
IntersectionDict parse_with(std::span<const Seg> segs, Cross crosses) {
  IntersectionDict dict;
  const int n = static_cast<int>(segs.size());
  for (int d = kMinGap; d <= kMaxGap; ++d) {
    std::string& c = dict[d];
    for (int i = 0; i + d < n; ++i) c += crosses(segs[i], segs[i + d]) ? 'T' : 'F';
  }
  return dict;
}

}  // namespace

IntersectionDict parse_intersections(std::span<const ISegment> segments) {
  return parse_with(segments, [](const ISegment& s, const ISegment& t) {
    return properly_cross(s, t);
  });
}

IntersectionDict parse_intersections(std::span<const FSegment> segments,
                                     double eps) {
  return parse_with(segments, [eps](const FSegment& s, const FSegment& t) {
    return properly_cross(s, t, eps);
  });
}

ComplexityScore complexity_score(const Pattern& p) {
  const SegmentList segs = pattern_to_segments(p);
  ComplexityScore c;
  c.connected_dots = static_cast<int>(p.size());
  for (const auto& s : segs) c.total_length += norm(to_vec(s.b - s.a));
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (collinear_overlap(segs[i], segs[j])) {
        ++c.overlaps;
      } else if (j > i + 1 && touch_or_cross(segs[i], segs[j])) {
        ++c.intersections;
      }
    }
  }
  c.score = c.connected_dots *
            std::log2(c.total_length + c.intersections + c.overlaps);
  return c;
}

int map_key(int key, int symmetry) {
  IPoint q = grid_position(key);
  // Centre the grid at the origin, transform, shift back.
  int x = q.x - 1;
  int y = q.y - 1;
  if (symmetry & 4) std::swap(x, y);
  if (symmetry & 1) x = -x;
  if (symmetry & 2) y = -y;
  return key_at({x + 1, y + 1});
}

Pattern apply_symmetry(const Pattern& p, int symmetry) {
  std::vector<int> keys;
  for (int k : p) keys.push_back(map_key(k, symmetry));
  return Pattern::from_valid(keys);
}

}  // namespace pattern_oracle
