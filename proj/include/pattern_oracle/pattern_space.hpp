#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pattern_oracle/geometry.hpp"

namespace pattern_oracle {

inline constexpr int kGridKeys = 9;
inline constexpr int kMinPatternLength = 4;
inline constexpr int kMaxPatternLength = 9;
inline constexpr std::uint64_t kValidPatternCount = 389112;

// Keys 1..9 laid out row-major, y pointing down:
//   1 2 3
//   4 5 6
//   7 8 9
constexpr IPoint grid_position(int key) {
  return {(key - 1) % 3, (key - 1) / 3};
}
constexpr int key_at(IPoint p) { return p.y * 3 + p.x + 1; }

// Key lying exactly halfway between a and b, or 0 when the midpoint is
// not a grid dot.
constexpr int midpoint_key(int a, int b) {
  const IPoint pa = grid_position(a);
  const IPoint pb = grid_position(b);
  if ((pa.x + pb.x) % 2 != 0 || (pa.y + pb.y) % 2 != 0) return 0;
  const int m = key_at({(pa.x + pb.x) / 2, (pa.y + pb.y) / 2});
  return (m == a || m == b) ? 0 : m;
}

enum class PatternErrorKind {
  TooShort,
  DuplicateKey,
  KeyOutOfRange,
  SkippedUnvisitedPoint,
  Malformed,
};

class PatternError : public std::invalid_argument {
 public:
  PatternError(PatternErrorKind kind, std::string message, int from = 0,
               int to = 0, int midpoint = 0)
      : std::invalid_argument(std::move(message)),
        kind_(kind), from_(from), to_(to), midpoint_(midpoint) {}

  PatternErrorKind kind() const { return kind_; }
  // Populated for SkippedUnvisitedPoint.
  int from() const { return from_; }
  int to() const { return to_; }
  int midpoint() const { return midpoint_; }

 private:
  PatternErrorKind kind_;
  int from_;
  int to_;
  int midpoint_;
};

// A key sequence that satisfies all lock rules. Only constructible through
// validate_pattern / parse_pattern or from a caller that already knows the
// keys are valid (enumeration, symmetry maps).
class Pattern {
 public:
  static Pattern from_valid(std::span<const int> keys);

  std::size_t size() const { return size_; }
  int operator[](std::size_t i) const { return keys_[i]; }
  std::vector<int> keys() const { return {keys_.begin(), keys_.begin() + size_}; }
  auto begin() const { return keys_.begin(); }
  auto end() const { return keys_.begin() + size_; }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(),
                                                  b.begin(), b.end());
  }

 private:
  Pattern() = default;
  std::array<std::uint8_t, kMaxPatternLength> keys_{};
  std::uint8_t size_ = 0;
};

// First rule violation in `keys`, if any.
std::optional<PatternError> find_violation(std::span<const int> keys);
Pattern validate_pattern(std::span<const int> keys);

// Dash-separated text form, e.g. "1-6-8-3".
std::vector<int> parse_keys(std::string_view text);
Pattern parse_pattern(std::string_view text);
std::string to_string(const Pattern& p);
std::string format_keys(std::span<const int> keys);

// Segments between consecutive turning positions. A key passed through in
// a straight line does not start a new segment.
using SegmentList = std::vector<ISegment>;
SegmentList pattern_to_segments(const Pattern& p);
SegmentList merge_collinear(std::span<const IPoint> points);

// For d in 2..7: character i is 'T' iff segment i properly crosses segment
// i + d.
inline constexpr int kMinGap = 2;
inline constexpr int kMaxGap = 7;

struct IntersectionDict {
  std::array<std::string, kMaxGap - kMinGap + 1> by_gap;

  const std::string& operator[](int d) const { return by_gap[d - kMinGap]; }
  std::string& operator[](int d) { return by_gap[d - kMinGap]; }
  friend bool operator==(const IntersectionDict&,
                         const IntersectionDict&) = default;
};

IntersectionDict parse_intersections(std::span<const ISegment> segments);
IntersectionDict parse_intersections(std::span<const FSegment> segments,
                                     double eps = kTrajectoryEps);

struct ComplexityScore {
  int connected_dots = 0;   // S_P
  double total_length = 0;  // L_P, grid units
  int intersections = 0;    // I_P
  int overlaps = 0;         // O_P
  double score = 0;         // C_SP = S_P * log2(L_P + I_P + O_P)
};

ComplexityScore complexity_score(const Pattern& p);

// The eight symmetries of the square grid; index 0 is the identity.
inline constexpr int kGridSymmetries = 8;
int map_key(int key, int symmetry);
Pattern apply_symmetry(const Pattern& p, int symmetry);

// Depth-first enumeration of every valid pattern starting at `first_key`,
// in lexicographic order. `visit` receives the key prefix whenever it is a
// complete pattern (length >= 4).
template <typename Visit>
void for_each_pattern_from(int first_key, Visit&& visit) {
  std::array<int, kMaxPatternLength> keys{};
  keys[0] = first_key;
  auto recurse = [&](auto& self, int len, unsigned visited) -> void {
    if (len >= kMinPatternLength)
      visit(std::span<const int>(keys.data(), std::size_t(len)));
    if (len == kMaxPatternLength) return;
    const int last = keys[len - 1];
    for (int k = 1; k <= kGridKeys; ++k) {
      if (visited & (1u << k)) continue;
      const int m = midpoint_key(last, k);
      if (m != 0 && !(visited & (1u << m))) continue;
      keys[len] = k;
      self(self, len + 1, visited | (1u << k));
    }
  };
  recurse(recurse, 1, 1u << first_key);
}

}  // namespace pattern_oracle
