#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pattern_oracle/geometry.hpp"
#include "pattern_oracle/trajectory.hpp"

namespace pattern_oracle {

inline constexpr std::size_t kCipherCount = 504;

// Three ordered, distinct turning dots and the standard vectors between
// them. `expansion` lists every key the two strokes pass over, in drawing
// order, regardless of visit state, so it can repeat a key (1,3,2 ->
// 1-2-3-2); such ciphers are flagged not drawable.
struct Cipher {
  std::array<int, 3> dots{};
  std::array<int, 5> expansion{};
  int expansion_size = 0;
  Vec2 u;  // pos(d2) - pos(d1), grid units
  Vec2 v;  // pos(d3) - pos(d2)
  Vec2 w;  // (|u|, |v|)
  // Smaller angle between the two strokes at d2, degrees. 180 for a
  // straight continuation, 0 for a reversal.
  double interior_angle_deg = 0.0;
  bool collinear = false;
  bool drawable = true;

  std::span<const int> keys() const {
    return {expansion.data(), std::size_t(expansion_size)};
  }
};

// All 9*8*7 ordered triples in lexicographic order.
std::vector<Cipher> build_cipher_dictionary();
// Shared immutable instance.
const std::vector<Cipher>& cipher_dictionary();
std::size_t cipher_index(int d1, int d2, int d3);

// Distinct stroke lengths (grid units) and interior angles (degrees) on the
// 3x3 grid.
std::span<const double> standard_distances();
std::span<const int> standard_angles_deg();
// Nearest standard angle, or nullopt when none is within `tol_deg`.
std::optional<int> snap_standard_angle(double degrees, double tol_deg = 0.5);

// Three consecutive turning points as a pair of stroke vectors.
struct Unit {
  Vec2 a;  // p2 - p1
  Vec2 b;  // p3 - p2
  Vec2 c;  // (|a|, |b|)
  std::pair<std::size_t, std::size_t> segments{0, 1};
  double weight = 1.0;
};

Unit make_unit(Vec2 p1, Vec2 p2, Vec2 p3, std::size_t first_segment = 0);

// Unit i spans turning points i..i+2, i.e. segments (i, i+1).
std::vector<Unit> extract_units(const Polyline& poly);

struct SimilarityParams {
  double theta = 0.9;
};

struct SimilarityTerms {
  double first = 0.0;    // cos(u, a)
  double second = 0.0;   // cos(v, b)
  double lengths = 0.0;  // cos(w, c)

  // A degenerate (zero-length) stroke yields NaN and counts as rejected.
  bool rejected() const { return !(first >= 0.0 && second >= 0.0 && lengths >= 0.0); }
};

SimilarityTerms similarity_terms(const Unit& unit, const Cipher& cipher);

// S = theta * (cos(u,a) + cos(v,b)) / 2 + (1 - theta) * cos(w,c); nullopt
// when any cosine is negative.
std::optional<double> unit_similarity(const Unit& unit, const Cipher& cipher,
                                      SimilarityParams params = {});

}  // namespace pattern_oracle
