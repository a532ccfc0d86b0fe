#include "pattern_oracle/cipher_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pattern_oracle/errors.hpp"
#include "pattern_oracle/pattern_space.hpp"

namespace pattern_oracle {

namespace {

void push_stroke(Cipher& c, int from, int to) {
  if (int m = midpoint_key(from, to)) c.expansion[c.expansion_size++] = m;
  c.expansion[c.expansion_size++] = to;
}

double cosine(Vec2 p, Vec2 q) { return dot(p, q) / (norm(p) * norm(q)); }

}  // namespace

std::vector<Cipher> build_cipher_dictionary() {
  std::vector<Cipher> out;
  out.reserve(kCipherCount);
  for (int d1 = 1; d1 <= kGridKeys; ++d1) {
    for (int d2 = 1; d2 <= kGridKeys; ++d2) {
      for (int d3 = 1; d3 <= kGridKeys; ++d3) {
        if (d1 == d2 || d2 == d3 || d1 == d3) continue;
        Cipher c;
        c.dots = {d1, d2, d3};
        c.expansion[c.expansion_size++] = d1;
        push_stroke(c, d1, d2);
        push_stroke(c, d2, d3);

        unsigned seen = 0;
        for (int k : c.keys()) {
          if (seen & (1u << k)) c.drawable = false;
          seen |= 1u << k;
        }

        const IPoint p1 = grid_position(d1);
        const IPoint p2 = grid_position(d2);
        const IPoint p3 = grid_position(d3);
        c.u = to_vec(p2 - p1);
        c.v = to_vec(p3 - p2);
        c.w = {norm(c.u), norm(c.v)};
        c.collinear = cross(p2 - p1, p3 - p2) == 0;
        // Angle at d2 between the strokes back to d1 and on to d3.
        const Vec2 back = to_vec(p1 - p2);
        c.interior_angle_deg =
            std::atan2(std::abs(cross(back, c.v)), dot(back, c.v)) * 180.0 /
            std::numbers::pi;
        out.push_back(c);
      }
    }
  }
  return out;
}

const std::vector<Cipher>& cipher_dictionary() {
  static const std::vector<Cipher> dict = build_cipher_dictionary();
  return dict;
}

std::size_t cipher_index(int d1, int d2, int d3) {
  if (d1 < 1 || d1 > 9 || d2 < 1 || d2 > 9 || d3 < 1 || d3 > 9 || d1 == d2 ||
      d2 == d3 || d1 == d3)
    throw std::invalid_argument("cipher dots must be distinct keys 1..9");
  // Rank of (d1,d2,d3) among ordered triples of distinct keys.
  const int second = d2 - 1 - (d2 > d1);
  int third = d3 - 1;
  third -= (d3 > d1) + (d3 > d2);
  return std::size_t((d1 - 1) * 56 + second * 7 + third);
}

std::span<const double> standard_distances() {
  static const std::array<double, 5> d{1.0, std::sqrt(2.0), 2.0, std::sqrt(5.0),
                                       2.0 * std::sqrt(2.0)};
  return d;
}

std::span<const int> standard_angles_deg() {
  static constexpr std::array<int, 10> a{18, 27, 37, 45, 53, 63, 72, 90, 117, 135};
  return a;
}

std::optional<int> snap_standard_angle(double degrees, double tol_deg) {
  for (int a : standard_angles_deg())
    if (std::abs(degrees - a) <= tol_deg) return a;
  return std::nullopt;
}

Unit make_unit(Vec2 p1, Vec2 p2, Vec2 p3, std::size_t first_segment) {
  Unit u;
  u.a = p2 - p1;
  u.b = p3 - p2;
  u.c = {norm(u.a), norm(u.b)};
  u.segments = {first_segment, first_segment + 1};
  return u;
}

std::vector<Unit> extract_units(const Polyline& poly) {
  const auto& pts = poly.points;
  if (pts.size() < 3)
    throw InferenceError(InferenceErrorKind::TooFewTurningPoints,
                         "need at least 3 turning points, got " +
                             std::to_string(pts.size()));
  std::vector<Unit> units;
  units.reserve(pts.size() - 2);
  for (std::size_t i = 0; i + 2 < pts.size(); ++i)
    units.push_back(make_unit(pts[i], pts[i + 1], pts[i + 2], i));
  return units;
}

SimilarityTerms similarity_terms(const Unit& unit, const Cipher& cipher) {
  return {cosine(cipher.u, unit.a), cosine(cipher.v, unit.b),
          cosine(cipher.w, unit.c)};
}

std::optional<double> unit_similarity(const Unit& unit, const Cipher& cipher,
                                      SimilarityParams params) {
  const SimilarityTerms t = similarity_terms(unit, cipher);
  if (t.rejected()) return std::nullopt;
  return 0.5 * (t.first + t.second) * params.theta +
         t.lengths * (1.0 - params.theta);
}

}  // namespace pattern_oracle
