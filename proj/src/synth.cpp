#include "pattern_oracle/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pattern_oracle {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Vec2 key_px(int key, double spacing) {
  const IPoint p = grid_position(key);
  return {p.x * spacing, p.y * spacing};
}

Vec2 unit_vec(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

Vec2 rotate(Vec2 v, double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Direction of travel for a redundant stroke joining a pattern stroke whose
// direction is `along`. The turn between them is at least
// kMinRedundantTurnDeg.
Vec2 redundant_direction(Vec2 along, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> turn(kMinRedundantTurnDeg, 180.0);
  std::bernoulli_distribution side(0.5);
  const double t = turn(rng) * kDeg;
  return rotate(along, side(rng) ? t : -t);
}

void sample_stroke(std::vector<Vec2>& out, Vec2 from, Vec2 to, int count) {
  for (int i = 0; i < count; ++i) {
    const double t = double(i) / count;
    out.push_back({from.x + (to.x - from.x) * t, from.y + (to.y - from.y) * t});
  }
}

}  // namespace

Vec2 project_point(Vec2 p, const SynthConfig& cfg) {
  const auto& tilt = cfg.tilt_deg;
  if (tilt[0] == 0.0 && tilt[1] == 0.0 && tilt[2] == 0.0) return p;
  const double s = cfg.grid_spacing_px;
  // Centre on key 5.
  double x = p.x - s, y = p.y - s, z = 0.0;
  const double cp = std::cos(tilt[0] * kDeg), sp = std::sin(tilt[0] * kDeg);
  const double cy = std::cos(tilt[1] * kDeg), sy = std::sin(tilt[1] * kDeg);
  const double cr = std::cos(tilt[2] * kDeg), sr = std::sin(tilt[2] * kDeg);
  // Rx(pitch)
  double y1 = cp * y - sp * z, z1 = sp * y + cp * z;
  y = y1;
  z = z1;
  // Ry(yaw)
  double x1 = cy * x + sy * z;
  z1 = -sy * x + cy * z;
  x = x1;
  z = z1;
  // Rz(roll)
  x1 = cr * x - sr * y;
  y1 = sr * x + cr * y;
  x = x1;
  y = y1;
  const double depth = kCameraDistanceGridWidths * 2.0 * s;
  const double f = depth;
  return {f * x / (z + depth) + s, f * y / (z + depth) + s};
}

Trajectory synthesize_trajectory(const SynthConfig& cfg) {
  if (cfg.samples_per_segment < 2)
    throw std::invalid_argument("samples per segment must be >= 2");
  if (cfg.noise_sigma_px < 0.0)
    throw std::invalid_argument("noise sigma must be >= 0");
  if (!(cfg.grid_spacing_px > 0.0))
    throw std::invalid_argument("grid spacing must be > 0");

  const double s = cfg.grid_spacing_px;
  const std::vector<int> keys = cfg.pattern.keys();
  const int n = cfg.samples_per_segment;

  // Stroke geometry depends on the seed only, so every keypoint of one
  // drawing shares it.
  std::mt19937_64 motion(cfg.seed);
  const double redundant = cfg.head_tail();
  const Vec2 first = key_px(keys.front(), s);
  const Vec2 last = key_px(keys.back(), s);
  const Vec2 head_dir = redundant_direction(
      unit_vec(key_px(keys[1], s) - first), motion);
  const Vec2 tail_dir = redundant_direction(
      unit_vec(last - key_px(keys[keys.size() - 2], s)), motion);
  const int redundant_samples =
      std::max(2, int(std::lround(n * redundant / s)));

  std::vector<Vec2> path;
  std::vector<bool> at_key;
  if (redundant > 0.0) {
    sample_stroke(path, first - redundant * head_dir, first, redundant_samples);
    at_key.resize(path.size(), false);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    sample_stroke(path, key_px(keys[i], s), key_px(keys[i + 1], s), n);
    at_key.resize(path.size(), false);
    at_key[path.size() - n] = true;
  }
  path.push_back(last);
  at_key.push_back(true);
  if (redundant > 0.0) {
    const Vec2 end = last + redundant * tail_dir;
    sample_stroke(path, last, end, redundant_samples);
    path.erase(path.end() - redundant_samples);  // `last` already present
    path.push_back(end);
    at_key.resize(path.size(), false);
  }

  std::seed_seq noise_seed{std::uint64_t(cfg.seed), std::uint64_t(cfg.keypoint_index),
                           std::uint64_t(0x6b70)};
  std::mt19937_64 noise_rng(noise_seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma_px);

  Trajectory t;
  t.source = cfg.keypoint_id;
  t.points.reserve(path.size());
  for (Vec2 p : path) {
    Vec2 q = project_point(p + cfg.keypoint_offset, cfg);
    if (cfg.noise_sigma_px > 0.0) {
      q.x += noise(noise_rng);
      q.y += noise(noise_rng);
    }
    t.points.push_back(q);
  }
  t.markers = at_key;
  fill_displacements(t);
  return t;
}

std::vector<SynthConfig> keypoint_configs(const SynthConfig& base, int count) {
  // Fingertip, then points further down the finger towards the wrist.
  static const std::array<std::pair<const char*, Vec2>, 5> kKeypoints{{
      {"kp08", {0.0, 0.0}},
      {"kp07", {0.08, 0.22}},
      {"kp06", {0.15, 0.42}},
      {"kp05", {0.22, 0.65}},
      {"kp00", {0.45, 1.30}},
  }};
  if (count < 1 || count > int(kKeypoints.size()))
    throw std::invalid_argument("keypoint count must be 1..5");
  std::vector<SynthConfig> out;
  for (int i = 0; i < count; ++i) {
    SynthConfig c = base;
    c.keypoint_index = i;
    c.keypoint_id = kKeypoints[i].first;
    c.keypoint_offset = base.grid_spacing_px * kKeypoints[i].second;
    out.push_back(c);
  }
  return out;
}

}  // namespace pattern_oracle
