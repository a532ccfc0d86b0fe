#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pattern_oracle/pattern_space.hpp"
#include "pattern_oracle/trajectory.hpp"

namespace pattern_oracle {

// How a synthetic drawing is rendered into a keypoint trajectory.
struct SynthConfig {
  explicit SynthConfig(Pattern p) : pattern(std::move(p)) {}

  Pattern pattern;
  double grid_spacing_px = 120.0;
  int samples_per_segment = 30;
  // Rotation of the grid plane before projection, degrees: pitch about x,
  // yaw about y, roll about z.
  std::array<double, 3> tilt_deg{0.0, 0.0, 0.0};
  double noise_sigma_px = 0.0;
  // Length of the approach and exit strokes; unset means 0.75 spacings.
  std::optional<double> head_tail_px;
  std::uint64_t seed = 0;
  // Offset of the tracked keypoint from the fingertip in the grid plane,
  // px. Keypoints of one hand share motion and differ in offset and noise.
  Vec2 keypoint_offset{0.0, 0.0};
  int keypoint_index = 0;
  std::string keypoint_id = "kp08";

  double head_tail() const { return head_tail_px.value_or(0.75 * grid_spacing_px); }
};

inline constexpr double kCameraDistanceGridWidths = 10.0;
// Minimum turn between an approach/exit stroke and the pattern stroke it
// joins, degrees.
inline constexpr double kMinRedundantTurnDeg = 60.0;

// Output frame: key 1 at the origin, x right, y down, px. Deterministic for
// a given config.
Trajectory synthesize_trajectory(const SynthConfig& cfg);

// Standard offsets for the first `count` keypoints of a drawing hand.
std::vector<SynthConfig> keypoint_configs(const SynthConfig& base, int count);

// Maps the flat grid frame through the tilted pinhole camera.
Vec2 project_point(Vec2 grid_frame_px, const SynthConfig& cfg);

}  // namespace pattern_oracle
