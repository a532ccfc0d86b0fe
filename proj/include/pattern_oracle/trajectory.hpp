#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pattern_oracle/geometry.hpp"

namespace pattern_oracle {

inline constexpr std::size_t kMinTrajectoryPoints = 3;

// Keypoint positions relative to the phone corner, one per frame.
struct Trajectory {
  std::vector<Vec2> points;
  // Next-frame displacement per point; empty when the source had no U,V.
  std::vector<Vec2> displacements;
  // Marker flag per point (C column). Carried for plotting only.
  std::vector<bool> markers;
  std::string source = "kp";  // keypoint id
  int frame_stride = 1;
  std::optional<double> fps;
  std::optional<std::string> scenario;
};

enum class TrajectoryErrorKind {
  Io,
  Parse,
  InconsistentDisplacement,
  TooFewPoints,
};

class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(TrajectoryErrorKind kind, std::string message, int line = 0)
      : std::runtime_error(std::move(message)), kind_(kind), line_(line) {}
  TrajectoryErrorKind kind() const { return kind_; }
  // 1-based line in the CSV, 0 when not tied to a line.
  int line() const { return line_; }

 private:
  TrajectoryErrorKind kind_;
  int line_;
};

// CSV with header X,Y[,U,V][,C]; a sibling `<stem>.meta.json` is read when
// present.
Trajectory load_trajectory(const std::filesystem::path& path);
void write_trajectory(const std::filesystem::path& path, const Trajectory& t);
std::filesystem::path meta_path_for(const std::filesystem::path& csv);

// Recomputes U,V from consecutive positions (last row zero).
void fill_displacements(Trajectory& t);

struct CheckConfig {
  int window_frames = 5;       // CR
  double static_radius = 5.0;  // px
  int static_limit = 20;       // consecutive static windows
  double jump_factor = 2.0;
};

enum class CheckReason { None, Static, Jump };

struct CheckResult {
  bool valid = true;
  CheckReason reason = CheckReason::None;
};

const char* to_string(CheckReason r);

// Per-frame validity check run while a track grows: a track is static when
// the net displacement over the last CR frames stays within staticRadius
// for staticLimit consecutive frames, and jumps when the latest step is at
// least jumpFactor times the mean step.
class TrackChecker {
 public:
  explicit TrackChecker(CheckConfig cfg = {});

  CheckResult push(Vec2 p);
  CheckResult state() const { return state_; }
  int static_count() const { return count_static_; }

 private:
  CheckConfig cfg_;
  std::deque<Vec2> window_;
  double step_sum_ = 0.0;
  std::size_t steps_ = 0;
  int count_static_ = 0;
  CheckResult state_;
};

// State after streaming every point of `t` through a TrackChecker.
CheckResult check_track(const Trajectory& t, const CheckConfig& cfg = {});

struct Polyline {
  std::vector<Vec2> points;
  std::vector<std::size_t> source_indexes;
};

Polyline rdp_simplify(std::span<const Vec2> points, double epsilon);
inline Polyline rdp_simplify(const Trajectory& t, double epsilon) {
  return rdp_simplify(t.points, epsilon);
}

inline constexpr double kEpsilonDiagonalFraction = 0.05;
inline constexpr double kEpsilonFloorPx = 1.0;

// 5% of the bounding-box diagonal, at least 1 px, unless overridden.
double default_epsilon(std::span<const Vec2> points,
                       std::optional<double> override_px = std::nullopt);
inline double default_epsilon(const Trajectory& t,
                              std::optional<double> override_px = std::nullopt) {
  return default_epsilon(t.points, override_px);
}

}  // namespace pattern_oracle
