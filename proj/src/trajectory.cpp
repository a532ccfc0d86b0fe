#include "pattern_oracle/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace pattern_oracle {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size())
    throw TrajectoryError(TrajectoryErrorKind::Parse,
                          "line " + std::to_string(line) + ": bad number '" +
                              cell + "'",
                          line);
  return v;
}

bool close_enough(double a, double b) {
  return std::abs(a - b) <= 1e-4 * std::max({1.0, std::abs(a), std::abs(b)});
}

void load_meta(const std::filesystem::path& path, Trajectory& t) {
  std::ifstream in(path);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw TrajectoryError(TrajectoryErrorKind::Parse,
                          path.string() + ": " + e.what());
  }
  if (j.contains("keypoint_id")) t.source = j["keypoint_id"].get<std::string>();
  if (j.contains("fps")) t.fps = j["fps"].get<double>();
  if (j.contains("scenario")) t.scenario = j["scenario"].get<std::string>();
  if (j.contains("frame_stride")) t.frame_stride = j["frame_stride"].get<int>();
}

}  // namespace

std::filesystem::path meta_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta.json");
  return p;
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw TrajectoryError(TrajectoryErrorKind::Io,
                          "cannot open " + path.string());

  std::string line;
  int line_no = 1;
  if (!std::getline(in, line))
    throw TrajectoryError(TrajectoryErrorKind::Parse, "empty file", 1);

  // Column positions of X,Y,U,V,C; -1 when absent.
  std::array<int, 5> col{-1, -1, -1, -1, -1};
  const auto header = split_csv(line);
  static constexpr std::array<const char*, 5> names{"X", "Y", "U", "V", "C"};
  for (std::size_t i = 0; i < header.size(); ++i) {
    bool known = false;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (header[i] == names[k]) {
        if (col[k] != -1)
          throw TrajectoryError(TrajectoryErrorKind::Parse,
                                "duplicate column " + header[i], 1);
        col[k] = static_cast<int>(i);
        known = true;
      }
    }
    if (!known)
      throw TrajectoryError(TrajectoryErrorKind::Parse,
                            "unknown column '" + header[i] + "'", 1);
  }
  if (col[0] < 0 || col[1] < 0)
    throw TrajectoryError(TrajectoryErrorKind::Parse,
                          "header must contain X and Y", 1);
  if ((col[2] < 0) != (col[3] < 0))
    throw TrajectoryError(TrajectoryErrorKind::Parse,
                          "U and V must appear together", 1);
  const bool has_uv = col[2] >= 0;

  Trajectory t;
  std::vector<int> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw TrajectoryError(TrajectoryErrorKind::Parse,
                            "line " + std::to_string(line_no) + ": expected " +
                                std::to_string(header.size()) + " columns",
                            line_no);
    t.points.push_back({parse_number(cells[col[0]], line_no),
                        parse_number(cells[col[1]], line_no)});
    if (has_uv)
      t.displacements.push_back({parse_number(cells[col[2]], line_no),
                                 parse_number(cells[col[3]], line_no)});
    bool marker = false;
    if (col[4] >= 0) {
      const std::string& c = cells[col[4]];
      if (c != "T" && c != "F")
        throw TrajectoryError(TrajectoryErrorKind::Parse,
                              "line " + std::to_string(line_no) +
                                  ": marker must be T or F",
                              line_no);
      marker = c == "T";
    }
    t.markers.push_back(marker);
    lines.push_back(line_no);
  }

  if (t.points.size() < kMinTrajectoryPoints)
    throw TrajectoryError(TrajectoryErrorKind::TooFewPoints,
                          "trajectory needs at least 3 points, got " +
                              std::to_string(t.points.size()));

  if (has_uv) {
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const Vec2 expect = i + 1 < t.points.size()
                              ? t.points[i + 1] - t.points[i]
                              : Vec2{0.0, 0.0};
      const Vec2 got = t.displacements[i];
      if (!close_enough(got.x, expect.x) || !close_enough(got.y, expect.y))
        throw TrajectoryError(TrajectoryErrorKind::InconsistentDisplacement,
                              "line " + std::to_string(lines[i]) +
                                  ": U,V disagree with next-frame displacement",
                              lines[i]);
    }
  }

  t.source = path.stem().string();
  load_meta(meta_path_for(path), t);
  return t;
}

void fill_displacements(Trajectory& t) {
  t.displacements.assign(t.points.size(), Vec2{});
  for (std::size_t i = 0; i + 1 < t.points.size(); ++i)
    t.displacements[i] = t.points[i + 1] - t.points[i];
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& t) {
  std::ofstream out(path);
  if (!out)
    throw TrajectoryError(TrajectoryErrorKind::Io,
                          "cannot write " + path.string());
  out << "X,Y,U,V,C\n";
  char buf[160];
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    const Vec2 p = t.points[i];
    // U,V are written from the rounded positions so the file is
    // self-consistent.
    auto round6 = [](double v) {
      char tmp[64];
      std::snprintf(tmp, sizeof tmp, "%.6f", v);
      return std::stod(tmp);
    };
    Vec2 d{0.0, 0.0};
    if (i + 1 < t.points.size()) {
      d = {round6(t.points[i + 1].x) - round6(p.x),
           round6(t.points[i + 1].y) - round6(p.y)};
    }
    const bool marker = i < t.markers.size() && t.markers[i];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%c\n", p.x, p.y,
                  d.x + 0.0, d.y + 0.0, marker ? 'T' : 'F');
    out << buf;
  }

  nlohmann::ordered_json meta;
  meta["keypoint_id"] = t.source;
  if (t.fps) meta["fps"] = *t.fps;
  if (t.scenario) meta["scenario"] = *t.scenario;
  std::ofstream(meta_path_for(path)) << meta.dump(2) << "\n";
}

const char* to_string(CheckReason r) {
  switch (r) {
    case CheckReason::None: return "none";
    case CheckReason::Static: return "static";
    case CheckReason::Jump: return "jump";
  }
  return "?";
}

TrackChecker::TrackChecker(CheckConfig cfg) : cfg_(cfg) {
  if (cfg_.window_frames < 2 || cfg_.static_radius <= 0 ||
      cfg_.static_limit < 1 || cfg_.jump_factor <= 0)
    throw std::invalid_argument("check config values must be positive");
}

CheckResult TrackChecker::push(Vec2 p) {
  double step = 0.0;
  if (!window_.empty()) {
    step = distance(window_.back(), p);
    step_sum_ += step;
    ++steps_;
  }
  window_.push_back(p);
  if (window_.size() > std::size_t(cfg_.window_frames)) window_.pop_front();

  if (window_.size() == std::size_t(cfg_.window_frames)) {
    if (distance(window_.front(), window_.back()) <= cfg_.static_radius)
      ++count_static_;
    else
      count_static_ = 0;
  }

  state_ = {};
  if (count_static_ >= cfg_.static_limit) {
    state_ = {false, CheckReason::Static};
  } else if (steps_ > 0) {
    const double avg = step_sum_ / double(steps_);
    if (avg > 0.0 && step >= cfg_.jump_factor * avg)
      state_ = {false, CheckReason::Jump};
  }
  return state_;
}

CheckResult check_track(const Trajectory& t, const CheckConfig& cfg) {
  TrackChecker checker(cfg);
  for (Vec2 p : t.points) checker.push(p);
  return checker.state();
}

Polyline rdp_simplify(std::span<const Vec2> points, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  Polyline out;
  const std::size_t n = points.size();
  if (n == 0) return out;
  if (n == 1) {
    out.points.push_back(points[0]);
    out.source_indexes.push_back(0);
    return out;
  }

  std::vector<bool> keep(n, false);
  keep.front() = keep.back() = true;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [first, last] = stack.back();
    stack.pop_back();
    if (last <= first + 1) continue;
    double best = -1.0;
    std::size_t index = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      const double d = point_segment_distance(points[i], points[first], points[last]);
      if (d > best) {
        best = d;
        index = i;
      }
    }
    if (best >= epsilon) {
      keep[index] = true;
      stack.push_back({index, last});
      stack.push_back({first, index});
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    out.points.push_back(points[i]);
    out.source_indexes.push_back(i);
  }
  return out;
}

double default_epsilon(std::span<const Vec2> points,
                       std::optional<double> override_px) {
  if (override_px) return *override_px;
  if (points.empty()) return kEpsilonFloorPx;
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x;
  for (Vec2 p : points) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double diag = std::hypot(hi_x - lo_x, hi_y - lo_y);
  return std::max(kEpsilonFloorPx, kEpsilonDiagonalFraction * diag);
}

}  // namespace pattern_oracle
