#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "pattern_oracle/trajectory.hpp"

using namespace pattern_oracle;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pattern_oracle_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name);
  std::ofstream(p) << body;
  fs::remove(meta_path_for(p));
  return p;
}

TrajectoryErrorKind load_error(const fs::path& p, int* line = nullptr) {
  try {
    load_trajectory(p);
  } catch (const TrajectoryError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  ADD_FAILURE() << "expected error for " << p;
  return TrajectoryErrorKind::Io;
}

std::vector<Vec2> noisy_polyline(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> corners(2, 8);
  std::uniform_real_distribution<double> coord(0.0, 400.0);
  std::normal_distribution<double> jitter(0.0, 2.0);
  std::vector<Vec2> anchors;
  for (int i = corners(rng); i > 0; --i) anchors.push_back({coord(rng), coord(rng)});
  std::vector<Vec2> out;
  for (std::size_t i = 1; i < anchors.size(); ++i)
    for (int s = 0; s < 25; ++s) {
      const double t = s / 25.0;
      const Vec2 p = anchors[i - 1] + t * (anchors[i] - anchors[i - 1]);
      out.push_back({p.x + jitter(rng), p.y + jitter(rng)});
    }
  out.push_back(anchors.back());
  return out;
}

std::vector<std::array<double, 2>> raw(std::span<const Vec2> pts) {
  std::vector<std::array<double, 2>> out;
  for (Vec2 p : pts) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

TEST(LoadTrajectory, ConsistentDisplacements) {
  const auto p = write_file("ok.csv", "X,Y,U,V\n0,0,1,2\n1,2,3,0\n4,2,0,0\n");
  const Trajectory t = load_trajectory(p);
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_EQ(t.points[2], (Vec2{4, 2}));
  EXPECT_EQ(t.displacements[0], (Vec2{1, 2}));
}

TEST(LoadTrajectory, PositionsOnlyAndMarkers) {
  const auto p = write_file("xy.csv", "X,Y,C\n0,0,F\n1,1,T\n2,2,F\n");
  const Trajectory t = load_trajectory(p);
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_TRUE(t.markers[1]);
  EXPECT_FALSE(t.markers[0]);
}

TEST(LoadTrajectory, Errors) {
  int line = 0;
  EXPECT_EQ(load_error(write_file("bad_uv.csv", "X,Y,U,V\n0,0,5,0\n1,0,1,0\n2,0,0,0\n"), &line),
            TrajectoryErrorKind::InconsistentDisplacement);
  EXPECT_EQ(line, 2);
  EXPECT_EQ(load_error(write_file("short.csv", "X,Y\n0,0\n1,1\n")),
            TrajectoryErrorKind::TooFewPoints);
  EXPECT_EQ(load_error(write_file("parse.csv", "X,Y\n0,0\n1,abc\n2,2\n"), &line),
            TrajectoryErrorKind::Parse);
  EXPECT_EQ(line, 3);
  EXPECT_EQ(load_error(write_file("header.csv", "A,B\n0,0\n")), TrajectoryErrorKind::Parse);
  EXPECT_EQ(load_error(scratch("does_not_exist.csv")), TrajectoryErrorKind::Io);
}

TEST(LoadTrajectory, WriteRoundTrip) {
  Trajectory t;
  t.points = {{0.5, 1.25}, {3, 4}, {10, -2}, {11, 0}};
  t.markers = {false, true, false, true};
  t.fps = 30.0;
  fill_displacements(t);
  const auto p = scratch("roundtrip.csv");
  write_trajectory(p, t);
  const Trajectory back = load_trajectory(p);
  ASSERT_EQ(back.points.size(), t.points.size());
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    EXPECT_NEAR(back.points[i].x, t.points[i].x, 1e-6);
    EXPECT_NEAR(back.points[i].y, t.points[i].y, 1e-6);
    EXPECT_EQ(back.markers[i], t.markers[i]);
  }
  ASSERT_TRUE(back.fps.has_value());
  EXPECT_DOUBLE_EQ(*back.fps, 30.0);
}

TEST(CheckTrack, StaticTail) {
  Trajectory t;
  for (int i = 0; i < 30; ++i) t.points.push_back({4.0 * i, 0});
  const Vec2 end = t.points.back();
  for (int i = 0; i < 30; ++i) t.points.push_back({end.x + (i % 2) * 0.5, end.y});
  const auto r = check_track(t);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.reason, CheckReason::Static);
}

TEST(CheckTrack, StaticIsPrefixConsistent) {
  TrackChecker c;
  for (int i = 0; i < 10; ++i) c.push({10.0 * i, 0});
  for (int i = 0; i < 40; ++i) c.push({90.0 + 0.1 * (i % 3), 0});
  ASSERT_EQ(c.state().reason, CheckReason::Static);
  for (int i = 0; i < 50; ++i) {
    c.push({90.0 + 0.2 * (i % 5), 0.1 * (i % 2)});
    ASSERT_EQ(c.state().reason, CheckReason::Static);
  }
}

TEST(CheckTrack, Jump) {
  Trajectory t;
  for (int i = 0; i < 20; ++i) t.points.push_back({3.0 * i, 0});
  t.points.push_back({t.points.back().x + 10.0, 0});
  const auto r = check_track(t);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.reason, CheckReason::Jump);
}

TEST(CheckTrack, UniformStrokeIsValid) {
  Trajectory t;
  for (int i = 0; i < 100; ++i) t.points.push_back({4.0 * i, 0});
  const auto r = check_track(t);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.reason, CheckReason::None);
}

TEST(Rdp, CollinearCollapsesToEndpoints) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({2.0 * i, 1.0 * i});
  const auto p = rdp_simplify(pts, 1.0);
  ASSERT_EQ(p.points.size(), 2u);
  EXPECT_EQ(p.source_indexes, (std::vector<std::size_t>{0, 49}));
}

TEST(Rdp, KeepsCornersOfAnL) {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 100; ++i) pts.push_back({double(i), 0});
  for (int i = 1; i <= 100; ++i) pts.push_back({100, double(i)});
  const auto p = rdp_simplify(pts, 5.0);
  ASSERT_EQ(p.points.size(), 3u);
  EXPECT_EQ(p.points[1], (Vec2{100, 0}));
}

TEST(Rdp, LowestIndexWinsTies) {
  const std::vector<Vec2> pts{{0, 0}, {1, 5}, {2, 5}, {3, 0}};
  const auto p = rdp_simplify(pts, 1.0);
  ASSERT_GE(p.source_indexes.size(), 3u);
  EXPECT_EQ(p.source_indexes[1], 1u);
}

TEST(Rdp, RejectsNonPositiveEpsilon) {
  const std::vector<Vec2> pts{{0, 0}, {1, 1}, {2, 0}};
  EXPECT_THROW(rdp_simplify(pts, 0.0), std::invalid_argument);
}

TEST(Rdp, PropertiesOnRandomPolylines) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = noisy_polyline(rng);
    const double eps = default_epsilon(pts);
    const auto p = rdp_simplify(pts, eps);

    ASSERT_EQ(p.source_indexes.front(), 0u);
    ASSERT_EQ(p.source_indexes.back(), pts.size() - 1);
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      ASSERT_EQ(p.points[i], pts[p.source_indexes[i]]);
      if (i) {
        ASSERT_LT(p.source_indexes[i - 1], p.source_indexes[i]);
      }
    }
    ASSERT_LT(oracle::max_deviation(raw(pts), raw(p.points)), eps);

    const auto again = rdp_simplify(p.points, eps);
    ASSERT_EQ(again.points, p.points);

    const auto coarse = rdp_simplify(pts, eps * 1.7);
    ASSERT_LE(coarse.points.size(), p.points.size());
  }
}

TEST(DefaultEpsilon, Examples) {
  const std::vector<Vec2> box{{0, 0}, {300, 400}, {100, 100}};
  EXPECT_DOUBLE_EQ(default_epsilon(box), 25.0);
  const std::vector<Vec2> same{{7, 7}, {7, 7}, {7, 7}};
  EXPECT_DOUBLE_EQ(default_epsilon(same), 1.0);
  EXPECT_DOUBLE_EQ(default_epsilon(box, 12.5), 12.5);
}
