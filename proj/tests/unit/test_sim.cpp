#include <doctest.h>

#include <cmath>

#include "cobot/scenario.hpp"
#include "cobot/sim.hpp"

using namespace cobot;

namespace {

std::vector<RobotPath> line_path(Point2 a, Point2 b, double speed = 2.0) {
  return {RobotPath{{{a.x, a.y, 0}, {b.x, b.y, 0}}, speed}};
}

SimConfig quiet_config() {
  SimConfig cfg;
  cfg.drag.slip_noise = 0.0;
  return cfg;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("specimen validation") {
  auto spec = loin_specimen(Polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}));
  CHECK_NOTHROW(spec.validate());
  spec.bone = Polygon({{20, 20}, {21, 20}, {21, 21}, {20, 21}});
  CHECK_THROWS_WITH_AS(spec.validate(), "bone does not touch meat", Error);
  spec = loin_specimen(std::nullopt);
  spec.fat = Polygon({{20, 20}, {21, 20}, {21, 21}, {20, 21}});
  CHECK_THROWS_WITH_AS(spec.validate(), "fat does not touch meat", Error);
}

TEST_CASE("pose maps the body frame") {
  const auto spec = loin_specimen(std::nullopt, {10, 5, 90});
  const Point2 p = spec.to_world({1, 0});
  CHECK(p.x == doctest::Approx(10.0));
  CHECK(p.y == doctest::Approx(6.0));
}

TEST_CASE("bone-free cut with no slip leaves the pose unchanged") {
  const auto spec = loin_specimen(std::nullopt);
  const auto res = simulate_cut(spec, line_path({16, 6}, {16, 18}), quiet_config(), 1);
  CHECK(res.cut_applied);
  CHECK(res.post.pose.x == spec.pose.x);
  CHECK(res.post.pose.y == spec.pose.y);
  CHECK(res.post.pose.theta_deg == spec.pose.theta_deg);
}

TEST_CASE("drag through a bone chord moves the meat by gain times chord") {
  // 2 cm of bone along the cut line, through the centroid so no rotation.
  const auto spec = loin_specimen(Polygon({{-0.5, -1.0}, {0.5, -1.0}, {0.5, 1.0}, {-0.5, 1.0}}));
  auto cfg = quiet_config();
  cfg.drag.translation_gain = 1.5;
  const auto res = simulate_cut(spec, line_path({16, 6}, {16, 18}), cfg, 1);
  const double step = 2.0 / cfg.control_hz;
  CHECK(res.post.pose.x == doctest::Approx(16.0));
  CHECK(std::abs(res.post.pose.y - 12.0 - 3.0) <= 1.5 * step + 1e-9);
  CHECK(res.post.pose.theta_deg == 0.0);
}

TEST_CASE("off-center drag rotates the meat") {
  const auto spec = loin_specimen(Polygon({{2.5, -1.0}, {3.5, -1.0}, {3.5, 1.0}, {2.5, 1.0}}));
  const auto res = simulate_cut(spec, line_path({19, 6}, {19, 18}), quiet_config(), 1);
  CHECK(res.post.pose.theta_deg > 5.0);
}

TEST_CASE("forces stay within the sensor range") {
  const auto spec = loin_specimen(Polygon({{-5, 0}, {5, 0}, {5, 1}, {-5, 1}}));
  SimConfig cfg;
  const auto res = simulate_cut(spec, line_path({16, 5}, {16, 19}), cfg, 3);
  bool saturated = false;
  for (const auto& s : res.forces) {
    CHECK(s.force >= 0.0);
    CHECK(s.force <= cfg.force.saturation);
    saturated |= s.force == cfg.force.saturation;
  }
  CHECK(saturated);
  for (std::size_t i = 0; i < res.forces.size(); ++i) {
    CHECK(res.forces[i].t == doctest::Approx(i / 500.0));
  }
}

TEST_CASE("cutting is deterministic per seed") {
  const auto spec = loin_specimen(Polygon({{-5, 0}, {5, 0}, {5, 1}, {-5, 1}}));
  SimConfig cfg;
  const auto a = simulate_cut(spec, line_path({16, 5}, {16, 19}), cfg, 42);
  const auto b = simulate_cut(spec, line_path({16, 5}, {16, 19}), cfg, 42);
  const auto c = simulate_cut(spec, line_path({16, 5}, {16, 19}), cfg, 43);
  REQUIRE(a.forces.size() == b.forces.size());
  for (std::size_t i = 0; i < a.forces.size(); ++i) CHECK(a.forces[i].force == b.forces[i].force);
  CHECK(a.post.pose.x == b.post.pose.x);
  CHECK(a.post.pose.x != c.post.pose.x);
}

TEST_CASE("slip is bounded by three sigma") {
  const auto spec = loin_specimen(std::nullopt);
  SimConfig cfg;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto res = simulate_cut(spec, line_path({16, 6}, {16, 18}), cfg, seed);
    const double moved = std::hypot(res.post.pose.x - 16.0, res.post.pose.y - 12.0);
    CHECK(moved <= 3.0 * cfg.drag.slip_noise + 1e-12);
  }
}

TEST_CASE("a path that misses the specimen applies no cut") {
  const auto res = simulate_cut(loin_specimen(std::nullopt), line_path({1, 1}, {2, 1}), SimConfig{}, 1);
  CHECK_FALSE(res.cut_applied);
  CHECK(res.post.pose.x == 16.0);
  for (const auto& s : res.forces) CHECK(s.force == 0.0);
}

TEST_CASE("hand script interpolation") {
  std::vector<HandWaypoint> script{{0.0, {0, 0}}, {1.0, {100, 0}}, {2.0, {100, 50}}};
  CHECK(hand_centroid_at(script, -1.0) == Point2{0, 0});
  CHECK(hand_centroid_at(script, 0.5) == Point2{50, 0});
  CHECK(hand_centroid_at(script, 1.5) == Point2{100, 25});
  CHECK(hand_centroid_at(script, 9.0) == Point2{100, 50});
  SimConfig cfg;
  const auto frames = scripted_hands(script, cfg);
  CHECK(frames.size() == 121);
  CHECK(frames[60].t == doctest::Approx(1.0));
  CHECK(frames[60].landmarks.size() == 21);
  CHECK(frames[60].landmarks[0] == Point2{100, 28});
  std::vector<HandWaypoint> bad{{1.0, {0, 0}}, {1.0, {1, 0}}};
  CHECK_THROWS_WITH_AS(scripted_hands(bad, cfg), "unordered trace", Error);
}

TEST_CASE("zone entry times match a fine time scan") {
  const auto zones = default_zones();
  std::vector<HandWaypoint> script{{0.0, {20, 200}}, {0.7, {135, 200}}, {1.4, {135, 200}}, {1.8, {320, 240}},
                                   {2.5, {320, 240}}, {3.1, {40, 240}}, {3.3, {40, 240}}, {3.9, {300, 150}}};
  const auto entries = zone_entry_times(script, zones.warning());
  REQUIRE(entries.size() == 2);
  std::vector<double> scan;
  bool inside = false;
  for (int k = 0; k <= 390000; ++k) {
    const double t = k * 1e-5;
    bool now = false;
    for (const auto& p : hand_landmarks(hand_centroid_at(script, t))) now |= point_in_polygon(p, zones.warning());
    if (now && !inside) scan.push_back(t);
    inside = now;
  }
  REQUIRE(scan.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(entries[i] - scan[i]) <= 1.01e-5);
}

}
