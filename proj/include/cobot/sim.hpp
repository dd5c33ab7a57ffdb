#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cobot/geometry.hpp"
#include "cobot/image.hpp"
#include "cobot/knife.hpp"
#include "cobot/perception.hpp"
#include "cobot/planner.hpp"
#include "cobot/supervisor.hpp"

namespace cobot {

/// Placement of the specimen body frame on the cutting surface (cm, degrees).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta_deg = 0.0;
};

/// Synthetic specimen. Polygons are in the body frame (cm); the bone is
/// subsurface and never rendered.
struct MeatSpec {
  Polygon meat;
  Polygon fat;
  std::optional<Polygon> bone;
  Pose pose;

  Point2 to_world(Point2 body) const;
  Polygon world(const Polygon& body) const;
  Point2 world_centroid() const { return to_world(meat.centroid()); }
  /// Throws Error unless fat and bone each overlap or touch the meat.
  void validate() const;
};

bool polygons_touch(const Polygon& a, const Polygon& b);

struct DragParams {
  double translation_gain = 1.0;  // cm of meat travel per cm of blocked knife travel
  double rotation_gain = 5.0;     // degrees per cm of blocked travel
  double slip_noise = 0.2;        // cm, std-dev of post-cut slip
};

struct ForceParams {
  double meat_force_mean = 2.0;  // lbf
  double meat_force_std = 0.3;
  double bone_ramp_rate = 1500.0;  // lbf per cm of travel inside bone
  double saturation = kSensorSaturationLbf;
};

struct SimColors {
  Rgb meat{170, 60, 60};
  Rgb fat{235, 225, 205};
  Rgb background{40, 80, 40};
};

struct SimConfig {
  double pixel_pitch = 0.05;  // cm per pixel of the planning camera
  ImageSize image_size{640, 480};
  int control_hz = 500;
  int safety_hz = 60;
  std::uint64_t seed = 0;
  DragParams drag;
  ForceParams force;
  SimColors colors;

  void validate() const;
};

/// Top-down planning-camera image: fat, then meat over it, on background.
/// Pixel (x, y) takes a class color when its center lies in the polygon.
/// Throws Error("specimen out of frame"). OpenMP across rows.
RasterImage render(const MeatSpec& spec, const SimConfig& cfg);

namespace reference {
/// Serial renderer kept as the test oracle for cobot::render.
RasterImage render(const MeatSpec& spec, const SimConfig& cfg);
}  // namespace reference

/// Steps the knife through the specimen one control tick at a time. Forces
/// and drag are evaluated against the pre-cut placement; the accumulated
/// drag is applied to the pose by finish().
class CutSimulator {
 public:
  CutSimulator(const MeatSpec& spec, const SimConfig& cfg, std::uint64_t seed);

  /// Knife tip at `pos` (world cm) at time t after moving by `step` this tick.
  ForceSample sample(double t, Point2 pos, Point2 step);

  /// Post-cut specimen with drag and slip applied.
  MeatSpec finish();

  bool cut_applied() const { return cut_applied_; }
  double bone_travel() const { return bone_travel_; }
  std::optional<double> first_bone_time() const { return first_bone_time_; }

 private:
  MeatSpec spec_;
  SimConfig cfg_;
  std::mt19937_64 rng_;
  Polygon world_meat_;
  Polygon world_fat_;
  std::optional<Polygon> world_bone_;
  Point2 centroid_;
  Point2 drag_{};
  double rotation_deg_ = 0.0;
  double bone_travel_ = 0.0;
  double bone_run_ = 0.0;
  bool cut_applied_ = false;
  std::optional<double> first_bone_time_;
};

struct CutResult {
  MeatSpec post;
  ForceTrace forces;
  bool cut_applied = false;
};

/// Runs the whole path (all strokes, no interruptions) at the commanded
/// speed, one force sample per control tick.
CutResult simulate_cut(const MeatSpec& spec, const std::vector<RobotPath>& path, const SimConfig& cfg,
                       std::uint64_t seed);

struct HandWaypoint {
  double t = 0.0;
  Point2 centroid;
};

/// Rigid 21-point landmark template, offsets in pixels from the centroid.
const std::vector<Point2>& hand_template();

std::vector<Point2> hand_landmarks(Point2 centroid);

/// Centroid position of a linearly interpolated script at time t (clamped).
Point2 hand_centroid_at(std::span<const HandWaypoint> script, double t);

/// Frames at every safety sample k / safety_hz within the script's span.
/// Throws Error("unordered trace") unless waypoint times increase.
std::vector<HandFrame> scripted_hands(std::span<const HandWaypoint> script, const SimConfig& cfg);

/// Times at which some template landmark first enters `zone` along each
/// leg of the script where the hand starts outside. Ground truth for trials.
std::vector<double> zone_entry_times(std::span<const HandWaypoint> script, const Polygon& zone);

}  // namespace cobot
