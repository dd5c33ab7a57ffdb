#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobot/geometry.hpp"
#include "cobot/image.hpp"
#include "cobot/perception.hpp"

namespace cobot {

enum class PlanStatus { Proposed, Edited, Approved, Rejected };

std::string_view to_string(PlanStatus s);
PlanStatus plan_status_from_string(std::string_view s);

// Waypoint edits from the operator console. `polyline` selects the cut within
// a multi-cut plan; `index` is the waypoint position within that cut.
struct MoveWaypoint {
  std::size_t polyline = 0;
  std::size_t index = 0;
  Point2 point;
  friend bool operator==(const MoveWaypoint&, const MoveWaypoint&) = default;
};

/// Inserts `point` before position `index` (index == size appends).
struct AddWaypoint {
  std::size_t polyline = 0;
  std::size_t index = 0;
  Point2 point;
  friend bool operator==(const AddWaypoint&, const AddWaypoint&) = default;
};

struct RemoveWaypoint {
  std::size_t polyline = 0;
  std::size_t index = 0;
  friend bool operator==(const RemoveWaypoint&, const RemoveWaypoint&) = default;
};

using Edit = std::variant<MoveWaypoint, AddWaypoint, RemoveWaypoint>;

/// A cutting plan in image pixels. Value type: every edit returns a new plan
/// and appends to the edit log. Approved and rejected plans are frozen.
class CutPlan {
 public:
  CutPlan(std::string plan_id, std::vector<Polyline> polylines, ImageSize image_size);

  const std::string& plan_id() const { return plan_id_; }
  const std::vector<Polyline>& polylines() const { return polylines_; }
  PlanStatus status() const { return status_; }
  int revision() const { return revision_; }
  ImageSize image_size() const { return image_size_; }
  const std::vector<Edit>& edit_log() const { return edit_log_; }
  bool frozen() const { return status_ == PlanStatus::Approved || status_ == PlanStatus::Rejected; }

  friend CutPlan apply_edit(const CutPlan& plan, const Edit& edit);
  friend CutPlan approve(const CutPlan& plan);
  friend CutPlan reject(const CutPlan& plan);
  friend CutPlan plan_from_json(const nlohmann::json& j, ImageSize image_size);

 private:
  std::string plan_id_;
  std::vector<Polyline> polylines_;
  PlanStatus status_ = PlanStatus::Proposed;
  int revision_ = 0;
  ImageSize image_size_;
  std::vector<Edit> edit_log_;
};

/// Throws PlanError: "plan frozen", "invalid waypoint index",
/// "outside workspace image", "degenerate plan".
CutPlan apply_edit(const CutPlan& plan, const Edit& edit);
CutPlan approve(const CutPlan& plan);
CutPlan reject(const CutPlan& plan);

/// Re-applies `edits` in order starting from `proposed`.
CutPlan replay_edits(const CutPlan& proposed, std::span<const Edit> edits);

struct SliceOptions {
  double overshoot_px = 5.0;  // beyond the mask extent at both ends of each cut
  double angle_rad = 0.0;     // 0: cuts parallel to the image y axis
};

/// Extent of the mask across the cut direction and the cut positions on it.
struct SliceLayout {
  double across_min = 0.0, across_max = 0.0;  // pixel-edge extent along u
  double along_min = 0.0, along_max = 0.0;    // pixel-edge extent along v
  std::vector<double> cuts;                   // n - 1 positions along u
  Point2 u, v;                                // across / along unit axes
};

SliceLayout slice_layout(const Bitmask& meat, int n, double angle_rad = 0.0);

/// n - 1 equally spaced parallel cuts across the meat mask extent.
/// Throws PlanError("no meat detected") / PlanError("nothing to slice").
CutPlan plan_slices(const Bitmask& meat, int n, const SliceOptions& opts = {}, std::string plan_id = "plan-0");

/// Ordered chain along the meat/fat shared boundary (before simplification).
/// Throws PlanError("no meat-fat boundary").
Polyline trace_meat_fat_boundary(const SegmentationMasks& masks);

/// Boundary chain simplified to `epsilon_px`.
CutPlan plan_trim(const SegmentationMasks& masks, double epsilon_px = 2.0, std::string plan_id = "plan-0");

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Calibration {
  Homography h;  // pixel -> robot-plane cm
  double cut_height_z = 0.0;
};

struct RobotPath {
  std::vector<Point3> points;
  double commanded_speed = 0.0;  // cm/s
  double length() const;
};

/// One robot path per plan polyline, in plan order.
/// Throws PlanError("unapproved plan"); homography errors propagate.
std::vector<RobotPath> to_robot_path(const CutPlan& plan, const Calibration& cal, double speed);

nlohmann::json to_json(const CutPlan& plan);
nlohmann::json polylines_to_json(const std::vector<Polyline>& polylines);
std::vector<Polyline> polylines_from_json(const nlohmann::json& j);
CutPlan plan_from_json(const nlohmann::json& j, ImageSize image_size);

}  // namespace cobot
