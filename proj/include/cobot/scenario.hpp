#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cobot/error.hpp"
#include "cobot/image.hpp"
#include "cobot/perception.hpp"
#include "cobot/planner.hpp"
#include "cobot/sim.hpp"
#include "cobot/supervisor.hpp"
#include "cobot/uncertainty.hpp"

namespace cobot {

struct TaskSpec {
  enum class Kind { Slice, Trim };
  Kind kind = Kind::Slice;
  int n = 4;
  double epsilon_px = 2.0;
  double speed_cm_s = 2.0;
  double overshoot_px = 5.0;
  double angle_deg = 0.0;
};

/// A scripted console command. Without plan_id / revision the command
/// targets whatever plan is current when it is delivered; revision_offset is
/// added to that revision (a negative offset scripts a stale command).
struct OperatorAction {
  enum class Kind { Approve, Reject, Edit, InspectionCleared, Reset, PlaceMeat };
  double t = 0.0;
  Kind kind = Kind::Approve;
  std::optional<std::string> plan_id;
  std::optional<int> revision;
  int revision_offset = 0;
  Edit edit = MoveWaypoint{};
};

struct KnifeSpec {
  double margin = 0.25;
  int debounce = 2;
  std::optional<double> base;  // lbf; calibrated from simulated cuts when absent
  int calibration_traces = 20;
};

/// Pork-loin analog: meat slab with a fat cap along one side. The bone, if
/// any, is given in the body frame.
MeatSpec loin_specimen(std::optional<Polygon> bone, Pose pose = {16.0, 12.0, 0.0});

struct Scenario {
  std::uint64_t seed = 0;
  SimConfig config;
  double link_latency_s = 0.01;
  ResumePolicy resume_on = ResumePolicy::OnClear;
  double max_time_s = 120.0;
  MeatSpec meat = loin_specimen(std::nullopt);
  TaskSpec task;
  std::vector<HandWaypoint> hands;
  std::optional<ZoneConfig> zones;
  std::optional<std::vector<double>> hand_entries;  // labeled warning-zone entries, seconds
  std::vector<OperatorAction> operator_script;
  std::optional<double> auto_approve_s;  // approve each proposal this long after it appears
  ColorThresholds thresholds = ColorThresholds::defaults();
  double beta = kDefaultBeta;
  double tau = kDefaultTau;
  KnifeSpec knife;
  std::optional<Calibration> calibration;
  double miss_rate = 0.0;  // probability that a hand frame is dropped by the detector

  Calibration effective_calibration() const;
};

/// Throws ScenarioError naming the offending field.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& file);
nlohmann::json to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& file);

/// Scenario files (*.json) in a directory, sorted by name.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir);

/// Standard zones of the 640x480 hand camera: warning zone over the cutting
/// board, safe zone beside it.
ZoneConfig default_zones();

/// Labeled hand-entry trial: the hand approaches from the left, pauses in
/// the safe zone and enters the warning zone at a seed-dependent time.
Scenario hand_trial_scenario(std::uint64_t seed);

/// Slice scenario whose every cut crosses a long bone (or none when
/// `with_bone` is false).
Scenario knife_trial_scenario(std::uint64_t seed, bool with_bone);

/// Randomized episode for the supervisor property fuzzer.
Scenario fuzz_scenario(std::uint64_t seed);

enum class DemoCase { SliceWithBone, TrimWithDrag, TrimClean };
Scenario demo_scenario(DemoCase c);

}  // namespace cobot
