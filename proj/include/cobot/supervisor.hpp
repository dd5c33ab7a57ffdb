#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobot/image.hpp"
#include "cobot/knife.hpp"
#include "cobot/perception.hpp"
#include "cobot/planner.hpp"
#include "cobot/uncertainty.hpp"

namespace cobot {

enum class Mode {
  Idle,
  AwaitingApproval,
  Executing,
  PausedHuman,
  EstoppedContact,
  PostCut,
  AwaitingInspection,
};

enum class LedColor { Green, Yellow, Red };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);
std::string_view to_string(LedColor c);

/// Velocity must be zero in every mode except Executing.
inline bool velocity_gated(Mode m) { return m != Mode::Executing; }

struct SupervisorState {
  Mode mode = Mode::Idle;
  std::optional<CutPlan> plan;  // the plan the mode refers to, if any
  double progress = 0.0;        // arc-length fraction of the approved plan

  std::string plan_id() const { return plan ? plan->plan_id() : std::string(); }
  int revision() const { return plan ? plan->revision() : -1; }
};

namespace events {
struct MeatPlaced {
  std::shared_ptr<const RasterImage> image;
};
struct PlanProposed {
  CutPlan plan;
};
struct EditReceived {
  std::string plan_id;
  int revision = 0;
  Edit edit;
};
struct Approved {
  std::string plan_id;
  int revision = 0;
};
struct Rejected {
  std::string plan_id;
  int revision = 0;
};
struct ZoneChanged {
  ZoneState zone = ZoneState::Clear;
};
struct ContactDetected {
  ContactEvent contact;
};
struct CutFinished {};
struct AssessmentReady {
  CutAssessment assessment;
};
struct InspectionCleared {};
struct Reset {};
}  // namespace events

using EventPayload =
    std::variant<events::MeatPlaced, events::PlanProposed, events::EditReceived, events::Approved, events::Rejected,
                 events::ZoneChanged, events::ContactDetected, events::CutFinished, events::AssessmentReady,
                 events::InspectionCleared, events::Reset>;

// Tie-break for simultaneous events; lower value is handled first.
enum class EventSource { Contact = 0, Zone = 1, Operator = 2, Internal = 3 };

EventSource source_of(const EventPayload& payload);
std::string_view event_name(const EventPayload& payload);

struct Event {
  double t = 0.0;
  EventPayload payload;
  int client = -1;  // console that sent an operator command, -1 otherwise
};

enum class ActionKind {
  GateVelocity,       // command zero velocity now
  ResumeMotion,       // continue the approved path from the stored progress
  SetLed,             // drive the signal light
  StartExecution,     // build the robot path for the approved plan
  RequestPlan,        // segment the placed meat and propose a plan
  Replan,             // the proposal was rejected
  PlanUpdated,        // an edit was applied; new revision on the state
  CapturePostImage,
  RequestAssessment,
  RejectCommand,      // operator command refused; reason in `reason`
  EpisodeOver,        // terminal stop; only reset continues
};

std::string_view to_string(ActionKind k);

struct Action {
  ActionKind kind;
  LedColor led = LedColor::Green;
  std::string reason;
};

enum class ResumePolicy { OnClear, OnSafe };

struct SupervisorConfig {
  ResumePolicy resume_on = ResumePolicy::OnClear;
};

struct Transition {
  SupervisorState state;
  ZoneState zone;
  std::vector<Action> actions;
};

/// RED when paused, e-stopped, awaiting inspection or the hand is in the
/// warning zone; YELLOW when the hand is in the safe zone; else GREEN.
LedColor led_for(Mode mode, ZoneState zone);

/// Pure transition function of the safety supervisor.
Transition handle_event(const SupervisorState& state, ZoneState zone, const Event& ev,
                        const SupervisorConfig& cfg = {});

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
  double norm() const;
};

struct VelocityCommand {
  Vec3 v;
  double t = 0.0;
};

/// Zero if gated or progress >= 1; otherwise the unit tangent of the segment
/// containing `progress` (arc-length fraction) times the commanded speed.
VelocityCommand velocity_command(const RobotPath& path, double progress, bool gated, double t = 0.0);

/// Tracks arc-length progress across the strokes of an approved plan. Moves
/// between strokes are not modeled: the knife starts the next stroke at once.
class PathFollower {
 public:
  explicit PathFollower(std::vector<RobotPath> strokes);

  double progress() const;
  double arc_position() const { return s_; }
  double total_length() const { return total_; }
  bool finished() const { return s_ >= total_; }
  Point3 position() const;
  std::size_t stroke_index() const { return locate().first; }
  /// Command for the current position; zero when gated or finished.
  VelocityCommand command(bool gated, double t) const;
  /// Advances along the path by `distance` (cm), clamped to the end.
  void advance(double distance);
  void seek(double progress);
  const std::vector<RobotPath>& strokes() const { return strokes_; }
  double speed() const;

 private:
  std::pair<std::size_t, double> locate() const;  // stroke index, local fraction
  std::vector<RobotPath> strokes_;
  std::vector<double> starts_;  // cumulative arc length at each stroke start
  double total_ = 0.0;
  double s_ = 0.0;
};

/// Owns the supervisor state; all mutation goes through handle().
class Supervisor {
 public:
  explicit Supervisor(SupervisorConfig cfg = {}) : cfg_(cfg) {}

  std::vector<Action> handle(const Event& ev);
  /// Stores execution progress; ignored outside Executing/PausedHuman and
  /// never decreases.
  void record_progress(double progress);

  const SupervisorState& state() const { return state_; }
  ZoneState zone() const { return zone_; }
  LedColor led() const { return led_for(state_.mode, zone_); }

 private:
  SupervisorConfig cfg_;
  SupervisorState state_;
  ZoneState zone_ = ZoneState::Clear;
};

/// Events ordered by (time, source priority, arrival).
class EventQueue {
 public:
  void push(Event ev);
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top().ev; }
  Event pop();

 private:
  struct Entry {
    Event ev;
    int priority;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const;
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t seq_ = 0;
};

}  // namespace cobot
