#include "cobot/supervisor.hpp"

#include <algorithm>
#include <cmath>

namespace cobot {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Idle: return "IDLE";
    case Mode::AwaitingApproval: return "AWAITING_APPROVAL";
    case Mode::Executing: return "EXECUTING";
    case Mode::PausedHuman: return "PAUSED_HUMAN";
    case Mode::EstoppedContact: return "ESTOPPED_CONTACT";
    case Mode::PostCut: return "POST_CUT";
    case Mode::AwaitingInspection: return "AWAITING_INSPECTION";
  }
  return "IDLE";
}

Mode mode_from_string(std::string_view s) {
  for (Mode m : {Mode::Idle, Mode::AwaitingApproval, Mode::Executing, Mode::PausedHuman, Mode::EstoppedContact,
                 Mode::PostCut, Mode::AwaitingInspection}) {
    if (to_string(m) == s) return m;
  }
  throw Error("unknown supervisor state: " + std::string(s));
}

std::string_view to_string(LedColor c) {
  switch (c) {
    case LedColor::Green: return "green";
    case LedColor::Yellow: return "yellow";
    case LedColor::Red: return "red";
  }
  return "green";
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::GateVelocity: return "gate_velocity";
    case ActionKind::ResumeMotion: return "resume_motion";
    case ActionKind::SetLed: return "set_led";
    case ActionKind::StartExecution: return "start_execution";
    case ActionKind::RequestPlan: return "request_plan";
    case ActionKind::Replan: return "replan";
    case ActionKind::PlanUpdated: return "plan_updated";
    case ActionKind::CapturePostImage: return "capture_post_image";
    case ActionKind::RequestAssessment: return "request_assessment";
    case ActionKind::RejectCommand: return "reject_command";
    case ActionKind::EpisodeOver: return "episode_over";
  }
  return "";
}

EventSource source_of(const EventPayload& payload) {
  return std::visit(
      [](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, events::ContactDetected>) {
          return EventSource::Contact;
        } else if constexpr (std::is_same_v<T, events::ZoneChanged>) {
          return EventSource::Zone;
        } else if constexpr (std::is_same_v<T, events::PlanProposed> || std::is_same_v<T, events::CutFinished> ||
                             std::is_same_v<T, events::AssessmentReady>) {
          return EventSource::Internal;
        } else {
          return EventSource::Operator;
        }
      },
      payload);
}

std::string_view event_name(const EventPayload& payload) {
  static constexpr std::string_view names[] = {
      "meat_placed",       "plan_proposed", "edit",           "approved",
      "rejected",          "zone_changed",  "contact_detected", "cut_finished",
      "assessment_ready",  "inspection_cleared", "reset",
  };
  return names[payload.index()];
}

LedColor led_for(Mode mode, ZoneState zone) {
  if (mode == Mode::PausedHuman || mode == Mode::EstoppedContact || mode == Mode::AwaitingInspection ||
      zone == ZoneState::Warning) {
    return LedColor::Red;
  }
  if (zone == ZoneState::Safe) return LedColor::Yellow;
  return LedColor::Green;
}

namespace {

bool matches(const SupervisorState& s, const std::string& plan_id, int revision) {
  return s.plan && s.plan->plan_id() == plan_id && s.plan->revision() == revision;
}

Action reject_command(std::string reason) { return Action{ActionKind::RejectCommand, LedColor::Green, std::move(reason)}; }

}  // namespace

Transition handle_event(const SupervisorState& state, ZoneState zone, const Event& ev, const SupervisorConfig& cfg) {
  Transition out{state, zone, {}};
  auto& next = out.state;
  auto& actions = out.actions;
  const Mode mode = state.mode;
  const bool terminal = mode == Mode::EstoppedContact;

  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, events::Reset>) {
          next = SupervisorState{};
          actions.push_back({ActionKind::GateVelocity});
        } else if constexpr (std::is_same_v<T, events::ZoneChanged>) {
          out.zone = e.zone;
          if (mode == Mode::Executing && e.zone == ZoneState::Warning) {
            next.mode = Mode::PausedHuman;
            actions.push_back({ActionKind::GateVelocity});
          } else if (mode == Mode::PausedHuman) {
            const bool resume = e.zone == ZoneState::Clear ||
                                (cfg.resume_on == ResumePolicy::OnSafe && e.zone == ZoneState::Safe);
            if (resume) {
              next.mode = Mode::Executing;
              actions.push_back({ActionKind::ResumeMotion});
            }
          }
        } else if constexpr (std::is_same_v<T, events::ContactDetected>) {
          if (!terminal) {
            next.mode = Mode::EstoppedContact;
            actions.push_back({ActionKind::GateVelocity});
            actions.push_back({ActionKind::EpisodeOver});
          }
        } else if constexpr (std::is_same_v<T, events::Approved>) {
          if (mode == Mode::AwaitingApproval && matches(state, e.plan_id, e.revision)) {
            next.plan = approve(*state.plan);
            next.progress = 0.0;
            actions.push_back({ActionKind::StartExecution});
            if (zone == ZoneState::Warning) {
              next.mode = Mode::PausedHuman;
              actions.push_back({ActionKind::GateVelocity});
            } else {
              next.mode = Mode::Executing;
            }
          } else {
            actions.push_back(reject_command("stale plan"));
          }
        } else if constexpr (std::is_same_v<T, events::Rejected>) {
          if (mode == Mode::AwaitingApproval && matches(state, e.plan_id, e.revision)) {
            next = SupervisorState{};
            actions.push_back({ActionKind::Replan});
          } else {
            actions.push_back(reject_command("stale plan"));
          }
        } else if constexpr (std::is_same_v<T, events::EditReceived>) {
          if (mode == Mode::AwaitingApproval && matches(state, e.plan_id, e.revision)) {
            try {
              next.plan = apply_edit(*state.plan, e.edit);
              actions.push_back({ActionKind::PlanUpdated});
            } catch (const PlanError& err) {
              actions.push_back(reject_command(err.what()));
            }
          } else if (state.plan && state.plan->plan_id() == e.plan_id && state.plan->frozen()) {
            actions.push_back(reject_command("plan frozen"));
          } else {
            actions.push_back(reject_command("stale plan"));
          }
        } else if constexpr (std::is_same_v<T, events::PlanProposed>) {
          if (mode == Mode::Idle) {
            next.mode = Mode::AwaitingApproval;
            next.plan = e.plan;
            next.progress = 0.0;
          }
        } else if constexpr (std::is_same_v<T, events::MeatPlaced>) {
          if (mode == Mode::Idle) actions.push_back({ActionKind::RequestPlan});
        } else if constexpr (std::is_same_v<T, events::CutFinished>) {
          if (mode == Mode::Executing) {
            next.mode = Mode::PostCut;
            next.progress = 1.0;
            actions.push_back({ActionKind::GateVelocity});
            actions.push_back({ActionKind::CapturePostImage});
            actions.push_back({ActionKind::RequestAssessment});
          }
        } else if constexpr (std::is_same_v<T, events::AssessmentReady>) {
          if (mode == Mode::PostCut) {
            if (e.assessment.alert) {
              next.mode = Mode::AwaitingInspection;
            } else {
              next = SupervisorState{};
            }
          }
        } else if constexpr (std::is_same_v<T, events::InspectionCleared>) {
          if (mode == Mode::AwaitingInspection) next = SupervisorState{};
        }
      },
      ev.payload);

  // Only reset leaves the e-stop.
  if (terminal && !std::holds_alternative<events::Reset>(ev.payload)) {
    next = state;
  }

  const LedColor before = led_for(state.mode, zone);
  const LedColor after = led_for(next.mode, out.zone);
  if (before != after) actions.push_back({ActionKind::SetLed, after, {}});
  return out;
}

// ---------------------------------------------------------------------------
// Velocity

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

Vec3 segment_velocity(const Point3& a, const Point3& b, double speed) {
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (len == 0.0) return {};
  return {speed * dx / len, speed * dy / len, speed * dz / len};
}

double segment_length(const Point3& a, const Point3& b) {
  return std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.z - a.z) * (b.z - a.z));
}

// Segment index containing arc position s; a vertex belongs to the segment it starts.
std::size_t segment_at(const RobotPath& path, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    acc += segment_length(path.points[i], path.points[i + 1]);
    if (s < acc) return i;
  }
  return path.points.size() >= 2 ? path.points.size() - 2 : 0;
}

}  // namespace

VelocityCommand velocity_command(const RobotPath& path, double progress, bool gated, double t) {
  VelocityCommand cmd{{}, t};
  if (gated || progress >= 1.0 || path.points.size() < 2) return cmd;
  const double s = std::max(progress, 0.0) * path.length();
  const std::size_t i = segment_at(path, s);
  cmd.v = segment_velocity(path.points[i], path.points[i + 1], path.commanded_speed);
  return cmd;
}

PathFollower::PathFollower(std::vector<RobotPath> strokes) : strokes_(std::move(strokes)) {
  if (strokes_.empty()) throw Error("empty robot path");
  for (const auto& s : strokes_) {
    if (s.points.size() < 2 || !(s.commanded_speed > 0.0)) throw Error("invalid robot path");
    starts_.push_back(total_);
    total_ += s.length();
  }
  if (!(total_ > 0.0)) throw Error("invalid robot path");
}

double PathFollower::speed() const { return strokes_.front().commanded_speed; }

double PathFollower::progress() const { return std::min(1.0, s_ / total_); }

std::pair<std::size_t, double> PathFollower::locate() const {
  if (s_ >= total_) return {strokes_.size() - 1, 1.0};
  std::size_t k = 0;
  while (k + 1 < strokes_.size() && s_ >= starts_[k + 1]) ++k;
  const double len = strokes_[k].length();
  return {k, len > 0.0 ? (s_ - starts_[k]) / len : 1.0};
}

Point3 PathFollower::position() const {
  const auto [k, frac] = locate();
  const RobotPath& path = strokes_[k];
  double remaining = frac * path.length();
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const double len = segment_length(path.points[i], path.points[i + 1]);
    if (remaining <= len || i + 2 == path.points.size()) {
      const double a = len > 0.0 ? std::min(1.0, remaining / len) : 0.0;
      const Point3& p = path.points[i];
      const Point3& q = path.points[i + 1];
      return {p.x + a * (q.x - p.x), p.y + a * (q.y - p.y), p.z + a * (q.z - p.z)};
    }
    remaining -= len;
  }
  return path.points.back();
}

VelocityCommand PathFollower::command(bool gated, double t) const {
  if (gated || finished()) return {{}, t};
  const auto [k, frac] = locate();
  return velocity_command(strokes_[k], frac, false, t);
}

void PathFollower::advance(double distance) { s_ = std::min(total_, s_ + std::max(0.0, distance)); }

void PathFollower::seek(double progress) { s_ = std::clamp(progress, 0.0, 1.0) * total_; }

// ---------------------------------------------------------------------------
// Supervisor

std::vector<Action> Supervisor::handle(const Event& ev) {
  Transition tr = handle_event(state_, zone_, ev, cfg_);
  state_ = std::move(tr.state);
  zone_ = tr.zone;
  return std::move(tr.actions);
}

void Supervisor::record_progress(double progress) {
  if (state_.mode != Mode::Executing && state_.mode != Mode::PausedHuman) return;
  state_.progress = std::max(state_.progress, std::clamp(progress, 0.0, 1.0));
}

bool EventQueue::Later::operator()(const Entry& a, const Entry& b) const {
  if (a.ev.t != b.ev.t) return a.ev.t > b.ev.t;
  if (a.priority != b.priority) return a.priority > b.priority;
  return a.seq > b.seq;
}

void EventQueue::push(Event ev) {
  const int prio = static_cast<int>(source_of(ev.payload));
  heap_.push(Entry{std::move(ev), prio, seq_++});
}

Event EventQueue::pop() {
  Event ev = heap_.top().ev;
  heap_.pop();
  return ev;
}

}  // namespace cobot
