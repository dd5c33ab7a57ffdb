#include "cobot/workcell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cobot/protocol.hpp"
#include "cobot/rng.hpp"

namespace cobot {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const LogEntry& e) {
  ordered_json j;
  j["t"] = e.t;
  j["kind"] = e.kind;
  j["state"] = to_string(e.mode);
  j["zone"] = to_string(e.zone);
  j["led"] = to_string(e.led);
  j["vx"] = e.v.x;
  j["vy"] = e.v.y;
  j["vz"] = e.v.z;
  j["plan_id"] = e.plan_id;
  j["revision"] = e.revision;
  if (e.cmd_plan_id) j["cmd_plan_id"] = *e.cmd_plan_id;
  if (e.cmd_revision) j["cmd_revision"] = *e.cmd_revision;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

LogEntry log_entry_from_json(const json& j) {
  LogEntry e;
  e.t = j.at("t").get<double>();
  e.kind = j.at("kind").get<std::string>();
  e.mode = mode_from_string(j.at("state").get<std::string>());
  e.zone = zone_from_string(j.at("zone").get<std::string>());
  const auto led = j.at("led").get<std::string>();
  e.led = led == "red" ? LedColor::Red : led == "yellow" ? LedColor::Yellow : LedColor::Green;
  e.v = {j.at("vx").get<double>(), j.at("vy").get<double>(), j.at("vz").get<double>()};
  e.plan_id = j.value("plan_id", "");
  e.revision = j.value("revision", -1);
  if (j.contains("cmd_plan_id")) e.cmd_plan_id = j.at("cmd_plan_id").get<std::string>();
  if (j.contains("cmd_revision")) e.cmd_revision = j.at("cmd_revision").get<int>();
  e.detail = j.value("detail", "");
  return e;
}

std::string to_jsonl(const std::vector<LogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<LogEntry> read_jsonl(std::istream& in) {
  std::vector<LogEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(log_entry_from_json(json::parse(line)));
  }
  return out;
}

ForceThreshold knife_threshold(const Scenario& sc) {
  if (sc.knife.base) return {*sc.knife.base, sc.knife.margin, sc.knife.debounce};
  MeatSpec clean = sc.meat;
  clean.bone.reset();
  const Polygon world = clean.world(clean.meat);
  double lx = 1e300, hx = -1e300, ly = 1e300, hy = -1e300;
  for (const auto& p : world.vertices()) {
    lx = std::min(lx, p.x);
    hx = std::max(hx, p.x);
    ly = std::min(ly, p.y);
    hy = std::max(hy, p.y);
  }
  std::mt19937_64 rng(derive_seed(sc.seed, 200));
  std::uniform_real_distribution<double> pick(lx + 0.1 * (hx - lx), hx - 0.1 * (hx - lx));
  std::vector<ForceTrace> traces;
  for (int i = 0; i < sc.knife.calibration_traces; ++i) {
    const double x = pick(rng);
    RobotPath path{{{x, ly - 0.5, 0.0}, {x, hy + 0.5, 0.0}}, sc.task.speed_cm_s};
    traces.push_back(simulate_cut(clean, {path}, sc.config, derive_seed(sc.seed, 300 + i)).forces);
  }
  return calibrate_threshold(traces, sc.knife.margin, sc.knife.debounce);
}

Workcell::Workcell(Scenario scenario)
    : sc_(std::move(scenario)),
      base_(std::lcm(static_cast<std::int64_t>(sc_.config.control_hz), static_cast<std::int64_t>(sc_.config.safety_hz))),
      control_period_(base_ / sc_.config.control_hz),
      safety_period_(base_ / sc_.config.safety_hz),
      link_units_(std::llround(sc_.link_latency_s * static_cast<double>(base_))),
      max_units_(std::llround(sc_.max_time_s * static_cast<double>(base_))),
      supervisor_(SupervisorConfig{sc_.resume_on}),
      miss_rng_(derive_seed(sc_.seed, 400)),
      threshold_(knife_threshold(sc_)),
      spec_(sc_.meat),
      classifier_(threshold_) {
  truth_.threshold = threshold_;
  if (!sc_.hands.empty() && sc_.zones) {
    hands_.emplace(scripted_hands(sc_.hands, sc_.config));
    hands_end_ = sc_.hands.back().t;
  }
  for (const auto& a : sc_.operator_script) schedule(unit_at(a.t), a, -1);
  queue_.push({0.0, events::MeatPlaced{try_render()}});
}

std::int64_t Workcell::unit_at(double t) const {
  return static_cast<std::int64_t>(std::ceil(t * static_cast<double>(base_) - 1e-9));
}

void Workcell::schedule(std::int64_t unit, OperatorAction a, int client) {
  Pending p{std::max<std::int64_t>(unit, 0), pending_seq_++, std::move(a), client};
  const auto at = std::upper_bound(pending_.begin(), pending_.end(), p, [](const Pending& x, const Pending& y) {
    return x.unit != y.unit ? x.unit < y.unit : x.seq < y.seq;
  });
  pending_.insert(at, std::move(p));
}

void Workcell::submit(const OperatorAction& action, int client) { schedule(now_ + 1, action, client); }

std::shared_ptr<const RasterImage> Workcell::try_render() const {
  try {
    return std::make_shared<const RasterImage>(render(spec_, sc_.config));
  } catch (const Error&) {
    return nullptr;
  }
}

std::int64_t Workcell::next_unit() const {
  const std::int64_t next = now_ < 0 ? 0 : now_ + 1;
  auto ceil_to = [](std::int64_t u, std::int64_t period) { return (u + period - 1) / period * period; };
  std::int64_t cand = std::min(ceil_to(next, control_period_), ceil_to(next, safety_period_));
  if (!queue_.empty()) cand = std::min<std::int64_t>(cand, std::llround(queue_.top().t * static_cast<double>(base_)));
  if (!pending_.empty()) cand = std::min(cand, pending_.front().unit);
  return std::max(cand, next);
}

void Workcell::step() { process(next_unit()); }

void Workcell::advance_to(std::int64_t unit) {
  while (next_unit() <= unit) step();
  now_ = std::max(now_, unit);
}

bool Workcell::done() const {
  if (now_ >= max_units_) return true;
  if (now_ < 0 || !queue_.empty() || !pending_.empty()) return false;
  const Mode m = supervisor_.state().mode;
  if (m == Mode::Executing || m == Mode::PausedHuman || m == Mode::PostCut) return false;
  if (hands_ && (!hands_->exhausted() || time() < hands_end_ || pushed_zone_ != ZoneState::Clear)) return false;
  return true;
}

void Workcell::process(std::int64_t u) {
  now_ = u;
  deliver_operator(u);
  if (u % safety_period_ == 0) safety_sample(u);
  if (u % control_period_ == 0) force_sample(u);
  while (!queue_.empty() && std::llround(queue_.top().t * static_cast<double>(base_)) <= u) dispatch(queue_.pop());
  if (u % control_period_ == 0) control(u);
}

void Workcell::deliver_operator(std::int64_t u) {
  const double t = seconds(u);
  while (!pending_.empty() && pending_.front().unit <= u) {
    Pending p = std::move(pending_.front());
    pending_.erase(pending_.begin());
    const OperatorAction& a = p.action;
    const SupervisorState& st = supervisor_.state();
    const std::string plan_id = a.plan_id.value_or(st.plan_id());
    const int revision = a.revision.value_or(st.revision()) + a.revision_offset;
    using K = OperatorAction::Kind;
    EventPayload payload;
    switch (a.kind) {
      case K::Approve: payload = events::Approved{plan_id, revision}; break;
      case K::Reject: payload = events::Rejected{plan_id, revision}; break;
      case K::Edit: payload = events::EditReceived{plan_id, revision, a.edit}; break;
      case K::InspectionCleared: payload = events::InspectionCleared{}; break;
      case K::Reset: payload = events::Reset{}; break;
      case K::PlaceMeat: payload = events::MeatPlaced{try_render()}; break;
    }
    queue_.push({t, std::move(payload), p.client});
  }
}

void Workcell::safety_sample(std::int64_t u) {
  if (!hands_) return;
  const double t = seconds(u);
  HandFrame frame{t, {}, 0};
  for (auto& f : hands_->poll(t + 1e-12)) frame = std::move(f);
  if (sc_.miss_rate > 0.0) {
    const bool miss = std::uniform_real_distribution<double>(0.0, 1.0)(miss_rng_) < sc_.miss_rate;
    if (miss) frame.landmarks.clear();
  }
  const ZoneState z = classify_zone(frame, *sc_.zones);
  if (z == ZoneState::Warning && frame_zone_ != ZoneState::Warning) truth_.warning_onsets.push_back(t);
  frame_zone_ = z;
  if (z != pushed_zone_) {
    pushed_zone_ = z;
    queue_.push({t, events::ZoneChanged{z}});
  }
}

void Workcell::force_sample(std::int64_t u) {
  const Mode m = supervisor_.state().mode;
  if (!follower_ || !cut_ || (m != Mode::Executing && m != Mode::PausedHuman)) return;
  const double t = seconds(u);
  const Point3 p = follower_->position();
  const Point2 pos{p.x, p.y};
  Point2 step = pos - knife_prev_;
  const std::size_t stroke = follower_->stroke_index();
  if (stroke != stroke_) {
    const Point3& s = follower_->strokes()[stroke].points.front();
    step = pos - Point2{s.x, s.y};
    stroke_ = stroke;
  }
  knife_prev_ = pos;
  const ForceSample sample = cut_->sample(t, pos, step);
  if (!truth_.first_bone_time && cut_->first_bone_time()) truth_.first_bone_time = cut_->first_bone_time();
  if (auto contact = classifier_.push(sample)) {
    truth_.contact = contact;
    queue_.push({seconds(u + link_units_), events::ContactDetected{*contact}});
  }
}

void Workcell::control(std::int64_t u) {
  const double t = seconds(u);
  const Mode m = supervisor_.state().mode;
  const bool gated = velocity_gated(m) || !follower_;
  const VelocityCommand cmd = follower_ ? follower_->command(gated, t) : VelocityCommand{{}, t};
  if (!logged_velocity_ || cmd.v != last_v_) {
    last_v_ = cmd.v;
    logged_velocity_ = true;
    write("velocity", t, cmd.v);
  }
  if (!follower_ || m != Mode::Executing) return;
  if (cmd.v.norm() > 0.0) {
    follower_->advance(follower_->speed() / sc_.config.control_hz);
    supervisor_.record_progress(follower_->progress());
  }
  if (follower_->finished() && !finish_queued_) {
    finish_queued_ = true;
    queue_.push({seconds(u + control_period_), events::CutFinished{}});
  }
}

void Workcell::dispatch(const Event& ev) {
  const double t = ev.t;
  const std::string before_plan = supervisor_.state().plan_id();
  const Mode before_mode = supervisor_.state().mode;
  const std::vector<Action> actions = supervisor_.handle(ev);
  const Mode mode = supervisor_.state().mode;

  std::optional<std::string> cmd_plan;
  std::optional<int> cmd_rev;
  std::string detail;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, events::Approved> || std::is_same_v<T, events::Rejected> ||
                      std::is_same_v<T, events::EditReceived>) {
          cmd_plan = e.plan_id;
          cmd_rev = e.revision;
        } else if constexpr (std::is_same_v<T, events::ZoneChanged>) {
          detail = to_string(e.zone);
        } else if constexpr (std::is_same_v<T, events::ContactDetected>) {
          truth_.contact_delivered = t;
          std::ostringstream s;
          s << "t_detect=" << e.contact.t_detect << " peak=" << e.contact.peak;
          detail = s.str();
        } else if constexpr (std::is_same_v<T, events::CutFinished>) {
          finish_queued_ = false;
        } else if constexpr (std::is_same_v<T, events::AssessmentReady>) {
          std::ostringstream s;
          s << "d_px=" << e.assessment.d << " psi=" << e.assessment.psi << " alert=" << e.assessment.alert;
          detail = s.str();
        }
      },
      ev.payload);

  const Vec3 v = velocity_gated(mode) ? Vec3{} : last_v_;
  write(std::string(event_name(ev.payload)), t, v, detail, cmd_plan, cmd_rev);

  if (const auto* p = std::get_if<events::PlanProposed>(&ev.payload)) {
    if (before_mode == Mode::Idle && mode == Mode::AwaitingApproval) {
      emit(protocol::plan_proposed(p->plan, pre_image_.get()));
      if (sc_.auto_approve_s) {
        OperatorAction a;
        a.kind = OperatorAction::Kind::Approve;
        a.plan_id = p->plan.plan_id();
        a.revision = p->plan.revision();
        schedule(now_ + unit_at(*sc_.auto_approve_s), a, -1);
      }
    }
  }
  if (std::holds_alternative<events::AssessmentReady>(ev.payload) && assessment_) {
    emit(protocol::assessment(before_plan, *assessment_));
  }
  run_actions(actions, t, ev.client);
  emit_state(t);
}

void Workcell::run_actions(const std::vector<Action>& actions, double t, int client) {
  for (const auto& a : actions) {
    switch (a.kind) {
      case ActionKind::GateVelocity:
      case ActionKind::ResumeMotion:
        break;  // applied by the next control tick
      case ActionKind::SetLed:
        write("led", t, velocity_gated(supervisor_.state().mode) ? Vec3{} : last_v_, std::string(to_string(a.led)));
        break;
      case ActionKind::StartExecution:
        start_execution(t);
        break;
      case ActionKind::RequestPlan:
      case ActionKind::Replan:
        propose_plan(t);
        break;
      case ActionKind::PlanUpdated: {
        const CutPlan& plan = *supervisor_.state().plan;
        emit(protocol::plan_proposed(plan, pre_image_.get()));
        if (sc_.auto_approve_s) {
          OperatorAction ap;
          ap.kind = OperatorAction::Kind::Approve;
          ap.plan_id = plan.plan_id();
          ap.revision = plan.revision();
          schedule(now_ + unit_at(*sc_.auto_approve_s), ap, -1);
        }
        break;
      }
      case ActionKind::CapturePostImage:
        if (cut_) spec_ = cut_->finish();
        cut_.reset();
        follower_.reset();
        break;
      case ActionKind::RequestAssessment:
        assess(t);
        break;
      case ActionKind::RejectCommand: {
        const std::string code = protocol::error_code(a.reason);
        write(code, t, velocity_gated(supervisor_.state().mode) ? Vec3{} : last_v_, a.reason);
        emit(protocol::error(code, a.reason), client);
        break;
      }
      case ActionKind::EpisodeOver:
        break;
    }
  }
  // A reset abandons any cut in progress; drag already done stays applied.
  if (supervisor_.state().mode == Mode::Idle && follower_) {
    if (cut_) spec_ = cut_->finish();
    cut_.reset();
    follower_.reset();
    finish_queued_ = false;
  }
}

void Workcell::propose_plan(double t) {
  try {
    auto image = try_render();
    if (!image) throw Error("specimen out of frame");
    const SegmentationMasks masks = segment(*image, sc_.thresholds);
    const MeatLocation pre = locate_meat(masks.meat, t);
    const std::string id = "plan-" + std::to_string(plans_made_ + 1);
    CutPlan plan = sc_.task.kind == TaskSpec::Kind::Slice
                       ? plan_slices(masks.meat, sc_.task.n,
                                     SliceOptions{sc_.task.overshoot_px, sc_.task.angle_deg * std::numbers::pi / 180.0}, id)
                       : plan_trim(masks, sc_.task.epsilon_px, id);
    ++plans_made_;
    pre_image_ = std::move(image);
    pre_location_ = pre;
    queue_.push({t, events::PlanProposed{std::move(plan)}});
  } catch (const Error& e) {
    write("plan_failed", t, Vec3{}, e.what());
  }
}

void Workcell::start_execution(double t) {
  try {
    const CutPlan& plan = *supervisor_.state().plan;
    follower_.emplace(to_robot_path(plan, sc_.effective_calibration(), sc_.task.speed_cm_s));
  } catch (const Error& e) {
    write("execution_failed", t, Vec3{}, e.what());
    queue_.push({t, events::Reset{}});
    return;
  }
  cut_.emplace(spec_, sc_.config, derive_seed(sc_.seed, 500 + static_cast<std::uint64_t>(cuts_made_++)));
  classifier_ = ContactClassifier(threshold_);
  const Point3 p = follower_->position();
  knife_prev_ = {p.x, p.y};
  stroke_ = 0;
  finish_queued_ = false;
}

void Workcell::assess(double t) {
  CutAssessment a;
  try {
    if (!pre_location_) throw Error("no pre-cut location");
    auto image = try_render();
    if (!image) throw Error("specimen out of frame");
    const MeatLocation post = locate_meat(segment(*image, sc_.thresholds).meat, t);
    a = evaluate_cut(*pre_location_, post, sc_.beta, sc_.tau);
  } catch (const Error& e) {
    // Meat left the camera view: treat as maximal displacement.
    a.d = std::hypot(sc_.config.image_size.width, sc_.config.image_size.height);
    a.psi = psi(a.d, sc_.beta);
    a.beta = sc_.beta;
    a.tau = sc_.tau;
    a.alert = true;
    write("assessment_failed", t, Vec3{}, e.what());
  }
  assessment_ = a;
  queue_.push({t, events::AssessmentReady{a}});
}

void Workcell::write(const std::string& kind, double t, Vec3 v, std::string detail,
                     std::optional<std::string> cmd_plan_id, std::optional<int> cmd_revision) {
  const SupervisorState& st = supervisor_.state();
  log_.push_back(LogEntry{t, kind, st.mode, supervisor_.zone(), supervisor_.led(), v, st.plan_id(), st.revision(),
                          std::move(cmd_plan_id), cmd_revision, std::move(detail)});
}

void Workcell::emit(const json& msg, int client) {
  if (msg.value("type", "") == "plan_proposed") last_plan_msg_ = msg;
  if (listener_) listener_(msg, client);
}

void Workcell::emit_state(double t) {
  json msg = protocol::state(supervisor_.state().mode, supervisor_.zone(), supervisor_.led(), t);
  if (!last_state_msg_.is_null() && last_state_msg_["state"] == msg["state"] && last_state_msg_["zone"] == msg["zone"] &&
      last_state_msg_["led"] == msg["led"]) {
    return;
  }
  last_state_msg_ = msg;
  if (listener_) listener_(msg, -1);
}

std::vector<json> Workcell::snapshot() const {
  std::vector<json> out;
  if (supervisor_.state().mode == Mode::AwaitingApproval && !last_plan_msg_.is_null()) out.push_back(last_plan_msg_);
  out.push_back(protocol::state(supervisor_.state().mode, supervisor_.zone(), supervisor_.led(), time()));
  return out;
}

EpisodeResult Workcell::result() const {
  EpisodeResult r;
  r.log = log_;
  r.truth = truth_;
  r.final_mode = supervisor_.state().mode;
  r.final_zone = supervisor_.zone();
  r.final_led = supervisor_.led();
  r.assessment = assessment_;
  r.end_time = time();
  return r;
}

EpisodeResult run_episode(const Scenario& sc) {
  Workcell cell(sc);
  while (!cell.done()) cell.step();
  return cell.result();
}

}  // namespace cobot
