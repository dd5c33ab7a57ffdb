#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cobot/knife.hpp"
#include "cobot/perception.hpp"
#include "cobot/scenario.hpp"
#include "cobot/sim.hpp"
#include "cobot/supervisor.hpp"
#include "cobot/uncertainty.hpp"

namespace cobot {

/// One episode-log line. Velocity entries are written when the commanded
/// velocity changes; the other kinds name the event or action.
struct LogEntry {
  double t = 0.0;
  std::string kind;
  Mode mode = Mode::Idle;
  ZoneState zone = ZoneState::Clear;
  LedColor led = LedColor::Green;
  Vec3 v;
  std::string plan_id;
  int revision = -1;
  std::optional<std::string> cmd_plan_id;  // operator commands only
  std::optional<int> cmd_revision;
  std::string detail;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

nlohmann::ordered_json to_json(const LogEntry& e);
LogEntry log_entry_from_json(const nlohmann::json& j);
std::string to_jsonl(const std::vector<LogEntry>& log);
std::vector<LogEntry> read_jsonl(std::istream& in);

/// Simulator-side facts an observer of the log cannot see.
struct EpisodeTruth {
  std::vector<double> warning_onsets;  // frame times where the classification turned WARNING
  std::optional<double> first_bone_time;
  std::optional<ContactEvent> contact;
  std::optional<double> contact_delivered;
  ForceThreshold threshold;
};

struct EpisodeResult {
  std::vector<LogEntry> log;
  EpisodeTruth truth;
  Mode final_mode = Mode::Idle;
  ZoneState final_zone = ZoneState::Clear;
  LedColor final_led = LedColor::Green;
  std::optional<CutAssessment> assessment;
  double end_time = 0.0;

  std::string jsonl() const { return to_jsonl(log); }
};

/// Knife threshold for a scenario: the configured base, or the maximum force
/// over simulated bone-free cuts through the specimen.
ForceThreshold knife_threshold(const Scenario& sc);

/// The simulated cell: clock, sensors, link, simulator and supervisor.
/// Time advances in integer units of 1 / lcm(control_hz, safety_hz) s.
/// Within a unit: safety sample, force sample, queued events in priority
/// order, then the velocity command.
class Workcell {
 public:
  /// Server message plus target client (-1 for every client).
  using Listener = std::function<void(const nlohmann::json& msg, int client)>;

  explicit Workcell(Scenario scenario);

  void set_listener(Listener fn) { listener_ = std::move(fn); }

  /// Processes every unit up to and including `unit`.
  void advance_to(std::int64_t unit);
  /// Processes the next unit at which anything can happen.
  void step();
  /// Nothing left to happen, or max_time reached.
  bool done() const;

  /// Queues a console command for delivery at the next unit.
  void submit(const OperatorAction& action, int client = -1);

  std::int64_t units_per_second() const { return base_; }
  std::int64_t now() const { return now_; }
  double time() const { return now_ < 0 ? 0.0 : static_cast<double>(now_) / base_; }
  const Supervisor& supervisor() const { return supervisor_; }
  const std::vector<LogEntry>& log() const { return log_; }
  const EpisodeTruth& truth() const { return truth_; }
  const std::optional<CutAssessment>& assessment() const { return assessment_; }
  const MeatSpec& specimen() const { return spec_; }

  /// Messages a newly connected console needs to catch up.
  std::vector<nlohmann::json> snapshot() const;

  EpisodeResult result() const;

 private:
  struct Pending {
    std::int64_t unit;
    std::uint64_t seq;
    OperatorAction action;
    int client;
  };

  double seconds(std::int64_t unit) const { return static_cast<double>(unit) / base_; }
  std::int64_t unit_at(double t) const;
  std::int64_t next_unit() const;
  void process(std::int64_t u);
  void safety_sample(std::int64_t u);
  void force_sample(std::int64_t u);
  void control(std::int64_t u);
  void deliver_operator(std::int64_t u);
  void dispatch(const Event& ev);
  void run_actions(const std::vector<Action>& actions, double t, int client);
  void propose_plan(double t);
  void start_execution(double t);
  void assess(double t);
  void schedule(std::int64_t unit, OperatorAction a, int client);
  void write(const std::string& kind, double t, Vec3 v, std::string detail = {},
             std::optional<std::string> cmd_plan_id = {}, std::optional<int> cmd_revision = {});
  void emit(const nlohmann::json& msg, int client = -1);
  void emit_state(double t);
  std::shared_ptr<const RasterImage> try_render() const;

  Scenario sc_;
  std::int64_t base_;
  std::int64_t control_period_;
  std::int64_t safety_period_;
  std::int64_t link_units_;
  std::int64_t max_units_;
  std::int64_t now_ = -1;

  Supervisor supervisor_;
  EventQueue queue_;
  std::vector<Pending> pending_;  // sorted by (unit, seq)
  std::uint64_t pending_seq_ = 0;

  std::optional<TracePlayback> hands_;
  double hands_end_ = 0.0;
  std::mt19937_64 miss_rng_;
  ZoneState frame_zone_ = ZoneState::Clear;
  ZoneState pushed_zone_ = ZoneState::Clear;

  ForceThreshold threshold_;
  MeatSpec spec_;
  std::shared_ptr<const RasterImage> pre_image_;
  std::optional<MeatLocation> pre_location_;
  std::optional<PathFollower> follower_;
  std::optional<CutSimulator> cut_;
  ContactClassifier classifier_;
  Point2 knife_prev_;
  std::size_t stroke_ = 0;
  bool finish_queued_ = false;
  int plans_made_ = 0;
  int cuts_made_ = 0;

  bool logged_velocity_ = false;
  Vec3 last_v_;
  std::optional<CutAssessment> assessment_;
  std::vector<LogEntry> log_;
  EpisodeTruth truth_;

  Listener listener_;
  nlohmann::json last_state_msg_;
  nlohmann::json last_plan_msg_;
};

/// Runs a scenario until quiescent or max_time.
EpisodeResult run_episode(const Scenario& sc);

}  // namespace cobot
