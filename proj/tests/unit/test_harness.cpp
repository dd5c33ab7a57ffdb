#include <doctest.h>

#include <cmath>

#include "cobot/harness.hpp"

using namespace cobot;

namespace {

LogEntry entry(double t, std::string kind, Mode m, Vec3 v = {}, std::string plan = "plan-1", int rev = 0) {
  LogEntry e;
  e.t = t;
  e.kind = std::move(kind);
  e.mode = m;
  e.v = v;
  e.plan_id = std::move(plan);
  e.revision = rev;
  return e;
}

LogEntry approval(double t, std::string plan, int rev, int cmd_rev) {
  auto e = entry(t, "approved", Mode::Executing, {}, plan, rev);
  e.cmd_plan_id = plan;
  e.cmd_revision = cmd_rev;
  return e;
}

std::vector<LogEntry> good_log() {
  return {entry(0.0, "plan_proposed", Mode::AwaitingApproval), approval(0.5, "plan-1", 0, 0),
          entry(0.5, "velocity", Mode::Executing, {0, 2, 0}), entry(1.0, "cut_finished", Mode::PostCut),
          entry(1.0, "velocity", Mode::PostCut)};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("summary statistics") {
  TrialReport r;
  r.records.resize(4);
  r.records[0].tp = 1;
  r.records[0].latency_s = 0.01;
  r.records[1].tp = 1;
  r.records[1].latency_s = 0.03;
  r.records[2].fn = 1;
  r.records[3].fp = 1;
  summarize(r);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.precision_defined);
  CHECK(r.latency_mean_s == doctest::Approx(0.02));
  CHECK(r.latency_std_s == doctest::Approx(0.01));
  TrialReport empty;
  empty.records.resize(3);
  summarize(empty);
  CHECK(empty.accuracy == 1.0);
  CHECK(empty.precision == 1.0);
  CHECK_FALSE(empty.precision_defined);
}

TEST_CASE("report serialization") {
  TrialReport r;
  r.experiment = "knife";
  r.records.resize(1);
  r.records[0].tp = 1;
  r.records[0].t_contact = 1.0;
  r.records[0].t_detect = 1.002;
  r.records[0].t_stop = 1.012;
  r.records[0].latency_s = 0.012;
  summarize(r);
  const auto j = r.to_json();
  CHECK(j["true_positives"] == 1);
  CHECK(j["records"][0]["outcome"] == "tp");
  const auto csv = r.to_csv();
  CHECK(csv.rfind("trial_id,t_contact,t_detect,latency_s,seed,t_stop,outcome\n", 0) == 0);
  CHECK(csv.find("tp") != std::string::npos);
}

TEST_CASE("a clean log has no violations") { CHECK(check_log_properties(good_log(), 0.02).empty()); }

TEST_CASE("motion in a gated state is flagged") {
  auto log = good_log();
  log.push_back(entry(1.1, "velocity", Mode::PostCut, {1, 0, 0}));
  CHECK(check_log_properties(log, 0.02).size() == 1);
}

TEST_CASE("execution without a matching approval is flagged") {
  std::vector<LogEntry> log{entry(0.0, "plan_proposed", Mode::AwaitingApproval),
                            entry(0.5, "velocity", Mode::Executing, {0, 2, 0})};
  CHECK_FALSE(check_log_properties(log, 0.02).empty());
  log = {entry(0.0, "plan_proposed", Mode::AwaitingApproval), approval(0.5, "plan-1", 1, 0)};
  CHECK_FALSE(check_log_properties(log, 0.02).empty());
}

TEST_CASE("leaving the e-stop without reset is flagged") {
  auto log = good_log();
  log.insert(log.begin() + 3, entry(0.8, "contact_detected", Mode::EstoppedContact));
  log[4].mode = Mode::PostCut;
  CHECK_FALSE(check_log_properties(log, 0.02).empty());
  auto ok = good_log();
  ok.push_back(entry(1.5, "contact_detected", Mode::EstoppedContact));
  ok.push_back(entry(2.0, "reset", Mode::Idle, {}, "", -1));
  CHECK(check_log_properties(ok, 0.02).empty());
}

TEST_CASE("late stop after a warning is flagged") {
  auto log = good_log();
  auto warn = entry(0.7, "zone_changed", Mode::PausedHuman);
  warn.zone = ZoneState::Warning;
  log.insert(log.begin() + 3, warn);
  log.insert(log.begin() + 4, entry(0.75, "velocity", Mode::PausedHuman));
  CHECK_FALSE(check_log_properties(log, 0.02).empty());
  log[4].t = 0.71;
  CHECK(check_log_properties(log, 0.02).empty());
}

TEST_CASE("hand scoring window") {
  Scenario sc = hand_trial_scenario(1);
  sc.hand_entries = std::vector<double>{1.0};
  EpisodeResult ep;
  ep.log = good_log();
  auto warn = entry(1.01, "zone_changed", Mode::PausedHuman);
  warn.zone = ZoneState::Warning;
  ep.log.insert(ep.log.begin() + 3, warn);
  ep.log.insert(ep.log.begin() + 4, entry(1.01, "velocity", Mode::PausedHuman));
  auto r = score_hand_episode(sc, ep);
  CHECK(r.tp == 1);
  CHECK(r.fp == 0);
  CHECK(r.latency_s == doctest::Approx(0.01));
  ep.log[3].t = 1.02;
  r = score_hand_episode(sc, ep);
  CHECK(r.tp == 0);
  CHECK(r.fn == 1);
  CHECK(r.fp == 1);
  sc.hand_entries.reset();
  CHECK_THROWS_AS(score_hand_episode(sc, ep), ScenarioError);
}

TEST_CASE("small trial batches") {
  std::vector<Scenario> hands{hand_trial_scenario(1), hand_trial_scenario(2), hand_trial_scenario(3)};
  const auto h = run_hand_trials(hands);
  CHECK(h.trials == 3);
  CHECK(h.precision == 1.0);
  CHECK(h.accuracy == 1.0);
  std::vector<Scenario> knives{knife_trial_scenario(1, true), knife_trial_scenario(2, false)};
  const auto k = run_knife_trials(knives);
  CHECK(k.true_positives == 1);
  CHECK(k.false_positives == 0);
  REQUIRE(k.records[0].latency_s);
  CHECK(std::abs(*k.records[0].latency_s - *k.records[0].expected_latency_s) <= 1e-3);
}

TEST_CASE("uncertainty table rows are ordered") {
  const auto rows = run_uncertainty_table(table_cases(), Scenario{});
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].d_px == 0.0);
  CHECK(rows[1].d_px == doctest::Approx(22.0).epsilon(0.05));
  CHECK(uncertainty_monotone(rows));
  auto broken = rows;
  broken[3].psi = broken[2].psi;
  CHECK_FALSE(uncertainty_monotone(broken));
  CHECK(uncertainty_csv(rows).rfind("family,movement,d_px,psi,alert\n", 0) == 0);
}

}
