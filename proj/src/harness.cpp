#include "cobot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

namespace cobot {

using nlohmann::ordered_json;

namespace {

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string csv_opt(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s.precision(17);
  s << *v;
  return s.str();
}

std::string outcome(const TrialRecord& r) {
  std::string out;
  auto add = [&](int n, const char* tag) {
    for (int i = 0; i < n; ++i) out += out.empty() ? tag : std::string("+") + tag;
  };
  add(r.tp, "tp");
  add(r.fp, "fp");
  add(r.fn, "fn");
  return out.empty() ? "tn" : out;
}

// First zero-velocity command at or after log index `from`. A cell that is
// already stopped stops again at the next control tick.
std::optional<double> stop_after(const std::vector<LogEntry>& log, std::size_t from, int control_hz) {
  bool moving = false;
  for (std::size_t i = 0; i < from; ++i) {
    if (log[i].kind == "velocity") moving = log[i].v.norm() > 0.0;
  }
  if (!moving) return std::ceil(log[from].t * control_hz - 1e-9) / control_hz;
  for (std::size_t i = from; i < log.size(); ++i) {
    if (log[i].kind == "velocity" && log[i].v.norm() == 0.0) return log[i].t;
  }
  return std::nullopt;
}

template <typename Fn>
std::vector<TrialRecord> run_parallel(const std::vector<Scenario>& scenarios, Fn score) {
  const int n = static_cast<int>(scenarios.size());
  std::vector<TrialRecord> records(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      records[i] = score(scenarios[i], run_episode(scenarios[i]));
      records[i].trial_id = i;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

}  // namespace

ordered_json TrialReport::to_json() const {
  ordered_json j;
  j["experiment"] = experiment;
  j["trials"] = trials;
  j["true_positives"] = true_positives;
  j["false_positives"] = false_positives;
  j["false_negatives"] = false_negatives;
  j["accuracy"] = accuracy;
  j["precision"] = precision;
  j["precision_defined"] = precision_defined;
  j["latency_mean_s"] = latency_mean_s;
  j["latency_std_s"] = latency_std_s;
  j["latencies"] = latencies;
  j["records"] = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["trial_id"] = r.trial_id;
    o["seed"] = r.seed;
    o["control"] = r.control;
    o["outcome"] = outcome(r);
    o["truth"] = r.truth;
    o["detected"] = r.detected;
    o["t_contact"] = opt(r.t_contact);
    o["t_detect"] = opt(r.t_detect);
    o["t_stop"] = opt(r.t_stop);
    o["latency_s"] = opt(r.latency_s);
    o["expected_latency_s"] = opt(r.expected_latency_s);
    o["delta_s"] = opt(r.delta_s);
    j["records"].push_back(std::move(o));
  }
  return j;
}

std::string TrialReport::to_csv() const {
  std::string out = "trial_id,t_contact,t_detect,latency_s,seed,t_stop,outcome\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial_id) + "," + csv_opt(r.t_contact) + "," + csv_opt(r.t_detect) + "," +
           csv_opt(r.latency_s) + "," + std::to_string(r.seed) + "," + csv_opt(r.t_stop) + "," + outcome(r) + "\n";
  }
  return out;
}

void summarize(TrialReport& report) {
  report.trials = static_cast<int>(report.records.size());
  report.true_positives = report.false_positives = report.false_negatives = 0;
  report.latencies.clear();
  for (const auto& r : report.records) {
    report.true_positives += r.tp;
    report.false_positives += r.fp;
    report.false_negatives += r.fn;
    if (r.tp > 0 && r.latency_s) report.latencies.push_back(*r.latency_s);
  }
  const int tp = report.true_positives;
  const int positives = tp + report.false_negatives;
  report.accuracy = positives > 0 ? static_cast<double>(tp) / positives : 1.0;
  report.precision_defined = tp + report.false_positives > 0;
  report.precision = report.precision_defined ? static_cast<double>(tp) / (tp + report.false_positives) : 1.0;
  report.latency_mean_s = report.latency_std_s = 0.0;
  if (!report.latencies.empty()) {
    double sum = 0.0;
    for (double l : report.latencies) sum += l;
    report.latency_mean_s = sum / report.latencies.size();
    double ss = 0.0;
    for (double l : report.latencies) ss += (l - report.latency_mean_s) * (l - report.latency_mean_s);
    report.latency_std_s = std::sqrt(ss / report.latencies.size());
  }
}

std::vector<Scenario> load_trials(const std::filesystem::path& dir, int trials) {
  const auto files = scenario_files(dir);
  if (trials < 0 || static_cast<std::size_t>(trials) > files.size()) {
    throw ScenarioError("need " + std::to_string(trials) + " scenarios in " + dir.string() + ", found " +
                        std::to_string(files.size()));
  }
  std::vector<Scenario> out;
  for (int i = 0; i < trials; ++i) out.push_back(load_scenario(files[i]));
  return out;
}

TrialRecord score_hand_episode(const Scenario& sc, const EpisodeResult& ep) {
  if (!sc.hand_entries) throw ScenarioError("missing ground truth: hand_entries");
  TrialRecord r;
  r.seed = sc.seed;
  r.truth = *sc.hand_entries;
  std::sort(r.truth.begin(), r.truth.end());
  std::vector<std::size_t> onsets;
  for (std::size_t i = 0; i < ep.log.size(); ++i) {
    if (ep.log[i].kind == "zone_changed" && ep.log[i].zone == ZoneState::Warning) {
      onsets.push_back(i);
      r.detected.push_back(ep.log[i].t);
    }
  }
  const double window = 1.0 / sc.config.safety_hz + 1e-9;
  std::vector<bool> used(onsets.size(), false);
  for (double t_true : r.truth) {
    bool hit = false;
    for (std::size_t k = 0; k < onsets.size(); ++k) {
      const double t = ep.log[onsets[k]].t;
      if (used[k] || t < t_true - 1e-9 || t > t_true + window) continue;
      used[k] = true;
      hit = true;
      ++r.tp;
      if (!r.t_contact) {
        r.t_contact = t_true;
        r.t_detect = t;
        r.t_stop = stop_after(ep.log, onsets[k], sc.config.control_hz);
        if (r.t_stop) r.latency_s = *r.t_stop - t_true;
      }
      break;
    }
    if (!hit) ++r.fn;
  }
  r.fp = static_cast<int>(std::count(used.begin(), used.end(), false));
  return r;
}

TrialRecord score_knife_episode(const Scenario& sc, const EpisodeResult& ep) {
  TrialRecord r;
  r.seed = sc.seed;
  r.control = !sc.meat.bone.has_value();
  const auto& tb = ep.truth.first_bone_time;
  if (tb) r.truth.push_back(*tb);
  if (ep.truth.contact) r.detected.push_back(ep.truth.contact->t_detect);
  const bool hit = ep.truth.contact && tb && ep.truth.contact->t_detect >= *tb;
  if (hit) {
    ++r.tp;
    const double hz = sc.config.control_hz;
    r.t_contact = *tb;
    r.t_detect = ep.truth.contact->t_detect;
    for (std::size_t i = 0; i < ep.log.size(); ++i) {
      if (ep.log[i].kind == "contact_detected") {
        r.t_stop = stop_after(ep.log, i, sc.config.control_hz);
        break;
      }
    }
    if (r.t_stop) r.latency_s = *r.t_stop - *tb;
    r.delta_s = *r.t_detect - (ep.truth.threshold.debounce - 1) / hz - *tb;
    r.expected_latency_s = (ep.truth.threshold.debounce - 1) / hz + sc.link_latency_s + *r.delta_s;
  } else {
    if (ep.truth.contact) ++r.fp;
    if (tb) ++r.fn;
  }
  return r;
}

TrialReport run_hand_trials(const std::vector<Scenario>& scenarios) {
  for (const auto& sc : scenarios) {
    if (!sc.hand_entries) throw ScenarioError("missing ground truth: hand_entries");
  }
  TrialReport report;
  report.experiment = "hand";
  report.records = run_parallel(scenarios, score_hand_episode);
  summarize(report);
  return report;
}

TrialReport run_knife_trials(const std::vector<Scenario>& scenarios) {
  TrialReport report;
  report.experiment = "knife";
  report.records = run_parallel(scenarios, score_knife_episode);
  summarize(report);
  return report;
}

std::vector<UncertaintyCase> table_cases() {
  using F = UncertaintyCase::Family;
  std::vector<UncertaintyCase> out;
  for (double cm : {0.0, 1.1, 1.5, 2.9, 4.5}) out.push_back({F::Translation, cm});
  for (double deg : {0.0, 7.0, 10.0, 39.0, 45.0}) out.push_back({F::Rotation, deg});
  return out;
}

std::vector<UncertaintyRow> run_uncertainty_table(const std::vector<UncertaintyCase>& cases, const Scenario& base) {
  MeatSpec pre = base.meat;
  pre.bone.reset();
  const MeatLocation pre_loc = locate_meat(segment(render(pre, base.config), base.thresholds).meat);
  std::vector<UncertaintyRow> rows;
  for (const auto& c : cases) {
    MeatSpec post = pre;
    if (c.family == UncertaintyCase::Family::Translation) {
      post.pose.x += c.amount;
    } else {
      const Point2 origin =
          rotate_about({pre.pose.x, pre.pose.y}, pre.world_centroid(), c.amount * std::numbers::pi / 180.0);
      post.pose = {origin.x, origin.y, pre.pose.theta_deg + c.amount};
    }
    const MeatLocation post_loc = locate_meat(segment(render(post, base.config), base.thresholds).meat);
    const CutAssessment a = evaluate_cut(pre_loc, post_loc, base.beta, base.tau);
    rows.push_back({c, a.d, a.psi, a.alert});
  }
  return rows;
}

ordered_json uncertainty_json(const std::vector<UncertaintyRow>& rows) {
  ordered_json out;
  out["experiment"] = "uncertainty";
  out["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["family"] = r.c.family == UncertaintyCase::Family::Translation ? "translation_cm" : "rotation_deg";
    o["movement"] = r.c.amount;
    o["d_px"] = r.d_px;
    o["psi"] = r.psi;
    o["alert"] = r.alert;
    out["rows"].push_back(std::move(o));
  }
  out["monotone"] = uncertainty_monotone(rows);
  return out;
}

std::string uncertainty_csv(const std::vector<UncertaintyRow>& rows) {
  std::ostringstream s;
  s.precision(17);
  s << "family,movement,d_px,psi,alert\n";
  for (const auto& r : rows) {
    s << (r.c.family == UncertaintyCase::Family::Translation ? "translation_cm" : "rotation_deg") << ',' << r.c.amount
      << ',' << r.d_px << ',' << r.psi << ',' << (r.alert ? "true" : "false") << '\n';
  }
  return s.str();
}

bool uncertainty_monotone(const std::vector<UncertaintyRow>& rows) {
  for (auto family : {UncertaintyCase::Family::Translation, UncertaintyCase::Family::Rotation}) {
    std::vector<UncertaintyRow> f;
    for (const auto& r : rows) {
      if (r.c.family == family) f.push_back(r);
    }
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.c.amount < b.c.amount; });
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (!(f[i].psi > f[i - 1].psi)) return false;
    }
  }
  return true;
}

std::vector<std::string> check_log_properties(const std::vector<LogEntry>& log, double liveness_bound_s) {
  std::vector<std::string> out;
  auto violation = [&](const LogEntry& e, const std::string& what) {
    std::ostringstream s;
    s << "t=" << e.t << " " << e.kind << ": " << what;
    out.push_back(s.str());
  };
  Mode prev = Mode::Idle;
  std::optional<std::pair<std::string, int>> approved;
  bool moving = false;
  bool warned = false;
  double warning_at = 0.0;
  for (const auto& e : log) {
    if (velocity_gated(e.mode) && e.v.norm() > 0.0) {
      violation(e, "nonzero velocity in " + std::string(to_string(e.mode)));
    }
    if (e.kind == "approved" && prev == Mode::AwaitingApproval &&
        (e.mode == Mode::Executing || e.mode == Mode::PausedHuman) && e.cmd_plan_id == e.plan_id &&
        e.cmd_revision == e.revision) {
      approved = std::make_pair(e.plan_id, e.revision);
    }
    if (e.mode == Mode::Idle || e.mode == Mode::AwaitingApproval) approved.reset();
    if (e.mode == Mode::Executing && approved != std::make_pair(e.plan_id, e.revision)) {
      violation(e, "executing " + e.plan_id + " rev " + std::to_string(e.revision) + " without approval");
    }
    if (prev == Mode::EstoppedContact && e.mode != Mode::EstoppedContact && e.kind != "reset") {
      violation(e, "left ESTOPPED_CONTACT without reset");
    }
    if (e.kind == "zone_changed" && e.zone == ZoneState::Warning && moving && !warned) {
      warned = true;
      warning_at = e.t;
    }
    if (e.kind == "velocity") {
      moving = e.v.norm() > 0.0;
      if (warned && !moving) {
        if (e.t - warning_at > liveness_bound_s + 1e-12) violation(e, "stop came too late after WARNING");
        warned = false;
      }
    }
    prev = e.mode;
  }
  if (warned) out.push_back("no stop after WARNING at t=" + std::to_string(warning_at));
  return out;
}

}  // namespace cobot
