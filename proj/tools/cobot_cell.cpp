// cobot-cell: experiment runner, episode driver and console server.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "cobot/harness.hpp"
#include "cobot/scenario.hpp"
#include "cobot/server.hpp"
#include "cobot/uncertainty.hpp"
#include "cobot/workcell.hpp"

namespace {

constexpr int kScenarioError = 2;
constexpr int kAssertFailed = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw cobot::Error("cannot write " + path);
  out << text;
}

struct ExperimentArgs {
  std::string kind;
  std::string scenario;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  bool assert_thresholds = false;
  double miss_rate = -1.0;
};

int run_experiment(const ExperimentArgs& a) {
  using namespace cobot;
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string json_text, csv_text;

  if (a.kind == "uncertainty") {
    Scenario base = a.scenario.empty() ? Scenario{} : load_scenario(a.scenario);
    const auto rows = run_uncertainty_table(table_cases(), base);
    json_text = uncertainty_json(rows).dump(2);
    csv_text = uncertainty_csv(rows);
    ok = uncertainty_monotone(rows);
  } else {
    std::vector<Scenario> scenarios;
    if (!a.scenario.empty()) {
      scenarios = load_trials(a.scenario, a.kind == "knife" ? 2 * a.trials : a.trials);
    } else {
      for (int i = 0; i < a.trials; ++i) {
        scenarios.push_back(a.kind == "hand" ? hand_trial_scenario(a.seed + i) : knife_trial_scenario(a.seed + i, true));
      }
      if (a.kind == "knife") {
        for (int i = 0; i < a.trials; ++i) scenarios.push_back(knife_trial_scenario(a.seed + 1000 + i, false));
      }
    }
    if (a.miss_rate >= 0.0) {
      for (auto& s : scenarios) s.miss_rate = a.miss_rate;
    }
    TrialReport report;
    if (a.kind == "hand") {
      report = run_hand_trials(scenarios);
      const double bound = 1.0 / 60.0 + 1.0 / 500.0;
      double worst = 0.0;
      for (double l : report.latencies) worst = std::max(worst, l);
      ok = report.precision == 1.0 && report.accuracy == 1.0 && worst <= bound + 1e-12 &&
           report.latency_mean_s >= 0.002 && report.latency_mean_s <= bound;
    } else {
      report = run_knife_trials(scenarios);
      ok = report.false_positives == 0 && report.false_negatives == 0;
      for (const auto& r : report.records) {
        if (r.control) continue;
        if (r.tp != 1 || !r.latency_s || std::abs(*r.latency_s - *r.expected_latency_s) > 1e-3 ||
            *r.delta_s > 1.0 / 500.0 + 1e-12) {
          ok = false;
        }
      }
    }
    json_text = report.to_json().dump(2);
    csv_text = report.to_csv();
  }

  if (a.out.empty()) {
    std::cout << json_text << '\n';
  } else {
    write_file(a.out, json_text + "\n");
  }
  if (!a.csv.empty()) write_file(a.csv, csv_text);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << a.kind << " experiment: " << (ok ? "thresholds met" : "thresholds NOT met") << ", wall " << wall
            << " s\n";
  return a.assert_thresholds && !ok ? kAssertFailed : 0;
}

int run_generate(const std::string& kind, const std::string& dir, int trials, std::uint64_t seed) {
  using namespace cobot;
  std::filesystem::create_directories(dir);
  auto name = [&](const std::string& prefix, int i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d.json", prefix.c_str(), i);
    return std::filesystem::path(dir) / buf;
  };
  if (kind == "hand") {
    for (int i = 0; i < trials; ++i) save_scenario(hand_trial_scenario(seed + i), name("hand", i));
  } else if (kind == "knife") {
    for (int i = 0; i < trials; ++i) save_scenario(knife_trial_scenario(seed + i, true), name("bone", i));
    for (int i = 0; i < trials; ++i) save_scenario(knife_trial_scenario(seed + 1000 + i, false), name("control", i));
  } else if (kind == "fuzz") {
    for (int i = 0; i < trials; ++i) save_scenario(fuzz_scenario(seed + i), name("fuzz", i));
  } else {
    save_scenario(demo_scenario(DemoCase::SliceWithBone), std::filesystem::path(dir) / "slice_bone.json");
    save_scenario(demo_scenario(DemoCase::TrimWithDrag), std::filesystem::path(dir) / "trim_drag.json");
    save_scenario(demo_scenario(DemoCase::TrimClean), std::filesystem::path(dir) / "trim_clean.json");
  }
  return 0;
}

int run_once(const std::string& scenario, const std::string& log_path) {
  using namespace cobot;
  const auto ep = run_episode(load_scenario(scenario));
  if (log_path.empty()) {
    std::cout << ep.jsonl();
  } else {
    write_file(log_path, ep.jsonl());
  }
  nlohmann::ordered_json summary;
  summary["final_state"] = to_string(ep.final_mode);
  summary["led"] = to_string(ep.final_led);
  summary["zone"] = to_string(ep.final_zone);
  summary["t_end"] = ep.end_time;
  if (ep.assessment) {
    summary["assessment"] = {{"d_px", ep.assessment->d}, {"psi", ep.assessment->psi}, {"alert", ep.assessment->alert}};
  }
  std::cerr << summary.dump() << '\n';
  return 0;
}

int run_calibrate(const std::string& pairs_file) {
  using namespace cobot;
  std::ifstream in(pairs_file);
  if (!in) throw ScenarioError("cannot open " + pairs_file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed pairs file: ") + e.what());
  }
  std::vector<BetaPair> pairs;
  for (const auto& p : j) pairs.push_back({p.at("d_px").get<double>(), p.at("psi").get<double>()});
  std::cout << nlohmann::json{{"beta", fit_beta(pairs)}, {"pairs", pairs.size()}}.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated collaborative meat-cutting cell"};
  app.require_subcommand(1);

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "run a trial experiment and write a report");
  experiment->add_option("kind", ex.kind, "hand | knife | uncertainty")
      ->required()
      ->check(CLI::IsMember({"hand", "knife", "uncertainty"}));
  experiment->add_option("--scenario", ex.scenario,
                         "scenario directory (hand, knife) or base scenario file (uncertainty); "
                         "trials are generated from --seed when omitted");
  experiment->add_option("--trials", ex.trials, "number of trials (knife: also that many controls)");
  experiment->add_option("--seed", ex.seed, "first seed of generated trials");
  experiment->add_option("--out", ex.out, "JSON report path (stdout when omitted)");
  experiment->add_option("--csv", ex.csv, "also write per-trial CSV here");
  experiment->add_flag("--assert", ex.assert_thresholds, "exit 3 when acceptance thresholds are not met");
  experiment->add_option("--miss-rate", ex.miss_rate, "probability of dropping each hand frame");

  std::string gen_kind, gen_dir;
  int gen_trials = 50;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "write scenario files");
  generate->add_option("kind", gen_kind, "hand | knife | fuzz | demo")
      ->required()
      ->check(CLI::IsMember({"hand", "knife", "fuzz", "demo"}));
  generate->add_option("--out", gen_dir, "output directory")->required();
  generate->add_option("--trials", gen_trials);
  generate->add_option("--seed", gen_seed);

  std::string run_scenario, run_log;
  auto* run = app.add_subcommand("run", "run one episode");
  run->add_option("--scenario", run_scenario)->required();
  run->add_option("--log", run_log, "episode log (JSON lines); stdout when omitted");

  std::string serve_scenario;
  unsigned short port = 8765;
  double time_scale = 1.0;
  auto* serve = app.add_subcommand("serve", "run a live episode behind the console WebSocket");
  serve->add_option("--scenario", serve_scenario)->required();
  serve->add_option("--port", port);
  serve->add_option("--time-scale", time_scale, "simulated seconds per wall second");

  std::string pairs_file;
  auto* calibrate = app.add_subcommand("calibrate-beta", "fit beta to labeled (d_px, psi) pairs");
  calibrate->add_option("--pairs", pairs_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*experiment) return run_experiment(ex);
    if (*generate) return run_generate(gen_kind, gen_dir, gen_trials, gen_seed);
    if (*run) return run_once(run_scenario, run_log);
    if (*calibrate) return run_calibrate(pairs_file);
    if (*serve) {
      cobot::LiveSession session(cobot::load_scenario(serve_scenario), time_scale);
      cobot::ConsoleServer server(session, port);
      std::cerr << "listening on ws://127.0.0.1:" << server.port() << "/\n";
      session.start();
      server.run();
      return 0;
    }
  } catch (const cobot::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kScenarioError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
