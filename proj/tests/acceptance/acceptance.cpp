// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cobot/harness.hpp"
#include "cobot/planner.hpp"
#include "cobot/scenario.hpp"
#include "cobot/uncertainty.hpp"
#include "cobot/workcell.hpp"
#include "../support/masks.hpp"
#include "../support/oracles.hpp"
#include "../support/psi_oracle.hpp"

using namespace cobot;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (wall > limit_s) {
    out.ok = false;
    out.detail += " (over time limit)";
  }
  if (!out.ok) ++failures;
  std::printf("%s %-22s %6.2fs/%gs  %s\n", out.ok ? "PASS" : "FAIL", name, wall, limit_s, out.detail.c_str());
  std::fflush(stdout);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome psi_grid() {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i <= 50; ++i) {
    for (int k = 0; k <= 40; ++k) grid.push_back({2.0 * i, 0.01 + k * (2.0 - 0.01) / 40});
  }
  for (double beta : {0.01, 0.5, 1.0, 2.0}) grid.push_back({700.0 / beta, beta});
  grid.push_back({350.0, 2.0});
  double worst = 0.0;
  for (const auto& [d, beta] : grid) {
    const double got = psi(d, beta);
    const double want = oracle::psi_exact(d, beta);
    if (!std::isfinite(got)) return {false, fmt("non-finite at d=%g beta=%g", d, beta)};
    const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
    worst = std::max(worst, err);
  }
  return {worst <= 1e-12, fmt("%zu points, max rel err %.3g", grid.size(), worst)};
}

Outcome displacement_metric() {
  std::mt19937_64 rng(17);
  // Start orientations in [0, 45) degrees keep the canonical corner labels
  // stable under every tested rotation.
  std::uniform_real_distribution<double> u(-100, 100), a(0, M_PI / 4), h(1, 50);
  bool translation_exact = true;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point2 c{u(rng), u(rng)};
    const double alpha = a(rng);
    const Point2 ax{std::cos(alpha), std::sin(alpha)};
    const double hu = h(rng), hv = h(rng);
    const MeatLocation pre{OrientedBox::from_frame(c, ax, hu, hv), 0.0};
    const MeatLocation moved{OrientedBox::from_frame(c + Point2{3, 4}, ax, hu, hv), 0.0};
    const double dt = displacement(pre, moved);
    // exact when the shifted corners are exactly representable
    const MeatLocation snapped{OrientedBox::from_frame({std::round(c.x), std::round(c.y)}, {1, 0}, std::round(hu),
                                                       std::round(hv)),
                               0.0};
    const MeatLocation snapped_moved{OrientedBox::from_frame({std::round(c.x) + 3, std::round(c.y) + 4}, {1, 0},
                                                             std::round(hu), std::round(hv)),
                                     0.0};
    translation_exact &= displacement(snapped, snapped_moved) == 5.0;
    translation_exact &= std::abs(dt - 5.0) <= 1e-12;
    const double r = std::hypot(hu, hv);
    for (double deg : {7.0, 10.0, 39.0, 45.0}) {
      const double th = deg * M_PI / 180.0;
      const Point2 rot{ax.x * std::cos(th) - ax.y * std::sin(th), ax.x * std::sin(th) + ax.y * std::cos(th)};
      const MeatLocation post{OrientedBox::from_frame(c, rot, hu, hv), 0.0};
      worst = std::max(worst, std::abs(displacement(pre, post) - 2 * r * std::sin(th / 2)));
    }
  }
  return {translation_exact && worst <= 1e-9,
          fmt("translation (3,4) -> 5 %s; rotation max err %.3g", translation_exact ? "exact" : "INEXACT", worst)};
}

Outcome table_ordering() {
  const auto rows = run_uncertainty_table(table_cases(), Scenario{});
  std::ostringstream s;
  for (const auto& r : rows) s << fmt("%.3f ", r.psi);
  return {uncertainty_monotone(rows), "psi " + s.str()};
}

Outcome hand_trials() {
  std::vector<Scenario> sc;
  for (int i = 1; i <= 50; ++i) sc.push_back(hand_trial_scenario(i));
  const auto r = run_hand_trials(sc);
  const double bound = 1.0 / 60.0 + 1.0 / 500.0;
  double worst = 0.0;
  for (double l : r.latencies) worst = std::max(worst, l);
  const bool ok = r.precision == 1.0 && r.precision_defined && r.accuracy == 1.0 && worst <= bound + 1e-12 &&
                  r.latency_mean_s >= 0.002 && r.latency_mean_s <= bound;
  return {ok, fmt("TP %d FP %d FN %d precision %.3f rate %.3f latency mean %.2f ms max %.2f ms", r.true_positives,
                  r.false_positives, r.false_negatives, r.precision, r.accuracy, 1e3 * r.latency_mean_s, 1e3 * worst)};
}

Outcome knife_trials() {
  std::vector<Scenario> sc;
  for (int i = 1; i <= 20; ++i) sc.push_back(knife_trial_scenario(i, true));
  for (int i = 1; i <= 20; ++i) sc.push_back(knife_trial_scenario(1000 + i, false));
  const auto r = run_knife_trials(sc);
  int detected = 0, control_fp = 0;
  double worst = 0.0;
  bool ok = true;
  for (const auto& t : r.records) {
    if (t.control) {
      control_fp += t.fp;
      continue;
    }
    if (t.tp != 1 || !t.latency_s) {
      ok = false;
      continue;
    }
    ++detected;
    worst = std::max(worst, std::abs(*t.latency_s - *t.expected_latency_s));
    if (*t.delta_s > 1.0 / 500.0 + 1e-12 || *t.delta_s < -1e-12) ok = false;
  }
  ok = ok && detected == 20 && control_fp == 0 && r.false_positives == 0 && worst <= 1e-3;
  return {ok, fmt("%d/20 detected, %d/20 control FP, latency mean %.1f ms, max |err| %.3g s", detected, control_fp,
                  1e3 * r.latency_mean_s, worst)};
}

Outcome fuzz() {
  const double bound = 1.0 / 60.0 + 1.0 / 500.0;
  std::vector<std::string> problems(200);
  std::vector<int> estops(200, 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < 200; ++i) {
    try {
      const auto s = fuzz_scenario(static_cast<std::uint64_t>(i) + 1);
      const auto a = run_episode(s);
      const auto b = run_episode(s);
      auto v = check_log_properties(a.log, bound);
      if (a.jsonl() != b.jsonl()) v.push_back("replay differs");
      bool resets = false;
      for (const auto& e : a.log) resets |= e.kind == "reset";
      if (a.truth.contact) {
        estops[i] = 1;
        if (!resets && a.final_mode != Mode::EstoppedContact) v.push_back("left e-stop");
      }
      if (!v.empty()) problems[i] = "seed " + std::to_string(i + 1) + ": " + v.front();
    } catch (const std::exception& e) {
      problems[i] = "seed " + std::to_string(i + 1) + ": " + e.what();
    }
  }
  int bad = 0, stops = 0;
  std::string first;
  for (int i = 0; i < 200; ++i) {
    stops += estops[i];
    if (!problems[i].empty()) {
      if (!bad) first = problems[i];
      ++bad;
    }
  }
  return {bad == 0, fmt("200 episodes, %d e-stops, %d violations %s", stops, bad, first.c_str())};
}

Outcome planner_properties() {
  std::mt19937_64 rng(2024);
  int slice_masks = 0;
  double slice_err = 0.0;
  while (slice_masks < 100) {
    const auto m = oracle::random_blob(rng, 160, 120);
    if (m.empty()) continue;
    ++slice_masks;
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto [lo, hi] = oracle::mask_x_extent(m);
    const auto plan = plan_slices(m, n);
    const double width = static_cast<double>(hi - lo) / n;
    double prev = lo;
    for (int k = 0; k < n - 1; ++k) {
      const auto& line = plan.polylines()[k];
      slice_err = std::max(slice_err, std::abs(line[0].x - line[1].x));
      slice_err = std::max(slice_err, std::abs(line[0].x - prev - width));
      prev = line[0].x;
    }
    slice_err = std::max(slice_err, std::abs(hi - prev - width));
  }
  double trim_excess = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto masks = oracle::random_meat_fat(rng, 120, 90);
    const double eps = 0.5 + (rng() % 8) * 0.5;
    const auto chain = trace_meat_fat_boundary(masks);
    const auto plan = plan_trim(masks, eps);
    trim_excess = std::max(trim_excess, oracle::max_deviation(chain.points(), plan.polylines()[0].points()) - eps);
  }
  double round_trip = 0.0;
  std::uniform_real_distribution<double> jit(-20, 20);
  for (int i = 0; i < 20; ++i) {
    std::vector<Point2> src{{0, 0}, {640, 0}, {640, 480}, {0, 480}, {320, 240}};
    std::vector<Point2> dst;
    for (const auto& p : src) dst.push_back({0.05 * (p.x + jit(rng)), 0.05 * (p.y + jit(rng))});
    const Calibration cal{homography_fit(src, dst), 1.0};
    const auto plan = approve(plan_slices(oracle::random_blob(rng, 640, 480), 4));
    const auto paths = to_robot_path(plan, cal, 2.0);
    const auto inv = cal.h.inverse();
    for (std::size_t k = 0; k < paths.size(); ++k) {
      for (std::size_t j = 0; j < paths[k].points.size(); ++j) {
        const auto& q = paths[k].points[j];
        round_trip = std::max(round_trip, distance(homography_apply(inv, {q.x, q.y}), plan.polylines()[k][j]));
      }
    }
  }
  return {slice_err <= 1e-9 && trim_excess <= 0.0 && round_trip <= 1e-6,
          fmt("slice err %.3g over 100 masks; trim excess %.3g over 50 pairs; round trip %.3g", slice_err,
              std::max(0.0, trim_excess), round_trip)};
}

Outcome demo() {
  const auto a = run_episode(demo_scenario(DemoCase::SliceWithBone));
  const auto b = run_episode(demo_scenario(DemoCase::TrimWithDrag));
  const auto c = run_episode(demo_scenario(DemoCase::TrimClean));
  const bool ok_a = a.final_mode == Mode::EstoppedContact && a.final_led == LedColor::Red;
  const bool ok_b = b.assessment && b.assessment->alert && b.final_mode == Mode::AwaitingInspection;
  const bool ok_c = c.assessment && !c.assessment->alert && c.final_mode == Mode::Idle && c.final_led == LedColor::Green;
  return {ok_a && ok_b && ok_c,
          fmt("slice+bone %s/%s; trim+drag psi %.3f %s; clean trim psi %.3f %s/%s", std::string(to_string(a.final_mode)).c_str(),
              std::string(to_string(a.final_led)).c_str(), b.assessment ? b.assessment->psi : -1.0,
              std::string(to_string(b.final_mode)).c_str(), c.assessment ? c.assessment->psi : -1.0,
              std::string(to_string(c.final_mode)).c_str(), std::string(to_string(c.final_led)).c_str())};
}

}  // namespace

int main() {
  criterion("psi-precision", 1.0, psi_grid);
  criterion("displacement-metric", 1.0, displacement_metric);
  criterion("uncertainty-ordering", 10.0, table_ordering);
  criterion("hand-trials", 30.0, hand_trials);
  criterion("knife-trials", 30.0, knife_trials);
  criterion("supervisor-fuzz", 120.0, fuzz);
  criterion("planner-properties", 60.0, planner_properties);
  criterion("end-to-end-demo", 60.0, demo);
  std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
