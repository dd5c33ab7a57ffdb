#include "cobot/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "cobot/rng.hpp"

namespace cobot {

using nlohmann::json;

Calibration Scenario::effective_calibration() const {
  if (calibration) return *calibration;
  return {Homography::scale(config.pixel_pitch, config.pixel_pitch), 0.0};
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Polygon polygon_from(const json& j) {
  std::vector<Point2> pts;
  for (const auto& p : j) pts.push_back(point_from(p));
  return Polygon(std::move(pts));
}

json polygon_json(const Polygon& poly) {
  json out = json::array();
  for (const auto& p : poly.vertices()) out.push_back(point_json(p));
  return out;
}

ImageSize size_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

Rgb rgb_from(const json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

json rgb_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

ColorRange range_from(const json& j) {
  ColorRange r;
  const char* names[] = {"r", "g", "b"};
  for (int c = 0; c < 3; ++c) {
    const auto& band = j.at(names[c]);
    r.channels[c] = {band.at(0).get<std::uint8_t>(), band.at(1).get<std::uint8_t>()};
  }
  return r;
}

json range_json(const ColorRange& r) {
  return {{"r", {r.channels[0].min, r.channels[0].max}},
          {"g", {r.channels[1].min, r.channels[1].max}},
          {"b", {r.channels[2].min, r.channels[2].max}}};
}

OperatorAction::Kind action_from(const std::string& s) {
  using K = OperatorAction::Kind;
  if (s == "approve") return K::Approve;
  if (s == "reject") return K::Reject;
  if (s == "edit") return K::Edit;
  if (s == "inspection_cleared") return K::InspectionCleared;
  if (s == "reset") return K::Reset;
  if (s == "place_meat") return K::PlaceMeat;
  throw ScenarioError("unknown operator action '" + s + "'");
}

const char* action_name(OperatorAction::Kind k) {
  using K = OperatorAction::Kind;
  switch (k) {
    case K::Approve: return "approve";
    case K::Reject: return "reject";
    case K::Edit: return "edit";
    case K::InspectionCleared: return "inspection_cleared";
    case K::Reset: return "reset";
    case K::PlaceMeat: return "place_meat";
  }
  return "";
}

Edit edit_from(const json& j) {
  const std::string op = j.at("op").get<std::string>();
  const auto line = get_or<std::size_t>(j, "polyline", 0);
  const auto index = j.at("index").get<std::size_t>();
  if (op == "move") return MoveWaypoint{line, index, point_from(j.at("point"))};
  if (op == "add") return AddWaypoint{line, index, point_from(j.at("point"))};
  if (op == "remove") return RemoveWaypoint{line, index};
  throw ScenarioError("unknown edit op '" + op + "'");
}

void edit_json(const Edit& e, json& out) {
  std::visit(
      [&](const auto& ed) {
        using T = std::decay_t<decltype(ed)>;
        out["polyline"] = ed.polyline;
        out["index"] = ed.index;
        if constexpr (std::is_same_v<T, MoveWaypoint>) {
          out["op"] = "move";
          out["point"] = point_json(ed.point);
        } else if constexpr (std::is_same_v<T, AddWaypoint>) {
          out["op"] = "add";
          out["point"] = point_json(ed.point);
        } else {
          out["op"] = "remove";
        }
      },
      e);
}

void parse_config(const json& c, Scenario& s) {
  SimConfig& cfg = s.config;
  cfg.pixel_pitch = get_or(c, "pixel_pitch", cfg.pixel_pitch);
  if (c.contains("image_size")) cfg.image_size = size_from(c.at("image_size"));
  cfg.control_hz = get_or(c, "control_hz", cfg.control_hz);
  cfg.safety_hz = get_or(c, "safety_hz", cfg.safety_hz);
  s.link_latency_s = get_or(c, "link_latency_s", s.link_latency_s);
  s.max_time_s = get_or(c, "max_time_s", s.max_time_s);
  const auto resume = get_or<std::string>(c, "resume_on", "clear");
  if (resume == "clear") {
    s.resume_on = ResumePolicy::OnClear;
  } else if (resume == "safe") {
    s.resume_on = ResumePolicy::OnSafe;
  } else {
    fail("config.resume_on", "expected clear or safe");
  }
  if (c.contains("drag")) {
    const auto& d = c.at("drag");
    cfg.drag.translation_gain = get_or(d, "translation_gain", cfg.drag.translation_gain);
    cfg.drag.rotation_gain = get_or(d, "rotation_gain", cfg.drag.rotation_gain);
    cfg.drag.slip_noise = get_or(d, "slip_noise", cfg.drag.slip_noise);
  }
  if (c.contains("force")) {
    const auto& f = c.at("force");
    cfg.force.meat_force_mean = get_or(f, "meat_force_mean", cfg.force.meat_force_mean);
    cfg.force.meat_force_std = get_or(f, "meat_force_std", cfg.force.meat_force_std);
    cfg.force.bone_ramp_rate = get_or(f, "bone_ramp_rate", cfg.force.bone_ramp_rate);
    cfg.force.saturation = get_or(f, "saturation", cfg.force.saturation);
  }
  if (c.contains("colors")) {
    const auto& k = c.at("colors");
    if (k.contains("meat")) cfg.colors.meat = rgb_from(k.at("meat"));
    if (k.contains("fat")) cfg.colors.fat = rgb_from(k.at("fat"));
    if (k.contains("background")) cfg.colors.background = rgb_from(k.at("background"));
  }
  if (!(s.link_latency_s >= 0.0)) fail("config.link_latency_s", "must be non-negative");
  if (!(s.max_time_s > 0.0)) fail("config.max_time_s", "must be positive");
  cfg.validate();
}

MeatSpec parse_meat(const json& m) {
  MeatSpec spec{polygon_from(require(m, "meat", "meat")), polygon_from(require(m, "fat", "meat")), std::nullopt, {}};
  if (m.contains("bone") && !m.at("bone").is_null()) spec.bone = polygon_from(m.at("bone"));
  if (m.contains("pose")) {
    const auto& p = m.at("pose");
    spec.pose = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
  }
  spec.validate();
  return spec;
}

TaskSpec parse_task(const json& t) {
  TaskSpec task;
  const auto kind = require(t, "kind", "task").get<std::string>();
  if (kind == "slice") {
    task.kind = TaskSpec::Kind::Slice;
    task.n = require(t, "n", "task").get<int>();
    if (task.n < 2) fail("task.n", "need at least two pieces");
  } else if (kind == "trim") {
    task.kind = TaskSpec::Kind::Trim;
    task.epsilon_px = get_or(t, "epsilon_px", task.epsilon_px);
    if (!(task.epsilon_px >= 0.0)) fail("task.epsilon_px", "must be non-negative");
  } else {
    fail("task.kind", "expected slice or trim");
  }
  task.speed_cm_s = get_or(t, "speed_cm_s", task.speed_cm_s);
  task.overshoot_px = get_or(t, "overshoot_px", task.overshoot_px);
  task.angle_deg = get_or(t, "angle_deg", task.angle_deg);
  if (!(task.speed_cm_s > 0.0)) fail("task.speed_cm_s", "must be positive");
  return task;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  try {
    Scenario s;
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("config")) parse_config(j.at("config"), s);
    s.config.seed = s.seed;
    s.meat = parse_meat(require(j, "meat", "scenario"));
    s.task = parse_task(require(j, "task", "scenario"));

    if (j.contains("hands")) {
      for (const auto& w : j.at("hands")) {
        s.hands.push_back({w.at("t").get<double>(), point_from(w.at("centroid"))});
      }
      if (!s.hands.empty()) scripted_hands(s.hands, s.config);  // validates ordering
    }
    if (j.contains("zones") && !j.at("zones").is_null()) {
      const auto& z = j.at("zones");
      const ImageSize size = z.contains("image_size") ? size_from(z.at("image_size")) : ImageSize{640, 480};
      s.zones.emplace(polygon_from(require(z, "warning", "zones")), polygon_from(require(z, "safe", "zones")), size);
    }
    if (!s.hands.empty() && !s.zones) fail("zones", "hands given without zones");
    if (j.contains("hand_entries") && !j.at("hand_entries").is_null()) {
      s.hand_entries = j.at("hand_entries").get<std::vector<double>>();
    }

    if (j.contains("operator")) {
      for (const auto& a : j.at("operator")) {
        OperatorAction act;
        act.t = a.at("t").get<double>();
        act.kind = action_from(a.at("action").get<std::string>());
        if (a.contains("plan_id")) act.plan_id = a.at("plan_id").get<std::string>();
        if (a.contains("revision")) act.revision = a.at("revision").get<int>();
        act.revision_offset = get_or(a, "revision_offset", 0);
        if (act.kind == OperatorAction::Kind::Edit) act.edit = edit_from(a);
        s.operator_script.push_back(std::move(act));
      }
      std::stable_sort(s.operator_script.begin(), s.operator_script.end(),
                       [](const auto& a, const auto& b) { return a.t < b.t; });
      s.auto_approve_s = j.contains("auto_approve_s") && !j.at("auto_approve_s").is_null()
                             ? std::optional<double>(j.at("auto_approve_s").get<double>())
                             : std::nullopt;
    } else {
      s.auto_approve_s = get_or(j, "auto_approve_s", 0.5);
    }

    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      s.thresholds.meat = range_from(require(t, "meat", "thresholds"));
      s.thresholds.fat = range_from(require(t, "fat", "thresholds"));
      s.thresholds.validate();
    }
    if (j.contains("uncertainty")) {
      s.beta = get_or(j.at("uncertainty"), "beta", s.beta);
      s.tau = get_or(j.at("uncertainty"), "tau", s.tau);
    }
    if (!(s.beta > 0.0) || !(s.tau > 0.0 && s.tau < 1.0)) fail("uncertainty", "need beta > 0 and 0 < tau < 1");
    if (j.contains("knife")) {
      const auto& k = j.at("knife");
      s.knife.margin = get_or(k, "margin", s.knife.margin);
      s.knife.debounce = get_or(k, "debounce", s.knife.debounce);
      if (k.contains("base") && !k.at("base").is_null()) s.knife.base = k.at("base").get<double>();
      s.knife.calibration_traces = get_or(k, "calibration_traces", s.knife.calibration_traces);
    }
    if (s.knife.margin < 0 || s.knife.debounce < 1 || s.knife.calibration_traces < 1) {
      fail("knife", "need margin >= 0, debounce >= 1, calibration_traces >= 1");
    }
    if (j.contains("calibration") && !j.at("calibration").is_null()) {
      const auto& c = j.at("calibration");
      Homography::Matrix m{};
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) m[r][k] = c.at("h").at(r).at(k).get<double>();
      s.calibration = Calibration{Homography(m), get_or(c, "cut_height_z", 0.0)};
    }
    s.miss_rate = get_or(j, "miss_rate", 0.0);
    if (!(s.miss_rate >= 0.0 && s.miss_rate <= 1.0)) fail("miss_rate", "must be in [0, 1]");
    return s;
  } catch (const ScenarioError&) {
    throw;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  } catch (const Error& e) {
    throw ScenarioError(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open scenario " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ScenarioError("malformed scenario " + file.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

json to_json(const Scenario& s) {
  const SimConfig& c = s.config;
  json j;
  j["seed"] = s.seed;
  j["config"] = {
      {"pixel_pitch", c.pixel_pitch},
      {"image_size", {c.image_size.width, c.image_size.height}},
      {"control_hz", c.control_hz},
      {"safety_hz", c.safety_hz},
      {"link_latency_s", s.link_latency_s},
      {"resume_on", s.resume_on == ResumePolicy::OnClear ? "clear" : "safe"},
      {"max_time_s", s.max_time_s},
      {"drag",
       {{"translation_gain", c.drag.translation_gain},
        {"rotation_gain", c.drag.rotation_gain},
        {"slip_noise", c.drag.slip_noise}}},
      {"force",
       {{"meat_force_mean", c.force.meat_force_mean},
        {"meat_force_std", c.force.meat_force_std},
        {"bone_ramp_rate", c.force.bone_ramp_rate},
        {"saturation", c.force.saturation}}},
      {"colors",
       {{"meat", rgb_json(c.colors.meat)}, {"fat", rgb_json(c.colors.fat)}, {"background", rgb_json(c.colors.background)}}},
  };
  j["meat"] = {
      {"meat", polygon_json(s.meat.meat)},
      {"fat", polygon_json(s.meat.fat)},
      {"bone", s.meat.bone ? polygon_json(*s.meat.bone) : json(nullptr)},
      {"pose", {s.meat.pose.x, s.meat.pose.y, s.meat.pose.theta_deg}},
  };
  json task = {{"speed_cm_s", s.task.speed_cm_s}, {"overshoot_px", s.task.overshoot_px}, {"angle_deg", s.task.angle_deg}};
  if (s.task.kind == TaskSpec::Kind::Slice) {
    task["kind"] = "slice";
    task["n"] = s.task.n;
  } else {
    task["kind"] = "trim";
    task["epsilon_px"] = s.task.epsilon_px;
  }
  j["task"] = task;
  j["hands"] = json::array();
  for (const auto& w : s.hands) j["hands"].push_back({{"t", w.t}, {"centroid", point_json(w.centroid)}});
  if (s.zones) {
    j["zones"] = {{"warning", polygon_json(s.zones->warning())},
                  {"safe", polygon_json(s.zones->safe())},
                  {"image_size", {s.zones->image_size().width, s.zones->image_size().height}}};
  }
  j["hand_entries"] = s.hand_entries ? json(*s.hand_entries) : json(nullptr);
  j["operator"] = json::array();
  for (const auto& a : s.operator_script) {
    json o = {{"t", a.t}, {"action", action_name(a.kind)}};
    if (a.plan_id) o["plan_id"] = *a.plan_id;
    if (a.revision) o["revision"] = *a.revision;
    if (a.revision_offset != 0) o["revision_offset"] = a.revision_offset;
    if (a.kind == OperatorAction::Kind::Edit) edit_json(a.edit, o);
    j["operator"].push_back(std::move(o));
  }
  j["auto_approve_s"] = s.auto_approve_s ? json(*s.auto_approve_s) : json(nullptr);
  j["thresholds"] = {{"meat", range_json(s.thresholds.meat)}, {"fat", range_json(s.thresholds.fat)}};
  j["uncertainty"] = {{"beta", s.beta}, {"tau", s.tau}};
  j["knife"] = {{"margin", s.knife.margin},
                {"debounce", s.knife.debounce},
                {"calibration_traces", s.knife.calibration_traces}};
  if (s.knife.base) j["knife"]["base"] = *s.knife.base;
  if (s.calibration) {
    json h = json::array();
    for (const auto& row : s.calibration->h.matrix()) h.push_back({row[0], row[1], row[2]});
    j["calibration"] = {{"h", h}, {"cut_height_z", s.calibration->cut_height_z}};
  }
  j["miss_rate"] = s.miss_rate;
  return j;
}

void save_scenario(const Scenario& s, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << to_json(s).dump(2) << '\n';
}

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ScenarioError("not a scenario directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

ZoneConfig default_zones() {
  return ZoneConfig(rect(220, 100, 420, 380), rect(60, 100, 210, 380), ImageSize{640, 480});
}

MeatSpec loin_specimen(std::optional<Polygon> bone, Pose pose) {
  // Slab 13 cm x 7 cm with a 1.5 cm fat cap on the -y side.
  Polygon meat({{-6.0, -3.5}, {6.0, -3.5}, {6.5, 0.0}, {6.0, 3.5}, {-6.0, 3.5}, {-6.5, 0.0}});
  Polygon fat({{-6.0, -3.5}, {6.0, -3.5}, {5.5, -5.0}, {-5.5, -5.0}});
  MeatSpec spec{std::move(meat), std::move(fat), std::move(bone), pose};
  spec.validate();
  return spec;
}

Scenario hand_trial_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 11));
  Scenario s;
  s.seed = seed;
  s.config.seed = seed;
  s.meat = loin_specimen(std::nullopt);
  s.task.kind = TaskSpec::Kind::Slice;
  s.task.n = 4;
  s.auto_approve_s = 0.5;
  s.zones = default_zones();
  const double ta = uniform(rng, 1.2, 1.8);
  const double y = uniform(rng, 200.0, 280.0);
  s.hands = {
      {0.0, {20.0, y}},       {0.6, {135.0, y}},       {ta, {135.0, y}},         {ta + 0.4, {320.0, y}},
      {ta + 1.2, {320.0, y}}, {ta + 1.8, {20.0, y}}, {ta + 2.2, {20.0, y}},
  };
  s.hand_entries = zone_entry_times(s.hands, s.zones->warning());
  s.max_time_s = 60.0;
  return s;
}

Scenario knife_trial_scenario(std::uint64_t seed, bool with_bone) {
  std::mt19937_64 rng(derive_seed(seed, 12));
  Scenario s;
  s.seed = seed;
  s.config.seed = seed;
  const Pose pose{16.0 + uniform(rng, -1.0, 1.0), 12.0 + uniform(rng, -1.0, 1.0), 0.0};
  const double by = uniform(rng, -1.5, 1.5);
  std::optional<Polygon> bone;
  if (with_bone) bone = rect(-5.2, by, 5.2, by + 0.8);
  s.meat = loin_specimen(std::move(bone), pose);
  s.task.kind = TaskSpec::Kind::Slice;
  s.task.n = 4;
  s.auto_approve_s = 0.5;
  s.max_time_s = 60.0;
  return s;
}

Scenario fuzz_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 13));
  auto coin = [&](double p) { return uniform(rng, 0.0, 1.0) < p; };
  auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };

  Scenario s;
  s.seed = seed;
  s.config.seed = seed;
  s.max_time_s = 30.0;
  s.resume_on = coin(0.5) ? ResumePolicy::OnClear : ResumePolicy::OnSafe;
  s.config.drag.slip_noise = uniform(rng, 0.0, 0.3);
  const double ramps[] = {1500.0, 0.5, 40.0};
  s.config.force.bone_ramp_rate = ramps[pick(3)];

  std::optional<Polygon> bone;
  if (coin(0.5)) {
    const double cx = uniform(rng, -4.0, 4.0), cy = uniform(rng, -3.0, 2.5);
    const double hw = uniform(rng, 0.3, 2.5), hh = uniform(rng, 0.3, 1.0);
    bone = rect(cx - hw, cy - hh, cx + hw, cy + hh);
  }
  s.meat = loin_specimen(std::move(bone), {uniform(rng, 12.0, 20.0), uniform(rng, 9.5, 14.5), uniform(rng, -30.0, 30.0)});

  if (coin(0.5)) {
    s.task.kind = TaskSpec::Kind::Slice;
    s.task.n = 2 + pick(4);
  } else {
    s.task.kind = TaskSpec::Kind::Trim;
    s.task.epsilon_px = uniform(rng, 1.0, 4.0);
  }
  s.task.speed_cm_s = uniform(rng, 2.0, 5.0);

  s.zones = default_zones();
  if (coin(0.7)) {
    double t = 0.0;
    const int n = 2 + pick(6);
    for (int i = 0; i < n; ++i) {
      s.hands.push_back({t, {uniform(rng, 0.0, 640.0), uniform(rng, 0.0, 480.0)}});
      t += uniform(rng, 0.3, 4.0);
    }
  }
  if (coin(0.1)) s.miss_rate = uniform(rng, 0.0, 0.3);

  if (coin(0.4)) {
    s.auto_approve_s = uniform(rng, 0.1, 1.0);
  } else {
    const int n = 3 + pick(10);
    for (int i = 0; i < n; ++i) {
      OperatorAction a;
      a.t = uniform(rng, 0.0, 25.0);
      const int k = pick(10);
      using K = OperatorAction::Kind;
      a.kind = k < 4 ? K::Approve : k < 5 ? K::Reject : k < 7 ? K::Edit : k < 8 ? K::InspectionCleared
               : k < 9 ? K::Reset : K::PlaceMeat;
      if (coin(0.25)) a.revision_offset = coin(0.5) ? -1 : 1;
      if (coin(0.05)) a.plan_id = "plan-bogus";
      const Point2 p{uniform(rng, 0.0, 640.0), uniform(rng, 0.0, 480.0)};
      const auto idx = static_cast<std::size_t>(pick(4));
      switch (pick(3)) {
        case 0: a.edit = MoveWaypoint{0, idx, p}; break;
        case 1: a.edit = AddWaypoint{0, idx, p}; break;
        default: a.edit = RemoveWaypoint{0, idx}; break;
      }
      s.operator_script.push_back(std::move(a));
    }
    std::stable_sort(s.operator_script.begin(), s.operator_script.end(),
                     [](const auto& a, const auto& b) { return a.t < b.t; });
    if (coin(0.5)) s.auto_approve_s = uniform(rng, 0.5, 3.0);
  }
  return s;
}

Scenario demo_scenario(DemoCase c) {
  Scenario s;
  s.zones = default_zones();
  s.auto_approve_s = 0.5;
  s.max_time_s = 120.0;
  switch (c) {
    case DemoCase::SliceWithBone:
      s.seed = 101;
      s.meat = loin_specimen(rect(-5.0, 0.4, 5.0, 1.2));
      s.task.kind = TaskSpec::Kind::Slice;
      s.task.n = 4;
      break;
    case DemoCase::TrimWithDrag:
      // Soft bone across the fat seam: the knife drags the loin without
      // tripping the force threshold.
      s.seed = 202;
      s.meat = loin_specimen(rect(0.0, -4.0, 2.5, -3.0));
      s.config.force.bone_ramp_rate = 0.5;
      s.task.kind = TaskSpec::Kind::Trim;
      break;
    case DemoCase::TrimClean:
      s.seed = 303;
      s.meat = loin_specimen(std::nullopt);
      s.task.kind = TaskSpec::Kind::Trim;
      break;
  }
  s.config.seed = s.seed;
  return s;
}

}  // namespace cobot
