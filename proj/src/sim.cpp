#include "cobot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cobot {

Point2 MeatSpec::to_world(Point2 body) const {
  const double a = pose.theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  return {pose.x + c * body.x - s * body.y, pose.y + s * body.x + c * body.y};
}

Polygon MeatSpec::world(const Polygon& body) const {
  std::vector<Point2> out;
  out.reserve(body.size());
  for (const auto& p : body.vertices()) out.push_back(to_world(p));
  return Polygon(std::move(out));
}

namespace {

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return point_segment_distance(c, a, b) <= 1e-9 || point_segment_distance(d, a, b) <= 1e-9 ||
         point_segment_distance(a, c, d) <= 1e-9 || point_segment_distance(b, c, d) <= 1e-9;
}

}  // namespace

bool polygons_touch(const Polygon& a, const Polygon& b) {
  if (point_in_polygon(a.vertices()[0], b) || point_in_polygon(b.vertices()[0], a)) return true;
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      if (segments_touch(va[i], va[(i + 1) % va.size()], vb[j], vb[(j + 1) % vb.size()])) return true;
    }
  }
  return false;
}

void MeatSpec::validate() const {
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta_deg)) {
    throw Error("invalid pose");
  }
  if (!polygons_touch(meat, fat)) throw Error("fat does not touch meat");
  if (bone && !polygons_touch(meat, *bone)) throw Error("bone does not touch meat");
}

void SimConfig::validate() const {
  if (!(pixel_pitch > 0.0) || !std::isfinite(pixel_pitch)) throw Error("invalid pixel pitch");
  if (image_size.width <= 0 || image_size.height <= 0) throw Error("invalid image size");
  if (control_hz <= 0 || safety_hz <= 0) throw Error("invalid rate");
  if (drag.translation_gain < 0 || drag.rotation_gain < 0 || drag.slip_noise < 0) throw Error("invalid drag");
  if (force.meat_force_std < 0 || !(force.saturation > 0) || force.bone_ramp_rate < 0) {
    throw Error("invalid force model");
  }
}

namespace {

struct PixelPolygons {
  Polygon meat;
  Polygon fat;
  int x0, x1, y0, y1;  // inclusive pixel bounds covering both polygons
};

Polygon to_pixels(const Polygon& world, double pitch) {
  std::vector<Point2> v;
  v.reserve(world.size());
  for (const auto& p : world.vertices()) v.push_back({p.x / pitch, p.y / pitch});
  return Polygon(std::move(v));
}

PixelPolygons prepare(const MeatSpec& spec, const SimConfig& cfg) {
  Polygon meat = to_pixels(spec.world(spec.meat), cfg.pixel_pitch);
  Polygon fat = to_pixels(spec.world(spec.fat), cfg.pixel_pitch);
  double lx = 1e300, ly = 1e300, hx = -1e300, hy = -1e300;
  for (const Polygon* poly : {&meat, &fat}) {
    for (const auto& p : poly->vertices()) {
      if (!cfg.image_size.contains(p)) throw Error("specimen out of frame");
      lx = std::min(lx, p.x);
      ly = std::min(ly, p.y);
      hx = std::max(hx, p.x);
      hy = std::max(hy, p.y);
    }
  }
  const int w = cfg.image_size.width, h = cfg.image_size.height;
  return {std::move(meat), std::move(fat), std::clamp(static_cast<int>(std::floor(lx)) - 1, 0, w - 1),
          std::clamp(static_cast<int>(std::ceil(hx)) + 1, 0, w - 1),
          std::clamp(static_cast<int>(std::floor(ly)) - 1, 0, h - 1),
          std::clamp(static_cast<int>(std::ceil(hy)) + 1, 0, h - 1)};
}

Rgb pixel_color(const PixelPolygons& pp, const SimColors& colors, int x, int y) {
  const Point2 c = Bitmask::center(x, y);
  if (point_in_polygon(c, pp.meat)) return colors.meat;
  if (point_in_polygon(c, pp.fat)) return colors.fat;
  return colors.background;
}

}  // namespace

RasterImage render(const MeatSpec& spec, const SimConfig& cfg) {
  const PixelPolygons pp = prepare(spec, cfg);
  RasterImage img(cfg.image_size.width, cfg.image_size.height, cfg.colors.background);
  auto& px = img.pixels();
  const int w = img.width();
#pragma omp parallel for schedule(static)
  for (int y = pp.y0; y <= pp.y1; ++y) {
    for (int x = pp.x0; x <= pp.x1; ++x) {
      const Rgb c = pixel_color(pp, cfg.colors, x, y);
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * w + x);
      px[i] = c.r;
      px[i + 1] = c.g;
      px[i + 2] = c.b;
    }
  }
  return img;
}

namespace reference {

RasterImage render(const MeatSpec& spec, const SimConfig& cfg) {
  const PixelPolygons pp = prepare(spec, cfg);
  RasterImage img(cfg.image_size.width, cfg.image_size.height);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) img.set(x, y, pixel_color(pp, cfg.colors, x, y));
  }
  return img;
}

}  // namespace reference

CutSimulator::CutSimulator(const MeatSpec& spec, const SimConfig& cfg, std::uint64_t seed)
    : spec_(spec),
      cfg_(cfg),
      rng_(seed),
      world_meat_(spec.world(spec.meat)),
      world_fat_(spec.world(spec.fat)),
      centroid_(spec.world_centroid()) {
  if (spec.bone) world_bone_ = spec.world(*spec.bone);
}

ForceSample CutSimulator::sample(double t, Point2 pos, Point2 step) {
  const ForceParams& f = cfg_.force;
  if (world_bone_ && point_in_polygon(pos, *world_bone_)) {
    if (!first_bone_time_) first_bone_time_ = t;
    const double len = norm(step);
    bone_run_ += len;
    bone_travel_ += len;
    drag_ = drag_ + step;
    const double turn = cross(pos - centroid_, step);
    rotation_deg_ += cfg_.drag.rotation_gain * len * (turn > 0 ? 1.0 : turn < 0 ? -1.0 : 0.0);
    cut_applied_ = true;
    return {t, std::min(f.saturation, f.meat_force_mean + f.bone_ramp_rate * bone_run_)};
  }
  bone_run_ = 0.0;
  if (point_in_polygon(pos, world_meat_) || point_in_polygon(pos, world_fat_)) {
    cut_applied_ = true;
    std::normal_distribution<double> n(f.meat_force_mean, f.meat_force_std);
    return {t, std::clamp(n(rng_), 0.0, f.saturation)};
  }
  return {t, 0.0};
}

MeatSpec CutSimulator::finish() {
  MeatSpec post = spec_;
  const double dth = rotation_deg_ * std::numbers::pi / 180.0;
  const Point2 origin = rotate_about({spec_.pose.x, spec_.pose.y}, centroid_, dth);
  Point2 shift = cfg_.drag.translation_gain * drag_;
  const double sigma = cfg_.drag.slip_noise;
  if (cut_applied_ && sigma > 0.0) {
    std::normal_distribution<double> n(0.0, sigma);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double mag = std::min(std::abs(n(rng_)), 3.0 * sigma);
    const double ang = u(rng_);
    shift = shift + Point2{mag * std::cos(ang), mag * std::sin(ang)};
  }
  post.pose = {origin.x + shift.x, origin.y + shift.y, spec_.pose.theta_deg + rotation_deg_};
  return post;
}

CutResult simulate_cut(const MeatSpec& spec, const std::vector<RobotPath>& path, const SimConfig& cfg,
                       std::uint64_t seed) {
  CutSimulator sim(spec, cfg, seed);
  PathFollower follower(path);
  const double dt = 1.0 / cfg.control_hz;
  ForceTrace forces;
  Point3 p = follower.position();
  Point2 prev{p.x, p.y};
  std::size_t stroke = follower.stroke_index();
  for (long k = 0;; ++k) {
    p = follower.position();
    const Point2 pos{p.x, p.y};
    const std::size_t now_stroke = follower.stroke_index();
    Point2 step = pos - prev;
    if (now_stroke != stroke) {
      const Point3& s = follower.strokes()[now_stroke].points.front();
      step = pos - Point2{s.x, s.y};
      stroke = now_stroke;
    }
    forces.push_back(sim.sample(k * dt, pos, step));
    prev = pos;
    if (follower.finished()) break;
    follower.advance(follower.speed() * dt);
  }
  const bool applied = sim.cut_applied();
  return {sim.finish(), std::move(forces), applied};
}

const std::vector<Point2>& hand_template() {
  static const std::vector<Point2> pts = {
      {0, 28},                                          // wrist
      {-14, 18}, {-22, 8},   {-28, -2},  {-32, -10},    // thumb
      {-10, 0},  {-11, -12}, {-12, -22}, {-12, -30},    // index
      {0, -2},   {0, -15},   {0, -26},   {0, -35},      // middle
      {9, 0},    {10, -12},  {11, -21},  {11, -28},     // ring
      {17, 4},   {19, -5},   {21, -12},  {22, -18},     // pinky
  };
  return pts;
}

std::vector<Point2> hand_landmarks(Point2 centroid) {
  std::vector<Point2> out;
  out.reserve(hand_template().size());
  for (const auto& o : hand_template()) out.push_back(centroid + o);
  return out;
}

namespace {

void check_script(std::span<const HandWaypoint> script) {
  if (script.empty()) throw Error("empty hand script");
  for (std::size_t i = 1; i < script.size(); ++i) {
    if (!(script[i].t > script[i - 1].t)) throw Error("unordered trace");
  }
}

}  // namespace

Point2 hand_centroid_at(std::span<const HandWaypoint> script, double t) {
  check_script(script);
  if (t <= script.front().t) return script.front().centroid;
  if (t >= script.back().t) return script.back().centroid;
  std::size_t i = 1;
  while (script[i].t < t) ++i;
  const auto& a = script[i - 1];
  const auto& b = script[i];
  const double s = (t - a.t) / (b.t - a.t);
  return a.centroid + s * (b.centroid - a.centroid);
}

std::vector<HandFrame> scripted_hands(std::span<const HandWaypoint> script, const SimConfig& cfg) {
  check_script(script);
  const double hz = cfg.safety_hz;
  const auto k0 = static_cast<long>(std::ceil(script.front().t * hz - 1e-9));
  const auto k1 = static_cast<long>(std::floor(script.back().t * hz + 1e-9));
  std::vector<HandFrame> out;
  for (long k = std::max(k0, 0L); k <= k1; ++k) {
    const double t = k / hz;
    out.push_back({t, hand_landmarks(hand_centroid_at(script, t)), 0});
  }
  return out;
}

namespace {

// Smallest s in [0, 1] at which p0 + s (p1 - p0) touches the polygon, if any.
std::optional<double> first_touch(Point2 p0, Point2 p1, const Polygon& zone) {
  if (point_in_polygon(p0, zone)) return 0.0;
  const Point2 d = p1 - p0;
  const double dd = dot(d, d);
  std::optional<double> best;
  auto consider = [&](double s) {
    if (s < -1e-12 || s > 1.0 + 1e-12) return;
    s = std::clamp(s, 0.0, 1.0);
    if (!best || s < *best) best = s;
  };
  const auto& v = zone.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 q0 = v[i], q1 = v[(i + 1) % v.size()];
    const Point2 e = q1 - q0;
    const double denom = cross(d, e);
    if (denom == 0.0) {
      for (Point2 q : {q0, q1}) {
        if (dd > 0.0 && point_segment_distance(q, p0, p1) <= 1e-12) consider(dot(q - p0, d) / dd);
      }
      continue;
    }
    const double s = cross(q0 - p0, e) / denom;
    const double u = cross(q0 - p0, d) / denom;
    if (u >= -1e-12 && u <= 1.0 + 1e-12) consider(s);
  }
  return best;
}

}  // namespace

std::vector<double> zone_entry_times(std::span<const HandWaypoint> script, const Polygon& zone) {
  check_script(script);
  const auto& tmpl = hand_template();
  auto inside = [&](Point2 c) {
    return std::any_of(tmpl.begin(), tmpl.end(), [&](Point2 o) { return point_in_polygon(c + o, zone); });
  };
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < script.size(); ++i) {
    const auto& a = script[i];
    const auto& b = script[i + 1];
    if (inside(a.centroid) || a.centroid == b.centroid) continue;
    std::optional<double> best;
    for (const auto& o : tmpl) {
      const auto s = first_touch(a.centroid + o, b.centroid + o, zone);
      if (s && (!best || *s < *best)) best = s;
    }
    if (best) out.push_back(a.t + *best * (b.t - a.t));
  }
  return out;
}

}  // namespace cobot
