#include "cobot/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace cobot {

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Proposed: return "proposed";
    case PlanStatus::Edited: return "edited";
    case PlanStatus::Approved: return "approved";
    case PlanStatus::Rejected: return "rejected";
  }
  return "proposed";
}

PlanStatus plan_status_from_string(std::string_view s) {
  if (s == "proposed") return PlanStatus::Proposed;
  if (s == "edited") return PlanStatus::Edited;
  if (s == "approved") return PlanStatus::Approved;
  if (s == "rejected") return PlanStatus::Rejected;
  throw PlanError("unknown plan status");
}

CutPlan::CutPlan(std::string plan_id, std::vector<Polyline> polylines, ImageSize image_size)
    : plan_id_(std::move(plan_id)), polylines_(std::move(polylines)), image_size_(image_size) {
  if (polylines_.empty()) throw PlanError("plan has no cuts");
  for (const auto& line : polylines_) {
    for (const auto& p : line.points()) {
      if (!image_size_.contains(p)) throw PlanError("outside workspace image");
    }
  }
}

CutPlan apply_edit(const CutPlan& plan, const Edit& edit) {
  if (plan.frozen()) throw PlanError("plan frozen");
  CutPlan next = plan;
  auto line_at = [&](std::size_t idx) -> std::vector<Point2> {
    if (idx >= plan.polylines_.size()) throw PlanError("invalid waypoint index");
    return plan.polylines_[idx].points();
  };
  auto check_point = [&](Point2 p) {
    if (!is_finite(p) || !plan.image_size_.contains(p)) throw PlanError("outside workspace image");
  };

  std::size_t target = 0;
  std::vector<Point2> pts;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        target = e.polyline;
        pts = line_at(e.polyline);
        if constexpr (std::is_same_v<T, MoveWaypoint>) {
          if (e.index >= pts.size()) throw PlanError("invalid waypoint index");
          check_point(e.point);
          pts[e.index] = e.point;
        } else if constexpr (std::is_same_v<T, AddWaypoint>) {
          if (e.index > pts.size()) throw PlanError("invalid waypoint index");
          check_point(e.point);
          pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(e.index), e.point);
        } else {
          if (e.index >= pts.size()) throw PlanError("invalid waypoint index");
          if (pts.size() <= 2) throw PlanError("degenerate plan");
          pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(e.index));
        }
      },
      edit);

  try {
    next.polylines_[target] = Polyline(std::move(pts));
  } catch (const GeometryError&) {
    throw PlanError("degenerate plan");
  }
  next.status_ = PlanStatus::Edited;
  next.revision_ = plan.revision_ + 1;
  next.edit_log_.push_back(edit);
  return next;
}

CutPlan approve(const CutPlan& plan) {
  if (plan.frozen()) throw PlanError("plan frozen");
  CutPlan next = plan;
  next.status_ = PlanStatus::Approved;
  return next;
}

CutPlan reject(const CutPlan& plan) {
  if (plan.frozen()) throw PlanError("plan frozen");
  CutPlan next = plan;
  next.status_ = PlanStatus::Rejected;
  return next;
}

CutPlan replay_edits(const CutPlan& proposed, std::span<const Edit> edits) {
  CutPlan plan = proposed;
  for (const auto& e : edits) plan = apply_edit(plan, e);
  return plan;
}

// ---------------------------------------------------------------------------
// Slicing

SliceLayout slice_layout(const Bitmask& meat, int n, double angle_rad) {
  if (n < 2) throw PlanError("nothing to slice");
  SliceLayout layout;
  layout.u = {std::cos(angle_rad), std::sin(angle_rad)};
  layout.v = {-layout.u.y, layout.u.x};
  if (angle_rad == 0.0) {
    layout.u = {1.0, 0.0};
    layout.v = {0.0, 1.0};
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  double amin = inf, amax = -inf, bmin = inf, bmax = -inf;
  bool any = false;
  for (int y = 0; y < meat.height(); ++y) {
    for (int x = 0; x < meat.width(); ++x) {
      if (!meat.at(x, y)) continue;
      any = true;
      for (int dy = 0; dy <= 1; ++dy) {
        for (int dx = 0; dx <= 1; ++dx) {
          const Point2 c{static_cast<double>(x + dx), static_cast<double>(y + dy)};
          const double a = dot(c, layout.u);
          const double b = dot(c, layout.v);
          amin = std::min(amin, a);
          amax = std::max(amax, a);
          bmin = std::min(bmin, b);
          bmax = std::max(bmax, b);
        }
      }
    }
  }
  if (!any) throw PlanError("no meat detected");
  layout.across_min = amin;
  layout.across_max = amax;
  layout.along_min = bmin;
  layout.along_max = bmax;
  for (int k = 1; k < n; ++k) layout.cuts.push_back(amin + k * (amax - amin) / n);
  return layout;
}

namespace {

// Liang-Barsky clip of p0 + s (p1 - p0), s in [0, 1], to [0,w] x [0,h].
std::optional<std::pair<Point2, Point2>> clip_to_image(Point2 p0, Point2 p1, ImageSize size) {
  double t0 = 0.0, t1 = 1.0;
  const Point2 d = p1 - p0;
  const std::array<double, 4> p{-d.x, d.x, -d.y, d.y};
  const std::array<double, 4> q{p0.x, size.width - p0.x, p0.y, size.height - p0.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 >= t1) return std::nullopt;
  return std::make_pair(p0 + t0 * d, p0 + t1 * d);
}

}  // namespace

CutPlan plan_slices(const Bitmask& meat, int n, const SliceOptions& opts, std::string plan_id) {
  const SliceLayout layout = slice_layout(meat, n, opts.angle_rad);
  const ImageSize size{meat.width(), meat.height()};
  std::vector<Polyline> cuts;
  for (double c : layout.cuts) {
    const Point2 a = c * layout.u + (layout.along_min - opts.overshoot_px) * layout.v;
    const Point2 b = c * layout.u + (layout.along_max + opts.overshoot_px) * layout.v;
    auto clipped = clip_to_image(a, b, size);
    if (!clipped) throw PlanError("cut outside image");
    cuts.emplace_back(std::vector<Point2>{clipped->first, clipped->second});
  }
  return CutPlan(std::move(plan_id), std::move(cuts), size);
}

// ---------------------------------------------------------------------------
// Meat/fat boundary tracing

namespace {

// Clockwise on screen (y down), starting west.
constexpr std::array<std::array<int, 2>, 8> kNeighbors{{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kNeighbors[d][0] == dx && kNeighbors[d][1] == dy) return d;
  }
  return 0;
}

struct Components {
  std::vector<int> label;                         // -1 = not in mask
  std::vector<std::array<int, 2>> first_pixel;    // raster-first pixel per component
  std::vector<std::size_t> size;
};

Components label_components(const Bitmask& mask) {
  const int w = mask.width(), h = mask.height();
  Components comps;
  comps.label.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
  std::deque<std::array<int, 2>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || comps.label[i] >= 0) continue;
      const int id = static_cast<int>(comps.size.size());
      comps.first_pixel.push_back({x, y});
      comps.size.push_back(0);
      comps.label[i] = id;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        ++comps.size[id];
        for (const auto& [dx, dy] : kNeighbors) {
          const int nx = cx + dx, ny = cy + dy;
          if (!mask.at_or_false(nx, ny)) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
          if (comps.label[ni] >= 0) continue;
          comps.label[ni] = id;
          queue.push_back({nx, ny});
        }
      }
    }
  }
  return comps;
}

// Moore-neighbor tracing of the outer contour of component `id`, starting at
// its raster-first pixel. Stops when the first move repeats.
std::vector<std::array<int, 2>> moore_trace(const Components& comps, int id, int w, int h) {
  auto inside = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return false;
    return comps.label[static_cast<std::size_t>(y) * w + x] == id;
  };
  const auto start = comps.first_pixel[id];
  std::vector<std::array<int, 2>> contour{start};
  auto cur = start;
  int back = 0;  // direction from cur to the backtrack pixel (west of start)
  std::optional<std::array<int, 2>> first_move;
  const std::size_t guard = 4 * comps.size[id] + 8;
  while (contour.size() <= guard) {
    std::optional<std::array<int, 2>> next;
    int next_back = 0;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      const int nx = cur[0] + kNeighbors[d][0], ny = cur[1] + kNeighbors[d][1];
      if (inside(nx, ny)) {
        const int pd = (back + k - 1) % 8;
        const int px = cur[0] + kNeighbors[pd][0], py = cur[1] + kNeighbors[pd][1];
        next = std::array<int, 2>{nx, ny};
        next_back = direction_of(px - nx, py - ny);
        break;
      }
    }
    if (!next) break;  // isolated pixel
    if (cur == start) {
      if (first_move && *first_move == *next) break;
      if (!first_move) first_move = next;
    }
    cur = *next;
    back = next_back;
    contour.push_back(cur);
  }
  if (contour.size() > 1 && contour.back() == start) contour.pop_back();
  return contour;
}

struct Run {
  std::vector<Point2> points;
  bool closed = false;
  std::size_t length = 0;
};

// Longest run of contour pixels touching `other`, mapped to midpoints between
// each pixel center and the centroid of its `other` neighbors.
std::optional<Run> longest_boundary_run(const std::vector<std::array<int, 2>>& contour, const Bitmask& other) {
  const std::size_t n = contour.size();
  std::vector<char> adj(n, 0);
  std::vector<Point2> mid(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = contour[i];
    Point2 sum{};
    int count = 0;
    for (const auto& [dx, dy] : kNeighbors) {
      if (other.at_or_false(x + dx, y + dy)) {
        sum = sum + Bitmask::center(x + dx, y + dy);
        ++count;
      }
    }
    if (count > 0) {
      adj[i] = 1;
      any = true;
      mid[i] = 0.5 * (Bitmask::center(x, y) + (1.0 / count) * sum);
    }
  }
  if (!any) return std::nullopt;

  Run run;
  if (std::all_of(adj.begin(), adj.end(), [](char a) { return a != 0; })) {
    run.points = mid;
    run.closed = true;
    run.length = n;
    return run;
  }
  // Rotate so that index 0 follows a non-adjacent pixel, then scan linearly.
  std::size_t offset = 0;
  while (adj[offset]) ++offset;
  std::size_t best_start = 0, best_len = 0, cur_start = 0, cur_len = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t i = (offset + k) % n;
    if (adj[i]) {
      if (cur_len == 0) cur_start = k;
      ++cur_len;
      if (cur_len > best_len) {
        best_len = cur_len;
        best_start = cur_start;
      }
    } else {
      cur_len = 0;
    }
  }
  for (std::size_t k = 0; k < best_len; ++k) run.points.push_back(mid[(offset + best_start + k) % n]);
  run.length = best_len;
  // A single touching pixel becomes a short segment across the boundary.
  if (best_len == 1) {
    const auto [x, y] = contour[(offset + best_start) % n];
    const Point2 m = run.points.front();
    run.points = {Bitmask::center(x, y), m + (m - Bitmask::center(x, y))};
  }
  return run;
}

}  // namespace

Polyline trace_meat_fat_boundary(const SegmentationMasks& masks) {
  const int w = masks.meat.width(), h = masks.meat.height();
  if (masks.fat.width() != w || masks.fat.height() != h) throw PlanError("mask size mismatch");

  std::optional<Run> best;
  for (const auto* pair : {&masks.meat, &masks.fat}) {
    const Bitmask& primary = *pair;
    const Bitmask& other = pair == &masks.meat ? masks.fat : masks.meat;
    const Components comps = label_components(primary);
    std::vector<int> order(comps.size.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return comps.size[a] > comps.size[b]; });
    for (int id : order) {
      auto run = longest_boundary_run(moore_trace(comps, id, w, h), other);
      if (run && (!best || run->length > best->length)) best = std::move(run);
    }
  }
  if (!best) throw PlanError("no meat-fat boundary");

  std::vector<Point2> chain;
  for (const auto& p : best->points) {
    if (chain.empty() || !(chain.back() == p)) chain.push_back(p);
  }
  if (best->closed && chain.size() >= 2 && !(chain.front() == chain.back())) chain.push_back(chain.front());
  if (chain.size() < 2) {
    // Degenerate closed chain (single pixel): fall back to a stub across it.
    const Point2 p = chain.front();
    chain = {p, p + Point2{0.5, 0.0}};
  }
  return Polyline(std::move(chain));
}

CutPlan plan_trim(const SegmentationMasks& masks, double epsilon_px, std::string plan_id) {
  if (!(epsilon_px >= 0.0)) throw PlanError("negative epsilon");
  Polyline chain = trace_meat_fat_boundary(masks);
  return CutPlan(std::move(plan_id), {simplify_polyline(chain, epsilon_px)}, ImageSize{masks.meat.width(), masks.meat.height()});
}

// ---------------------------------------------------------------------------
// Robot paths

double RobotPath::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::sqrt((points[i].x - points[i - 1].x) * (points[i].x - points[i - 1].x) +
                       (points[i].y - points[i - 1].y) * (points[i].y - points[i - 1].y) +
                       (points[i].z - points[i - 1].z) * (points[i].z - points[i - 1].z));
  }
  return total;
}

std::vector<RobotPath> to_robot_path(const CutPlan& plan, const Calibration& cal, double speed) {
  if (plan.status() != PlanStatus::Approved) throw PlanError("unapproved plan");
  if (!(speed > 0.0)) throw PlanError("commanded speed must be positive");
  std::vector<RobotPath> paths;
  for (const auto& line : plan.polylines()) {
    RobotPath path;
    path.commanded_speed = speed;
    for (const auto& p : line.points()) {
      const Point2 q = homography_apply(cal.h, p);
      path.points.push_back({q.x, q.y, cal.cut_height_z});
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json polylines_to_json(const std::vector<Polyline>& polylines) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& line : polylines) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : line.points()) pts.push_back({p.x, p.y});
    out.push_back(std::move(pts));
  }
  return out;
}

std::vector<Polyline> polylines_from_json(const nlohmann::json& j) {
  std::vector<Polyline> out;
  for (const auto& line : j) {
    std::vector<Point2> pts;
    for (const auto& p : line) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    out.emplace_back(std::move(pts));
  }
  return out;
}

nlohmann::json to_json(const CutPlan& plan) {
  return {
      {"plan_id", plan.plan_id()},
      {"status", std::string(to_string(plan.status()))},
      {"revision", plan.revision()},
      {"polylines", polylines_to_json(plan.polylines())},
  };
}

CutPlan plan_from_json(const nlohmann::json& j, ImageSize image_size) {
  CutPlan plan(j.at("plan_id").get<std::string>(), polylines_from_json(j.at("polylines")), image_size);
  plan.status_ = plan_status_from_string(j.at("status").get<std::string>());
  plan.revision_ = j.at("revision").get<int>();
  if (plan.revision_ < 0) throw PlanError("negative revision");
  return plan;
}

}  // namespace cobot
