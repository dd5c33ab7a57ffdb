#include "cobot/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

namespace cobot {

namespace {

constexpr double kBoundaryTolerance = 1e-9;

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    const double v = cross(q - p, r - p);
    return (v > 0) - (v < 0);
  };
  auto on_segment = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

Point2 unit(Point2 p) {
  const double n = norm(p);
  return {p.x / n, p.y / n};
}

std::array<Point2, 4> canonical_order(std::array<Point2, 4> c) {
  double scale = 1.0;
  double ymin = c[0].y;
  for (const auto& p : c) {
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    ymin = std::min(ymin, p.y);
  }
  const double tol = 1e-9 * scale;
  std::size_t start = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    if (c[i].y <= ymin + tol && (start == 4 || c[i].x < c[start].x)) start = i;
  }
  std::rotate(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(start), c.end());
  return c;
}

}  // namespace

Point2 rotate_about(Point2 p, Point2 center, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  const Point2 r = p - center;
  return {center.x + c * r.x - s * r.y, center.y + s * r.x + c * r.y};
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = dot(p - a, d) / len2;
  if (t <= 0.0) return distance(p, a);
  if (t >= 1.0) return distance(p, b);
  return std::abs(cross(d, p - a)) / std::sqrt(len2);
}

// ---------------------------------------------------------------------------
// Polyline / Polygon

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw GeometryError("polyline needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i])) throw GeometryError("non-finite coordinate");
    if (i > 0 && points_[i] == points_[i - 1]) throw GeometryError("consecutive duplicate waypoints");
  }
}

double Polyline::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) total += distance(points_[i - 1], points_[i]);
  return total;
}

double signed_area(std::span<const Point2> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw GeometryError("polygon needs at least three vertices");
  for (const auto& v : vertices_) {
    if (!is_finite(v)) throw GeometryError("non-finite coordinate");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n])) {
        throw GeometryError("polygon is not simple");
      }
    }
  }
  const double a = signed_area(vertices_);
  if (a == 0.0) throw GeometryError("polygon has zero area");
  if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());
}

double Polygon::area() const { return signed_area(vertices_); }

Point2 Polygon::centroid() const {
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % vertices_.size()];
    const double w = a.x * b.y - b.x * a.y;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  const double six_a = 6.0 * area();
  return {cx / six_a, cy / six_a};
}

bool point_in_polygon(Point2 p, const Polygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = v[i];
    const Point2& b = v[j];
    if (point_segment_distance(p, a, b) <= kBoundaryTolerance) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

// ---------------------------------------------------------------------------
// OrientedBox

OrientedBox OrientedBox::from_frame(Point2 center, Point2 u, double half_u, double half_v) {
  u = unit(u);
  const Point2 v{-u.y, u.x};
  std::array<Point2, 4> c{
      center - half_u * u - half_v * v,
      center + half_u * u - half_v * v,
      center + half_u * u + half_v * v,
      center - half_u * u + half_v * v,
  };
  return OrientedBox(canonical_order(c));
}

OrientedBox OrientedBox::from_corners(const std::array<Point2, 4>& corners) {
  for (const auto& p : corners) {
    if (!is_finite(p)) throw GeometryError("non-finite coordinate");
  }
  const Point2 e0 = corners[1] - corners[0];
  const Point2 e1 = corners[2] - corners[1];
  const Point2 e2 = corners[3] - corners[2];
  const Point2 e3 = corners[0] - corners[3];
  const double scale = std::max({norm(e0), norm(e1), 1e-300});
  auto close = [&](double a, double b) { return std::abs(a - b) <= 1e-6 * scale; };
  if (!close(norm(e0), norm(e2)) || !close(norm(e1), norm(e3))) {
    throw GeometryError("corners do not form a rectangle");
  }
  if (std::abs(dot(e0, e1)) > 1e-6 * norm(e0) * norm(e1) || std::abs(dot(e1, e2)) > 1e-6 * norm(e1) * norm(e2)) {
    throw GeometryError("corners do not form a rectangle");
  }
  std::array<Point2, 4> c = corners;
  if (signed_area(c) < 0.0) std::reverse(c.begin(), c.end());
  return OrientedBox(canonical_order(c));
}

Point2 OrientedBox::center() const {
  return 0.25 * (corners_[0] + corners_[1] + corners_[2] + corners_[3]);
}

double OrientedBox::width() const { return distance(corners_[0], corners_[1]); }
double OrientedBox::height() const { return distance(corners_[1], corners_[2]); }

// ---------------------------------------------------------------------------
// Hull and minimum-area box

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

OrientedBox min_area_box(std::span<const Point2> points) {
  if (points.empty()) throw GeometryError("empty point set");
  for (const auto& p : points) {
    if (!is_finite(p)) throw GeometryError("non-finite coordinate");
  }
  const std::vector<Point2> hull = convex_hull(points);
  if (hull.size() == 1) return OrientedBox::from_frame(hull[0], {1.0, 0.0}, 0.0, 0.0);
  if (hull.size() == 2) {
    const Point2 d = hull[1] - hull[0];
    return OrientedBox::from_frame(0.5 * (hull[0] + hull[1]), d, 0.5 * norm(d), 0.0);
  }

  double best_area = std::numeric_limits<double>::infinity();
  Point2 best_u{1.0, 0.0};
  Point2 best_center{};
  double best_hu = 0.0, best_hv = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 u = unit(hull[(i + 1) % hull.size()] - hull[i]);
    const Point2 v{-u.y, u.x};
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const auto& p : hull) {
      const double pu = dot(p, u);
      const double pv = dot(p, v);
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    const double area = (umax - umin) * (vmax - vmin);
    if (area < best_area * (1.0 - 1e-12)) {
      best_area = area;
      best_u = u;
      best_center = 0.5 * (umin + umax) * u + 0.5 * (vmin + vmax) * v;
      best_hu = 0.5 * (umax - umin);
      best_hv = 0.5 * (vmax - vmin);
    }
  }
  return OrientedBox::from_frame(best_center, best_u, best_hu, best_hv);
}

// ---------------------------------------------------------------------------
// Polyline simplification

std::vector<std::size_t> simplify_polyline_indices(std::span<const Point2> path, double epsilon) {
  if (!(epsilon >= 0.0)) throw GeometryError("negative epsilon");
  const std::size_t n = path.size();
  if (n <= 2) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<char> keep(n, 0);
  keep[0] = keep[n - 1] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [first, last] = stack.back();
    stack.pop_back();
    if (last <= first + 1) continue;
    double dmax = -1.0;
    std::size_t split = first + 1;
    for (std::size_t k = first + 1; k < last; ++k) {
      const double d = point_segment_distance(path[k], path[first], path[last]);
      if (d > dmax) {
        dmax = d;
        split = k;
      }
    }
    // A closed span (identical endpoints) always keeps its farthest point so
    // the output never collapses to a repeated waypoint.
    if (dmax > epsilon || path[first] == path[last]) {
      keep[split] = 1;
      stack.emplace_back(split, last);
      stack.emplace_back(first, split);
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

Polyline simplify_polyline(const Polyline& path, double epsilon) {
  std::vector<Point2> out;
  for (std::size_t i : simplify_polyline_indices(path.points(), epsilon)) out.push_back(path[i]);
  return Polyline(std::move(out));
}

// ---------------------------------------------------------------------------
// Homography

Homography::Homography() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

Homography::Homography(const Matrix& m) : m_(m) {
  for (const auto& row : m_) {
    for (double v : row) {
      if (!std::isfinite(v)) throw GeometryError("non-finite homography");
    }
  }
  const double s = m_[2][2];
  if (std::abs(s) < 1e-12) throw GeometryError("degenerate homography");
  for (auto& row : m_) {
    for (double& v : row) v /= s;
  }
  if (std::abs(determinant()) <= 1e-12) throw GeometryError("singular homography");
}

Homography Homography::scale(double sx, double sy) { return Homography({{{sx, 0, 0}, {0, sy, 0}, {0, 0, 1}}}); }

Homography Homography::translation(double tx, double ty) {
  return Homography({{{1, 0, tx}, {0, 1, ty}, {0, 0, 1}}});
}

double Homography::determinant() const {
  const auto& m = m_;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Homography Homography::inverse() const {
  const auto& m = m_;
  const double det = determinant();
  Matrix inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return Homography(inv);
}

Point2 homography_apply(const Homography& h, Point2 p) {
  const auto& m = h.matrix();
  const double w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
  if (std::abs(w) < 1e-12) throw GeometryError("point at infinity");
  return {(m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w, (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w};
}

namespace {

// Hartley normalization: centroid to the origin, mean distance sqrt(2).
Eigen::Matrix3d normalizing_transform(std::span<const Point2> pts) {
  Point2 c{};
  for (const auto& p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  double mean = 0.0;
  for (const auto& p : pts) mean += distance(p, c);
  mean /= static_cast<double>(pts.size());
  if (mean <= 0.0) throw GeometryError("degenerate correspondences");
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * c.x, 0, s, -s * c.y, 0, 0, 1;
  return t;
}

bool has_collinear_triple(std::span<const Point2> p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        if (std::abs(cross(p[j] - p[i], p[k] - p[i])) <= 1e-9) return true;
      }
    }
  }
  return false;
}

std::vector<Point2> transformed(const Eigen::Matrix3d& t, std::span<const Point2> pts) {
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({t(0, 0) * p.x + t(0, 2), t(1, 1) * p.y + t(1, 2)});
  return out;
}

}  // namespace

Homography homography_fit(std::span<const Point2> src, std::span<const Point2> dst) {
  const std::size_t n = src.size();
  if (n < 4 || dst.size() != n) throw GeometryError("degenerate correspondences");
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(src[i]) || !is_finite(dst[i])) throw GeometryError("non-finite coordinate");
  }
  const Eigen::Matrix3d ts = normalizing_transform(src);
  const Eigen::Matrix3d td = normalizing_transform(dst);
  const auto s = transformed(ts, src);
  const auto d = transformed(td, dst);
  if (n == 4 && (has_collinear_triple(s) || has_collinear_triple(d))) {
    throw GeometryError("degenerate correspondences");
  }

  Eigen::MatrixXd a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s[i].x, y = s[i].y, u = d[i].x, v = d[i].y;
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(7) <= 1e-10 * sv(0)) throw GeometryError("degenerate correspondences");
  const Eigen::VectorXd h = svd.matrixV().col(8);

  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d full = td.inverse() * hn * ts;
  if (std::abs(full(2, 2)) < 1e-12) throw GeometryError("degenerate correspondences");

  Homography::Matrix m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = full(r, c) / full(2, 2);
  }
  try {
    return Homography(m);
  } catch (const GeometryError&) {
    throw GeometryError("degenerate correspondences");
  }
}

}  // namespace cobot
