#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "cobot/error.hpp"

namespace cobot {

// Planar point. The unit (image pixels or robot-plane centimeters) is carried
// by context; a container never mixes the two.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Rotates `p` by `radians` about `center` (x' = x cos - y sin, y' = x sin + y cos).
Point2 rotate_about(Point2 p, Point2 center, double radians);

/// Euclidean distance from `p` to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Ordered waypoints, at least two, no two consecutive points identical.
class Polyline {
 public:
  explicit Polyline(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  double length() const;

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Point2> points_;
};

/// Simple polygon; vertices are stored counter-clockwise (positive shoelace
/// area) regardless of the input orientation.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const;
  Point2 centroid() const;

 private:
  std::vector<Point2> vertices_;
};

/// Shoelace signed area: positive for counter-clockwise in a y-up frame,
/// which is clockwise on screen when y grows downward.
double signed_area(std::span<const Point2> ring);

/// Rectangle given by four corners in canonical order: the corner with the
/// smallest y (ties: smallest x) first, then clockwise in image coordinates.
/// Zero-width and zero-size rectangles are valid.
class OrientedBox {
 public:
  /// Builds a box from its center, unit axis `u` and half extents along `u`
  /// and its perpendicular.
  static OrientedBox from_frame(Point2 center, Point2 u, double half_u, double half_v);

  /// Validates that the corners form a rectangle and relabels canonically.
  static OrientedBox from_corners(const std::array<Point2, 4>& corners);

  const std::array<Point2, 4>& corners() const { return corners_; }
  Point2 center() const;
  double width() const;   // |c1 - c0|
  double height() const;  // |c2 - c1|
  double area() const { return width() * height(); }

 private:
  explicit OrientedBox(const std::array<Point2, 4>& corners) : corners_(corners) {}
  std::array<Point2, 4> corners_;
};

/// Planar projective transform, normalized so that m[2][2] == 1.
class Homography {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  Homography();  // identity
  explicit Homography(const Matrix& m);

  static Homography scale(double sx, double sy);
  static Homography translation(double tx, double ty);

  const Matrix& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_[r][c]; }
  Homography inverse() const;
  double determinant() const;

 private:
  Matrix m_;
};

/// Boundary points count as inside.
bool point_in_polygon(Point2 p, const Polygon& poly);

/// Minimum-area enclosing rectangle. Collinear input yields a zero-width box
/// and a single point a zero-size one. Throws GeometryError("empty point set").
OrientedBox min_area_box(std::span<const Point2> points);

/// Convex hull, counter-clockwise (positive shoelace area), no collinear
/// vertices. Degenerate inputs return one or two points.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Recursive max-deviation splitting. The result is a subsequence of `path`
/// that keeps both endpoints; every dropped point lies within `epsilon` of
/// the output segment that spans it.
Polyline simplify_polyline(const Polyline& path, double epsilon);

/// Same as simplify_polyline but returns the kept indices into `path`.
std::vector<std::size_t> simplify_polyline_indices(std::span<const Point2> path, double epsilon);

/// Normalized DLT fit, least squares when more than four correspondences are
/// given. Throws GeometryError("degenerate correspondences").
Homography homography_fit(std::span<const Point2> src, std::span<const Point2> dst);

/// Throws GeometryError("point at infinity") when |w| < 1e-12.
Point2 homography_apply(const Homography& h, Point2 p);

}  // namespace cobot
