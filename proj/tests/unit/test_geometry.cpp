#include <doctest.h>

#include <random>

#include "cobot/geometry.hpp"
#include "../support/oracles.hpp"

using namespace cobot;

TEST_SUITE("geometry") {

TEST_CASE("polygon is stored counter-clockwise") {
  Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.area() == doctest::Approx(1.0));
  CHECK(signed_area(cw.vertices()) > 0.0);
  CHECK(cw.centroid().x == doctest::Approx(0.5));
  CHECK(cw.centroid().y == doctest::Approx(0.5));
}

TEST_CASE("polyline rejects degenerate input") {
  CHECK_THROWS_AS(Polyline({{1, 1}}), GeometryError);
  CHECK_THROWS_AS(Polyline({{1, 1}, {1, 1}}), GeometryError);
  CHECK(Polyline({{0, 0}, {3, 4}}).length() == doctest::Approx(5.0));
}

TEST_CASE("point in polygon counts the boundary") {
  Polygon sq({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  CHECK(point_in_polygon({1, 1}, sq));
  CHECK(point_in_polygon({0, 1}, sq));
  CHECK(point_in_polygon({2, 2}, sq));
  CHECK_FALSE(point_in_polygon({2.001, 1}, sq));
}

TEST_CASE("min area box of an axis rectangle") {
  std::vector<Point2> pts{{1, 1}, {5, 1}, {5, 3}, {1, 3}, {3, 2}};
  const auto box = min_area_box(pts);
  CHECK(box.area() == doctest::Approx(8.0));
  CHECK(box.corners()[0] == Point2{1, 1});
  CHECK(box.corners()[1] == Point2{5, 1});
  CHECK(box.corners()[2] == Point2{5, 3});
  CHECK(box.corners()[3] == Point2{1, 3});
}

TEST_CASE("min area box degenerate inputs") {
  CHECK_THROWS_WITH_AS(min_area_box(std::vector<Point2>{}), "empty point set", GeometryError);
  const auto single = min_area_box(std::vector<Point2>{{2, 3}});
  CHECK(single.area() == 0.0);
  CHECK(single.center() == Point2{2, 3});
  const auto line = min_area_box(std::vector<Point2>{{0, 0}, {1, 1}, {3, 3}});
  CHECK(line.area() == doctest::Approx(0.0));
  CHECK(std::max(line.width(), line.height()) == doctest::Approx(std::sqrt(18.0)));
}

TEST_CASE("min area box matches both brute-force oracles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<Point2> pts(4 + trial);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const double area = min_area_box(pts).area();
    CHECK(area == doctest::Approx(oracle::edge_min_area(pts)).epsilon(1e-9));
    CHECK(area <= oracle::brute_min_area(pts) + 1e-9);
    CHECK(area >= oracle::brute_min_area(pts) * (1.0 - 1e-4));
  }
}

TEST_CASE("box contains every input point") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 10);
  std::vector<Point2> pts(40);
  for (auto& p : pts) p = {n(rng), 0.3 * n(rng)};
  const auto box = min_area_box(pts);
  const auto& c = box.corners();
  Polygon poly({c[0], c[1], c[2], c[3]});
  for (const auto& p : pts) {
    // allow rounding on the supporting edges
    const Point2 inward = p + 1e-9 * (box.center() - p);
    CHECK(point_in_polygon(inward, poly));
  }
}

TEST_CASE("oriented box corners are canonical") {
  const auto box = OrientedBox::from_frame({10, 10}, {std::cos(0.3), std::sin(0.3)}, 4, 2);
  const auto& c = box.corners();
  for (int i = 1; i < 4; ++i) CHECK(c[0].y <= c[i].y + 1e-12);
  CHECK(box.area() == doctest::Approx(32.0));
  CHECK_THROWS_AS(OrientedBox::from_corners({Point2{0, 0}, {2, 0}, {2, 1}, {0, 3}}), GeometryError);
  const auto relabeled = OrientedBox::from_corners({c[2], c[3], c[0], c[1]});
  CHECK(relabeled.corners() == c);
}

TEST_CASE("convex hull") {
  std::vector<Point2> pts{{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}};
  const auto hull = convex_hull(pts);
  CHECK(hull.size() == 4);
  CHECK(signed_area(hull) == doctest::Approx(4.0));
}

TEST_CASE("simplification keeps endpoints and stays within epsilon") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({static_cast<double>(i), 5 * std::sin(i / 15.0) + n(rng)});
    const Polyline path(pts);
    for (double eps : {0.0, 0.5, 2.0, 10.0}) {
      const auto out = simplify_polyline(path, eps);
      CHECK(out.points().front() == pts.front());
      CHECK(out.points().back() == pts.back());
      CHECK(oracle::max_deviation(pts, out.points()) <= eps + 1e-12);
    }
  }
}

TEST_CASE("simplification drops collinear points") {
  const Polyline line({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(simplify_polyline(line, 0.0).size() == 2);
  const Polyline corner({{0, 0}, {5, 0}, {5, 5}});
  CHECK(simplify_polyline(corner, 1.0).size() == 3);
  CHECK(simplify_polyline(corner, 10.0).size() == 2);
}

TEST_CASE("homography fit round trip") {
  const Homography::Matrix m{{{1.2, 0.1, 30.0}, {-0.05, 0.9, -12.0}, {1e-4, 2e-4, 1.0}}};
  const Homography truth(m);
  std::vector<Point2> src{{0, 0}, {640, 0}, {640, 480}, {0, 480}, {320, 240}, {100, 400}};
  std::vector<Point2> dst;
  for (const auto& p : src) dst.push_back(homography_apply(truth, p));
  const auto h = homography_fit(src, dst);
  const auto inv = h.inverse();
  for (const auto& p : src) {
    const Point2 q = homography_apply(h, p);
    const Point2 back = homography_apply(inv, q);
    CHECK(distance(q, homography_apply(truth, p)) < 1e-6);
    CHECK(distance(back, p) < 1e-6);
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(h(r, c) == doctest::Approx(m[r][c]).epsilon(1e-7));
  }
}

TEST_CASE("homography degenerate correspondences") {
  std::vector<Point2> src{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_WITH_AS(homography_fit(src, src), "degenerate correspondences", GeometryError);
  std::vector<Point2> few{{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(homography_fit(few, few), GeometryError);
}

TEST_CASE("homography scale and translation") {
  const auto s = Homography::scale(0.05, 0.05);
  const Point2 p = homography_apply(s, {100, 200});
  CHECK(p.x == doctest::Approx(5.0));
  CHECK(p.y == doctest::Approx(10.0));
  const auto t = Homography::translation(3, -4);
  CHECK(homography_apply(t, {1, 1}) == Point2{4, -3});
}

}
