#include <doctest.h>

#include <cmath>
#include <random>

#include "cobot/uncertainty.hpp"
#include "../support/psi_oracle.hpp"

using namespace cobot;

namespace {

MeatLocation loc(Point2 c, double angle, double hu, double hv) {
  return {OrientedBox::from_frame(c, {std::cos(angle), std::sin(angle)}, hu, hv), 0.0};
}

}  // namespace

TEST_SUITE("uncertainty") {

TEST_CASE("psi agrees with a 50-digit evaluation") {
  for (double beta : {0.01, 0.05, 0.3, 1.0, 2.0}) {
    for (double d : {0.0, 1e-9, 0.5, 3.0, 17.0, 50.0, 100.0}) {
      const double want = oracle::psi_exact(d, beta);
      const double got = psi(d, beta);
      if (want == 0.0) {
        CHECK(got == 0.0);
      } else {
        CHECK(std::abs(got - want) / want <= 1e-12);
      }
    }
  }
}

TEST_CASE("psi saturates below one without overflow") {
  for (double x : {20.0, 200.0, 700.0, 1e6}) {
    const double p = psi(x, 1.0);
    CHECK(std::isfinite(p));
    CHECK(p < 1.0);
    CHECK(std::abs(p - oracle::psi_exact(x, 1.0)) <= 1e-12);
  }
  CHECK(psi(std::numeric_limits<double>::infinity(), 1.0) < 1.0);
}

TEST_CASE("psi is monotone in d") {
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double p = psi(i * 0.05, 0.05);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("translation displacement") {
  const auto a = loc({50, 50}, 0.4, 20, 8);
  const auto b = loc({53, 54}, 0.4, 20, 8);
  CHECK(displacement(a, b) == 5.0);
  CHECK(displacement(a, a) == 0.0);
}

TEST_CASE("rotation displacement is the chord of the corner radius") {
  const Point2 c{100, 80};
  const double hu = 30, hv = 12, r = std::hypot(hu, hv);
  for (double deg : {7.0, 10.0, 39.0, 45.0}) {
    const double th = deg * M_PI / 180.0;
    const auto a = loc(c, 0.0, hu, hv);
    const auto b = loc(c, th, hu, hv);
    CHECK(std::abs(displacement(a, b) - 2 * r * std::sin(th / 2)) <= 1e-9);
  }
}

TEST_CASE("evaluate_cut thresholds") {
  const auto a = loc({50, 50}, 0.0, 20, 8);
  const auto b = loc({60, 50}, 0.0, 20, 8);
  const auto res = evaluate_cut(a, b, 0.05, 0.5);
  CHECK(res.d == 10.0);
  CHECK(res.psi == doctest::Approx(std::tanh(0.5)));
  CHECK_FALSE(res.alert);
  CHECK(evaluate_cut(a, b, 0.1, 0.4).alert);
  CHECK_THROWS_WITH_AS(evaluate_cut(a, b, 0.0, 0.5), "invalid uncertainty parameters", Error);
  CHECK_THROWS_AS(evaluate_cut(a, b, 0.1, 1.0), Error);
}

TEST_CASE("locate_meat on a rectangle of pixels") {
  Bitmask m(40, 30);
  for (int y = 5; y < 15; ++y) {
    for (int x = 10; x < 30; ++x) m.set(x, y);
  }
  const auto l = locate_meat(m);
  CHECK(l.box.area() == doctest::Approx(19.0 * 9.0));
  CHECK(l.box.center().x == doctest::Approx(20.0));
  CHECK(l.box.center().y == doctest::Approx(10.0));
  CHECK_THROWS_WITH_AS(locate_meat(Bitmask(4, 4)), "no meat detected", Error);
}

TEST_CASE("fit_beta recovers the generating beta") {
  std::vector<BetaPair> pairs;
  for (double d : {2.0, 5.0, 11.0, 20.0}) pairs.push_back({d, std::tanh(0.07 * d)});
  CHECK(fit_beta(pairs) == doctest::Approx(0.07).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(fit_beta(std::vector<BetaPair>{}), "no calibration data", Error);
  CHECK_THROWS_WITH_AS(fit_beta(std::vector<BetaPair>{{1.0, 1.0}}), "invalid calibration pair", Error);
}

TEST_CASE("assessment report") {
  CutAssessment a{20.0, 0.76, 0.05, 0.5, true};
  const auto j = assessment_report("plan-3", a, 0.05);
  CHECK(j.at("plan_id") == "plan-3");
  CHECK(j.at("alert") == true);
  CHECK(j.at("d_px").get<double>() == 20.0);
}

}
