#include <doctest.h>

#include <random>
#include <sstream>

#include "cobot/image.hpp"
#include "cobot/scenario.hpp"
#include "cobot/sim.hpp"

using namespace cobot;

TEST_SUITE("image") {

TEST_CASE("ppm round trip") {
  RasterImage img(7, 5);
  std::mt19937 rng(1);
  for (auto& b : img.pixels()) b = static_cast<std::uint8_t>(rng());
  std::stringstream ss;
  write_ppm(ss, img);
  CHECK(ss.str().rfind("P6\n7 5\n255\n", 0) == 0);
  CHECK(read_ppm(ss) == img);
  std::istringstream s2(encode_ppm(img));
  CHECK(read_ppm(s2) == img);
}

TEST_CASE("ppm header with comments") {
  std::string data = "P6\n# made by hand\n2 1\n255\n";
  data += std::string("\x01\x02\x03\x04\x05\x06", 6);
  std::istringstream in(data);
  const auto img = read_ppm(in);
  CHECK(img.at(1, 0) == Rgb{4, 5, 6});
}

TEST_CASE("ppm errors") {
  std::istringstream p3("P3\n1 1\n255\n0 0 0\n");
  CHECK_THROWS_WITH_AS(read_ppm(p3), "not a P6 PPM", Error);
  std::istringstream trunc("P6\n2 2\n255\nabc");
  CHECK_THROWS_WITH_AS(read_ppm(trunc), "truncated PPM", Error);
  std::istringstream maxval("P6\n1 1\n65535\n");
  CHECK_THROWS_AS(read_ppm(maxval), Error);
}

TEST_CASE("segmentation classes") {
  RasterImage img(3, 1);
  const SimColors colors;
  img.set(0, 0, colors.meat);
  img.set(1, 0, colors.fat);
  img.set(2, 0, colors.background);
  const auto m = segment(img, ColorThresholds::defaults());
  CHECK(m.meat.at(0, 0));
  CHECK_FALSE(m.fat.at(0, 0));
  CHECK(m.fat.at(1, 0));
  CHECK_FALSE(m.meat.at(2, 0));
  CHECK_FALSE(m.fat.at(2, 0));
}

TEST_CASE("meat wins when both ranges match") {
  ColorThresholds th;
  RasterImage img(2, 2, Rgb{10, 10, 10});
  const auto m = segment(img, th);
  CHECK(m.meat.count() == 4);
  CHECK(m.fat.count() == 0);
}

TEST_CASE("parallel segmentation equals the serial reference") {
  std::mt19937 rng(2);
  RasterImage img(97, 61);
  for (auto& b : img.pixels()) b = static_cast<std::uint8_t>(rng());
  const auto th = ColorThresholds::defaults();
  const auto a = segment(img, th);
  const auto b = reference::segment(img, th);
  CHECK(a.meat == b.meat);
  CHECK(a.fat == b.fat);
}

TEST_CASE("parallel render equals the serial reference") {
  SimConfig cfg;
  for (double theta : {0.0, 17.0, 95.0}) {
    const auto spec = loin_specimen(std::nullopt, {15.0, 11.0, theta});
    CHECK(render(spec, cfg) == reference::render(spec, cfg));
  }
}

TEST_CASE("render of a rendered specimen segments back to its classes") {
  SimConfig cfg;
  const auto spec = loin_specimen(std::nullopt);
  const auto img = render(spec, cfg);
  const auto m = segment(img, ColorThresholds::defaults());
  const double px_area = cfg.pixel_pitch * cfg.pixel_pitch;
  CHECK(m.meat.count() * px_area == doctest::Approx(spec.meat.area()).epsilon(0.02));
  CHECK(m.fat.count() > 0);
}

TEST_CASE("specimen out of frame") {
  SimConfig cfg;
  const auto spec = loin_specimen(std::nullopt, {1.0, 1.0, 0.0});
  CHECK_THROWS_WITH_AS(render(spec, cfg), "specimen out of frame", Error);
}

TEST_CASE("threshold validation") {
  auto th = ColorThresholds::defaults();
  th.meat.channels[1] = {200, 100};
  CHECK_THROWS_WITH_AS(th.validate(), "threshold min exceeds max", Error);
}

}
