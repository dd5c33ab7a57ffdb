#pragma once

#include <random>

#include "cobot/image.hpp"

namespace oracle {

// Filled random ellipse, optionally with ragged rows.
inline cobot::Bitmask random_blob(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cobot::Bitmask m(w, h);
  const double cx = w * (0.3 + 0.4 * u(rng)), cy = h * (0.3 + 0.4 * u(rng));
  const double ax = 3 + u(rng) * w * 0.25, ay = 3 + u(rng) * h * 0.25;
  for (int y = 0; y < h; ++y) {
    const double jitter = u(rng) < 0.5 ? 0.0 : u(rng) * 2.0;
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - cx) / (ax + jitter), dy = (y + 0.5 - cy) / ay;
      if (dx * dx + dy * dy <= 1.0) m.set(x, y);
    }
  }
  return m;
}

// Meat over fat, split by a random-walk boundary.
inline cobot::SegmentationMasks random_meat_fat(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> step(-2, 2);
  std::uniform_int_distribution<int> margin(2, 10);
  cobot::SegmentationMasks out{cobot::Bitmask(w, h), cobot::Bitmask(w, h)};
  const int x0 = margin(rng), x1 = w - margin(rng);
  const int top = margin(rng), bottom = h - margin(rng);
  int split = h / 2;
  for (int x = x0; x < x1; ++x) {
    split = std::clamp(split + step(rng), top + 2, bottom - 2);
    for (int y = top; y < bottom; ++y) (y < split ? out.meat : out.fat).set(x, y);
  }
  return out;
}

}  // namespace oracle
