#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cobot/geometry.hpp"

namespace cobot {

inline constexpr std::size_t kMaxHandLandmarks = 21;

struct ImageSize {
  int width = 0;
  int height = 0;

  bool contains(Point2 p) const { return p.x >= 0 && p.y >= 0 && p.x <= width && p.y <= height; }
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct HandFrame {
  double t = 0.0;
  std::vector<Point2> landmarks;  // 0..21 image pixels
  int source_id = 0;
};

// Ordered by severity.
enum class ZoneState { Clear = 0, Safe = 1, Warning = 2 };

std::string_view to_string(ZoneState z);
ZoneState zone_from_string(std::string_view s);

/// Safe and warning polygons in hand-camera pixels.
class ZoneConfig {
 public:
  ZoneConfig(Polygon warning, Polygon safe, ImageSize image_size);

  const Polygon& warning() const { return warning_; }
  const Polygon& safe() const { return safe_; }
  ImageSize image_size() const { return image_size_; }

 private:
  Polygon warning_;
  Polygon safe_;
  ImageSize image_size_;
};

/// WARNING if any in-frame landmark lies in the warning polygon, else SAFE if
/// any lies in the safe polygon, else CLEAR. Out-of-frame landmarks are
/// ignored; an empty frame is CLEAR.
ZoneState classify_zone(const HandFrame& frame, const ZoneConfig& zones);

/// Replays a recorded landmark trace against the simulation clock, standing
/// in for the live hand detector. Single consumer.
class TracePlayback {
 public:
  /// Throws Error("unordered trace") unless timestamps strictly increase.
  explicit TracePlayback(std::vector<HandFrame> trace);

  /// Frames whose timestamp is <= `clock` that have not been emitted yet.
  std::vector<HandFrame> poll(double clock);

  bool exhausted() const { return next_ == trace_.size(); }
  std::size_t size() const { return trace_.size(); }

 private:
  std::vector<HandFrame> trace_;
  std::size_t next_ = 0;
};

}  // namespace cobot
