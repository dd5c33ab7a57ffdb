#include "cobot/perception.hpp"

#include <string>

namespace cobot {

std::string_view to_string(ZoneState z) {
  switch (z) {
    case ZoneState::Clear: return "CLEAR";
    case ZoneState::Safe: return "SAFE";
    case ZoneState::Warning: return "WARNING";
  }
  return "CLEAR";
}

ZoneState zone_from_string(std::string_view s) {
  if (s == "CLEAR") return ZoneState::Clear;
  if (s == "SAFE") return ZoneState::Safe;
  if (s == "WARNING") return ZoneState::Warning;
  throw Error("unknown zone state: " + std::string(s));
}

ZoneConfig::ZoneConfig(Polygon warning, Polygon safe, ImageSize image_size)
    : warning_(std::move(warning)), safe_(std::move(safe)), image_size_(image_size) {
  if (image_size_.width <= 0 || image_size_.height <= 0) throw Error("invalid image size");
  for (const Polygon* poly : {&warning_, &safe_}) {
    for (const auto& v : poly->vertices()) {
      if (!image_size_.contains(v)) throw Error("zone outside image bounds");
    }
  }
}

ZoneState classify_zone(const HandFrame& frame, const ZoneConfig& zones) {
  ZoneState result = ZoneState::Clear;
  for (const auto& p : frame.landmarks) {
    if (!is_finite(p) || !zones.image_size().contains(p)) continue;
    if (point_in_polygon(p, zones.warning())) return ZoneState::Warning;
    if (point_in_polygon(p, zones.safe())) result = ZoneState::Safe;
  }
  return result;
}

TracePlayback::TracePlayback(std::vector<HandFrame> trace) : trace_(std::move(trace)) {
  for (std::size_t i = 0; i < trace_.size(); ++i) {
    if (trace_[i].landmarks.size() > kMaxHandLandmarks) throw Error("too many landmarks");
    if (i > 0 && !(trace_[i].t > trace_[i - 1].t)) throw Error("unordered trace");
  }
}

std::vector<HandFrame> TracePlayback::poll(double clock) {
  // Clock and frame times come from different integer grids; a nanosecond of
  // slack absorbs the rounding of k/60 against j/3000.
  std::vector<HandFrame> out;
  while (next_ < trace_.size() && trace_[next_].t <= clock + 1e-9) out.push_back(trace_[next_++]);
  return out;
}

}  // namespace cobot
