#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cobot/error.hpp"

namespace cobot {

/// Upper end of the knife-mount force sensor range, in pounds-force.
inline constexpr double kSensorSaturationLbf = 25.0;

struct ForceSample {
  double t = 0.0;
  double force = 0.0;  // lbf
};

using ForceTrace = std::vector<ForceSample>;

struct ForceThreshold {
  double base = 0.0;    // max force seen while cutting meat
  double margin = 0.0;  // fraction over base
  int debounce = 1;     // consecutive samples at or above the threshold

  double effective() const { return base * (1.0 + margin); }
};

struct ContactEvent {
  double t_detect = 0.0;  // timestamp of the sample completing the debounce run
  double peak = 0.0;      // max force within that run
};

/// base = max force over all calibration samples. Throws
/// Error("no calibration data") or Error("margin saturates sensor").
ForceThreshold calibrate_threshold(std::span<const ForceTrace> normal_traces, double margin, int debounce);

/// Stream classifier for the knife force channel. Reports at most one
/// contact per stream: once fired it ignores further samples.
class ContactClassifier {
 public:
  explicit ContactClassifier(ForceThreshold threshold);

  std::optional<ContactEvent> push(const ForceSample& sample);

  bool fired() const { return fired_; }
  const ForceThreshold& threshold() const { return threshold_; }
  void reset();

 private:
  ForceThreshold threshold_;
  int run_ = 0;
  double run_peak_ = 0.0;
  bool fired_ = false;
};

/// Runs a ContactClassifier over a complete trace.
std::optional<ContactEvent> classify_contact(std::span<const ForceSample> stream, const ForceThreshold& threshold);

}  // namespace cobot
