#include "cobot/knife.hpp"

#include <algorithm>
#include <cmath>

namespace cobot {

ForceThreshold calibrate_threshold(std::span<const ForceTrace> normal_traces, double margin, int debounce) {
  if (!(margin >= 0.0)) throw Error("negative margin");
  if (debounce < 1) throw Error("debounce must be at least 1");
  bool any = false;
  double base = 0.0;
  for (const auto& trace : normal_traces) {
    for (const auto& s : trace) {
      base = any ? std::max(base, s.force) : s.force;
      any = true;
    }
  }
  if (!any) throw Error("no calibration data");
  ForceThreshold th{base, margin, debounce};
  if (th.effective() > kSensorSaturationLbf) throw Error("margin saturates sensor");
  return th;
}

ContactClassifier::ContactClassifier(ForceThreshold threshold) : threshold_(threshold) {
  if (threshold_.debounce < 1) throw Error("debounce must be at least 1");
  if (!std::isfinite(threshold_.effective()) || threshold_.effective() < 0.0) throw Error("invalid threshold");
}

std::optional<ContactEvent> ContactClassifier::push(const ForceSample& sample) {
  if (fired_) return std::nullopt;
  if (sample.force >= threshold_.effective()) {
    run_peak_ = run_ == 0 ? sample.force : std::max(run_peak_, sample.force);
    ++run_;
    if (run_ >= threshold_.debounce) {
      fired_ = true;
      return ContactEvent{sample.t, run_peak_};
    }
  } else {
    run_ = 0;
  }
  return std::nullopt;
}

void ContactClassifier::reset() {
  run_ = 0;
  run_peak_ = 0.0;
  fired_ = false;
}

std::optional<ContactEvent> classify_contact(std::span<const ForceSample> stream, const ForceThreshold& threshold) {
  ContactClassifier classifier(threshold);
  for (const auto& s : stream) {
    if (auto ev = classifier.push(s)) return ev;
  }
  return std::nullopt;
}

}  // namespace cobot
