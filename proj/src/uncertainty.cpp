#include "cobot/uncertainty.hpp"

#include <cmath>
#include <vector>

namespace cobot {

MeatLocation locate_meat(const Bitmask& mask, double t) {
  // Only the leftmost and rightmost pixel of each row can be hull vertices.
  std::vector<Point2> candidates;
  for (int y = 0; y < mask.height(); ++y) {
    int first = -1, last = -1;
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      if (first < 0) first = x;
      last = x;
    }
    if (first < 0) continue;
    candidates.push_back(Bitmask::center(first, y));
    if (last != first) candidates.push_back(Bitmask::center(last, y));
  }
  if (candidates.empty()) throw Error("no meat detected");
  return {min_area_box(candidates), t};
}

double displacement(const MeatLocation& pre, const MeatLocation& post) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += distance(pre.box.corners()[i], post.box.corners()[i]);
  return sum / 4.0;
}

double psi(double d, double beta) {
  const double x = beta * d;
  if (std::isnan(x)) return 0.0;
  if (x <= 0.0) return 0.0;
  // tanh(x) = -expm1(-2x) / (2 + expm1(-2x)); both terms stay in [-1, 0].
  const double m = std::expm1(-2.0 * x);
  const double value = -m / (2.0 + m);
  constexpr double kBelowOne = 1.0 - 0x1p-53;
  return value < kBelowOne ? value : kBelowOne;
}

CutAssessment evaluate_cut(const MeatLocation& pre, const MeatLocation& post, double beta, double tau) {
  if (!(beta > 0.0) || !std::isfinite(beta) || !(tau > 0.0 && tau < 1.0)) {
    throw Error("invalid uncertainty parameters");
  }
  CutAssessment a;
  a.d = displacement(pre, post);
  a.psi = psi(a.d, beta);
  a.beta = beta;
  a.tau = tau;
  a.alert = a.psi > tau;
  return a;
}

double fit_beta(std::span<const BetaPair> pairs) {
  if (pairs.empty()) throw Error("no calibration data");
  double num = 0.0, den = 0.0;
  for (const auto& p : pairs) {
    if (!(p.d > 0.0) || !(p.psi > 0.0 && p.psi < 1.0)) throw Error("invalid calibration pair");
    num += p.d * std::atanh(p.psi);
    den += p.d * p.d;
  }
  return num / den;
}

nlohmann::json assessment_report(const std::string& plan_id, const CutAssessment& a, double pixel_pitch_cm) {
  return {
      {"plan_id", plan_id}, {"d_px", a.d}, {"d_cm", a.d * pixel_pitch_cm},
      {"psi", a.psi},       {"tau", a.tau}, {"alert", a.alert},
  };
}

}  // namespace cobot
