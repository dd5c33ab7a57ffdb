#pragma once

#include <json.hpp>

#include <span>
#include <string>

#include "cobot/geometry.hpp"
#include "cobot/image.hpp"

namespace cobot {

struct MeatLocation {
  OrientedBox box;
  double t = 0.0;
};

struct CutAssessment {
  double d = 0.0;     // mean corner displacement, pixels
  double psi = 0.0;   // uncertainty in [0, 1)
  double beta = 0.0;  // per-pixel sensitivity
  double tau = 0.0;   // alert threshold
  bool alert = false; // psi > tau
};

inline constexpr double kDefaultBeta = 0.05;
inline constexpr double kDefaultTau = 0.5;

/// Minimum-area box over the mask's pixel centers.
/// Throws Error("no meat detected") on an empty mask.
MeatLocation locate_meat(const Bitmask& mask, double t = 0.0);

/// Mean Euclidean distance between corresponding canonical corners.
double displacement(const MeatLocation& pre, const MeatLocation& post);

/// tanh(beta * d), evaluated in a form that cannot overflow and clamped to
/// stay strictly below 1.
double psi(double d, double beta);

/// Throws Error("invalid uncertainty parameters") unless beta > 0 and
/// 0 < tau < 1.
CutAssessment evaluate_cut(const MeatLocation& pre, const MeatLocation& post, double beta = kDefaultBeta,
                           double tau = kDefaultTau);

struct BetaPair {
  double d = 0.0;
  double psi = 0.0;
};

/// Least-squares beta for beta * d_i ~= atanh(psi_i).
/// Throws Error("invalid calibration pair") / Error("no calibration data").
double fit_beta(std::span<const BetaPair> pairs);

nlohmann::json assessment_report(const std::string& plan_id, const CutAssessment& a, double pixel_pitch_cm);

}  // namespace cobot
