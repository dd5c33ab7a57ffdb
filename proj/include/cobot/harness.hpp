#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cobot/scenario.hpp"
#include "cobot/workcell.hpp"

namespace cobot {

struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  bool control = false;          // bone-free knife control
  int tp = 0, fp = 0, fn = 0;
  std::vector<double> truth;     // labeled entries or first in-bone tick
  std::vector<double> detected;  // WARNING onsets or contact detections
  std::optional<double> t_contact;
  std::optional<double> t_detect;
  std::optional<double> t_stop;  // first zero-velocity command
  std::optional<double> latency_s;
  std::optional<double> expected_latency_s;  // closed form (knife)
  std::optional<double> delta_s;             // knife: debounce-run start minus bone entry
};

/// Counts and latency statistics for one experiment. accuracy is the
/// detection rate TP / (TP + FN); precision is TP / (TP + FP), reported as 1
/// with precision_defined = false when nothing was detected.
struct TrialReport {
  std::string experiment;
  int trials = 0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double accuracy = 0.0;
  double precision = 1.0;
  bool precision_defined = false;
  double latency_mean_s = 0.0;
  double latency_std_s = 0.0;
  std::vector<double> latencies;
  std::vector<TrialRecord> records;

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

/// Derives the summary fields from `records`.
void summarize(TrialReport& report);

/// Loads the first `trials` scenarios of a directory (sorted by file name).
/// Throws ScenarioError when fewer exist.
std::vector<Scenario> load_trials(const std::filesystem::path& dir, int trials);

/// Each scenario must carry labeled hand entries (ScenarioError otherwise).
/// A WARNING onset within one safety period after a labeled entry is a hit.
TrialReport run_hand_trials(const std::vector<Scenario>& scenarios);

/// Scenarios with a bone are contact trials; bone-free ones are controls
/// in which any detection is a false positive.
TrialReport run_knife_trials(const std::vector<Scenario>& scenarios);

/// Classifies one finished hand episode against its labels.
TrialRecord score_hand_episode(const Scenario& sc, const EpisodeResult& ep);
TrialRecord score_knife_episode(const Scenario& sc, const EpisodeResult& ep);

struct UncertaintyCase {
  enum class Family { Translation, Rotation };
  Family family = Family::Translation;
  double amount = 0.0;  // cm or degrees
};

struct UncertaintyRow {
  UncertaintyCase c;
  double d_px = 0.0;
  double psi = 0.0;
  bool alert = false;
};

/// Translations of 0, 1.1, 1.5, 2.9, 4.5 cm and rotations of 0, 7, 10, 39,
/// 45 degrees.
std::vector<UncertaintyCase> table_cases();

/// Renders the specimen before and after each exact rigid motion and scores
/// the pair through segmentation, box fitting and psi.
std::vector<UncertaintyRow> run_uncertainty_table(const std::vector<UncertaintyCase>& cases, const Scenario& base);

nlohmann::ordered_json uncertainty_json(const std::vector<UncertaintyRow>& rows);
std::string uncertainty_csv(const std::vector<UncertaintyRow>& rows);

/// True when psi strictly increases with the movement within each family.
bool uncertainty_monotone(const std::vector<UncertaintyRow>& rows);

/// Safety properties of an episode log; returns one message per violation.
///  - no nonzero velocity in a gated state
///  - every EXECUTING entry is covered by an accepted approval of the same
///    plan_id and revision
///  - ESTOPPED_CONTACT is left only through a reset
///  - a WARNING zone change during motion is followed by a zero-velocity
///    command within `liveness_bound_s`
std::vector<std::string> check_log_properties(const std::vector<LogEntry>& log, double liveness_bound_s);

}  // namespace cobot
