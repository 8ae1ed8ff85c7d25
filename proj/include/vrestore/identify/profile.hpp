#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrestore/degrade/dataset.hpp"
#include "vrestore/identify/detectors.hpp"

namespace vrestore {

struct DegradationProfile {
  std::array<Severity, kKindCount> severity{};
  KindScores scores{};
  std::array<bool, kKindCount> low_confidence{};

  Severity of(DegradationKind k) const { return severity[index_of(k)]; }
  bool active(DegradationKind k) const { return of(k) != Severity::None; }
  // Active kinds in canonical index order.
  KindList active_kinds() const;

  nlohmann::json to_json() const;
  static DegradationProfile from_json(const nlohmann::json& j);
};

// Three ascending score cut points per kind; a score maps to the number of
// cut points it reaches (0 = None .. 3 = High).
class ThresholdTable {
 public:
  using Cuts = std::array<double, 3>;

  ThresholdTable();  // the shipped defaults
  explicit ThresholdTable(std::array<Cuts, kKindCount> cuts);

  const Cuts& cuts(DegradationKind k) const { return cuts_[index_of(k)]; }
  Severity classify(DegradationKind k, double score) const;
  // Piecewise-linear severity in [0, 3]: 0 at or below the None/Low midpoint
  // below the first cut, integer levels at the cuts.
  double continuous(DegradationKind k, double score) const;

  nlohmann::json to_json() const;
  static ThresholdTable from_json(const nlohmann::json& j);

 private:
  std::array<Cuts, kKindCount> cuts_;
};

// One labeled observation: detector scores plus true severities.
struct CalibrationSample {
  KindScores scores{};
  std::array<Severity, kKindCount> truth{};
};

// Runs the detector bank on every degraded clip of the manifest (nominal
// format taken from its ground-truth clip).
std::vector<CalibrationSample> collect_calibration_samples(const DatasetManifest& manifest);
std::vector<CalibrationSample> collect_calibration_samples(const std::vector<GeneratedClip>& clips,
                                                           const std::vector<Clip>& gt_clips);

// Per kind, the cut points maximizing 4-class accuracy over the samples,
// found exactly by dynamic programming over the sorted scores. Cut points sit
// midway between neighboring distinct scores. Throws CalibrationCoverageError
// when some (kind, Low|Medium|High) pair has no sample.
ThresholdTable calibrate_thresholds(const std::vector<CalibrationSample>& samples);
ThresholdTable calibrate_thresholds(const DatasetManifest& manifest);

// Fraction of samples whose severity for k is classified correctly.
double severity_accuracy(const ThresholdTable& table, const std::vector<CalibrationSample>& samples,
                         DegradationKind k);

}  // namespace vrestore
