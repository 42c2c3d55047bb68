#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pedrisk/lstm.hpp"
#include "pedrisk/svm.hpp"
#include "pedrisk/types.hpp"

namespace pedrisk {

// One risk label per predicted future frame for a pedestrian, starting at
// prefix length start_t.
struct RiskSequence {
  std::string traj_id;
  int start_t = 0;
  std::vector<RiskLabel> labels;
};

// Rows are the predicted (output) class, columns the actual (target) class.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumRiskLabels>, kNumRiskLabels> counts{};

  std::int64_t total() const;
  double accuracy() const;  // trace / total
  std::int64_t row_sum(int predicted) const;
  std::int64_t col_sum(int actual) const;
  // 1 - recall of the class: the rate at which its actual states were
  // predicted as something else.
  double class_error(RiskLabel actual) const;
};

// Classifies the feature states of the given future positions spliced onto
// the observed prefix; velocities and TTC are recomputed on the extended
// track, so the first future frame differences against the last observed
// point.
RiskSequence classify_future(const SvmModel& clf, const PedestrianTrack& prefix,
                             const std::vector<EgoFramePoint>& future,
                             double t_max);

// LSTM rollout for t_pred frames, then classify_future on the predictions.
// The prefix must span at least 4 frames.
RiskSequence predict_risk_sequence(const LstmModel& lstm, const SvmModel& clf,
                                   const PedestrianTrack& prefix, int t_pred,
                                   double t_max = 10.0);

// Ground truth for the same window: the classifier applied to the features
// of the true future positions.
RiskSequence actual_risk_sequence(const SvmModel& clf, const PedestrianTrack& track,
                                  int t, int t_pred, double t_max = 10.0);

// Aligned sequence pairs accumulated into the 4x4 matrix. Throws DataError
// on misaligned inputs.
ConfusionMatrix confusion(const std::vector<RiskSequence>& predicted,
                          const std::vector<RiskSequence>& actual);

struct RiskTimelineRow {
  std::string traj_id;
  int t = 0;     // prefix length of the window
  int step = 0;  // 1-based offset into the prediction window
  RiskLabel predicted = RiskLabel::IndependentlySafe;
  RiskLabel actual = RiskLabel::IndependentlySafe;
};

struct EvaluationReport {
  ConfusionMatrix matrix;
  double overall_accuracy = 0.0;
  double dangerous_error = 0.0;  // misclassification rate of actual Dangerous
  std::vector<std::pair<int, double>> ade_by_horizon;  // horizon -> mean ADE
  std::vector<RiskTimelineRow> timeline;
  std::size_t windows = 0;
};

struct EvaluateOptions {
  int t_pred = 5;
  int min_prefix = 4;
  double t_max = 10.0;
};

// Runs the full chain over every valid (pedestrian, t) window: windows per
// track of length T are T - min_prefix - t_pred + 1. Evaluation windows
// overlap; per-state counts are reported.
EvaluationReport end_to_end_evaluate(const std::vector<PedestrianTrack>& tracks,
                                     const LstmModel& lstm, const SvmModel& clf,
                                     const EvaluateOptions& options);

// Writes confusion.csv, ade_sweep.csv, risk_timeline.csv and summary.txt
// into the directory.
void write_report(const std::filesystem::path& dir, const EvaluationReport& report);

}  // namespace pedrisk
