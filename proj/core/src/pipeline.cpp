#include "pedrisk/pipeline.hpp"

#include <fstream>
#include <system_error>

#include "pedrisk/csv_io.hpp"
#include "pedrisk/error.hpp"
#include "pedrisk/features.hpp"

namespace pedrisk {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t n = 0;
  for (const auto& row : counts) {
    for (auto v : row) n += v;
  }
  return n;
}

double ConfusionMatrix::accuracy() const {
  std::int64_t n = total();
  if (n == 0) return 0.0;
  std::int64_t diag = 0;
  for (int i = 0; i < kNumRiskLabels; ++i) {
    diag += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  }
  return static_cast<double>(diag) / static_cast<double>(n);
}

std::int64_t ConfusionMatrix::row_sum(int predicted) const {
  std::int64_t n = 0;
  for (auto v : counts[static_cast<std::size_t>(predicted)]) n += v;
  return n;
}

std::int64_t ConfusionMatrix::col_sum(int actual) const {
  std::int64_t n = 0;
  for (const auto& row : counts) n += row[static_cast<std::size_t>(actual)];
  return n;
}

double ConfusionMatrix::class_error(RiskLabel actual) const {
  const int a = static_cast<int>(actual);
  std::int64_t col = col_sum(a);
  if (col == 0) return 0.0;
  std::int64_t hit = counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)];
  return 1.0 - static_cast<double>(hit) / static_cast<double>(col);
}

RiskSequence classify_future(const SvmModel& clf, const PedestrianTrack& prefix,
                             const std::vector<EgoFramePoint>& future,
                             double t_max) {
  if (prefix.points.empty() || future.empty()) {
    throw DataError("classify_future: empty prefix or future");
  }
  PedestrianTrack spliced = prefix;
  spliced.points.insert(spliced.points.end(), future.begin(), future.end());
  auto states = build_feature_states(spliced, t_max);

  RiskSequence seq;
  seq.traj_id = prefix.id;
  seq.start_t = static_cast<int>(prefix.points.size());
  seq.labels.reserve(future.size());
  for (std::size_t k = prefix.points.size(); k < states.size(); ++k) {
    seq.labels.push_back(svm_predict(clf, states[k]));
  }
  return seq;
}

RiskSequence predict_risk_sequence(const LstmModel& lstm, const SvmModel& clf,
                                   const PedestrianTrack& prefix, int t_pred,
                                   double t_max) {
  if (prefix.points.size() < 4) {
    throw DataError("predict_risk_sequence: prefix must span at least 4 frames");
  }
  auto predicted = sequence_forward(lstm, prefix.points, t_pred);
  return classify_future(clf, prefix, predicted, t_max);
}

RiskSequence actual_risk_sequence(const SvmModel& clf, const PedestrianTrack& track,
                                  int t, int t_pred, double t_max) {
  if (t < 1 || t_pred < 1 ||
      static_cast<std::size_t>(t + t_pred) > track.points.size()) {
    throw DataError("actual_risk_sequence: window [" + std::to_string(t) + ", " +
                    std::to_string(t + t_pred) + ") exceeds track '" + track.id +
                    "'");
  }
  PedestrianTrack prefix;
  prefix.id = track.id;
  prefix.frame_rate = track.frame_rate;
  prefix.points.assign(track.points.begin(), track.points.begin() + t);
  std::vector<EgoFramePoint> future(track.points.begin() + t,
                                    track.points.begin() + t + t_pred);
  return classify_future(clf, prefix, future, t_max);
}

ConfusionMatrix confusion(const std::vector<RiskSequence>& predicted,
                          const std::vector<RiskSequence>& actual) {
  if (predicted.size() != actual.size()) {
    throw DataError("confusion: sequence count mismatch");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto& p = predicted[i];
    const auto& a = actual[i];
    if (p.labels.size() != a.labels.size() || p.traj_id != a.traj_id ||
        p.start_t != a.start_t) {
      throw DataError("confusion: misaligned sequences at index " +
                      std::to_string(i));
    }
    for (std::size_t k = 0; k < p.labels.size(); ++k) {
      ++m.counts[static_cast<std::size_t>(p.labels[k])]
                [static_cast<std::size_t>(a.labels[k])];
    }
  }
  return m;
}

EvaluationReport end_to_end_evaluate(const std::vector<PedestrianTrack>& tracks,
                                     const LstmModel& lstm, const SvmModel& clf,
                                     const EvaluateOptions& options) {
  if (options.t_pred < 1 || options.min_prefix < 1) {
    throw DataError("end_to_end_evaluate: invalid window options");
  }

  EvaluationReport report;
  std::vector<RiskSequence> predicted, actual;
  std::vector<double> ade_sum(static_cast<std::size_t>(options.t_pred), 0.0);
  std::size_t ade_windows = 0;

  for (const auto& track : tracks) {
    const int len = static_cast<int>(track.points.size());
    for (int t = options.min_prefix; t + options.t_pred <= len; ++t) {
      PedestrianTrack prefix;
      prefix.id = track.id;
      prefix.frame_rate = track.frame_rate;
      prefix.points.assign(track.points.begin(), track.points.begin() + t);

      auto pred_points = sequence_forward(lstm, prefix.points, options.t_pred);
      RiskSequence pred = classify_future(clf, prefix, pred_points, options.t_max);
      RiskSequence act =
          actual_risk_sequence(clf, track, t, options.t_pred, options.t_max);

      // Per-horizon displacement: mean over the first h predicted steps.
      double running = 0.0;
      for (int h = 0; h < options.t_pred; ++h) {
        const auto& truth = track.points[static_cast<std::size_t>(t + h)];
        running += std::hypot(pred_points[static_cast<std::size_t>(h)].x - truth.x,
                              pred_points[static_cast<std::size_t>(h)].y - truth.y);
        ade_sum[static_cast<std::size_t>(h)] += running / static_cast<double>(h + 1);
      }
      ++ade_windows;

      for (std::size_t k = 0; k < pred.labels.size(); ++k) {
        report.timeline.push_back({track.id, t, static_cast<int>(k) + 1,
                                   pred.labels[k], act.labels[k]});
      }
      predicted.push_back(std::move(pred));
      actual.push_back(std::move(act));
    }
  }
  if (predicted.empty()) {
    throw DataError("end_to_end_evaluate: no track admits an evaluation window");
  }

  report.matrix = confusion(predicted, actual);
  report.overall_accuracy = report.matrix.accuracy();
  report.dangerous_error = report.matrix.class_error(RiskLabel::Dangerous);
  report.windows = predicted.size();
  for (int h = 0; h < options.t_pred; ++h) {
    report.ade_by_horizon.emplace_back(
        h + 1, ade_sum[static_cast<std::size_t>(h)] / static_cast<double>(ade_windows));
  }
  return report;
}

void write_report(const std::filesystem::path& dir, const EvaluationReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);

  {
    std::ofstream out(dir / "confusion.csv", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "confusion.csv").string());
    out << "predicted";
    for (int a = 0; a < kNumRiskLabels; ++a) {
      out << ',' << to_string(static_cast<RiskLabel>(a));
    }
    out << '\n';
    for (int p = 0; p < kNumRiskLabels; ++p) {
      out << to_string(static_cast<RiskLabel>(p));
      for (int a = 0; a < kNumRiskLabels; ++a) {
        out << ',' << report.matrix.counts[static_cast<std::size_t>(p)]
                                          [static_cast<std::size_t>(a)];
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "ade_sweep.csv", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "ade_sweep.csv").string());
    out << "T_pred,mean_ade\n";
    for (const auto& [h, value] : report.ade_by_horizon) {
      out << h << ',' << format_double(value) << '\n';
    }
  }
  {
    std::ofstream out(dir / "risk_timeline.csv", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "risk_timeline.csv").string());
    // Windows overlap: every valid prefix length t is evaluated.
    out << "traj_id,t,step,predicted_risk,actual_risk\n";
    for (const auto& row : report.timeline) {
      out << row.traj_id << ',' << row.t << ',' << row.step << ','
          << to_string(row.predicted) << ',' << to_string(row.actual) << '\n';
    }
  }
  {
    std::ofstream out(dir / "summary.txt", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "summary.txt").string());
    out << "windows = " << report.windows << '\n';
    out << "states = " << report.matrix.total() << '\n';
    out << "overall_accuracy = " << format_double(report.overall_accuracy) << '\n';
    out << "dangerous_class_error = " << format_double(report.dangerous_error) << '\n';
    for (int a = 0; a < kNumRiskLabels; ++a) {
      out << "class_error_" << to_string(static_cast<RiskLabel>(a)) << " = "
          << format_double(report.matrix.class_error(static_cast<RiskLabel>(a)))
          << '\n';
    }
    for (const auto& [h, value] : report.ade_by_horizon) {
      out << "ade_t" << h << " = " << format_double(value) << '\n';
    }
  }
}

}  // namespace pedrisk
