#include "pedrisk/svm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "pedrisk/error.hpp"
#include "pedrisk/features.hpp"

namespace pedrisk {

double BinarySvm::decision(const Eigen::VectorXd& x) const {
  double f = bias;
  for (Eigen::Index s = 0; s < support_vectors.rows(); ++s) {
    f += coeffs(s) * kernel_eval(kernel, support_vectors.row(s), x);
  }
  return f;
}

namespace {

// Platt-style SMO working state over a precomputed Gram matrix.
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& x, const std::vector<int>& y,
            const KernelSpec& kernel, double c, double tol)
      : x_(x), y_(y), c_(c), tol_(tol), gram_(kernel_matrix(kernel, x)) {
    const Eigen::Index m = x.rows();
    alpha_ = Eigen::VectorXd::Zero(m);
    errors_.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      errors_(i) = -static_cast<double>(y_[static_cast<std::size_t>(i)]);
    }
  }

  void solve(int max_sweeps) {
    int changed = 0;
    bool examine_all = true;
    int sweeps = 0;
    do {
      if (++sweeps > max_sweeps) {
        throw NumericError("svm: SMO did not converge within " +
                           std::to_string(max_sweeps) + " sweeps");
      }
      changed = 0;
      for (Eigen::Index i = 0; i < x_.rows(); ++i) {
        if (examine_all || is_unbound(i)) changed += examine(i);
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;  // one last full pass confirms global KKT
      }
    } while (changed > 0 || examine_all);
  }

  const Eigen::VectorXd& alphas() const { return alpha_; }
  double bias() const { return b_; }

 private:
  bool is_unbound(Eigen::Index i) const {
    return alpha_(i) > 0.0 && alpha_(i) < c_;
  }

  double yd(Eigen::Index i) const {
    return static_cast<double>(y_[static_cast<std::size_t>(i)]);
  }

  int examine(Eigen::Index i2) {
    const double y2 = yd(i2);
    const double a2 = alpha_(i2);
    const double e2 = errors_(i2);
    const double r2 = e2 * y2;
    const bool violated = (r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0);
    if (!violated) return 0;

    // Second-choice heuristic: the unbound point with the largest |E1 - E2|,
    // ties toward the smallest index so runs are reproducible.
    Eigen::Index best = -1;
    double best_gap = -1.0;
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (!is_unbound(i)) continue;
      double gap = std::abs(errors_(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && take_step(best, i2)) return 1;

    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (is_unbound(i) && take_step(i, i2)) return 1;
    }
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(Eigen::Index i1, Eigen::Index i2) {
    if (i1 == i2) return false;
    const double y1 = yd(i1), y2 = yd(i2);
    const double a1 = alpha_(i1), a2 = alpha_(i2);
    const double e1 = errors_(i1), e2 = errors_(i2);
    const double s = y1 * y2;

    double lo, hi;
    if (s > 0.0) {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    } else {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    }
    if (lo >= hi) return false;

    const double k11 = gram_(i1, i1), k12 = gram_(i1, i2), k22 = gram_(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Flat direction: evaluate the dual objective at both clip bounds.
      const double f1 = y1 * (e1 + b_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + b_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + 1e-12) {
        a2_new = hi;
      } else {
        return false;
      }
    }
    if (std::abs(a2_new - a2) < 1e-10 * (a2_new + a2 + 1e-10)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    // Snap to the box so bound states are exact.
    if (a1_new < 1e-12) a1_new = 0.0;
    if (a1_new > c_ - 1e-12) a1_new = c_;

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < c_) {
      b_new = b1;
    } else if (a2_new > 0.0 && a2_new < c_) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }

    const double db = b_new - b_;
    errors_ += d1 * gram_.col(i1) + d2 * gram_.col(i2);
    errors_.array() += db;

    alpha_(i1) = a1_new;
    alpha_(i2) = a2_new;
    b_ = b_new;
    return true;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  double c_;
  double tol_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd errors_;  // f(x_i) - y_i
  double b_ = 0.0;
};

}  // namespace

BinarySvm svm_train_binary(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const KernelSpec& kernel, double c, double tol,
                           int max_sweeps, SvmTrainStats* stats) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw DataError("svm: label count does not match rows");
  }
  if (!(c > 0.0)) throw DataError("svm: box constraint C must be positive");
  if (!(tol > 0.0)) throw DataError("svm: tolerance must be positive");
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw DataError("svm: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw DataError("svm: both classes must be present");
  }

  SmoSolver solver(x, y, kernel, c, tol);
  solver.solve(max_sweeps);

  const Eigen::VectorXd& alpha = solver.alphas();
  Eigen::Index sv_count = 0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) > 0.0) ++sv_count;
  }

  BinarySvm model;
  model.kernel = kernel;
  model.c = c;
  model.tol = tol;
  model.bias = solver.bias();
  model.support_vectors.resize(sv_count, x.cols());
  model.coeffs.resize(sv_count);
  Eigen::Index s = 0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) > 0.0) {
      model.support_vectors.row(s) = x.row(i);
      model.coeffs(s) = alpha(i) * static_cast<double>(y[static_cast<std::size_t>(i)]);
      ++s;
    }
  }
  if (stats != nullptr) stats->alphas = alpha;
  return model;
}

SvmModel svm_train_multiclass(const std::vector<FeatureState>& states,
                              const std::vector<RiskLabel>& labels,
                              const KernelSpec& kernel, double c,
                              FeatureVariant variant, double tol,
                              int max_sweeps) {
  if (states.size() != labels.size()) {
    throw DataError("svm: state/label count mismatch");
  }
  if (states.empty()) throw DataError("svm: empty training set");

  SvmModel model;
  model.variant = variant;
  model.c = c;
  model.tol = tol;

  for (int l = 0; l < kNumRiskLabels; ++l) {
    RiskLabel candidate = static_cast<RiskLabel>(l);
    if (std::find(labels.begin(), labels.end(), candidate) != labels.end()) {
      model.classes.push_back(candidate);
    }
  }
  if (model.classes.size() < 2) {
    throw DataError("svm: need at least 2 classes, got " +
                    std::to_string(model.classes.size()));
  }

  const int dim = feature_dim(variant);
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(states.size()), dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto v = select_features(states[i], variant);
    for (int d = 0; d < dim; ++d) raw(static_cast<Eigen::Index>(i), d) = v[d];
  }
  model.standardizer = Standardizer::fit(raw);
  Eigen::MatrixXd x = model.standardizer.apply(raw);

  model.kernel = kernel;
  if (model.kernel.kind == KernelKind::Gaussian && !(model.kernel.gamma > 0.0)) {
    model.kernel.gamma = default_gamma(x);
  }

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      std::vector<Eigen::Index> rows;
      std::vector<int> y;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == model.classes[a]) {
          rows.push_back(static_cast<Eigen::Index>(i));
          y.push_back(1);
        } else if (labels[i] == model.classes[b]) {
          rows.push_back(static_cast<Eigen::Index>(i));
          y.push_back(-1);
        }
      }
      Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), dim);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        sub.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
      }
      SvmModel::PairMachine machine;
      machine.positive = static_cast<int>(a);
      machine.negative = static_cast<int>(b);
      machine.svm = svm_train_binary(sub, y, model.kernel, c, tol, max_sweeps);
      model.machines.push_back(std::move(machine));
    }
  }
  return model;
}

RiskLabel svm_predict(const SvmModel& model, const FeatureState& state) {
  if (!model.fitted()) throw DataError("svm_predict: model is not fitted");

  auto raw = select_features(state, model.variant);
  Eigen::VectorXd x(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = raw[i];
  }
  x = model.standardizer.apply_row(x);

  std::vector<int> votes(model.classes.size(), 0);
  std::vector<double> margin(model.classes.size(), 0.0);
  for (const auto& machine : model.machines) {
    double f = machine.svm.decision(x);
    int winner = f > 0.0 ? machine.positive : machine.negative;
    ++votes[static_cast<std::size_t>(winner)];
    margin[static_cast<std::size_t>(winner)] += std::abs(f);
  }

  std::size_t best = 0;
  for (std::size_t cls = 1; cls < model.classes.size(); ++cls) {
    if (votes[cls] > votes[best] ||
        (votes[cls] == votes[best] && margin[cls] > margin[best])) {
      best = cls;
    }
  }
  return model.classes[best];
}

ClassifierEvaluation evaluate_classifier(const SvmModel& model,
                                         const std::vector<FeatureState>& states,
                                         const std::vector<RiskLabel>& labels,
                                         std::size_t min_predictions) {
  if (states.empty() || states.size() != labels.size()) {
    throw DataError("evaluate_classifier: invalid evaluation set");
  }

  ClassifierEvaluation eval;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (svm_predict(model, states[i]) == labels[i]) ++correct;
  }
  eval.evaluated = states.size();
  eval.accuracy = static_cast<double>(correct) / static_cast<double>(states.size());

  // Throughput over at least 10^4 predictions, cycling the set as needed.
  min_predictions = std::max<std::size_t>(min_predictions, 10000);
  std::size_t reps = std::max<std::size_t>(1, (min_predictions + states.size() - 1) /
                                                  states.size());
  const std::size_t total = reps * states.size();
  volatile int sink = 0;  // keep the loop from being optimized away
  auto start = std::chrono::steady_clock::now();
  for (std::size_t r = 0; r < reps; ++r) {
    for (const auto& s : states) {
      sink = sink + static_cast<int>(svm_predict(model, s));
    }
  }
  auto stop = std::chrono::steady_clock::now();
  (void)sink;
  double seconds = std::chrono::duration<double>(stop - start).count();
  eval.preds_per_sec = seconds > 0.0 ? static_cast<double>(total) / seconds
                                     : std::numeric_limits<double>::infinity();
  return eval;
}

}  // namespace pedrisk
