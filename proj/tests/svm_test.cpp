#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pedrisk/error.hpp"
#include "pedrisk/rng.hpp"
#include "pedrisk/svm.hpp"
#include "test_support.hpp"

using namespace pedrisk;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Decision value recomputed from the full alpha vector; the model must agree
// after dropping zero-alpha terms.
double full_decision(const Eigen::MatrixXd& x, const std::vector<int>& y,
                     const Eigen::VectorXd& alphas, double bias,
                     const KernelSpec& kernel, const Eigen::VectorXd& probe) {
  double f = bias;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    f += alphas(i) * y[static_cast<std::size_t>(i)] *
         kernel_eval(kernel, x.row(i), probe);
  }
  return f;
}

void check_kkt(const Eigen::MatrixXd& x, const std::vector<int>& y,
               const Eigen::VectorXd& alphas, const BinarySvm& model, double c,
               double tol) {
  double alpha_dot_y = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double yi = y[static_cast<std::size_t>(i)];
    alpha_dot_y += alphas(i) * yi;
    double margin = yi * model.decision(x.row(i));
    if (alphas(i) <= 0.0) {
      CHECK(margin >= 1.0 - tol - 1e-9);
    } else if (alphas(i) >= c) {
      CHECK(margin <= 1.0 + tol + 1e-9);
    } else {
      CHECK(std::abs(margin - 1.0) <= tol + 1e-9);
    }
  }
  CHECK(std::abs(alpha_dot_y) < 1e-6);
}

struct LabeledStates {
  std::vector<FeatureState> states;
  std::vector<RiskLabel> labels;
};

// Four well-separated blobs in feature space, one per risk label.
LabeledStates blob_states(int per_class, double sigma, std::uint64_t seed) {
  const std::vector<FeatureState> centers = {
      {18.0, 4.0, -1.0, 1.0, 9.5},
      {4.0, 0.5, -0.5, -1.0, 8.0},
      {5.0, 1.5, -5.5, -1.2, 1.2},
      {16.0, -5.0, -4.0, 1.4, 2.8},
  };
  Rng rng(seed);
  LabeledStates out;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < per_class; ++i) {
      FeatureState s = centers[static_cast<std::size_t>(c)];
      s.px += sigma * rng.normal();
      s.py += sigma * rng.normal();
      s.vx += sigma * rng.normal();
      s.vy += sigma * rng.normal();
      s.ttc += sigma * rng.normal();
      out.states.push_back(s);
      out.labels.push_back(static_cast<RiskLabel>(c));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("two-point dual solved by hand: alpha = 0.5 each, b = 0") {
  Eigen::MatrixXd x(2, 2);
  x << -1, 0, 1, 0;
  std::vector<int> y{-1, 1};
  SvmTrainStats stats;
  auto model = svm_train_binary(x, y, KernelSpec::linear(), 10.0, 1e-4, 20000, &stats);

  REQUIRE(stats.alphas.size() == 2);
  CHECK(stats.alphas(0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(stats.alphas(1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(model.bias == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(model.support_vectors.rows() == 2);

  // Decision function reduces to f(x) = x1.
  CHECK(model.decision(vec2(2.0, 5.0)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(model.decision(vec2(-0.3, 1.0)) == doctest::Approx(-0.3).epsilon(1e-6));
}

TEST_CASE("linearly separable blobs reach full training accuracy") {
  Rng rng(8);
  Eigen::MatrixXd x(40, 2);
  std::vector<int> y(40);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = -3.0 + 0.5 * rng.normal();
    x(i, 1) = 0.5 * rng.normal();
    y[static_cast<std::size_t>(i)] = -1;
    x(20 + i, 0) = 3.0 + 0.5 * rng.normal();
    x(20 + i, 1) = 0.5 * rng.normal();
    y[static_cast<std::size_t>(20 + i)] = 1;
  }
  auto model = svm_train_binary(x, y, KernelSpec::linear(), 100.0, 1e-3);
  for (int i = 0; i < 40; ++i) {
    CHECK(model.decision(x.row(i)) * y[static_cast<std::size_t>(i)] > 0.0);
  }
}

TEST_CASE("XOR needs the gaussian kernel") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 1, -1, -1, 1, -1, -1, 1;
  std::vector<int> y{1, 1, -1, -1};

  // Brute-force sweep over linear separators: no (w, b) classifies more
  // than 3 of the 4 XOR points correctly.
  int best_linear = 0;
  for (int ai = 0; ai < 360; ai += 2) {
    double angle = ai * 3.14159265358979323846 / 180.0;
    for (double b = -3.0; b <= 3.0; b += 0.05) {
      int correct = 0;
      for (int i = 0; i < 4; ++i) {
        double f = std::cos(angle) * x(i, 0) + std::sin(angle) * x(i, 1) + b;
        if ((f > 0 ? 1 : -1) == y[static_cast<std::size_t>(i)]) ++correct;
      }
      best_linear = std::max(best_linear, correct);
    }
  }
  CHECK(best_linear == 3);

  auto gaussian = svm_train_binary(x, y, KernelSpec::gaussian(1.0), 10.0, 1e-3);
  int correct = 0;
  for (int i = 0; i < 4; ++i) {
    if (gaussian.decision(x.row(i)) * y[static_cast<std::size_t>(i)] > 0.0) ++correct;
  }
  CHECK(correct == 4);

  auto linear = svm_train_binary(x, y, KernelSpec::linear(), 10.0, 1e-3);
  int linear_correct = 0;
  for (int i = 0; i < 4; ++i) {
    if (linear.decision(x.row(i)) * y[static_cast<std::size_t>(i)] > 0.0) {
      ++linear_correct;
    }
  }
  CHECK(linear_correct <= 3);
}

TEST_CASE("KKT conditions and dual feasibility hold after training") {
  Rng rng(91);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 16 + static_cast<int>(rng.uniform_int(16));
    Eigen::MatrixXd x(n, 2);
    std::vector<int> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double cls = i < n / 2 ? -1.0 : 1.0;
      x(i, 0) = 1.2 * cls + 0.9 * rng.normal();
      x(i, 1) = 0.9 * rng.normal();
      y[static_cast<std::size_t>(i)] = cls < 0 ? -1 : 1;
    }
    double c = trial % 2 == 0 ? 1.0 : 10.0;
    auto kernel = trial % 3 == 0 ? KernelSpec::gaussian(0.7) : KernelSpec::linear();
    SvmTrainStats stats;
    auto model = svm_train_binary(x, y, kernel, c, 1e-3, 40000, &stats);
    check_kkt(x, y, stats.alphas, model, c, 1e-3);

    // Stored-support-vector decision equals the full-alpha sum.
    for (int probe = 0; probe < 5; ++probe) {
      Eigen::VectorXd p = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
      double full = full_decision(x, y, stats.alphas, model.bias, kernel, p);
      CHECK(model.decision(p) == doctest::Approx(full).epsilon(1e-9));
    }
  }
}

TEST_CASE("duplicating every training point leaves predictions unchanged") {
  Rng rng(13);
  Eigen::MatrixXd x(20, 2);
  std::vector<int> y(20);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = -2.0 + 0.6 * rng.normal();
    x(i, 1) = 0.6 * rng.normal();
    y[static_cast<std::size_t>(i)] = -1;
    x(10 + i, 0) = 2.0 + 0.6 * rng.normal();
    x(10 + i, 1) = 0.6 * rng.normal();
    y[static_cast<std::size_t>(10 + i)] = 1;
  }
  Eigen::MatrixXd x2(40, 2);
  x2 << x, x;
  std::vector<int> y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());

  auto a = svm_train_binary(x, y, KernelSpec::gaussian(0.8), 10.0, 1e-3);
  auto b = svm_train_binary(x2, y2, KernelSpec::gaussian(0.8), 10.0, 1e-3);
  for (int probe = 0; probe < 40; ++probe) {
    Eigen::VectorXd p = vec2(rng.uniform(-4, 4), rng.uniform(-4, 4));
    CHECK((a.decision(p) > 0) == (b.decision(p) > 0));
  }
}

TEST_CASE("svm_train_binary rejects degenerate inputs") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  CHECK_THROWS_AS(svm_train_binary(x, {1, 1}, KernelSpec::linear(), 1.0, 1e-3),
                  DataError);
  CHECK_THROWS_AS(svm_train_binary(x, {1, 2}, KernelSpec::linear(), 1.0, 1e-3),
                  DataError);
  CHECK_THROWS_AS(svm_train_binary(x, {1, -1}, KernelSpec::linear(), -1.0, 1e-3),
                  DataError);
}

TEST_CASE("svm_train_binary reports non-convergence at the sweep cap") {
  Rng rng(53);
  Eigen::MatrixXd x(30, 2);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1 : -1;  // unlearnable labels
  }
  CHECK_THROWS_AS(svm_train_binary(x, y, KernelSpec::linear(), 100.0, 1e-6, 1),
                  NumericError);
}

TEST_CASE("multiclass classifier separates four planted blobs") {
  auto train = blob_states(50, 0.4, 3);
  auto test = blob_states(20, 0.4, 99);

  auto model = svm_train_multiclass(train.states, train.labels,
                                    KernelSpec::gaussian(0.0), 10.0,
                                    FeatureVariant::All);
  CHECK(model.machines.size() == 6);  // 4 * 3 / 2 pairwise machines

  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.states.size(); ++i) {
    if (svm_predict(model, test.states[i]) == test.labels[i]) ++correct;
  }
  double accuracy = static_cast<double>(correct) / test.states.size();
  CHECK(accuracy >= 0.99);

  // Blob centers classify as their own class.
  CHECK(svm_predict(model, {18.0, 4.0, -1.0, 1.0, 9.5}) ==
        RiskLabel::IndependentlySafe);
  CHECK(svm_predict(model, {5.0, 1.5, -5.5, -1.2, 1.2}) == RiskLabel::Dangerous);
}

TEST_CASE("multiclass prediction ignores machine storage order") {
  auto train = blob_states(25, 0.5, 5);
  auto model = svm_train_multiclass(train.states, train.labels,
                                    KernelSpec::gaussian(0.0), 10.0,
                                    FeatureVariant::All);
  auto shuffled = model;
  std::reverse(shuffled.machines.begin(), shuffled.machines.end());
  auto probes = blob_states(10, 0.8, 71);
  for (const auto& s : probes.states) {
    CHECK(svm_predict(model, s) == svm_predict(shuffled, s));
  }
}

TEST_CASE("label permutation permutes predictions identically") {
  auto train = blob_states(30, 0.4, 41);
  auto model = svm_train_multiclass(train.states, train.labels,
                                    KernelSpec::gaussian(0.0), 10.0,
                                    FeatureVariant::All);

  // Swap two class names in the training labels and retrain.
  auto swap_label = [](RiskLabel l) {
    if (l == RiskLabel::Dangerous) return RiskLabel::Alert;
    if (l == RiskLabel::Alert) return RiskLabel::Dangerous;
    return l;
  };
  std::vector<RiskLabel> swapped;
  for (auto l : train.labels) swapped.push_back(swap_label(l));
  auto permuted = svm_train_multiclass(train.states, swapped,
                                       KernelSpec::gaussian(0.0), 10.0,
                                       FeatureVariant::All);

  auto probes = blob_states(15, 0.5, 83);
  for (const auto& s : probes.states) {
    CHECK(svm_predict(permuted, s) == swap_label(svm_predict(model, s)));
  }
}

TEST_CASE("one duplicated point per class is memorized") {
  std::vector<FeatureState> states = {
      {18, 4, -1, 1, 9.5},  {18, 4, -1, 1, 9.5},  {4, 0.5, -0.5, -1, 8},
      {4, 0.5, -0.5, -1, 8}, {5, 1.5, -5.5, -1.2, 1.2}, {5, 1.5, -5.5, -1.2, 1.2},
      {16, -5, -4, 1.4, 2.8}, {16, -5, -4, 1.4, 2.8},
  };
  std::vector<RiskLabel> labels = {
      RiskLabel::IndependentlySafe, RiskLabel::IndependentlySafe,
      RiskLabel::JointlySafe,       RiskLabel::JointlySafe,
      RiskLabel::Dangerous,         RiskLabel::Dangerous,
      RiskLabel::Alert,             RiskLabel::Alert,
  };
  auto model = svm_train_multiclass(states, labels, KernelSpec::gaussian(0.0),
                                    10.0, FeatureVariant::All);
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(svm_predict(model, states[i]) == labels[i]);
  }
}

TEST_CASE("ttc-only variant trains on the 1-d feature") {
  auto train = blob_states(40, 0.3, 19);
  auto model = svm_train_multiclass(train.states, train.labels,
                                    KernelSpec::gaussian(0.0), 10.0,
                                    FeatureVariant::TtcOnly);
  CHECK(model.variant == FeatureVariant::TtcOnly);
  CHECK(model.standardizer.mean.size() == 1);
  // TTC alone cannot separate all four planted regimes; it must still
  // produce deterministic labels.
  auto p1 = svm_predict(model, train.states[0]);
  auto p2 = svm_predict(model, train.states[0]);
  CHECK(p1 == p2);
}

TEST_CASE("evaluate_classifier reports accuracy and throughput") {
  auto train = blob_states(30, 0.3, 29);
  auto model = svm_train_multiclass(train.states, train.labels,
                                    KernelSpec::gaussian(0.0), 10.0,
                                    FeatureVariant::All);
  auto eval = evaluate_classifier(model, train.states, train.labels, 2000);
  CHECK(eval.accuracy == doctest::Approx(1.0));
  CHECK(eval.preds_per_sec > 0.0);
  CHECK(eval.evaluated == train.states.size());
}

TEST_CASE("svm_predict requires a fitted model") {
  SvmModel empty;
  CHECK_THROWS_AS(svm_predict(empty, FeatureState{}), DataError);
}
