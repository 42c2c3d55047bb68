#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "pedrisk/types.hpp"

namespace pedrisk {

// Single-layer LSTM over 2-d position inputs with a linear output head.
// Gate weights act on the concatenation [h(t-1); p(t)]. norm_mean/scale is
// the per-dataset affine coordinate scaling applied at the interface and
// inverted on outputs; the recurrence itself runs in normalized space.
struct LstmModel {
  Eigen::MatrixXd w_f, w_i, w_o, w_c;  // H x (H+2)
  Eigen::VectorXd b_f, b_i, b_o, b_c;  // H
  Eigen::MatrixXd w_fc;                // 2 x H output projection
  Eigen::Vector2d b_fc = Eigen::Vector2d::Zero();
  Eigen::Vector2d norm_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d norm_scale = Eigen::Vector2d::Ones();
  int t_pred = 5;

  int hidden_dim() const { return static_cast<int>(w_f.rows()); }
};

// Zero-weight model of the given width (tests, manual construction).
LstmModel make_zero_lstm(int hidden_dim);
// Uniform +-1/sqrt(H+2) weights, +1 forget-gate bias.
LstmModel make_lstm(int hidden_dim, std::uint64_t seed);

struct LstmState {
  Eigen::VectorXd h;  // tanh-bounded hidden output
  Eigen::VectorXd c;  // cell state
};

LstmState initial_state(const LstmModel& model);

// One recurrence step: sigmoid gates over [h, input], cell update, tanh
// output. Throws DataError on state dimension mismatch.
LstmState cell_forward(const LstmModel& model, const LstmState& state,
                       const Eigen::Vector2d& input);

// Consumes the observed prefix from a zero state, then rolls out
// autoregressively for t_pred steps, feeding each prediction back as the
// next input. Inputs/outputs are raw coordinates; t_pred <= 0 uses the
// model's configured horizon.
std::vector<EgoFramePoint> sequence_forward(const LstmModel& model,
                                            const std::vector<EgoFramePoint>& observed,
                                            int t_pred = 0);

// Mean squared Euclidean error over paired positions.
double loss_mse(const std::vector<EgoFramePoint>& predicted,
                const std::vector<EgoFramePoint>& actual);

// Mean Euclidean displacement in meters over paired positions.
double ade(const std::vector<EgoFramePoint>& predicted,
           const std::vector<EgoFramePoint>& actual);

struct LstmGradients {
  Eigen::MatrixXd w_f, w_i, w_o, w_c;
  Eigen::VectorXd b_f, b_i, b_o, b_c;
  Eigen::MatrixXd w_fc;
  Eigen::Vector2d b_fc;
  double loss = 0.0;
};

// Exact analytic gradients of loss_mse through the autoregressive rollout,
// including the paths through fed-back predictions. Sequences are taken in
// the model's coordinate space (training normalizes once up front).
LstmGradients gradients_bptt(const LstmModel& model,
                             const std::vector<Eigen::Vector2d>& observed,
                             const std::vector<Eigen::Vector2d>& target);

struct TrainConfig {
  int hidden_dim = 32;
  double learning_rate = 0.02;
  double lr_decay = 0.99;  // multiplicative per-epoch decay, 1 = constant
  int epochs = 80;
  int batch_size = 16;
  double momentum = 0.9;
  double clip_norm = 5.0;
  std::uint64_t rng_seed = 1;
  int t_pred = 5;
  int min_prefix = 4;  // observation windows start at the 4th frame
};

struct TrainResult {
  LstmModel model;
  std::vector<double> loss_history;  // mean per-window loss per epoch
};

// Momentum gradient descent with global-norm clipping over all prefix
// windows of the training trajectories. Deterministic for a given seed.
// Throws NumericError if the loss diverges past 1e6.
TrainResult train_lstm(const std::vector<PedestrianTrack>& tracks,
                       const TrainConfig& config);

// Constant-velocity extrapolation from the last observed displacement; the
// evaluation baseline.
std::vector<EgoFramePoint> constant_velocity_predict(
    const std::vector<EgoFramePoint>& observed, int t_pred);

// Mean ADE over every valid (prefix, window) pair of the given tracks.
double evaluate_ade(const LstmModel& model,
                    const std::vector<PedestrianTrack>& tracks, int t_pred,
                    int min_prefix = 4);

// Trajectory-granular k-fold assignments; folds differ in size by at most
// one and each repeat reshuffles deterministically from the seed.
std::vector<std::vector<int>> kfold_split(std::size_t n_trajectories, int k,
                                          int repeats, std::uint64_t seed);

struct SweepRow {
  int t_pred = 0;
  double mean_ade = 0.0;
};

// One cross-validated train/evaluate cycle per horizon in [t_min, t_max];
// the fold split reshuffles per repeat and the ADE averages over all
// repeat/fold runs.
std::vector<SweepRow> sweep_prediction_window(
    const std::vector<PedestrianTrack>& tracks, int t_min, int t_max,
    const TrainConfig& config, int folds, std::uint64_t seed, int repeats = 1);

}  // namespace pedrisk
