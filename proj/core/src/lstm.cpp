#include "pedrisk/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pedrisk/error.hpp"
#include "pedrisk/rng.hpp"

namespace pedrisk {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
  return ((-v.array()).exp() + 1.0).inverse();
}

void check_dims(const LstmModel& model) {
  const Eigen::Index h = model.w_f.rows();
  const Eigen::Index z = h + 2;
  auto bad = [&](const auto& m, Eigen::Index r, Eigen::Index c) {
    return m.rows() != r || m.cols() != c;
  };
  if (bad(model.w_f, h, z) || bad(model.w_i, h, z) || bad(model.w_o, h, z) ||
      bad(model.w_c, h, z) || model.b_f.size() != h || model.b_i.size() != h ||
      model.b_o.size() != h || model.b_c.size() != h ||
      bad(model.w_fc, 2, h)) {
    throw DataError("lstm: inconsistent model dimensions");
  }
}

Eigen::Vector2d normalize_point(const LstmModel& m, const EgoFramePoint& p) {
  return {(p.x - m.norm_mean(0)) / m.norm_scale(0),
          (p.y - m.norm_mean(1)) / m.norm_scale(1)};
}

EgoFramePoint denormalize_point(const LstmModel& m, const Eigen::Vector2d& p) {
  return {p(0) * m.norm_scale(0) + m.norm_mean(0),
          p(1) * m.norm_scale(1) + m.norm_mean(1)};
}

// Cached per-step activations for the backward pass.
struct StepCache {
  Eigen::VectorXd z;  // [h_prev; x]
  Eigen::VectorXd f, i, o, g;
  Eigen::VectorXd c_prev, c, tanh_c;
};

struct ForwardTrace {
  std::vector<StepCache> steps;
  std::vector<Eigen::Vector2d> outputs;  // predictions, normalized space
};

// Runs the prefix and the autoregressive rollout, recording activations.
ForwardTrace forward_trace(const LstmModel& model,
                           const std::vector<Eigen::Vector2d>& observed,
                           int t_pred) {
  const int h = model.hidden_dim();
  const int t_obs = static_cast<int>(observed.size());
  const int total_steps = t_obs + t_pred - 1;

  ForwardTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(total_steps));
  trace.outputs.reserve(static_cast<std::size_t>(t_pred));

  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);

  for (int k = 0; k < total_steps; ++k) {
    StepCache step;
    step.z.resize(h + 2);
    step.z.head(h) = h_prev;
    step.z.tail(2) = k < t_obs
                         ? observed[static_cast<std::size_t>(k)]
                         : trace.outputs[static_cast<std::size_t>(k - t_obs)];
    step.c_prev = c_prev;
    step.f = sigmoid(model.w_f * step.z + model.b_f);
    step.i = sigmoid(model.w_i * step.z + model.b_i);
    step.o = sigmoid(model.w_o * step.z + model.b_o);
    step.g = (model.w_c * step.z + model.b_c).array().tanh();
    step.c = step.f.cwiseProduct(c_prev) + step.i.cwiseProduct(step.g);
    step.tanh_c = step.c.array().tanh();

    h_prev = step.o.cwiseProduct(step.tanh_c);
    c_prev = step.c;
    trace.steps.push_back(std::move(step));

    if (k >= t_obs - 1) {
      trace.outputs.push_back(model.w_fc * h_prev + model.b_fc);
    }
  }
  return trace;
}

LstmGradients zero_gradients(const LstmModel& model) {
  const Eigen::Index h = model.w_f.rows();
  LstmGradients g;
  g.w_f = Eigen::MatrixXd::Zero(h, h + 2);
  g.w_i = Eigen::MatrixXd::Zero(h, h + 2);
  g.w_o = Eigen::MatrixXd::Zero(h, h + 2);
  g.w_c = Eigen::MatrixXd::Zero(h, h + 2);
  g.b_f = Eigen::VectorXd::Zero(h);
  g.b_i = Eigen::VectorXd::Zero(h);
  g.b_o = Eigen::VectorXd::Zero(h);
  g.b_c = Eigen::VectorXd::Zero(h);
  g.w_fc = Eigen::MatrixXd::Zero(2, h);
  g.b_fc = Eigen::Vector2d::Zero();
  return g;
}

void accumulate(LstmGradients& acc, const LstmGradients& g) {
  acc.w_f += g.w_f;
  acc.w_i += g.w_i;
  acc.w_o += g.w_o;
  acc.w_c += g.w_c;
  acc.b_f += g.b_f;
  acc.b_i += g.b_i;
  acc.b_o += g.b_o;
  acc.b_c += g.b_c;
  acc.w_fc += g.w_fc;
  acc.b_fc += g.b_fc;
  acc.loss += g.loss;
}

void scale_gradients(LstmGradients& g, double s) {
  g.w_f *= s;
  g.w_i *= s;
  g.w_o *= s;
  g.w_c *= s;
  g.b_f *= s;
  g.b_i *= s;
  g.b_o *= s;
  g.b_c *= s;
  g.w_fc *= s;
  g.b_fc *= s;
}

double gradient_norm(const LstmGradients& g) {
  double sq = g.w_f.squaredNorm() + g.w_i.squaredNorm() + g.w_o.squaredNorm() +
              g.w_c.squaredNorm() + g.b_f.squaredNorm() + g.b_i.squaredNorm() +
              g.b_o.squaredNorm() + g.b_c.squaredNorm() + g.w_fc.squaredNorm() +
              g.b_fc.squaredNorm();
  return std::sqrt(sq);
}

}  // namespace

LstmModel make_zero_lstm(int hidden_dim) {
  if (hidden_dim < 1) throw DataError("lstm: hidden_dim must be >= 1");
  LstmModel m;
  const Eigen::Index h = hidden_dim;
  m.w_f = Eigen::MatrixXd::Zero(h, h + 2);
  m.w_i = Eigen::MatrixXd::Zero(h, h + 2);
  m.w_o = Eigen::MatrixXd::Zero(h, h + 2);
  m.w_c = Eigen::MatrixXd::Zero(h, h + 2);
  m.b_f = Eigen::VectorXd::Zero(h);
  m.b_i = Eigen::VectorXd::Zero(h);
  m.b_o = Eigen::VectorXd::Zero(h);
  m.b_c = Eigen::VectorXd::Zero(h);
  m.w_fc = Eigen::MatrixXd::Zero(2, h);
  return m;
}

LstmModel make_lstm(int hidden_dim, std::uint64_t seed) {
  LstmModel m = make_zero_lstm(hidden_dim);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim + 2));
  auto fill = [&](Eigen::MatrixXd& w) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = rng.uniform(-bound, bound);
      }
    }
  };
  fill(m.w_f);
  fill(m.w_i);
  fill(m.w_o);
  fill(m.w_c);
  fill(m.w_fc);
  m.b_f.setConstant(1.0);  // open forget gates at the start of training
  return m;
}

LstmState initial_state(const LstmModel& model) {
  return {Eigen::VectorXd::Zero(model.hidden_dim()),
          Eigen::VectorXd::Zero(model.hidden_dim())};
}

LstmState cell_forward(const LstmModel& model, const LstmState& state,
                       const Eigen::Vector2d& input) {
  check_dims(model);
  const Eigen::Index h = model.hidden_dim();
  if (state.h.size() != h || state.c.size() != h) {
    throw DataError("lstm: state dimension mismatch");
  }
  Eigen::VectorXd z(h + 2);
  z.head(h) = state.h;
  z.tail(2) = input;

  Eigen::VectorXd f = sigmoid(model.w_f * z + model.b_f);
  Eigen::VectorXd i = sigmoid(model.w_i * z + model.b_i);
  Eigen::VectorXd o = sigmoid(model.w_o * z + model.b_o);
  Eigen::VectorXd g = (model.w_c * z + model.b_c).array().tanh();

  LstmState next;
  next.c = f.cwiseProduct(state.c) + i.cwiseProduct(g);
  next.h = o.cwiseProduct(next.c.array().tanh().matrix());
  return next;
}

std::vector<EgoFramePoint> sequence_forward(const LstmModel& model,
                                            const std::vector<EgoFramePoint>& observed,
                                            int t_pred) {
  check_dims(model);
  if (observed.empty()) throw DataError("lstm: empty observation prefix");
  const int horizon = t_pred > 0 ? t_pred : model.t_pred;
  if (horizon < 1) throw DataError("lstm: prediction horizon must be >= 1");

  std::vector<Eigen::Vector2d> normalized;
  normalized.reserve(observed.size());
  for (const auto& p : observed) normalized.push_back(normalize_point(model, p));

  ForwardTrace trace = forward_trace(model, normalized, horizon);

  std::vector<EgoFramePoint> out;
  out.reserve(trace.outputs.size());
  for (const auto& y : trace.outputs) out.push_back(denormalize_point(model, y));
  return out;
}

double loss_mse(const std::vector<EgoFramePoint>& predicted,
                const std::vector<EgoFramePoint>& actual) {
  if (predicted.size() != actual.size()) {
    throw DataError("loss_mse: sequence length mismatch");
  }
  if (predicted.empty()) throw DataError("loss_mse: empty sequences");
  double total = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    double dx = predicted[k].x - actual[k].x;
    double dy = predicted[k].y - actual[k].y;
    total += dx * dx + dy * dy;
  }
  return total / static_cast<double>(predicted.size());
}

double ade(const std::vector<EgoFramePoint>& predicted,
           const std::vector<EgoFramePoint>& actual) {
  if (predicted.size() != actual.size()) {
    throw DataError("ade: sequence length mismatch");
  }
  if (predicted.empty()) throw DataError("ade: empty sequences");
  double total = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    total += std::hypot(predicted[k].x - actual[k].x, predicted[k].y - actual[k].y);
  }
  return total / static_cast<double>(predicted.size());
}

LstmGradients gradients_bptt(const LstmModel& model,
                             const std::vector<Eigen::Vector2d>& observed,
                             const std::vector<Eigen::Vector2d>& target) {
  check_dims(model);
  if (observed.empty() || target.empty()) {
    throw DataError("gradients_bptt: windows must be non-empty");
  }
  const int h = model.hidden_dim();
  const int t_obs = static_cast<int>(observed.size());
  const int t_pred = static_cast<int>(target.size());

  ForwardTrace trace = forward_trace(model, observed, t_pred);

  LstmGradients grads = zero_gradients(model);
  const double inv_p = 1.0 / static_cast<double>(t_pred);
  for (int j = 0; j < t_pred; ++j) {
    grads.loss += inv_p * (trace.outputs[static_cast<std::size_t>(j)] -
                           target[static_cast<std::size_t>(j)])
                              .squaredNorm();
  }
  if (!std::isfinite(grads.loss)) {
    throw NumericError("gradients_bptt: non-finite loss");
  }

  // Reverse pass. dy_extra[j] collects the gradient flowing into prediction
  // j through its reuse as the input of step t_obs + j.
  std::vector<Eigen::Vector2d> dy_extra(static_cast<std::size_t>(t_pred),
                                        Eigen::Vector2d::Zero());
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);

  const int total_steps = t_obs + t_pred - 1;
  for (int k = total_steps - 1; k >= 0; --k) {
    const StepCache& s = trace.steps[static_cast<std::size_t>(k)];
    Eigen::VectorXd h_k = s.o.cwiseProduct(s.tanh_c);

    Eigen::VectorXd dh = dh_next;
    const int j = k - (t_obs - 1);
    if (j >= 0) {
      Eigen::Vector2d dy =
          2.0 * inv_p *
              (trace.outputs[static_cast<std::size_t>(j)] -
               target[static_cast<std::size_t>(j)]) +
          dy_extra[static_cast<std::size_t>(j)];
      grads.w_fc += dy * h_k.transpose();
      grads.b_fc += dy;
      dh += model.w_fc.transpose() * dy;
    }

    Eigen::VectorXd dc =
        dc_next.array() + dh.array() * s.o.array() * (1.0 - s.tanh_c.array().square());
    Eigen::VectorXd do_pre =
        (dh.array() * s.tanh_c.array()) * s.o.array() * (1.0 - s.o.array());
    Eigen::VectorXd df_pre =
        (dc.array() * s.c_prev.array()) * s.f.array() * (1.0 - s.f.array());
    Eigen::VectorXd di_pre =
        (dc.array() * s.g.array()) * s.i.array() * (1.0 - s.i.array());
    Eigen::VectorXd dg_pre = (dc.array() * s.i.array()) * (1.0 - s.g.array().square());

    grads.w_f += df_pre * s.z.transpose();
    grads.w_i += di_pre * s.z.transpose();
    grads.w_o += do_pre * s.z.transpose();
    grads.w_c += dg_pre * s.z.transpose();
    grads.b_f += df_pre;
    grads.b_i += di_pre;
    grads.b_o += do_pre;
    grads.b_c += dg_pre;

    Eigen::VectorXd dz = model.w_f.transpose() * df_pre +
                         model.w_i.transpose() * di_pre +
                         model.w_o.transpose() * do_pre +
                         model.w_c.transpose() * dg_pre;
    dh_next = dz.head(h);
    if (k >= t_obs) {
      dy_extra[static_cast<std::size_t>(k - t_obs)] += dz.tail(2);
    }
    dc_next = dc.cwiseProduct(s.f);
  }

  if (!grads.w_f.allFinite() || !grads.w_fc.allFinite()) {
    throw NumericError("gradients_bptt: non-finite gradient");
  }
  return grads;
}

namespace {

struct Window {
  std::size_t track = 0;
  int prefix_len = 0;
};

// Adam update state; beta1 comes from the momentum config knob.
struct AdamSlot {
  Eigen::ArrayXXd m1, m2;
};

constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

template <typename Param, typename Grad>
void apply_update(Param& param, AdamSlot& slot, const Grad& grad, double lr,
                  double beta1, double bias1, double bias2) {
  slot.m1 = beta1 * slot.m1 + (1.0 - beta1) * grad.array();
  slot.m2 = kAdamBeta2 * slot.m2 + (1.0 - kAdamBeta2) * grad.array().square();
  param.array() -=
      lr * (slot.m1 / bias1) / ((slot.m2 / bias2).sqrt() + kAdamEps);
}

}  // namespace

TrainResult train_lstm(const std::vector<PedestrianTrack>& tracks,
                       const TrainConfig& config) {
  if (config.hidden_dim < 1 || config.epochs < 1 || config.batch_size < 1 ||
      !(config.learning_rate > 0.0) || config.t_pred < 1 ||
      config.min_prefix < 1 || !(config.clip_norm > 0.0) ||
      !(config.lr_decay > 0.0) || config.lr_decay > 1.0) {
    throw DataError("train_lstm: config values must be positive");
  }
  if (tracks.size() < 2) {
    throw DataError("train_lstm: need at least 2 trajectories");
  }

  // Normalized copies of every track.
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  std::size_t count = 0;
  for (const auto& t : tracks) {
    for (const auto& p : t.points) {
      mean(0) += p.x;
      mean(1) += p.y;
      ++count;
    }
  }
  if (count == 0) throw DataError("train_lstm: empty tracks");
  mean /= static_cast<double>(count);
  Eigen::Vector2d var = Eigen::Vector2d::Zero();
  for (const auto& t : tracks) {
    for (const auto& p : t.points) {
      var(0) += (p.x - mean(0)) * (p.x - mean(0));
      var(1) += (p.y - mean(1)) * (p.y - mean(1));
    }
  }
  var /= static_cast<double>(count);
  Eigen::Vector2d scale{std::sqrt(var(0)), std::sqrt(var(1))};
  for (int d = 0; d < 2; ++d) {
    if (!(scale(d) > 1e-9)) scale(d) = 1.0;
  }

  std::vector<std::vector<Eigen::Vector2d>> normalized(tracks.size());
  std::vector<Window> windows;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    normalized[i].reserve(tracks[i].points.size());
    for (const auto& p : tracks[i].points) {
      normalized[i].push_back(
          {(p.x - mean(0)) / scale(0), (p.y - mean(1)) / scale(1)});
    }
    const int len = static_cast<int>(tracks[i].points.size());
    for (int t = config.min_prefix; t + config.t_pred <= len; ++t) {
      windows.push_back({i, t});
    }
  }
  if (windows.empty()) {
    throw DataError("train_lstm: no trajectory admits an observation window of " +
                    std::to_string(config.min_prefix) + "+" +
                    std::to_string(config.t_pred) + " frames");
  }

  LstmModel model = make_lstm(config.hidden_dim,
                              derive_seed(config.rng_seed, "lstm-init", 0));
  model.norm_mean = mean;
  model.norm_scale = scale;
  model.t_pred = config.t_pred;

  auto make_slot = [](Eigen::Index rows, Eigen::Index cols) {
    return AdamSlot{Eigen::ArrayXXd::Zero(rows, cols),
                    Eigen::ArrayXXd::Zero(rows, cols)};
  };
  const Eigen::Index h = config.hidden_dim;
  AdamSlot s_wf = make_slot(h, h + 2), s_wi = make_slot(h, h + 2);
  AdamSlot s_wo = make_slot(h, h + 2), s_wc = make_slot(h, h + 2);
  AdamSlot s_bf = make_slot(h, 1), s_bi = make_slot(h, 1);
  AdamSlot s_bo = make_slot(h, 1), s_bc = make_slot(h, 1);
  AdamSlot s_wfc = make_slot(2, h), s_bfc = make_slot(2, 1);
  long step = 0;
  TrainResult result;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.rng_seed, "lstm-shuffle",
                        static_cast<std::uint64_t>(epoch)));
    rng.shuffle(windows);

    double epoch_loss = 0.0;
    std::size_t processed = 0;
    while (processed < windows.size()) {
      const std::size_t batch_end =
          std::min(windows.size(), processed + static_cast<std::size_t>(config.batch_size));
      LstmGradients batch = zero_gradients(model);
      for (std::size_t w = processed; w < batch_end; ++w) {
        const Window& win = windows[w];
        const auto& seq = normalized[win.track];
        std::vector<Eigen::Vector2d> obs(seq.begin(), seq.begin() + win.prefix_len);
        std::vector<Eigen::Vector2d> tgt(seq.begin() + win.prefix_len,
                                         seq.begin() + win.prefix_len + config.t_pred);
        accumulate(batch, gradients_bptt(model, obs, tgt));
      }
      const double inv = 1.0 / static_cast<double>(batch_end - processed);
      epoch_loss += batch.loss;
      scale_gradients(batch, inv);

      double norm = gradient_norm(batch);
      if (norm > config.clip_norm) {
        scale_gradients(batch, config.clip_norm / norm);
      }
      const double lr = config.learning_rate * std::pow(config.lr_decay, epoch);
      ++step;
      const double bias1 = 1.0 - std::pow(config.momentum, step);
      const double bias2 = 1.0 - std::pow(kAdamBeta2, step);
      const double b1 = config.momentum;
      apply_update(model.w_f, s_wf, batch.w_f, lr, b1, bias1, bias2);
      apply_update(model.w_i, s_wi, batch.w_i, lr, b1, bias1, bias2);
      apply_update(model.w_o, s_wo, batch.w_o, lr, b1, bias1, bias2);
      apply_update(model.w_c, s_wc, batch.w_c, lr, b1, bias1, bias2);
      apply_update(model.b_f, s_bf, batch.b_f, lr, b1, bias1, bias2);
      apply_update(model.b_i, s_bi, batch.b_i, lr, b1, bias1, bias2);
      apply_update(model.b_o, s_bo, batch.b_o, lr, b1, bias1, bias2);
      apply_update(model.b_c, s_bc, batch.b_c, lr, b1, bias1, bias2);
      apply_update(model.w_fc, s_wfc, batch.w_fc, lr, b1, bias1, bias2);
      apply_update(model.b_fc, s_bfc, batch.b_fc, lr, b1, bias1, bias2);
      processed = batch_end;
    }

    epoch_loss /= static_cast<double>(windows.size());
    if (!std::isfinite(epoch_loss) || epoch_loss > 1e6) {
      throw NumericError("train_lstm: diverged at epoch " + std::to_string(epoch) +
                         " (loss " + std::to_string(epoch_loss) + ")");
    }
    result.loss_history.push_back(epoch_loss);
  }

  result.model = std::move(model);
  return result;
}

std::vector<EgoFramePoint> constant_velocity_predict(
    const std::vector<EgoFramePoint>& observed, int t_pred) {
  if (observed.empty()) throw DataError("cv baseline: empty prefix");
  if (t_pred < 1) throw DataError("cv baseline: horizon must be >= 1");
  double dx = 0.0, dy = 0.0;
  if (observed.size() >= 2) {
    const auto& last = observed.back();
    const auto& prev = observed[observed.size() - 2];
    dx = last.x - prev.x;
    dy = last.y - prev.y;
  }
  std::vector<EgoFramePoint> out;
  out.reserve(static_cast<std::size_t>(t_pred));
  for (int s = 1; s <= t_pred; ++s) {
    out.push_back({observed.back().x + s * dx, observed.back().y + s * dy});
  }
  return out;
}

double evaluate_ade(const LstmModel& model,
                    const std::vector<PedestrianTrack>& tracks, int t_pred,
                    int min_prefix) {
  double total = 0.0;
  std::size_t windows = 0;
  for (const auto& track : tracks) {
    const int len = static_cast<int>(track.points.size());
    for (int t = min_prefix; t + t_pred <= len; ++t) {
      std::vector<EgoFramePoint> obs(track.points.begin(),
                                     track.points.begin() + t);
      std::vector<EgoFramePoint> actual(track.points.begin() + t,
                                        track.points.begin() + t + t_pred);
      total += ade(sequence_forward(model, obs, t_pred), actual);
      ++windows;
    }
  }
  if (windows == 0) throw DataError("evaluate_ade: no valid windows");
  return total / static_cast<double>(windows);
}

std::vector<std::vector<int>> kfold_split(std::size_t n_trajectories, int k,
                                          int repeats, std::uint64_t seed) {
  if (k < 2) throw DataError("kfold_split: k must be >= 2");
  if (repeats < 1) throw DataError("kfold_split: repeats must be >= 1");
  if (n_trajectories < static_cast<std::size_t>(k)) {
    throw DataError("kfold_split: fewer trajectories than folds");
  }

  std::vector<std::vector<int>> assignments;
  assignments.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    std::vector<std::size_t> perm(n_trajectories);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "kfold", static_cast<std::uint64_t>(r)));
    rng.shuffle(perm);
    std::vector<int> folds(n_trajectories, 0);
    for (std::size_t i = 0; i < n_trajectories; ++i) {
      folds[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    assignments.push_back(std::move(folds));
  }
  return assignments;
}

std::vector<SweepRow> sweep_prediction_window(
    const std::vector<PedestrianTrack>& tracks, int t_min, int t_max,
    const TrainConfig& config, int folds, std::uint64_t seed, int repeats) {
  if (t_min < 1 || t_max < t_min) throw DataError("sweep: invalid horizon range");
  if (repeats < 1) throw DataError("sweep: repeats must be >= 1");
  for (const auto& t : tracks) {
    if (static_cast<int>(t.points.size()) < config.min_prefix + t_max) {
      throw DataError("sweep: track '" + t.id + "' too short for horizon " +
                      std::to_string(t_max));
    }
  }

  const auto splits = kfold_split(tracks.size(), folds, repeats, seed);
  std::vector<SweepRow> rows;
  for (int horizon = t_min; horizon <= t_max; ++horizon) {
    double total = 0.0;
    for (int r = 0; r < repeats; ++r) {
      for (int f = 0; f < folds; ++f) {
        std::vector<PedestrianTrack> train_set, val_set;
        for (std::size_t i = 0; i < tracks.size(); ++i) {
          (splits[static_cast<std::size_t>(r)][i] == f ? val_set : train_set)
              .push_back(tracks[i]);
        }
        TrainConfig c = config;
        c.t_pred = horizon;
        c.rng_seed = derive_seed(
            seed, "sweep-train",
            static_cast<std::uint64_t>((horizon * 64 + f) * 1024 + r));
        TrainResult trained = train_lstm(train_set, c);
        total += evaluate_ade(trained.model, val_set, horizon, config.min_prefix);
      }
    }
    rows.push_back({horizon, total / static_cast<double>(folds * repeats)});
  }
  return rows;
}

}  // namespace pedrisk
