// pedrisk: synthetic vehicle-perspective pedestrian encounters, LSTM
// trajectory prediction, risk-pattern clustering, SVM risk classification
// and end-to-end risk-sequence evaluation, wired together as subcommands.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pedrisk/clustering.hpp"
#include "pedrisk/cluster_scores.hpp"
#include "pedrisk/csv_io.hpp"
#include "pedrisk/error.hpp"
#include "pedrisk/features.hpp"
#include "pedrisk/lowess.hpp"
#include "pedrisk/lstm.hpp"
#include "pedrisk/model_io.hpp"
#include "pedrisk/pipeline.hpp"
#include "pedrisk/rng.hpp"
#include "pedrisk/run_config.hpp"
#include "pedrisk/scenario.hpp"
#include "pedrisk/svm.hpp"

namespace fs = std::filesystem;
using namespace pedrisk;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Flags shared by every subcommand.
struct CommonArgs {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::vector<std::string> overrides;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value configuration file");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--set", args.overrides, "inline config override key=value")
      ->expected(-1);
  cmd->add_option("--jobs", args.jobs, "cap on parallel workers");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg.load_file(args.config_path);
  for (const auto& kv : args.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw DataError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed.has_value()) cfg.set("seed", std::to_string(*args.seed));
  if (args.jobs > 0) cfg.set("jobs", std::to_string(args.jobs));
  return cfg;
}

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

void emit_manifest(const fs::path& path, const std::string& command,
                   const ManifestEntries& io, const RunConfig& cfg) {
  ManifestEntries entries;
  entries.emplace_back("command", command);
  for (const auto& e : io) entries.push_back(e);
  for (const auto& e : cfg.entries()) entries.push_back(e);
  write_manifest(path, entries);
}

KernelSpec kernel_from_config(const std::string& name, double gamma, double coef0) {
  if (name == "linear") return KernelSpec::linear();
  if (name == "quadratic" || name == "poly2") return KernelSpec::polynomial(2, coef0);
  if (name == "cubic" || name == "poly3") return KernelSpec::polynomial(3, coef0);
  if (name == "gaussian") return KernelSpec::gaussian(gamma);  // <=0: auto
  throw DataError("unknown kernel '" + name + "'");
}

ClusterOptions cluster_options_from(const RunConfig& cfg) {
  ClusterOptions options;
  options.variant = feature_variant_from_string(cfg.get_string("feature_variant"));
  options.kpca_kernel = kernel_from_config(cfg.get_string("kpca_kernel"),
                                           cfg.get_double("kpca_gamma"),
                                           cfg.get_double("kpca_coef0"));
  options.kpca_var_ratio = cfg.get_double("kpca_var_ratio");
  options.spectral.k_nn = static_cast<int>(cfg.get_int("knn_k"));
  options.spectral.sigma_s = cfg.get_double("sigma_s");
  options.spectral.laplacian = cfg.get_string("laplacian") == "unnormalized"
                                   ? LaplacianKind::Unnormalized
                                   : LaplacianKind::SymmetricNormalized;
  options.kmeans_restarts = static_cast<int>(cfg.get_int("kmeans_restarts"));
  options.kmeans_max_iters = static_cast<int>(cfg.get_int("kmeans_max_iters"));
  return options;
}

TrainConfig train_config_from(const RunConfig& cfg) {
  TrainConfig tc;
  tc.hidden_dim = static_cast<int>(cfg.get_int("hidden_dim"));
  tc.learning_rate = cfg.get_double("learning_rate");
  tc.lr_decay = cfg.get_double("lr_decay");
  tc.epochs = static_cast<int>(cfg.get_int("epochs"));
  tc.batch_size = static_cast<int>(cfg.get_int("batch_size"));
  tc.momentum = cfg.get_double("momentum");
  tc.clip_norm = cfg.get_double("clip_norm");
  tc.rng_seed = derive_seed(cfg.seed(), "train-predictor", 0);
  tc.t_pred = static_cast<int>(cfg.get_int("t_pred"));
  tc.min_prefix = static_cast<int>(cfg.get_int("min_prefix"));
  return tc;
}

// Rows of the dataset in flattened order alongside their (traj, frame) keys.
struct FlatRows {
  std::vector<FeatureState> states;
  std::vector<std::string> traj_ids;
  std::vector<int> frames;
};

FlatRows flatten_with_keys(const FeatureDataset& ds) {
  FlatRows rows;
  for (const auto& t : ds.tracks) {
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      rows.states.push_back(t.states[k]);
      rows.traj_ids.push_back(t.id);
      rows.frames.push_back(static_cast<int>(k));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

int run_generate(const CommonArgs& common, const std::string& out_dir) {
  RunConfig cfg = load_config(common);
  fs::create_directories(out_dir);

  auto configs = demo_scenario_set(cfg.get_double("frame_rate"),
                                   cfg.get_double("noise_sigma"),
                                   cfg.get_double("ped_speed"),
                                   cfg.get_double("turn_radius"));
  auto out = generate_dataset(configs,
                              static_cast<int>(cfg.get_int("encounters_per_config")),
                              cfg.seed(), cfg.get_double("lowess_span"),
                              static_cast<int>(cfg.get_int("lowess_robust_iters")),
                              cfg.get_double("t_max"));

  const fs::path dir(out_dir);
  write_trajectory_csv(dir / "trajectories.csv", out.tracks);

  {
    std::ofstream behaviors(dir / "behaviors.csv", std::ios::binary);
    behaviors << "traj_id,scenario,behavior\n";
    for (const auto& enc : out.encounters) {
      behaviors << enc.noisy.id << ',' << to_string(enc.scenario) << ','
                << to_string(enc.behavior) << '\n';
    }
  }
  {
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    const char* names[5] = {"px", "py", "vx", "vy", "ttc"};
    summary << "encounters = " << out.encounters.size() << '\n';
    summary << "data_points = " << out.features.total_rows() << '\n';
    for (int f = 0; f < 5; ++f) {
      summary << names[f] << "_min = " << format_double(out.quartiles.min[f]) << '\n'
              << names[f] << "_q25 = " << format_double(out.quartiles.q25[f]) << '\n'
              << names[f] << "_median = " << format_double(out.quartiles.median[f]) << '\n'
              << names[f] << "_q75 = " << format_double(out.quartiles.q75[f]) << '\n'
              << names[f] << "_max = " << format_double(out.quartiles.max[f]) << '\n';
    }
  }

  emit_manifest(dir / "manifest", "generate",
                {{"out_dir", out_dir},
                 {"encounters", std::to_string(out.encounters.size())},
                 {"data_points", std::to_string(out.features.total_rows())}},
                cfg);
  std::cout << "generated " << out.encounters.size() << " encounters ("
            << out.features.total_rows() << " data points) into " << out_dir
            << "\n";
  return 0;
}

int run_features(const CommonArgs& common, const std::string& in,
                 const std::string& out, const std::string& smoothed_out) {
  RunConfig cfg = load_config(common);
  auto tracks = read_trajectory_csv(in, cfg.get_double("frame_rate"));

  FeatureDataset ds;
  std::vector<PedestrianTrack> smoothed;
  for (const auto& track : tracks) {
    auto s = lowess_smooth(track, cfg.get_double("lowess_span"),
                           static_cast<int>(cfg.get_int("lowess_robust_iters")));
    ds.tracks.push_back(build_feature_track(s, cfg.get_double("t_max")));
    smoothed.push_back(std::move(s));
  }
  write_feature_csv(out, ds);
  if (!smoothed_out.empty()) write_trajectory_csv(smoothed_out, smoothed);

  emit_manifest(fs::path(out).string() + ".manifest", "features",
                {{"in", in}, {"out", out}, {"smoothed_out", smoothed_out}}, cfg);
  std::cout << "extracted " << ds.total_rows() << " feature states from "
            << tracks.size() << " tracks\n";
  return 0;
}

int run_train_predictor(const CommonArgs& common, const std::string& in,
                        const std::string& model_out, const std::string& loss_out) {
  RunConfig cfg = load_config(common);
  auto tracks = read_trajectory_csv(in, cfg.get_double("frame_rate"));
  TrainConfig tc = train_config_from(cfg);
  auto result = train_lstm(tracks, tc);
  save_lstm(model_out, result.model);

  if (!loss_out.empty()) {
    std::ofstream out(loss_out, std::ios::binary);
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      out << e + 1 << ',' << format_double(result.loss_history[e]) << '\n';
    }
  }

  // Training-fit sanity: ADE on the training windows against the configured
  // threshold.
  const double fit_ade = evaluate_ade(result.model, tracks, tc.t_pred, tc.min_prefix);
  const double fit_threshold = cfg.get_double("train_fit_ade");
  if (fit_ade >= fit_threshold) {
    std::cerr << "warning: training-fit ADE " << fit_ade
              << " m exceeds train_fit_ade = " << fit_threshold << " m\n";
  }

  emit_manifest(fs::path(model_out).string() + ".manifest", "train-predictor",
                {{"in", in},
                 {"model_out", model_out},
                 {"final_loss", format_double(result.loss_history.back())},
                 {"train_fit_ade_measured", format_double(fit_ade)}},
                cfg);
  std::cout << "trained predictor on " << tracks.size() << " tracks; final loss "
            << result.loss_history.back() << ", training-fit ADE " << fit_ade
            << " m\n";
  return 0;
}

int run_sweep_window(const CommonArgs& common, const std::string& in,
                     const std::string& out, int t_min, int t_max) {
  RunConfig cfg = load_config(common);
  auto tracks = read_trajectory_csv(in, cfg.get_double("frame_rate"));
  auto rows = sweep_prediction_window(tracks, t_min, t_max, train_config_from(cfg),
                                      static_cast<int>(cfg.get_int("folds")),
                                      derive_seed(cfg.seed(), "sweep", 0),
                                      static_cast<int>(cfg.get_int("cv_repeats")));
  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw DataError("cannot write '" + out + "'");
  csv << "T_pred,mean_ade\n";
  for (const auto& row : rows) {
    csv << row.t_pred << ',' << format_double(row.mean_ade) << '\n';
  }
  emit_manifest(fs::path(out).string() + ".manifest", "sweep-window",
                {{"in", in}, {"out", out}}, cfg);
  std::cout << "swept horizons " << t_min << ".." << t_max << " over "
            << tracks.size() << " tracks\n";
  return 0;
}

std::vector<RiskLabel> parse_label_map(const std::string& text, int k) {
  std::vector<RiskLabel> labels(static_cast<std::size_t>(k),
                                RiskLabel::IndependentlySafe);
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw DataError("--label-map expects cluster=RiskLabel pairs");
    }
    int cluster = std::stoi(item.substr(0, eq));
    if (cluster < 0 || cluster >= k) {
      throw DataError("--label-map cluster index out of range");
    }
    labels[static_cast<std::size_t>(cluster)] =
        risk_label_from_string(item.substr(eq + 1));
    seen[static_cast<std::size_t>(cluster)] = true;
  }
  for (bool s : seen) {
    if (!s) throw DataError("--label-map must cover every cluster");
  }
  return labels;
}

int run_cluster(const CommonArgs& common, const std::string& in,
                const std::string& out, const std::string& model_out,
                const std::string& labeled_out, int k_flag,
                const std::string& label_map) {
  RunConfig cfg = load_config(common);
  auto feat = read_feature_csv(in, cfg.get_double("frame_rate"));
  const int k = k_flag > 0 ? k_flag : static_cast<int>(cfg.get_int("k"));

  auto method = cluster_method_from_string(cfg.get_string("cluster_method"));
  auto options = cluster_options_from(cfg);
  auto model = fit_cluster_model(feat.dataset, method, k, options,
                                 derive_seed(cfg.seed(), "cluster-cmd", 0));

  if (!label_map.empty()) {
    model.labels = parse_label_map(label_map, k);
    model.has_labels = true;
  } else if (k == kNumRiskLabels) {
    assign_semantic_labels(model);
  } else {
    throw DataError("cluster: the assignment CSV carries risk names; either use "
                    "K = 4 (semantic rule) or supply --label-map");
  }

  auto rows = flatten_with_keys(feat.dataset);
  std::vector<ClusterAssignmentRow> assignment(rows.states.size());
  std::vector<RiskLabel> risks(rows.states.size(), RiskLabel::IndependentlySafe);
  for (std::size_t i = 0; i < rows.states.size(); ++i) {
    int cluster = model.assignment[i];
    assignment[i].traj_id = rows.traj_ids[i];
    assignment[i].frame = rows.frames[i];
    assignment[i].cluster = cluster;
    assignment[i].risk = model.labels[static_cast<std::size_t>(cluster)];
    risks[i] = assignment[i].risk;
  }
  write_cluster_csv(out, assignment);
  if (!model_out.empty()) save_cluster(model_out, model);
  if (!labeled_out.empty()) {
    std::vector<int> clusters(model.assignment.begin(), model.assignment.end());
    write_feature_csv(labeled_out, feat.dataset, &clusters,
                      model.has_labels ? &risks : nullptr);
  }

  ManifestEntries io{{"in", in}, {"out", out}, {"model_out", model_out},
                     {"k_effective", std::to_string(k)},
                     {"wcss", format_double(model.km.wcss)}};
  if (model.has_labels) {
    for (int c = 0; c < k; ++c) {
      io.emplace_back("label_cluster_" + std::to_string(c),
                      to_string(model.labels[static_cast<std::size_t>(c)]));
    }
  }
  emit_manifest(fs::path(out).string() + ".manifest", "cluster", io, cfg);
  std::cout << "clustered " << rows.states.size() << " states into " << k
            << " clusters (wcss " << model.km.wcss << ")\n";
  return 0;
}

int run_select_k(const CommonArgs& common, const std::string& in,
                 const std::string& out, int k_min_flag, int k_max_flag) {
  RunConfig cfg = load_config(common);
  auto feat = read_feature_csv(in, cfg.get_double("frame_rate"));
  const int k_min = k_min_flag > 0 ? k_min_flag : static_cast<int>(cfg.get_int("k_min"));
  const int k_max = k_max_flag > 0 ? k_max_flag : static_cast<int>(cfg.get_int("k_max"));

  auto method = cluster_method_from_string(cfg.get_string("cluster_method"));
  auto options = cluster_options_from(cfg);
  auto sel = select_k(feat.dataset, method, k_min, k_max, options,
                      derive_seed(cfg.seed(), "select-k-cmd", 0));

  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw DataError("cannot write '" + out + "'");
  csv << "K,AIC,BIC,silhouette\n";
  for (const auto& row : sel.table) {
    csv << row.k << ',' << format_double(row.aic) << ',' << format_double(row.bic)
        << ',' << format_double(row.silhouette) << '\n';
  }

  ManifestEntries io{{"in", in},
                     {"out", out},
                     {"selected_k", std::to_string(sel.selected_k)}};
  if (sel.eigengap_k > 0) {
    io.emplace_back("eigengap_k", std::to_string(sel.eigengap_k));
  }
  emit_manifest(fs::path(out).string() + ".manifest", "select-k", io, cfg);
  std::cout << "selected K = " << sel.selected_k << " by BIC over [" << k_min
            << ", " << k_max << "]\n";
  return 0;
}

int run_compare_methods(const CommonArgs& common, const std::string& in,
                        const std::string& out, int k_flag) {
  RunConfig cfg = load_config(common);
  auto feat = read_feature_csv(in, cfg.get_double("frame_rate"));
  const int k = k_flag > 0 ? k_flag : static_cast<int>(cfg.get_int("k"));

  auto options = cluster_options_from(cfg);
  auto cmp = compare_methods(feat.dataset, k, options,
                             derive_seed(cfg.seed(), "compare-cmd", 0));

  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw DataError("cannot write '" + out + "'");
  csv << "method,mean_silhouette\n";
  csv << "kpca-kmc," << format_double(cmp.kpca_kmc_silhouette) << '\n';
  csv << "spectral," << format_double(cmp.spectral_silhouette) << '\n';

  emit_manifest(fs::path(out).string() + ".manifest", "compare-methods",
                {{"in", in}, {"out", out}, {"chosen", to_string(cmp.chosen)}}, cfg);
  std::cout << "chose " << to_string(cmp.chosen) << " (kpca-kmc "
            << cmp.kpca_kmc_silhouette << " vs spectral "
            << cmp.spectral_silhouette << ")\n";
  return 0;
}

int run_train_classifier(const CommonArgs& common, const std::string& features_in,
                         const std::string& clusters_in, const std::string& model_out,
                         const std::string& variant_flag, const std::string& report_out) {
  RunConfig cfg = load_config(common);
  auto feat = read_feature_csv(features_in, cfg.get_double("frame_rate"));
  auto rows = flatten_with_keys(feat.dataset);

  // Risk labels either ride along in the feature CSV or come from a cluster
  // assignment CSV aligned row by row.
  std::vector<RiskLabel> labels;
  if (!clusters_in.empty()) {
    auto assignment = read_cluster_csv(clusters_in);
    if (assignment.size() != rows.states.size()) {
      throw DataError("cluster assignment rows do not match the feature rows");
    }
    labels.reserve(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i].traj_id != rows.traj_ids[i] ||
          assignment[i].frame != rows.frames[i]) {
        throw DataError("cluster assignment is misaligned at row " +
                        std::to_string(i + 2));
      }
      labels.push_back(assignment[i].risk);
    }
  } else if (feat.risks.has_value()) {
    labels = *feat.risks;
  } else {
    throw DataError("train-classifier needs --clusters or a risk column");
  }

  const std::string variant_name =
      variant_flag.empty() ? cfg.get_string("feature_variant") : variant_flag;
  auto variant = feature_variant_from_string(variant_name);
  auto kernel = kernel_from_config(cfg.get_string("svm_kernel"),
                                   cfg.get_double("svm_gamma"),
                                   cfg.get_double("svm_coef0"));
  const double c = cfg.get_double("svm_c");
  const double tol = cfg.get_double("svm_tol");
  const int max_sweeps = static_cast<int>(cfg.get_int("svm_max_sweeps"));

  auto model = svm_train_multiclass(rows.states, labels, kernel, c, variant, tol,
                                    max_sweeps);
  save_svm(model_out, model);

  double mean_cv_accuracy = -1.0;
  if (!report_out.empty()) {
    // Trajectory-granular 5-fold CV with per-fold throughput.
    const int folds = static_cast<int>(cfg.get_int("folds"));
    auto fold_of_track = kfold_split(feat.dataset.tracks.size(), folds, 1,
                                     derive_seed(cfg.seed(), "clf-cv", 0))[0];
    std::vector<int> fold_of_row;
    for (std::size_t t = 0; t < feat.dataset.tracks.size(); ++t) {
      for (std::size_t k = 0; k < feat.dataset.tracks[t].states.size(); ++k) {
        fold_of_row.push_back(fold_of_track[t]);
      }
    }
    std::ofstream csv(report_out, std::ios::binary);
    if (!csv) throw DataError("cannot write '" + report_out + "'");
    csv << "kernel,variant,fold,accuracy,preds_per_sec\n";
    double acc_sum = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::vector<FeatureState> train_x, test_x;
      std::vector<RiskLabel> train_y, test_y;
      for (std::size_t i = 0; i < rows.states.size(); ++i) {
        if (fold_of_row[i] == f) {
          test_x.push_back(rows.states[i]);
          test_y.push_back(labels[i]);
        } else {
          train_x.push_back(rows.states[i]);
          train_y.push_back(labels[i]);
        }
      }
      auto fold_model =
          svm_train_multiclass(train_x, train_y, kernel, c, variant, tol, max_sweeps);
      auto eval = evaluate_classifier(fold_model, test_x, test_y);
      acc_sum += eval.accuracy;
      csv << to_string(fold_model.kernel) << ',' << to_string(variant) << ','
          << f << ',' << format_double(eval.accuracy) << ','
          << format_double(eval.preds_per_sec) << '\n';
    }
    mean_cv_accuracy = acc_sum / folds;
  }

  ManifestEntries io{{"features", features_in},
                     {"clusters", clusters_in},
                     {"model_out", model_out},
                     {"variant_effective", variant_name},
                     {"machines", std::to_string(model.machines.size())}};
  if (mean_cv_accuracy >= 0.0) {
    io.emplace_back("cv_accuracy", format_double(mean_cv_accuracy));
  }
  emit_manifest(fs::path(model_out).string() + ".manifest", "train-classifier", io,
                cfg);
  std::cout << "trained " << to_string(model.kernel) << " classifier on "
            << rows.states.size() << " states (" << model.machines.size()
            << " pair machines)\n";
  return 0;
}

int run_predict(const CommonArgs& common, const std::string& in,
                const std::string& lstm_path, const std::string& svm_path,
                const std::string& traj, int t_flag, const std::string& out) {
  RunConfig cfg = load_config(common);
  auto tracks = read_trajectory_csv(in, cfg.get_double("frame_rate"));
  auto lstm = load_lstm(lstm_path);
  auto clf = load_svm(svm_path);
  const int t_pred = static_cast<int>(cfg.get_int("t_pred"));
  const int min_prefix = static_cast<int>(cfg.get_int("min_prefix"));
  const double t_max = cfg.get_double("t_max");

  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw DataError("cannot write '" + out + "'");
  csv << "traj_id,t,step,pred_x,pred_y,predicted_risk\n";

  std::size_t windows = 0;
  for (const auto& track : tracks) {
    if (!traj.empty() && track.id != traj) continue;
    const int len = static_cast<int>(track.points.size());
    for (int t = min_prefix; t + t_pred <= len; ++t) {
      if (t_flag > 0 && t != t_flag) continue;
      PedestrianTrack prefix;
      prefix.id = track.id;
      prefix.frame_rate = track.frame_rate;
      prefix.points.assign(track.points.begin(), track.points.begin() + t);
      auto points = sequence_forward(lstm, prefix.points, t_pred);
      auto seq = classify_future(clf, prefix, points, t_max);
      for (int s = 0; s < t_pred; ++s) {
        csv << track.id << ',' << t << ',' << s + 1 << ','
            << format_double(points[static_cast<std::size_t>(s)].x) << ','
            << format_double(points[static_cast<std::size_t>(s)].y) << ','
            << to_string(seq.labels[static_cast<std::size_t>(s)]) << '\n';
      }
      ++windows;
    }
  }
  if (windows == 0) throw DataError("predict: no matching window");

  emit_manifest(fs::path(out).string() + ".manifest", "predict",
                {{"in", in},
                 {"lstm", lstm_path},
                 {"svm", svm_path},
                 {"windows", std::to_string(windows)}},
                cfg);
  std::cout << "predicted " << windows << " risk sequences\n";
  return 0;
}

int run_evaluate(const CommonArgs& common, const std::string& in,
                 const std::string& lstm_path, const std::string& svm_path,
                 const std::string& out_dir) {
  RunConfig cfg = load_config(common);
  auto tracks = read_trajectory_csv(in, cfg.get_double("frame_rate"));
  auto lstm = load_lstm(lstm_path);
  auto clf = load_svm(svm_path);

  EvaluateOptions options;
  options.t_pred = static_cast<int>(cfg.get_int("t_pred"));
  options.min_prefix = static_cast<int>(cfg.get_int("min_prefix"));
  options.t_max = cfg.get_double("t_max");

  auto report = end_to_end_evaluate(tracks, lstm, clf, options);
  write_report(out_dir, report);

  emit_manifest(fs::path(out_dir) / "manifest", "evaluate",
                {{"in", in},
                 {"lstm", lstm_path},
                 {"svm", svm_path},
                 {"out_dir", out_dir},
                 {"overall_accuracy", format_double(report.overall_accuracy)}},
                cfg);
  std::cout << "evaluated " << report.windows << " windows; overall accuracy "
            << report.overall_accuracy << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pedestrian risk level prediction toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CommonArgs common;

  auto* generate = app.add_subcommand("generate", "simulate encounter dataset");
  std::string gen_out_dir;
  generate->add_option("--out-dir", gen_out_dir, "output directory")->required();
  add_common(generate, common);

  auto* features = app.add_subcommand("features", "smooth tracks and extract features");
  std::string feat_in, feat_out, feat_smoothed;
  features->add_option("--in", feat_in, "trajectory CSV")->required();
  features->add_option("--out", feat_out, "feature CSV")->required();
  features->add_option("--smoothed-out", feat_smoothed, "smoothed trajectory CSV");
  add_common(features, common);

  auto* train_pred = app.add_subcommand("train-predictor", "train the LSTM predictor");
  std::string tp_in, tp_model, tp_loss;
  train_pred->add_option("--in", tp_in, "trajectory CSV (smoothed)")->required();
  train_pred->add_option("--model-out", tp_model, "model JSON path")->required();
  train_pred->add_option("--loss-out", tp_loss, "per-epoch loss CSV");
  add_common(train_pred, common);

  auto* sweep = app.add_subcommand("sweep-window", "ADE versus prediction horizon");
  std::string sw_in, sw_out;
  int sw_min = 1, sw_max = 8;
  sweep->add_option("--in", sw_in, "trajectory CSV (smoothed)")->required();
  sweep->add_option("--out", sw_out, "sweep CSV")->required();
  sweep->add_option("--t-min", sw_min, "smallest horizon");
  sweep->add_option("--t-max", sw_max, "largest horizon");
  add_common(sweep, common);

  auto* cluster = app.add_subcommand("cluster", "fit the risk-pattern clustering");
  std::string cl_in, cl_out, cl_model, cl_labeled, cl_label_map;
  int cl_k = 0;
  cluster->add_option("--in", cl_in, "feature CSV")->required();
  cluster->add_option("--out", cl_out, "cluster assignment CSV")->required();
  cluster->add_option("--model-out", cl_model, "cluster model JSON");
  cluster->add_option("--labeled-features", cl_labeled,
                      "feature CSV with cluster and risk columns");
  cluster->add_option("--k", cl_k, "cluster count (default from config)");
  cluster->add_option("--label-map", cl_label_map,
                      "override cluster=RiskLabel,... semantic map");
  add_common(cluster, common);

  auto* selectk = app.add_subcommand("select-k", "AIC/BIC/silhouette versus K");
  std::string sk_in, sk_out;
  int sk_min = 0, sk_max = 0;
  selectk->add_option("--in", sk_in, "feature CSV")->required();
  selectk->add_option("--out", sk_out, "criterion table CSV")->required();
  selectk->add_option("--k-min", sk_min, "smallest K");
  selectk->add_option("--k-max", sk_max, "largest K");
  add_common(selectk, common);

  auto* compare = app.add_subcommand("compare-methods",
                                     "silhouette comparison of the two methods");
  std::string cm_in, cm_out;
  int cm_k = 0;
  compare->add_option("--in", cm_in, "feature CSV")->required();
  compare->add_option("--out", cm_out, "comparison CSV")->required();
  compare->add_option("--k", cm_k, "cluster count");
  add_common(compare, common);

  auto* train_clf = app.add_subcommand("train-classifier", "train the risk SVM");
  std::string tc_features, tc_clusters, tc_model, tc_variant, tc_report;
  train_clf->add_option("--features", tc_features, "feature CSV")->required();
  train_clf->add_option("--clusters", tc_clusters, "cluster assignment CSV");
  train_clf->add_option("--model-out", tc_model, "model JSON path")->required();
  train_clf->add_option("--variant", tc_variant, "feature variant (all|ttc|...)");
  train_clf->add_option("--report", tc_report, "cross-validation report CSV");
  add_common(train_clf, common);

  auto* predict = app.add_subcommand("predict", "predict risk sequences");
  std::string pr_in, pr_lstm, pr_svm, pr_traj, pr_out;
  int pr_t = 0;
  predict->add_option("--in", pr_in, "trajectory CSV (smoothed)")->required();
  predict->add_option("--lstm", pr_lstm, "LSTM model JSON")->required();
  predict->add_option("--svm", pr_svm, "SVM model JSON")->required();
  predict->add_option("--traj", pr_traj, "restrict to one traj_id");
  predict->add_option("--t", pr_t, "restrict to one prefix length");
  predict->add_option("--out", pr_out, "risk sequence CSV")->required();
  add_common(predict, common);

  auto* evaluate = app.add_subcommand("evaluate", "end-to-end risk evaluation");
  std::string ev_in, ev_lstm, ev_svm, ev_out;
  evaluate->add_option("--in", ev_in, "trajectory CSV (smoothed, held out)")->required();
  evaluate->add_option("--lstm", ev_lstm, "LSTM model JSON")->required();
  evaluate->add_option("--svm", ev_svm, "SVM model JSON")->required();
  evaluate->add_option("--out-dir", ev_out, "report directory")->required();
  add_common(evaluate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(common, gen_out_dir);
    if (features->parsed()) return run_features(common, feat_in, feat_out, feat_smoothed);
    if (train_pred->parsed())
      return run_train_predictor(common, tp_in, tp_model, tp_loss);
    if (sweep->parsed()) return run_sweep_window(common, sw_in, sw_out, sw_min, sw_max);
    if (cluster->parsed())
      return run_cluster(common, cl_in, cl_out, cl_model, cl_labeled, cl_k, cl_label_map);
    if (selectk->parsed()) return run_select_k(common, sk_in, sk_out, sk_min, sk_max);
    if (compare->parsed()) return run_compare_methods(common, cm_in, cm_out, cm_k);
    if (train_clf->parsed())
      return run_train_classifier(common, tc_features, tc_clusters, tc_model,
                                  tc_variant, tc_report);
    if (predict->parsed())
      return run_predict(common, pr_in, pr_lstm, pr_svm, pr_traj, pr_t, pr_out);
    if (evaluate->parsed()) return run_evaluate(common, ev_in, ev_lstm, ev_svm, ev_out);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
