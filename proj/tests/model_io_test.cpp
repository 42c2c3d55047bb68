#include <doctest.h>

#include <filesystem>

#include "pedrisk/clustering.hpp"
#include "pedrisk/error.hpp"
#include "pedrisk/model_io.hpp"
#include "pedrisk/rng.hpp"

using namespace pedrisk;

namespace {

FeatureDataset tiny_dataset(std::uint64_t seed) {
  Rng rng(seed);
  FeatureDataset ds;
  ds.tracks.resize(1);
  ds.tracks[0].id = "t";
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 10; ++i) {
      ds.tracks[0].states.push_back({5.0 * c + 0.2 * rng.normal(),
                                     -2.0 * c + 0.2 * rng.normal(),
                                     0.5 * c + 0.1 * rng.normal(),
                                     0.1 * rng.normal(),
                                     1.0 + 2.0 * c + 0.1 * rng.normal()});
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("lstm model json round trip is bit-faithful") {
  auto model = make_lstm(6, 12345);
  model.t_pred = 7;
  model.norm_mean = {3.25, -1.5};
  model.norm_scale = {2.0, 0.125};

  auto text = lstm_to_json(model);
  auto back = lstm_from_json(text);
  CHECK(back.t_pred == 7);
  CHECK((back.w_f - model.w_f).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.w_c - model.w_c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.w_fc - model.w_fc).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.b_f == model.b_f);
  CHECK(back.b_fc == model.b_fc);
  CHECK(back.norm_mean == model.norm_mean);
  CHECK(back.norm_scale == model.norm_scale);

  // Serialize -> parse -> serialize is a fixed point.
  CHECK(lstm_to_json(back) == text);
}

TEST_CASE("svm model json round trip preserves decisions") {
  Rng rng(5);
  std::vector<FeatureState> states;
  std::vector<RiskLabel> labels;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 12; ++i) {
      states.push_back({4.0 * c + 0.3 * rng.normal(), 0.3 * rng.normal(),
                        -1.0 * c, 0.0, 2.0 * c + 1.0});
      labels.push_back(static_cast<RiskLabel>(c));
    }
  }
  auto model = svm_train_multiclass(states, labels, KernelSpec::gaussian(0.0),
                                    10.0, FeatureVariant::All);
  auto back = svm_from_json(svm_to_json(model));
  CHECK(back.classes == model.classes);
  CHECK(back.machines.size() == model.machines.size());
  for (const auto& s : states) {
    CHECK(svm_predict(back, s) == svm_predict(model, s));
  }
  CHECK(svm_to_json(back) == svm_to_json(model));
}

TEST_CASE("cluster model json round trip preserves projections") {
  auto ds = tiny_dataset(3);
  ClusterOptions options;
  auto model = fit_cluster_model(ds, ClusterMethod::KpcaKmc, 4, options, 5);
  assign_semantic_labels(model);

  auto back = cluster_from_json(cluster_to_json(model));
  CHECK(back.k == 4);
  CHECK(back.assignment == model.assignment);
  CHECK(back.has_labels);
  CHECK(back.labels == model.labels);
  CHECK((back.km.centroids - model.km.centroids).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd probe(5);
  probe << 5.0, -2.0, 0.5, 0.0, 3.0;
  Eigen::VectorXd a = model.kpca.project(model.standardizer.apply_row(probe));
  Eigen::VectorXd b = back.kpca.project(back.standardizer.apply_row(probe));
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model files save and load through the filesystem") {
  auto dir = std::filesystem::temp_directory_path() / "pedrisk_model_io";
  std::filesystem::create_directories(dir);
  auto model = make_lstm(4, 9);
  save_lstm(dir / "m.json", model);
  auto back = load_lstm(dir / "m.json");
  CHECK((back.w_f - model.w_f).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("envelope validation rejects wrong documents") {
  CHECK_THROWS_AS(lstm_from_json("not json"), DataError);
  CHECK_THROWS_AS(lstm_from_json("{\"format\":\"other\"}"), DataError);
  auto model = make_lstm(3, 2);
  auto text = lstm_to_json(model);
  CHECK_THROWS_AS(svm_from_json(text), DataError);  // kind mismatch

  // Out-of-range literals parse to infinity; the loader must reject them.
  auto pos = text.find("\"b_f\":[");
  REQUIRE(pos != std::string::npos);
  std::string poisoned = text.substr(0, pos) + "\"b_f\":[1e999,0,0]," +
                         text.substr(text.find(']', pos) + 2);
  CHECK_THROWS_AS(lstm_from_json(poisoned), DataError);
}
