#include "pedrisk/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "pedrisk-model";
constexpr int kVersion = 1;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {   // row-major
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  j["data"] = data;
  return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DataError("model json: matrix payload size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++];
  }
  if (!m.allFinite()) throw DataError("model json: non-finite matrix entry");
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const json& j) {
  auto data = j.get<std::vector<double>>();
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
      data.data(), static_cast<Eigen::Index>(data.size()));
  if (!v.allFinite()) throw DataError("model json: non-finite vector entry");
  return v;
}

json kernel_to_json(const KernelSpec& k) {
  json j;
  switch (k.kind) {
    case KernelKind::Linear:
      j["kind"] = "linear";
      break;
    case KernelKind::Polynomial:
      j["kind"] = "polynomial";
      j["degree"] = k.degree;
      j["coef0"] = k.coef0;
      break;
    case KernelKind::Gaussian:
      j["kind"] = "gaussian";
      j["gamma"] = k.gamma;
      break;
  }
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return KernelSpec::linear();
  if (kind == "polynomial") {
    return KernelSpec::polynomial(j.at("degree").get<int>(),
                                  j.at("coef0").get<double>());
  }
  if (kind == "gaussian") return KernelSpec::gaussian(j.at("gamma").get<double>());
  throw DataError("model json: unknown kernel kind '" + kind + "'");
}

json envelope(const std::string& kind) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["kind"] = kind;
  return j;
}

json parse_envelope(const std::string& text, const std::string& kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model json: parse failure: ") + e.what());
  }
  if (j.value("format", "") != kFormat) {
    throw DataError("model json: not a pedrisk model document");
  }
  if (j.value("version", 0) != kVersion) {
    throw DataError("model json: unsupported version");
  }
  if (j.value("kind", "") != kind) {
    throw DataError("model json: expected kind '" + kind + "', got '" +
                    j.value("kind", "") + "'");
  }
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text << '\n';
  if (!out) throw DataError("failed to write '" + path.string() + "'");
}

json standardizer_to_json(const Standardizer& s) {
  json j;
  j["mean"] = vector_to_json(s.mean);
  j["scale"] = vector_to_json(s.scale);
  return j;
}

Standardizer standardizer_from_json(const json& j) {
  Standardizer s;
  s.mean = vector_from_json(j.at("mean"));
  s.scale = vector_from_json(j.at("scale"));
  return s;
}

}  // namespace

std::string lstm_to_json(const LstmModel& model) {
  json j = envelope("lstm");
  j["hidden_dim"] = model.hidden_dim();
  j["input_dim"] = 2;
  j["t_pred"] = model.t_pred;
  j["norm_mean"] = std::vector<double>{model.norm_mean(0), model.norm_mean(1)};
  j["norm_scale"] = std::vector<double>{model.norm_scale(0), model.norm_scale(1)};
  j["w_f"] = matrix_to_json(model.w_f);
  j["w_i"] = matrix_to_json(model.w_i);
  j["w_o"] = matrix_to_json(model.w_o);
  j["w_c"] = matrix_to_json(model.w_c);
  j["b_f"] = vector_to_json(model.b_f);
  j["b_i"] = vector_to_json(model.b_i);
  j["b_o"] = vector_to_json(model.b_o);
  j["b_c"] = vector_to_json(model.b_c);
  j["w_fc"] = matrix_to_json(model.w_fc);
  j["b_fc"] = std::vector<double>{model.b_fc(0), model.b_fc(1)};
  return j.dump();
}

LstmModel lstm_from_json(const std::string& text) {
  json j = parse_envelope(text, "lstm");
  LstmModel m;
  m.t_pred = j.at("t_pred").get<int>();
  auto nm = j.at("norm_mean").get<std::vector<double>>();
  auto ns = j.at("norm_scale").get<std::vector<double>>();
  auto bfc = j.at("b_fc").get<std::vector<double>>();
  if (nm.size() != 2 || ns.size() != 2 || bfc.size() != 2) {
    throw DataError("model json: lstm 2-vectors malformed");
  }
  m.norm_mean = {nm[0], nm[1]};
  m.norm_scale = {ns[0], ns[1]};
  m.b_fc = {bfc[0], bfc[1]};
  m.w_f = matrix_from_json(j.at("w_f"));
  m.w_i = matrix_from_json(j.at("w_i"));
  m.w_o = matrix_from_json(j.at("w_o"));
  m.w_c = matrix_from_json(j.at("w_c"));
  m.b_f = vector_from_json(j.at("b_f"));
  m.b_i = vector_from_json(j.at("b_i"));
  m.b_o = vector_from_json(j.at("b_o"));
  m.b_c = vector_from_json(j.at("b_c"));
  m.w_fc = matrix_from_json(j.at("w_fc"));
  const int h = j.at("hidden_dim").get<int>();
  if (m.hidden_dim() != h) throw DataError("model json: lstm dimensions inconsistent");
  return m;
}

std::string svm_to_json(const SvmModel& model) {
  json j = envelope("svm");
  std::vector<std::string> classes;
  for (auto c : model.classes) classes.push_back(to_string(c));
  j["classes"] = classes;
  j["variant"] = to_string(model.variant);
  j["standardizer"] = standardizer_to_json(model.standardizer);
  j["kernel"] = kernel_to_json(model.kernel);
  j["c"] = model.c;
  j["tol"] = model.tol;
  json machines = json::array();
  for (const auto& m : model.machines) {
    json jm;
    jm["positive"] = m.positive;
    jm["negative"] = m.negative;
    jm["bias"] = m.svm.bias;
    jm["coeffs"] = vector_to_json(m.svm.coeffs);
    jm["support_vectors"] = matrix_to_json(m.svm.support_vectors);
    machines.push_back(std::move(jm));
  }
  j["machines"] = machines;
  return j.dump();
}

SvmModel svm_from_json(const std::string& text) {
  json j = parse_envelope(text, "svm");
  SvmModel m;
  for (const auto& name : j.at("classes")) {
    m.classes.push_back(risk_label_from_string(name.get<std::string>()));
  }
  m.variant = feature_variant_from_string(j.at("variant").get<std::string>());
  m.standardizer = standardizer_from_json(j.at("standardizer"));
  m.kernel = kernel_from_json(j.at("kernel"));
  m.c = j.at("c").get<double>();
  m.tol = j.at("tol").get<double>();
  for (const auto& jm : j.at("machines")) {
    SvmModel::PairMachine machine;
    machine.positive = jm.at("positive").get<int>();
    machine.negative = jm.at("negative").get<int>();
    machine.svm.kernel = m.kernel;
    machine.svm.c = m.c;
    machine.svm.tol = m.tol;
    machine.svm.bias = jm.at("bias").get<double>();
    machine.svm.coeffs = vector_from_json(jm.at("coeffs"));
    machine.svm.support_vectors = matrix_from_json(jm.at("support_vectors"));
    if (machine.svm.coeffs.size() != machine.svm.support_vectors.rows()) {
      throw DataError("model json: svm coefficient count mismatch");
    }
    m.machines.push_back(std::move(machine));
  }
  if (m.machines.size() != m.classes.size() * (m.classes.size() - 1) / 2) {
    throw DataError("model json: svm pair-machine count mismatch");
  }
  return m;
}

std::string cluster_to_json(const ClusterModel& model) {
  json j = envelope("cluster");
  j["method"] = to_string(model.method);
  j["variant"] = to_string(model.variant);
  j["k"] = model.k;
  j["standardizer"] = standardizer_to_json(model.standardizer);
  j["assignment"] = model.assignment;
  j["centroids"] = matrix_to_json(model.km.centroids);
  j["wcss"] = model.km.wcss;

  if (model.method == ClusterMethod::KpcaKmc) {
    json kp;
    kp["kernel"] = kernel_to_json(model.kpca.kernel);
    kp["training_rows"] = matrix_to_json(model.kpca.training_rows);
    kp["row_means"] = vector_to_json(model.kpca.row_means);
    kp["grand_mean"] = model.kpca.grand_mean;
    kp["eigenvalues"] = vector_to_json(model.kpca.eigenvalues);
    kp["coeffs"] = matrix_to_json(model.kpca.coeffs);
    kp["scores"] = matrix_to_json(model.kpca.scores);
    kp["explained_variance"] = model.kpca.explained_variance;
    j["kpca"] = std::move(kp);
  }

  json summaries = json::array();
  for (const auto& s : model.summaries) {
    json js;
    js["median"] = std::vector<double>(s.median.begin(), s.median.end());
    js["count"] = s.count;
    summaries.push_back(std::move(js));
  }
  j["summaries"] = summaries;

  if (model.has_labels) {
    std::vector<std::string> labels;
    for (auto l : model.labels) labels.push_back(to_string(l));
    j["labels"] = labels;
  }
  return j.dump();
}

ClusterModel cluster_from_json(const std::string& text) {
  json j = parse_envelope(text, "cluster");
  ClusterModel m;
  m.method = cluster_method_from_string(j.at("method").get<std::string>());
  m.variant = feature_variant_from_string(j.at("variant").get<std::string>());
  m.k = j.at("k").get<int>();
  m.standardizer = standardizer_from_json(j.at("standardizer"));
  m.assignment = j.at("assignment").get<std::vector<int>>();
  m.km.centroids = matrix_from_json(j.at("centroids"));
  m.km.wcss = j.at("wcss").get<double>();

  if (m.method == ClusterMethod::KpcaKmc) {
    const json& kp = j.at("kpca");
    m.kpca.kernel = kernel_from_json(kp.at("kernel"));
    m.kpca.training_rows = matrix_from_json(kp.at("training_rows"));
    m.kpca.row_means = vector_from_json(kp.at("row_means"));
    m.kpca.grand_mean = kp.at("grand_mean").get<double>();
    m.kpca.eigenvalues = vector_from_json(kp.at("eigenvalues"));
    m.kpca.coeffs = matrix_from_json(kp.at("coeffs"));
    m.kpca.scores = matrix_from_json(kp.at("scores"));
    m.kpca.explained_variance = kp.at("explained_variance").get<double>();
  }

  for (const auto& js : j.at("summaries")) {
    ClusterSummary s;
    auto med = js.at("median").get<std::vector<double>>();
    if (med.size() != 5) throw DataError("model json: cluster median size mismatch");
    std::copy(med.begin(), med.end(), s.median.begin());
    s.count = js.at("count").get<std::size_t>();
    m.summaries.push_back(s);
  }
  if (j.contains("labels")) {
    for (const auto& name : j.at("labels")) {
      m.labels.push_back(risk_label_from_string(name.get<std::string>()));
    }
    m.has_labels = true;
  }
  return m;
}

void save_lstm(const std::filesystem::path& path, const LstmModel& model) {
  write_file(path, lstm_to_json(model));
}

LstmModel load_lstm(const std::filesystem::path& path) {
  return lstm_from_json(read_file(path));
}

void save_svm(const std::filesystem::path& path, const SvmModel& model) {
  write_file(path, svm_to_json(model));
}

SvmModel load_svm(const std::filesystem::path& path) {
  return svm_from_json(read_file(path));
}

void save_cluster(const std::filesystem::path& path, const ClusterModel& model) {
  write_file(path, cluster_to_json(model));
}

ClusterModel load_cluster(const std::filesystem::path& path) {
  return cluster_from_json(read_file(path));
}

}  // namespace pedrisk
