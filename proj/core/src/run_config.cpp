#include "pedrisk/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "pedrisk/csv_io.hpp"
#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig() {
  auto add = [this](const std::string& key, Type type, const std::string& def,
                    std::vector<std::string> allowed = {}) {
    order_.push_back(key);
    entries_[key] = Entry{type, def, std::move(allowed)};
  };

  // reproducibility / execution
  add("seed", Type::Int, "1");
  add("jobs", Type::Int, "1");
  // sampling and features
  add("frame_rate", Type::Double, "6.5");
  add("t_max", Type::Double, "10");
  add("lowess_span", Type::Double, "0.3");
  add("lowess_robust_iters", Type::Int, "1");
  // scenario generation
  add("noise_sigma", Type::Double, "0.05");
  add("encounters_per_config", Type::Int, "16");
  add("ped_speed", Type::Double, "1.3");
  add("duration", Type::Double, "4");
  add("turn_radius", Type::Double, "10");
  // trajectory predictor
  add("t_pred", Type::Int, "5");
  add("min_prefix", Type::Int, "4");
  add("hidden_dim", Type::Int, "32");
  add("learning_rate", Type::Double, "0.02");
  add("lr_decay", Type::Double, "0.99");
  add("epochs", Type::Int, "80");
  add("batch_size", Type::Int, "16");
  add("momentum", Type::Double, "0.9");
  add("clip_norm", Type::Double, "5");
  add("folds", Type::Int, "5");
  add("cv_repeats", Type::Int, "10");
  add("train_fit_ade", Type::Double, "0.5");
  // clustering
  add("k", Type::Int, "4");
  add("k_min", Type::Int, "2");
  add("k_max", Type::Int, "8");
  add("kmeans_restarts", Type::Int, "20");
  add("kmeans_max_iters", Type::Int, "100");
  add("kpca_kernel", Type::String, "gaussian", {"linear", "poly2", "poly3", "gaussian"});
  add("kpca_gamma", Type::Double, "0");  // 0: 1 / (dims * mean feature variance)
  add("kpca_coef0", Type::Double, "1");
  add("kpca_var_ratio", Type::Double, "0.95");
  add("knn_k", Type::Int, "10");
  add("sigma_s", Type::Double, "0");  // 0: median connected-pair distance
  add("laplacian", Type::String, "symmetric", {"unnormalized", "symmetric"});
  add("cluster_method", Type::String, "kpca-kmc", {"kpca-kmc", "spectral"});
  add("feature_variant", Type::String, "all", {"location", "velocity", "ttc", "all"});
  // risk classifier
  add("svm_kernel", Type::String, "gaussian", {"linear", "quadratic", "cubic", "gaussian"});
  add("svm_c", Type::Double, "10");
  add("svm_tol", Type::Double, "0.001");
  add("svm_gamma", Type::Double, "0");  // 0: 1 / (dims * mean feature variance)
  add("svm_coef0", Type::Double, "1");
  add("svm_max_sweeps", Type::Int, "20000");
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  RunConfig cfg;
  cfg.load_file(path);
  return cfg;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      set(key, value);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw DataError("unknown config key '" + key + "'");
  check_value(key, it->second, value);
}

void RunConfig::check_value(const std::string& key, Entry& entry,
                            const std::string& value) {
  switch (entry.type) {
    case Type::Int: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || p != value.data() + value.size()) {
        throw DataError("key '" + key + "' expects an integer, got '" + value + "'");
      }
      break;
    }
    case Type::Double: {
      double v = parse_double(value, "key '" + key + "'");
      if (!std::isfinite(v)) {
        throw DataError("key '" + key + "' expects a finite number");
      }
      break;
    }
    case Type::String: {
      if (!entry.allowed.empty() &&
          std::find(entry.allowed.begin(), entry.allowed.end(), value) ==
              entry.allowed.end()) {
        std::string opts;
        for (const auto& a : entry.allowed) opts += (opts.empty() ? "" : "|") + a;
        throw DataError("key '" + key + "' expects one of " + opts + ", got '" +
                        value + "'");
      }
      break;
    }
  }
  entry.value = value;
}

bool RunConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const RunConfig::Entry& RunConfig::lookup(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw DataError("unknown config key '" + key + "'");
  return it->second;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  const Entry& e = lookup(key);
  if (e.type != Type::Int) throw DataError("config key '" + key + "' is not an integer");
  std::int64_t v = 0;
  std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  return v;
}

double RunConfig::get_double(const std::string& key) const {
  const Entry& e = lookup(key);
  if (e.type == Type::Int) return static_cast<double>(get_int(key));
  if (e.type != Type::Double) throw DataError("config key '" + key + "' is not a number");
  return parse_double(e.value, "key '" + key + "'");
}

const std::string& RunConfig::get_string(const std::string& key) const {
  return lookup(key).value;
}

std::uint64_t RunConfig::seed() const {
  return static_cast<std::uint64_t>(get_int("seed"));
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.emplace_back(key, entries_.at(key).value);
  return out;
}

}  // namespace pedrisk
