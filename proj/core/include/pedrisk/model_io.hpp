#pragma once

#include <filesystem>
#include <string>

#include "pedrisk/clustering.hpp"
#include "pedrisk/lstm.hpp"
#include "pedrisk/svm.hpp"

namespace pedrisk {

// Versioned JSON envelope shared by every model kind. Doubles are written
// with enough significant digits (up to 17) that parsing reproduces the
// exact bit pattern; save/load round trips are therefore bit-faithful.

std::string lstm_to_json(const LstmModel& model);
LstmModel lstm_from_json(const std::string& text);
void save_lstm(const std::filesystem::path& path, const LstmModel& model);
LstmModel load_lstm(const std::filesystem::path& path);

std::string svm_to_json(const SvmModel& model);
SvmModel svm_from_json(const std::string& text);
void save_svm(const std::filesystem::path& path, const SvmModel& model);
SvmModel load_svm(const std::filesystem::path& path);

std::string cluster_to_json(const ClusterModel& model);
ClusterModel cluster_from_json(const std::string& text);
void save_cluster(const std::filesystem::path& path, const ClusterModel& model);
ClusterModel load_cluster(const std::filesystem::path& path);

}  // namespace pedrisk
