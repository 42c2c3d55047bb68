#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pedrisk/types.hpp"

namespace pedrisk {

// Shortest decimal representation that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

// --- trajectory CSV: header "traj_id,frame,x_m,y_m" ------------------------
// Frames must be contiguous from 0 per traj_id; violations raise DataError
// with the offending line number.
std::vector<PedestrianTrack> read_trajectory_csv(const std::filesystem::path& path,
                                                 double frame_rate);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<PedestrianTrack>& tracks);

// --- feature CSV: header "traj_id,frame,px,py,vx,vy,ttc[,cluster][,risk]" --
struct FeatureCsv {
  FeatureDataset dataset;
  // Parallel to dataset rows when the optional columns are present.
  std::optional<std::vector<int>> clusters;
  std::optional<std::vector<RiskLabel>> risks;
};

FeatureCsv read_feature_csv(const std::filesystem::path& path, double frame_rate);
void write_feature_csv(const std::filesystem::path& path,
                       const FeatureDataset& dataset,
                       const std::vector<int>* clusters = nullptr,
                       const std::vector<RiskLabel>* risks = nullptr);

// --- cluster assignment CSV: header "traj_id,frame,cluster,risk" -----------
struct ClusterAssignmentRow {
  std::string traj_id;
  int frame = 0;
  int cluster = 0;
  RiskLabel risk = RiskLabel::IndependentlySafe;
};

std::vector<ClusterAssignmentRow> read_cluster_csv(const std::filesystem::path& path);
void write_cluster_csv(const std::filesystem::path& path,
                       const std::vector<ClusterAssignmentRow>& rows);

// --- manifest: ordered "key = value" lines ---------------------------------
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace pedrisk
