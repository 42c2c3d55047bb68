#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pedrisk {

// Position of a pedestrian in the ego vehicle's body frame. x points along
// the vehicle heading (positive forward), y is lateral (positive left).
// Coordinates are in meters and must stay within the sensing sanity bound.
struct EgoFramePoint {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kSensingRangeBound = 200.0;  // |x|, |y| limit, meters

struct Velocity {
  double vx = 0.0;
  double vy = 0.0;
};

// One pedestrian's ego-frame track sampled at a uniform frame rate; point k
// corresponds to time k / frame_rate.
struct PedestrianTrack {
  std::string id;
  double frame_rate = 6.5;  // Hz
  std::vector<EgoFramePoint> points;

  std::size_t size() const { return points.size(); }
  double dt() const { return 1.0 / frame_rate; }
};

// Per-frame spatiotemporal state: relative position, relative velocity and
// time to collision.
struct FeatureState {
  double px = 0.0;
  double py = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ttc = 0.0;
};

enum class FeatureVariant { LocationOnly, VelocityOnly, TtcOnly, All };

int feature_dim(FeatureVariant variant);
std::string to_string(FeatureVariant variant);
FeatureVariant feature_variant_from_string(const std::string& name);

struct FeatureTrack {
  std::string id;
  double frame_rate = 6.5;
  std::vector<FeatureState> states;
};

struct FeatureDataset {
  std::vector<FeatureTrack> tracks;

  std::size_t total_rows() const {
    std::size_t n = 0;
    for (const auto& t : tracks) n += t.states.size();
    return n;
  }
};

// The four spatiotemporal risk levels discovered by clustering.
enum class RiskLabel { IndependentlySafe, JointlySafe, Dangerous, Alert };

inline constexpr int kNumRiskLabels = 4;

std::string to_string(RiskLabel label);
RiskLabel risk_label_from_string(const std::string& name);

// Throws DataError when a track violates the type invariants (non-finite or
// out-of-range coordinates, non-positive frame rate).
void validate_track(const PedestrianTrack& track);

}  // namespace pedrisk
