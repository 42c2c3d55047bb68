#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pedrisk/types.hpp"

namespace pedrisk {

// Pose of the ego vehicle in the world frame. Heading is normalized to
// (-pi, pi]; zero heading points along world +x.
struct EgoPose {
  double x_w = 0.0;
  double y_w = 0.0;
  double heading = 0.0;  // radians
  double speed = 0.0;    // m/s, >= 0
};

double normalize_heading(double heading);

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
};

// World point expressed in the ego body frame (x forward, y left).
EgoFramePoint to_ego_frame(const EgoPose& pose, const WorldPoint& p);
// Inverse transform; to_world_frame(pose, to_ego_frame(pose, p)) == p.
WorldPoint to_world_frame(const EgoPose& pose, const EgoFramePoint& p);

enum class ScenarioKind { GoingStraight, TurningRight };
enum class PedestrianBehavior { Cross, CrossWithHesitation, DriftAway, ApproachFromRight };

std::string to_string(ScenarioKind kind);
std::string to_string(PedestrianBehavior behavior);

// One piecewise-constant-acceleration segment of the ego speed profile.
struct SpeedSegment {
  double duration_s = 0.0;
  double accel = 0.0;  // m/s^2
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::GoingStraight;
  double initial_speed = 4.0;             // m/s
  std::vector<SpeedSegment> speed_profile;  // empty: constant speed
  double turn_radius = 10.0;              // m, TurningRight only

  PedestrianBehavior behavior = PedestrianBehavior::Cross;
  double ped_speed = 1.3;                 // m/s
  Range start_ahead{8.0, 12.0};           // m along initial heading
  Range start_lateral{2.0, 4.0};          // m left of initial heading
  // Hesitation pause window as fractions of the duration.
  double hesitate_from = 0.35;
  double hesitate_until = 0.65;

  double noise_sigma = 0.05;              // m, ego-frame position noise
  double frame_rate = 6.5;                // Hz
  double duration = 4.0;                  // s
  std::uint64_t rng_seed = 0;
};

struct LabeledEncounter {
  PedestrianTrack noisy;                  // ego frame, sensed
  PedestrianTrack clean;                  // ego frame, noiseless
  std::vector<EgoPose> ego_world;
  std::vector<WorldPoint> ped_world;
  ScenarioKind scenario = ScenarioKind::GoingStraight;
  PedestrianBehavior behavior = PedestrianBehavior::Cross;
};

// Deterministic for a given config (rng_seed included). Throws DataError on
// invalid configs.
LabeledEncounter simulate_encounter(const ScenarioConfig& config);

// Five-number summary per feature column, the box-plot analogue of the
// dataset report. Quartiles use linear interpolation between order stats.
struct FeatureQuartiles {
  std::array<double, 5> min{}, q25{}, median{}, q75{}, max{};  // px,py,vx,vy,ttc
};

struct GeneratedDataset {
  std::vector<LabeledEncounter> encounters;
  std::vector<PedestrianTrack> tracks;    // noisy ego-frame tracks
  FeatureDataset features;                // from smoothed noisy tracks
  FeatureQuartiles quartiles;
};

// count encounters per config; encounter i of config c draws its stream from
// derive_seed(seed, "encounter", global index), so generation order does not
// matter. Features are extracted from LOWESS-smoothed noisy tracks.
GeneratedDataset generate_dataset(const std::vector<ScenarioConfig>& configs,
                                  int count_per_config, std::uint64_t seed,
                                  double lowess_span = 0.3,
                                  int lowess_robust_iters = 1,
                                  double t_max = 10.0);

// The bundled demo scenario set: four behavior archetypes crafted so the
// per-frame feature states form four recoverable risk regimes, plus turning
// variants for trajectory-prediction coverage.
std::vector<ScenarioConfig> demo_scenario_set(double frame_rate, double noise_sigma,
                                              double ped_speed = 1.3,
                                              double turn_radius = 10.0);

}  // namespace pedrisk
