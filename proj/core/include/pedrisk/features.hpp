#pragma once

#include <vector>

#include "pedrisk/types.hpp"

namespace pedrisk {

inline constexpr double kDefaultTtcCap = 10.0;     // seconds
inline constexpr double kClosingSpeedEps = 1e-9;   // m/s, division guard
inline constexpr double kCollisionTtc = 1e-3;      // seconds, returned at zero range

// Backward-difference relative velocity scaled by the frame rate. The first
// frame has no predecessor and is reported as (0, 0).
std::vector<Velocity> compute_velocity(const PedestrianTrack& track);

// Time to collision under a constant-relative-velocity assumption: range
// divided by closing speed, where the closing speed is the negated projection
// of the relative velocity onto the pedestrian direction. Non-positive
// closing speeds (receding or tangential motion) saturate at t_max; zero
// range returns kCollisionTtc so downstream kernels stay finite.
double compute_ttc(const EgoFramePoint& p, const Velocity& v, double t_max);

// Per-frame feature states (px, py, vx, vy, ttc) for a smoothed track.
// The frame-0 velocity convention makes the frame-0 TTC equal t_max.
std::vector<FeatureState> build_feature_states(const PedestrianTrack& track,
                                               double t_max = kDefaultTtcCap);

FeatureTrack build_feature_track(const PedestrianTrack& track,
                                 double t_max = kDefaultTtcCap);

// Sub-vector of the state in documented order:
// (px,py) | (vx,vy) | (ttc) | (px,py,vx,vy,ttc).
std::vector<double> select_features(const FeatureState& state,
                                    FeatureVariant variant);

}  // namespace pedrisk
