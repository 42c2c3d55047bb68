#include "pedrisk/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pedrisk/error.hpp"

namespace pedrisk {

std::vector<Velocity> compute_velocity(const PedestrianTrack& track) {
  if (track.points.empty()) {
    throw DataError("compute_velocity: empty track '" + track.id + "'");
  }
  std::vector<Velocity> v(track.points.size());
  v[0] = {0.0, 0.0};
  for (std::size_t k = 1; k < track.points.size(); ++k) {
    v[k].vx = (track.points[k].x - track.points[k - 1].x) * track.frame_rate;
    v[k].vy = (track.points[k].y - track.points[k - 1].y) * track.frame_rate;
  }
  return v;
}

double compute_ttc(const EgoFramePoint& p, const Velocity& v, double t_max) {
  if (!(t_max > 0.0)) throw DataError("compute_ttc: t_max must be positive");
  const double range = std::hypot(p.x, p.y);
  if (range == 0.0) return kCollisionTtc;
  // Radial speed: projection of v onto the pedestrian-direction unit vector.
  const double radial = (v.vx * p.x + v.vy * p.y) / range;
  const double closing = -radial;
  return std::min(range / std::max(closing, kClosingSpeedEps), t_max);
}

std::vector<FeatureState> build_feature_states(const PedestrianTrack& track,
                                               double t_max) {
  if (track.points.size() < 2) {
    throw DataError("build_feature_states: track '" + track.id +
                    "' needs at least 2 frames");
  }
  const auto velocities = compute_velocity(track);
  std::vector<FeatureState> states(track.points.size());
  for (std::size_t k = 0; k < track.points.size(); ++k) {
    const auto& p = track.points[k];
    const auto& v = velocities[k];
    states[k] = {p.x, p.y, v.vx, v.vy, compute_ttc(p, v, t_max)};
  }
  return states;
}

FeatureTrack build_feature_track(const PedestrianTrack& track, double t_max) {
  return {track.id, track.frame_rate, build_feature_states(track, t_max)};
}

std::vector<double> select_features(const FeatureState& s,
                                    FeatureVariant variant) {
  switch (variant) {
    case FeatureVariant::LocationOnly:
      return {s.px, s.py};
    case FeatureVariant::VelocityOnly:
      return {s.vx, s.vy};
    case FeatureVariant::TtcOnly:
      return {s.ttc};
    case FeatureVariant::All:
      return {s.px, s.py, s.vx, s.vy, s.ttc};
  }
  throw DataError("select_features: unknown variant");
}

}  // namespace pedrisk
