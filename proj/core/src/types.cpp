#include "pedrisk/types.hpp"

#include <cmath>

#include "pedrisk/error.hpp"

namespace pedrisk {

int feature_dim(FeatureVariant variant) {
  switch (variant) {
    case FeatureVariant::LocationOnly:
      return 2;
    case FeatureVariant::VelocityOnly:
      return 2;
    case FeatureVariant::TtcOnly:
      return 1;
    case FeatureVariant::All:
      return 5;
  }
  throw DataError("unknown feature variant");
}

std::string to_string(FeatureVariant variant) {
  switch (variant) {
    case FeatureVariant::LocationOnly:
      return "location";
    case FeatureVariant::VelocityOnly:
      return "velocity";
    case FeatureVariant::TtcOnly:
      return "ttc";
    case FeatureVariant::All:
      return "all";
  }
  throw DataError("unknown feature variant");
}

FeatureVariant feature_variant_from_string(const std::string& name) {
  if (name == "location") return FeatureVariant::LocationOnly;
  if (name == "velocity") return FeatureVariant::VelocityOnly;
  if (name == "ttc") return FeatureVariant::TtcOnly;
  if (name == "all") return FeatureVariant::All;
  throw DataError("unknown feature variant: '" + name +
                  "' (expected location|velocity|ttc|all)");
}

std::string to_string(RiskLabel label) {
  switch (label) {
    case RiskLabel::IndependentlySafe:
      return "IndependentlySafe";
    case RiskLabel::JointlySafe:
      return "JointlySafe";
    case RiskLabel::Dangerous:
      return "Dangerous";
    case RiskLabel::Alert:
      return "Alert";
  }
  throw DataError("unknown risk label");
}

RiskLabel risk_label_from_string(const std::string& name) {
  if (name == "IndependentlySafe") return RiskLabel::IndependentlySafe;
  if (name == "JointlySafe") return RiskLabel::JointlySafe;
  if (name == "Dangerous") return RiskLabel::Dangerous;
  if (name == "Alert") return RiskLabel::Alert;
  throw DataError("unknown risk label: '" + name + "'");
}

void validate_track(const PedestrianTrack& track) {
  if (!(track.frame_rate > 0.0)) {
    throw DataError("track '" + track.id + "': frame rate must be positive");
  }
  for (std::size_t k = 0; k < track.points.size(); ++k) {
    const auto& p = track.points[k];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("track '" + track.id + "': non-finite coordinate at frame " +
                      std::to_string(k));
    }
    if (std::abs(p.x) > kSensingRangeBound || std::abs(p.y) > kSensingRangeBound) {
      throw DataError("track '" + track.id + "': coordinate out of sensing range at frame " +
                      std::to_string(k));
    }
  }
}

}  // namespace pedrisk
