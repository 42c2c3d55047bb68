#include "pedrisk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pedrisk/error.hpp"
#include "pedrisk/features.hpp"
#include "pedrisk/lowess.hpp"
#include "pedrisk/rng.hpp"

namespace pedrisk {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sign_or_positive(double v) { return v < 0.0 ? -1.0 : 1.0; }

void validate_config(const ScenarioConfig& c) {
  if (!(c.frame_rate > 0.0)) throw DataError("scenario: frame_rate must be positive");
  if (c.duration * c.frame_rate < 2.0) {
    throw DataError("scenario: duration * frame_rate must cover at least 2 frames");
  }
  if (c.noise_sigma < 0.0) throw DataError("scenario: noise_sigma must be >= 0");
  if (c.ped_speed < 0.0) throw DataError("scenario: ped_speed must be >= 0");
  if (c.initial_speed < 0.0) throw DataError("scenario: initial_speed must be >= 0");
  if (c.start_ahead.lo > c.start_ahead.hi || c.start_lateral.lo > c.start_lateral.hi) {
    throw DataError("scenario: start offset range has lo > hi");
  }
  if (c.scenario == ScenarioKind::TurningRight && !(c.turn_radius > 0.0)) {
    throw DataError("scenario: turn_radius must be positive");
  }
  if (!(c.hesitate_from >= 0.0 && c.hesitate_from <= c.hesitate_until &&
        c.hesitate_until <= 1.0)) {
    throw DataError("scenario: hesitation window must satisfy 0 <= from <= until <= 1");
  }
}

// Pedestrian walking direction in the initial (heading 0) frame.
WorldPoint behavior_direction(PedestrianBehavior behavior, double lateral) {
  const double toward_path = -sign_or_positive(lateral);
  switch (behavior) {
    case PedestrianBehavior::Cross:
    case PedestrianBehavior::CrossWithHesitation:
      return {0.0, toward_path};
    case PedestrianBehavior::DriftAway:
      return {0.0, -toward_path};
    case PedestrianBehavior::ApproachFromRight: {
      // Diagonal toward the lane with a component against the driving
      // direction, i.e. aimed at the oncoming vehicle.
      double dx = -0.35, dy = toward_path;
      double norm = std::hypot(dx, dy);
      return {dx / norm, dy / norm};
    }
  }
  throw DataError("scenario: unknown behavior");
}

}  // namespace

double normalize_heading(double heading) {
  double h = std::fmod(heading, 2.0 * kPi);
  if (h <= -kPi) h += 2.0 * kPi;
  if (h > kPi) h -= 2.0 * kPi;
  return h;
}

EgoFramePoint to_ego_frame(const EgoPose& pose, const WorldPoint& p) {
  const double dx = p.x - pose.x_w;
  const double dy = p.y - pose.y_w;
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  return {c * dx + s * dy, -s * dx + c * dy};
}

WorldPoint to_world_frame(const EgoPose& pose, const EgoFramePoint& p) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  return {pose.x_w + c * p.x - s * p.y, pose.y_w + s * p.x + c * p.y};
}

std::string to_string(ScenarioKind kind) {
  return kind == ScenarioKind::GoingStraight ? "GoingStraight" : "TurningRight";
}

std::string to_string(PedestrianBehavior behavior) {
  switch (behavior) {
    case PedestrianBehavior::Cross:
      return "Cross";
    case PedestrianBehavior::CrossWithHesitation:
      return "CrossWithHesitation";
    case PedestrianBehavior::DriftAway:
      return "DriftAway";
    case PedestrianBehavior::ApproachFromRight:
      return "ApproachFromRight";
  }
  throw DataError("scenario: unknown behavior");
}

LabeledEncounter simulate_encounter(const ScenarioConfig& config) {
  validate_config(config);
  Rng rng(config.rng_seed);

  const double dt = 1.0 / config.frame_rate;
  const int frames = std::max<int>(
      2, static_cast<int>(std::llround(config.duration * config.frame_rate)));

  const double ahead = rng.uniform(config.start_ahead.lo, config.start_ahead.hi);
  const double lateral = rng.uniform(config.start_lateral.lo, config.start_lateral.hi);
  const WorldPoint walk_dir = behavior_direction(config.behavior, lateral);

  const double pause_begin = config.hesitate_from * config.duration;
  const double pause_end = config.hesitate_until * config.duration;

  LabeledEncounter enc;
  enc.scenario = config.scenario;
  enc.behavior = config.behavior;
  enc.ego_world.reserve(frames);
  enc.ped_world.reserve(frames);

  EgoPose pose{0.0, 0.0, 0.0, config.initial_speed};
  WorldPoint ped{ahead, lateral};

  for (int k = 0; k < frames; ++k) {
    enc.ego_world.push_back(pose);
    enc.ped_world.push_back(ped);

    // Advance to the next frame with the current speed/heading.
    pose.x_w += pose.speed * std::cos(pose.heading) * dt;
    pose.y_w += pose.speed * std::sin(pose.heading) * dt;
    if (config.scenario == ScenarioKind::TurningRight) {
      pose.heading = normalize_heading(pose.heading -
                                       pose.speed / config.turn_radius * dt);
    }

    // Piecewise-constant acceleration schedule; zero beyond the last segment.
    const double t = k * dt;
    double accel = 0.0, seg_start = 0.0;
    for (const auto& seg : config.speed_profile) {
      if (t >= seg_start && t < seg_start + seg.duration_s) {
        accel = seg.accel;
        break;
      }
      seg_start += seg.duration_s;
    }
    pose.speed = std::max(0.0, pose.speed + accel * dt);

    const double walking =
        (config.behavior == PedestrianBehavior::CrossWithHesitation &&
         t >= pause_begin && t < pause_end)
            ? 0.0
            : config.ped_speed;
    ped.x += walking * walk_dir.x * dt;
    ped.y += walking * walk_dir.y * dt;
  }

  enc.clean.frame_rate = config.frame_rate;
  enc.noisy.frame_rate = config.frame_rate;
  enc.clean.points.reserve(frames);
  enc.noisy.points.reserve(frames);
  for (int k = 0; k < frames; ++k) {
    EgoFramePoint p = to_ego_frame(enc.ego_world[k], enc.ped_world[k]);
    enc.clean.points.push_back(p);
    enc.noisy.points.push_back({p.x + config.noise_sigma * rng.normal(),
                                p.y + config.noise_sigma * rng.normal()});
  }
  validate_track(enc.clean);
  validate_track(enc.noisy);
  return enc;
}

namespace {

double percentile(std::vector<double>& sorted, double p) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  double h = p * static_cast<double>(m - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= m) return sorted[m - 1];
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

GeneratedDataset generate_dataset(const std::vector<ScenarioConfig>& configs,
                                  int count_per_config, std::uint64_t seed,
                                  double lowess_span, int lowess_robust_iters,
                                  double t_max) {
  if (configs.empty()) throw DataError("generate_dataset: no scenario configs");
  if (count_per_config < 1) throw DataError("generate_dataset: count must be >= 1");

  GeneratedDataset out;
  std::uint64_t global = 0;
  for (const auto& base : configs) {
    for (int i = 0; i < count_per_config; ++i, ++global) {
      ScenarioConfig c = base;
      c.rng_seed = derive_seed(seed, "encounter", global);
      LabeledEncounter enc = simulate_encounter(c);

      char id[16];
      std::snprintf(id, sizeof(id), "e%04llu", static_cast<unsigned long long>(global));
      enc.noisy.id = id;
      enc.clean.id = id;

      out.tracks.push_back(enc.noisy);
      out.encounters.push_back(std::move(enc));
    }
  }

  for (const auto& track : out.tracks) {
    PedestrianTrack smoothed = lowess_smooth(track, lowess_span, lowess_robust_iters);
    out.features.tracks.push_back(build_feature_track(smoothed, t_max));
  }

  // Five-number summary per feature column.
  std::array<std::vector<double>, 5> cols;
  for (const auto& ft : out.features.tracks) {
    for (const auto& s : ft.states) {
      cols[0].push_back(s.px);
      cols[1].push_back(s.py);
      cols[2].push_back(s.vx);
      cols[3].push_back(s.vy);
      cols[4].push_back(s.ttc);
    }
  }
  for (int f = 0; f < 5; ++f) {
    std::sort(cols[f].begin(), cols[f].end());
    out.quartiles.min[f] = cols[f].front();
    out.quartiles.q25[f] = percentile(cols[f], 0.25);
    out.quartiles.median[f] = percentile(cols[f], 0.50);
    out.quartiles.q75[f] = percentile(cols[f], 0.75);
    out.quartiles.max[f] = cols[f].back();
  }
  return out;
}

std::vector<ScenarioConfig> demo_scenario_set(double frame_rate, double noise_sigma,
                                              double ped_speed, double turn_radius) {
  std::vector<ScenarioConfig> set;

  // Fast approach with a crossing pedestrian close ahead: the dangerous
  // regime (small TTC, short longitudinal distance). Hard braking keeps the
  // TTC band roughly stationary and the range short over the encounter.
  {
    ScenarioConfig c;
    c.scenario = ScenarioKind::GoingStraight;
    c.behavior = PedestrianBehavior::Cross;
    c.initial_speed = 6.5;
    c.speed_profile = {{2.2, -2.2}};
    c.ped_speed = ped_speed;
    c.start_ahead = {9.5, 11.5};
    c.start_lateral = {1.5, 3.0};
    c.duration = 2.2;
    c.frame_rate = frame_rate;
    c.noise_sigma = noise_sigma;
    set.push_back(c);
  }

  // Ego turning right toward a pedestrian closing in from the right-front
  // while still far: the alert regime (small TTC, larger longitudinal
  // distance). The turn sweep gives the regime its distinctive apparent
  // lateral velocity.
  {
    ScenarioConfig c;
    c.scenario = ScenarioKind::TurningRight;
    c.turn_radius = turn_radius;
    c.behavior = PedestrianBehavior::ApproachFromRight;
    c.initial_speed = 3.5;
    c.ped_speed = ped_speed * 1.1;
    c.start_ahead = {14.0, 18.0};
    c.start_lateral = {-6.5, -4.0};
    c.duration = 2.8;
    c.frame_rate = frame_rate;
    c.noise_sigma = noise_sigma;
    set.push_back(c);
  }

  // Crawling ego with a pedestrian crossing right in front, pausing
  // mid-crossing: the jointly safe regime (large TTC, short distance).
  {
    ScenarioConfig c;
    c.scenario = ScenarioKind::GoingStraight;
    c.behavior = PedestrianBehavior::CrossWithHesitation;
    c.initial_speed = 0.5;
    c.ped_speed = ped_speed * 0.9;
    c.start_ahead = {3.5, 5.5};
    c.start_lateral = {2.0, 3.0};
    c.hesitate_from = 0.35;
    c.hesitate_until = 0.6;
    c.duration = 4.5;
    c.frame_rate = frame_rate;
    c.noise_sigma = noise_sigma;
    set.push_back(c);
  }

  // Ego braking to a stop while a distant pedestrian wanders off: the
  // independently safe regime (large TTC, large distance).
  {
    ScenarioConfig c;
    c.scenario = ScenarioKind::GoingStraight;
    c.behavior = PedestrianBehavior::DriftAway;
    c.initial_speed = 2.2;
    c.speed_profile = {{1.5, -1.4}};
    c.ped_speed = ped_speed * 0.85;
    c.start_ahead = {14.0, 18.0};
    c.start_lateral = {3.0, 6.0};
    c.duration = 3.2;
    c.frame_rate = frame_rate;
    c.noise_sigma = noise_sigma;
    set.push_back(c);
  }

  // Same regime in a gentle decelerating right turn; the small heading
  // sweep keeps the relative geometry close to the straight variant.
  {
    ScenarioConfig c;
    c.scenario = ScenarioKind::TurningRight;
    c.turn_radius = turn_radius * 1.6;
    c.behavior = PedestrianBehavior::DriftAway;
    c.initial_speed = 1.8;
    c.speed_profile = {{1.5, -1.0}};
    c.ped_speed = ped_speed * 0.85;
    c.start_ahead = {13.0, 16.0};
    c.start_lateral = {3.5, 6.5};
    c.duration = 3.2;
    c.frame_rate = frame_rate;
    c.noise_sigma = noise_sigma;
    set.push_back(c);
  }

  return set;
}

}  // namespace pedrisk
