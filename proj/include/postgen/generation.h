// Copyright 2026 The postgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "postgen/geometry.h"
#include "postgen/scene.h"

namespace postgen
{

struct IntentionPrior
{
  /// An exit id, or a lane-sequence key of lane ids joined by '>'.
  std::string intention_id;
  double prior = 0.0;
};

/// Rescales priors to sum to one. Throws ValidationError on negative or all-zero priors.
std::vector<IntentionPrior> normalize_priors(std::vector<IntentionPrior> priors);

inline constexpr char kLaneSequenceSeparator = '>';
std::string lane_sequence_key(const std::vector<std::string> & lane_ids);

struct GenerationConfig
{
  std::vector<double> accel_set{-4.0, -2.0, -1.0, 0.0, 1.0, 2.0};
  double a_min = -6.0;
  double a_max = 4.0;
  double v_max = 25.0;
  double horizon_secs = 8.0;
  double resolution_secs = 0.1;
  double min_path_length_m = 100.0;
  std::size_t max_lanes = 5;
  /// Softmax temperature of the heading-alignment prior heuristic, radians.
  double temperature = 0.5;
  double lateral_capture_m = 2.0;
  /// Prediction anchors every this many seconds from the track start; 0 predicts only at the
  /// latest state.
  double anchor_stride_secs = 0.0;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

GenerationConfig load_generation_config(const std::filesystem::path & path);

/// Softmax over -|heading - bearing to exit| / temperature for every exit in the map.
/// Stand-in for a learned intention model.
std::vector<IntentionPrior> heuristic_exit_priors(const ObstacleState & state, const MapGraph & map,
                                                  double temperature);
std::vector<IntentionPrior> heuristic_exit_priors(const ObstacleTrack & track, const MapGraph & map,
                                                  double temperature);

struct PathCandidate
{
  std::string intention_id;
  std::vector<std::string> lane_ids;
  /// Concatenated centerlines, trimmed to start at the obstacle's projection.
  Curve curve;
};

struct PathSearchOptions
{
  double min_length = 100.0;
  std::size_t max_lanes = 5;
  double lateral_capture = 2.0;
  /// Exit intentions may start on the exit's own lane when no approach lane reaches it.
  bool allow_exit_lane_fallback = false;
};

/// Depth-first lane-sequence enumeration from the lane the obstacle sits on.
///
/// Exit intentions keep the sequences that pass through the exit's lane; lane-sequence
/// intentions follow their key's lanes before branching freely. A sequence ends once its
/// requirements are met and it is at least min_length long, at max_lanes lanes, or when no
/// unvisited successor remains. Throws NoAssociationError if no lane is within
/// lateral_capture of the obstacle and no fallback applies.
std::vector<PathCandidate> search_paths(const std::string & intention_id, const ObstacleState & start,
                                        const MapGraph & map, const PathSearchOptions & options);

/// Every maximal lane sequence from the obstacle's lane, for maps without exits.
std::vector<PathCandidate> enumerate_lane_paths(const ObstacleState & start, const MapGraph & map,
                                                const PathSearchOptions & options);

struct SpeedLimits
{
  double a_min = -6.0;
  double a_max = 4.0;
  double v_max = 25.0;
};

/// Constant-acceleration profile clamped to [0, v_max]:
/// v(t) = min(v_max, max(0, v0 + a t)).
class SpeedProfile
{
public:
  SpeedProfile(double v0, double accel, double duration, double resolution,
               double v_max = std::numeric_limits<double>::infinity());

  double v0() const { return v0_; }
  double accel() const { return accel_; }
  double duration() const { return duration_; }
  double resolution() const { return resolution_; }
  double v_max() const { return v_max_; }

  /// Time at which the speed reaches 0 or v_max; infinity if it never does.
  double switch_time() const { return switch_time_; }

  double speed_at(double t) const;
  /// Closed-form arc length travelled by time t.
  double distance_at(double t) const;
  /// accel before the switch time, 0 once clamped.
  double accel_at(double t) const;

private:
  double v0_;
  double accel_;
  double duration_;
  double resolution_;
  double v_max_;
  double switch_time_;
};

/// One profile per acceleration inside [a_min, a_max], in accel_set order. The initial
/// speed is clamped into [0, v_max].
std::vector<SpeedProfile> sample_profiles(double v0, const std::vector<double> & accel_set, double horizon,
                                          double resolution, const SpeedLimits & limits);

struct TrajectoryPoint
{
  /// Seconds after the trajectory's start time.
  double t = 0.0;
  Point2 position;
  double heading = 0.0;
  double speed = 0.0;
  double curvature = 0.0;
  double accel = 0.0;
  double s = 0.0;
};

struct CandidateTrajectory
{
  std::string intention_id;
  std::vector<std::string> lane_ids;
  /// Absolute time of t = 0.
  double start_time = 0.0;
  std::vector<TrajectoryPoint> points;
  SpeedProfile source_profile;
};

/// Points at t = k * resolution, k = 1..duration/resolution, moving along the path curve.
CandidateTrajectory realize_trajectory(const PathCandidate & path, const SpeedProfile & profile,
                                       double start_time = 0.0);

/// |paths| x |profiles| candidates, path-major.
std::vector<CandidateTrajectory> generate_candidates(const std::vector<PathCandidate> & paths,
                                                     const std::vector<SpeedProfile> & profiles,
                                                     double start_time = 0.0);

/// Appends constant-turn-rate-and-velocity points until target_horizon. Turn rate and
/// speed come from the last three points (last two with zero turn rate if only two exist).
/// Throws std::invalid_argument for fewer than two points.
std::vector<TimedPoint> extend_trajectory(std::vector<TimedPoint> traj, double target_horizon,
                                          double resolution);

}  // namespace postgen
