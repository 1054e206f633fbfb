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

#include <optional>
#include <string>
#include <vector>

#include "postgen/scene.h"

namespace postgen
{

/// Observed future positions after an anchor time, at relative times k * resolution,
/// k = 1..horizon/resolution.
struct TrajectoryLabel
{
  std::string obstacle_id;
  double anchor_time = 0.0;
  double horizon = 0.0;
  double resolution = 0.1;
  std::vector<TimedPoint> future;
};

struct IntentionLabel
{
  enum class Kind { kExitTaken, kLaneSequence };

  std::string obstacle_id;
  double anchor_time = 0.0;
  Kind kind = Kind::kExitTaken;
  std::string exit_id;
  std::vector<std::string> lane_ids;
};

struct AnnotationConfig
{
  std::string road_test_id = "default";
  double horizon = 8.0;
  double resolution = 0.1;
  double stride = 1.0;
  /// Anchors need at least this much logged history before them.
  double min_history_secs = 0.0;
  /// Length of the history window exported with each record.
  double history_secs = 1.0;
  double exit_capture_radius = 3.0;
  double lane_lateral_capture = 2.0;
};

/// Number of grid steps k * resolution that fit in the horizon.
std::size_t horizon_steps(double horizon, double resolution);

/// Throws CoverageError if the track does not span [anchor_time, anchor_time + horizon].
/// Labels are never extrapolated.
TrajectoryLabel label_future_trajectory(const ObstacleTrack & track, double anchor_time, double horizon,
                                        double resolution = 0.1);

/// Earliest time in [anchor, anchor + horizon] at which the piecewise-linear track comes
/// within capture_radius of each exit; the exit with the earliest passage wins (ties by id).
std::optional<IntentionLabel> label_exit_taken(const ObstacleTrack & track, double anchor_time,
                                               const MapGraph & map, double horizon,
                                               double capture_radius = 3.0);

/// Nearest lane (within lateral_capture) for each future sample, with consecutive repeats merged.
std::optional<IntentionLabel> label_lane_sequence(const ObstacleTrack & track, double anchor_time,
                                                  const MapGraph & map, double horizon,
                                                  double lateral_capture = 2.0, double resolution = 0.1);

struct DatasetRecord
{
  std::string road_test_id;
  std::string obstacle_id;
  double anchor_time = 0.0;
  std::vector<ObstacleState> history;
  TrajectoryLabel future;
  std::optional<std::string> exit_label;
  std::optional<std::vector<std::string>> lane_sequence_label;
};

struct Dataset
{
  /// Sorted by obstacle id, then anchor time.
  std::vector<DatasetRecord> records;
  /// Anchors dropped for insufficient history or future coverage.
  std::size_t skipped = 0;
};

/// Anchor times start + k * stride for k = 0, 1, ... up to the end of the track.
std::vector<double> anchor_grid(double start, double end, double stride);

Dataset build_dataset(const std::vector<ObstacleTrack> & tracks, const MapGraph & map,
                      const AnnotationConfig & config);

}  // namespace postgen
