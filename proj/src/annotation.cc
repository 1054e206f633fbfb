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

#include "postgen/annotation.h"

#include <cmath>
#include <limits>

#include "postgen/errors.h"

namespace postgen
{
namespace
{

constexpr double kTimeEps = 1e-9;

// Earliest u in [0, 1] with |a + u (b - a) - c| <= r, if any.
std::optional<double> first_entry(const Point2 & a, const Point2 & b, const Point2 & c, double r)
{
  const Point2 ac = a - c;
  const double c0 = dot(ac, ac) - r * r;
  if (c0 <= 0.0) {
    return 0.0;
  }
  const Point2 ab = b - a;
  const double qa = dot(ab, ab);
  if (qa <= 0.0) {
    return std::nullopt;
  }
  const double qb = 2.0 * dot(ac, ab);
  const double disc = qb * qb - 4.0 * qa * c0;
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double u = (-qb - std::sqrt(disc)) / (2.0 * qa);
  if (u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  return u;
}

}  // namespace

std::size_t horizon_steps(double horizon, double resolution)
{
  if (!(resolution > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("horizon must be >= 0 and resolution > 0");
  }
  return static_cast<std::size_t>(std::floor(horizon / resolution + kTimeEps));
}

TrajectoryLabel label_future_trajectory(const ObstacleTrack & track, double anchor_time, double horizon,
                                        double resolution)
{
  const std::size_t n = horizon_steps(horizon, resolution);
  const double last = anchor_time + static_cast<double>(n) * resolution;
  if (anchor_time < track.start_time() - kTimeEps || last > track.end_time() + kTimeEps) {
    throw CoverageError("obstacle '" + track.obstacle_id() + "' does not cover [" + std::to_string(anchor_time) +
                        ", " + std::to_string(anchor_time + horizon) + "]");
  }
  TrajectoryLabel label;
  label.obstacle_id = track.obstacle_id();
  label.anchor_time = anchor_time;
  label.horizon = horizon;
  label.resolution = resolution;
  label.future.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double dt = static_cast<double>(k) * resolution;
    label.future.push_back({dt, track.position_at(anchor_time + dt)});
  }
  return label;
}

std::optional<IntentionLabel> label_exit_taken(const ObstacleTrack & track, double anchor_time,
                                               const MapGraph & map, double horizon, double capture_radius)
{
  const double t_end = std::min(anchor_time + horizon, track.end_time());
  if (map.exits().empty() || t_end < anchor_time || anchor_time < track.start_time() - kTimeEps) {
    return std::nullopt;
  }
  std::vector<TimedPoint> sub{{anchor_time, track.position_at(anchor_time)}};
  for (const auto & s : track.states()) {
    if (s.timestamp > anchor_time && s.timestamp < t_end) {
      sub.push_back({s.timestamp, s.position});
    }
  }
  if (t_end > anchor_time) {
    sub.push_back({t_end, track.position_at(t_end)});
  }

  const IntersectionExit * best = nullptr;
  double best_time = std::numeric_limits<double>::infinity();
  for (const auto & [id, exit] : map.exits()) {
    std::optional<double> passage;
    if (sub.size() == 1) {
      if (distance(sub[0].point, exit.position) <= capture_radius) {
        passage = sub[0].t;
      }
    }
    for (std::size_t i = 0; i + 1 < sub.size() && !passage; ++i) {
      if (const auto u = first_entry(sub[i].point, sub[i + 1].point, exit.position, capture_radius)) {
        passage = sub[i].t + *u * (sub[i + 1].t - sub[i].t);
      }
    }
    if (passage && *passage < best_time) {
      best_time = *passage;
      best = &exit;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  IntentionLabel label;
  label.obstacle_id = track.obstacle_id();
  label.anchor_time = anchor_time;
  label.kind = IntentionLabel::Kind::kExitTaken;
  label.exit_id = best->id;
  return label;
}

std::optional<IntentionLabel> label_lane_sequence(const ObstacleTrack & track, double anchor_time,
                                                  const MapGraph & map, double horizon, double lateral_capture,
                                                  double resolution)
{
  const double t_end = std::min(anchor_time + horizon, track.end_time());
  const std::size_t n = horizon_steps(horizon, resolution);
  std::vector<std::string> sequence;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = anchor_time + static_cast<double>(k) * resolution;
    if (t > t_end + kTimeEps) {
      break;
    }
    const Point2 p = track.position_at(t);
    const Lane * nearest = nullptr;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (const auto & [id, lane] : map.lanes()) {
      const double d = project_point(lane.centerline, p).distance;
      if (d <= lateral_capture && d < nearest_d) {
        nearest_d = d;
        nearest = &lane;
      }
    }
    if (nearest != nullptr && (sequence.empty() || sequence.back() != nearest->id)) {
      sequence.push_back(nearest->id);
    }
  }
  if (sequence.empty()) {
    return std::nullopt;
  }
  IntentionLabel label;
  label.obstacle_id = track.obstacle_id();
  label.anchor_time = anchor_time;
  label.kind = IntentionLabel::Kind::kLaneSequence;
  label.lane_ids = std::move(sequence);
  return label;
}

std::vector<double> anchor_grid(double start, double end, double stride)
{
  if (!(stride > 0.0)) {
    throw std::invalid_argument("anchor stride must be > 0");
  }
  std::vector<double> anchors;
  for (std::size_t k = 0;; ++k) {
    const double t = start + static_cast<double>(k) * stride;
    if (t > end + kTimeEps) {
      break;
    }
    anchors.push_back(t);
  }
  return anchors;
}

Dataset build_dataset(const std::vector<ObstacleTrack> & tracks, const MapGraph & map,
                      const AnnotationConfig & config)
{
  Dataset dataset;
  std::vector<const ObstacleTrack *> ordered;
  for (const auto & t : tracks) {
    ordered.push_back(&t);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const ObstacleTrack * a, const ObstacleTrack * b) { return a->obstacle_id() < b->obstacle_id(); });

  const std::size_t n = horizon_steps(config.horizon, config.resolution);
  const double covered = static_cast<double>(n) * config.resolution;
  for (const ObstacleTrack * track : ordered) {
    for (const double anchor : anchor_grid(track->start_time(), track->end_time(), config.stride)) {
      const bool enough_history = anchor - track->start_time() >= config.min_history_secs - kTimeEps;
      const bool enough_future = anchor + covered <= track->end_time() + kTimeEps;
      if (!enough_history || !enough_future) {
        ++dataset.skipped;
        continue;
      }
      DatasetRecord rec;
      rec.road_test_id = config.road_test_id;
      rec.obstacle_id = track->obstacle_id();
      rec.anchor_time = anchor;
      for (const auto & s : track->states()) {
        if (s.timestamp >= anchor - config.history_secs - kTimeEps && s.timestamp <= anchor + kTimeEps) {
          rec.history.push_back(s);
        }
      }
      rec.future = label_future_trajectory(*track, anchor, config.horizon, config.resolution);
      if (auto exit = label_exit_taken(*track, anchor, map, config.horizon, config.exit_capture_radius)) {
        rec.exit_label = exit->exit_id;
      }
      if (auto lanes = label_lane_sequence(*track, anchor, map, config.horizon, config.lane_lateral_capture,
                                           config.resolution)) {
        rec.lane_sequence_label = lanes->lane_ids;
      }
      dataset.records.push_back(std::move(rec));
    }
  }
  return dataset;
}

}  // namespace postgen
