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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "postgen/geometry.h"

namespace postgen
{

struct ObstacleState
{
  std::string obstacle_id;
  double timestamp = 0.0;
  Point2 position;
  /// Radians in (-pi, pi].
  double heading = 0.0;
  /// Meters per second, >= 0.
  double speed = 0.0;
  std::optional<std::vector<Point2>> polygon;
};

/// Time-ordered history of one obstacle: non-empty, strictly increasing timestamps,
/// a single obstacle id.
class ObstacleTrack
{
public:
  /// Throws ValidationError if the invariants above do not hold.
  ObstacleTrack(std::string obstacle_id, std::vector<ObstacleState> states);

  const std::string & obstacle_id() const { return obstacle_id_; }
  const std::vector<ObstacleState> & states() const { return states_; }
  const ObstacleState & latest() const { return states_.back(); }
  double start_time() const { return states_.front().timestamp; }
  double end_time() const { return states_.back().timestamp; }

  /// Linear interpolation of position and speed, shortest-arc interpolation of heading.
  /// Times outside the track clamp to the first or last state. The polygon is not carried.
  ObstacleState state_at(double t) const;
  Point2 position_at(double t) const;

private:
  std::string obstacle_id_;
  std::vector<ObstacleState> states_;
};

struct TimedPoint
{
  double t = 0.0;
  Point2 point;
};

struct EgoPlan
{
  /// Strictly increasing timestamps.
  std::vector<TimedPoint> poses;

  bool empty() const { return poses.empty(); }
  /// Linear interpolation; queries outside the plan clamp to its first or last pose.
  Point2 position_at(double t) const;
};

struct Lane
{
  std::string id;
  Curve centerline;
  std::vector<std::string> successor_ids;
  std::optional<double> speed_limit;
};

struct IntersectionExit
{
  std::string id;
  Point2 position;
  double heading = 0.0;
  std::string lane_id;
};

class MapGraph
{
public:
  MapGraph() = default;
  /// Validates referential integrity; throws ValidationError naming the first dangling id.
  MapGraph(std::vector<Lane> lanes, std::vector<IntersectionExit> exits,
           std::optional<std::vector<Point2>> intersection_polygon);

  const std::map<std::string, Lane> & lanes() const { return lanes_; }
  const std::map<std::string, IntersectionExit> & exits() const { return exits_; }
  const std::optional<std::vector<Point2>> & intersection_polygon() const
  {
    return intersection_polygon_;
  }

  const Lane & lane(const std::string & id) const;
  const IntersectionExit * find_exit(const std::string & id) const;

private:
  std::map<std::string, Lane> lanes_;
  std::map<std::string, IntersectionExit> exits_;
  std::optional<std::vector<Point2>> intersection_polygon_;
};

struct Scene
{
  /// Sorted by obstacle id.
  std::vector<ObstacleTrack> tracks;
  MapGraph map;
  std::optional<EgoPlan> ego;
};

std::vector<ObstacleTrack> load_obstacle_log(const std::filesystem::path & path);
std::vector<ObstacleTrack> parse_obstacle_log(std::istream & in, const std::string & name);
MapGraph load_map(const std::filesystem::path & path);
MapGraph parse_map(std::istream & in, const std::string & name);
EgoPlan load_ego_plan(const std::filesystem::path & path);
EgoPlan parse_ego_plan(std::istream & in, const std::string & name);

Scene load_scene(const std::filesystem::path & obstacle_log, const std::filesystem::path & map_file,
                 const std::optional<std::filesystem::path> & ego_file = std::nullopt);

/// Writes tracks in the obstacle-log format, one state per line.
void write_obstacle_log(std::ostream & out, const std::vector<ObstacleTrack> & tracks);

enum class Scenario { kIntersection, kRegularRoad };
enum class Priority { kCaution, kNormal };

const char * to_string(Scenario scenario);
const char * to_string(Priority priority);

struct ClassifierConfig
{
  double scenario_buffer_m = 2.0;
  double caution_distance_m = 10.0;
};

Scenario classify_scenario(const ObstacleTrack & track, const MapGraph & map,
                           double buffer_m = ClassifierConfig{}.scenario_buffer_m);

/// Caution iff the latest position is strictly closer than threshold_m to some ego pose.
Priority classify_priority(const ObstacleTrack & track, const EgoPlan * ego,
                           double threshold_m = ClassifierConfig{}.caution_distance_m);

}  // namespace postgen
