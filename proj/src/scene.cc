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

#include "postgen/scene.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "json_util.h"
#include "postgen/errors.h"

namespace postgen
{

using detail::json;

ObstacleTrack::ObstacleTrack(std::string obstacle_id, std::vector<ObstacleState> states)
: obstacle_id_(std::move(obstacle_id)), states_(std::move(states))
{
  if (states_.empty()) {
    throw ValidationError("obstacle '" + obstacle_id_ + "' has no states");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto & s = states_[i];
    if (s.obstacle_id != obstacle_id_) {
      throw ValidationError("track '" + obstacle_id_ + "' contains a state of '" + s.obstacle_id + "'");
    }
    if (!std::isfinite(s.timestamp) || !std::isfinite(s.speed) || s.speed < 0.0) {
      throw ValidationError("obstacle '" + obstacle_id_ + "' has an invalid timestamp or speed");
    }
    if (i > 0 && !(s.timestamp > states_[i - 1].timestamp)) {
      throw ValidationError("obstacle '" + obstacle_id_ + "' has non-increasing timestamps at t=" +
                            std::to_string(s.timestamp));
    }
  }
}

ObstacleState ObstacleTrack::state_at(double t) const
{
  const auto it = std::lower_bound(states_.begin(), states_.end(), t,
                                   [](const ObstacleState & s, double v) { return s.timestamp < v; });
  ObstacleState out;
  if (it == states_.begin() || it == states_.end()) {
    out = it == states_.end() ? states_.back() : states_.front();
    out.polygon.reset();
    return out;
  }
  if (it->timestamp == t) {
    out = *it;
    out.polygon.reset();
    return out;
  }
  const ObstacleState & b = *it;
  const ObstacleState & a = *(it - 1);
  const double u = (t - a.timestamp) / (b.timestamp - a.timestamp);
  out.obstacle_id = obstacle_id_;
  out.timestamp = t;
  out.position = a.position + u * (b.position - a.position);
  out.speed = a.speed + u * (b.speed - a.speed);
  out.heading = normalize_angle(a.heading + u * normalize_angle(b.heading - a.heading));
  return out;
}

Point2 ObstacleTrack::position_at(double t) const { return state_at(t).position; }

Point2 EgoPlan::position_at(double t) const
{
  if (t <= poses.front().t) {
    return poses.front().point;
  }
  if (t >= poses.back().t) {
    return poses.back().point;
  }
  const auto it = std::lower_bound(poses.begin(), poses.end(), t,
                                   [](const TimedPoint & p, double v) { return p.t < v; });
  const TimedPoint & b = *it;
  const TimedPoint & a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  return a.point + u * (b.point - a.point);
}

MapGraph::MapGraph(std::vector<Lane> lanes, std::vector<IntersectionExit> exits,
                   std::optional<std::vector<Point2>> intersection_polygon)
: intersection_polygon_(std::move(intersection_polygon))
{
  for (auto & lane : lanes) {
    const std::string id = lane.id;
    if (!lanes_.emplace(id, std::move(lane)).second) {
      throw ValidationError("duplicate lane id '" + id + "'");
    }
  }
  for (auto & exit : exits) {
    const std::string id = exit.id;
    if (!exits_.emplace(id, std::move(exit)).second) {
      throw ValidationError("duplicate exit id '" + id + "'");
    }
  }
  for (const auto & [id, lane] : lanes_) {
    for (const auto & succ : lane.successor_ids) {
      if (!lanes_.contains(succ)) {
        throw ValidationError("lane '" + id + "' has dangling successor '" + succ + "'");
      }
    }
  }
  for (const auto & [id, exit] : exits_) {
    if (!lanes_.contains(exit.lane_id)) {
      throw ValidationError("exit '" + id + "' references missing lane '" + exit.lane_id + "'");
    }
  }
  if (intersection_polygon_ && intersection_polygon_->size() < 3) {
    throw ValidationError("intersection polygon needs at least 3 vertices");
  }
}

const Lane & MapGraph::lane(const std::string & id) const
{
  const auto it = lanes_.find(id);
  if (it == lanes_.end()) {
    throw ValidationError("unknown lane '" + id + "'");
  }
  return it->second;
}

const IntersectionExit * MapGraph::find_exit(const std::string & id) const
{
  const auto it = exits_.find(id);
  return it == exits_.end() ? nullptr : &it->second;
}

std::vector<ObstacleTrack> parse_obstacle_log(std::istream & in, const std::string & name)
{
  std::map<std::string, std::vector<ObstacleState>> grouped;
  detail::for_each_json_line(in, name, [&](const json & obj, std::size_t line) {
    ObstacleState s;
    s.obstacle_id = detail::get_string(obj, "obstacle_id", name, line);
    s.timestamp = detail::get_number(obj, "t", name, line);
    s.position = {detail::get_number(obj, "x", name, line), detail::get_number(obj, "y", name, line)};
    s.heading = normalize_angle(detail::get_number(obj, "heading", name, line));
    s.speed = detail::get_number(obj, "speed", name, line);
    if (s.speed < 0.0) {
      throw ParseError(name, line, "speed must be >= 0");
    }
    if (const auto it = obj.find("polygon"); it != obj.end() && !it->is_null()) {
      s.polygon = detail::to_points(*it, name, line);
    }
    grouped[s.obstacle_id].push_back(std::move(s));
  });

  std::vector<ObstacleTrack> tracks;
  tracks.reserve(grouped.size());
  for (auto & [id, states] : grouped) {
    std::stable_sort(states.begin(), states.end(),
                     [](const ObstacleState & a, const ObstacleState & b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (states[i].timestamp == states[i - 1].timestamp) {
        throw ValidationError(name + ": obstacle '" + id + "' has duplicate timestamp " +
                              std::to_string(states[i].timestamp));
      }
    }
    tracks.emplace_back(id, std::move(states));
  }
  return tracks;
}

std::vector<ObstacleTrack> load_obstacle_log(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_obstacle_log(in, path.string());
}

MapGraph parse_map(std::istream & in, const std::string & name)
{
  const json doc = detail::parse_json_document(in, name);
  if (!doc.is_object()) {
    throw ParseError(name, 0, "map must be a JSON object");
  }
  std::vector<Lane> lanes;
  std::vector<IntersectionExit> exits;
  std::optional<std::vector<Point2>> polygon;

  const auto lanes_it = doc.find("lanes");
  if (lanes_it == doc.end() || !lanes_it->is_array()) {
    throw ParseError(name, 0, "map needs a 'lanes' array");
  }
  for (const auto & l : *lanes_it) {
    if (!l.is_object()) {
      throw ParseError(name, 0, "lane entries must be objects");
    }
    std::string id = detail::get_string(l, "id", name, 0);
    const auto cl = l.find("centerline");
    if (cl == l.end()) {
      throw ParseError(name, 0, "lane '" + id + "' has no centerline");
    }
    std::vector<Point2> pts = detail::to_points(*cl, name, 0);
    std::vector<std::string> succ;
    if (const auto it = l.find("successors"); it != l.end()) {
      if (!it->is_array()) {
        throw ParseError(name, 0, "lane '" + id + "' successors must be an array");
      }
      for (const auto & s : *it) {
        if (!s.is_string()) {
          throw ParseError(name, 0, "lane '" + id + "' successor ids must be strings");
        }
        succ.push_back(s.get<std::string>());
      }
    }
    std::optional<double> speed_limit;
    if (const auto it = l.find("speed_limit"); it != l.end() && !it->is_null()) {
      speed_limit = detail::get_number(l, "speed_limit", name, 0);
    }
    try {
      lanes.push_back(Lane{id, Curve(std::move(pts)), std::move(succ), speed_limit});
    } catch (const ValidationError & e) {
      throw ValidationError(name + ": lane '" + id + "': " + e.what());
    }
  }
  if (const auto it = doc.find("exits"); it != doc.end()) {
    if (!it->is_array()) {
      throw ParseError(name, 0, "'exits' must be an array");
    }
    for (const auto & e : *it) {
      if (!e.is_object()) {
        throw ParseError(name, 0, "exit entries must be objects");
      }
      exits.push_back(IntersectionExit{detail::get_string(e, "id", name, 0),
                                       {detail::get_number(e, "x", name, 0), detail::get_number(e, "y", name, 0)},
                                       normalize_angle(detail::get_number(e, "heading", name, 0)),
                                       detail::get_string(e, "lane_id", name, 0)});
    }
  }
  if (const auto it = doc.find("intersection_polygon"); it != doc.end() && !it->is_null()) {
    polygon = detail::to_points(*it, name, 0);
  }
  try {
    return MapGraph(std::move(lanes), std::move(exits), std::move(polygon));
  } catch (const ValidationError & e) {
    throw ValidationError(name + ": " + e.what());
  }
}

MapGraph load_map(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_map(in, path.string());
}

EgoPlan parse_ego_plan(std::istream & in, const std::string & name)
{
  EgoPlan plan;
  detail::for_each_json_line(in, name, [&](const json & obj, std::size_t line) {
    TimedPoint p{detail::get_number(obj, "t", name, line),
                 {detail::get_number(obj, "x", name, line), detail::get_number(obj, "y", name, line)}};
    if (!plan.poses.empty() && !(p.t > plan.poses.back().t)) {
      throw ParseError(name, line, "ego plan timestamps must be strictly increasing");
    }
    plan.poses.push_back(p);
  });
  return plan;
}

EgoPlan load_ego_plan(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_ego_plan(in, path.string());
}

Scene load_scene(const std::filesystem::path & obstacle_log, const std::filesystem::path & map_file,
                 const std::optional<std::filesystem::path> & ego_file)
{
  Scene scene;
  scene.tracks = load_obstacle_log(obstacle_log);
  scene.map = load_map(map_file);
  if (ego_file) {
    scene.ego = load_ego_plan(*ego_file);
  }
  return scene;
}

void write_obstacle_log(std::ostream & out, const std::vector<ObstacleTrack> & tracks)
{
  for (const auto & track : tracks) {
    for (const auto & s : track.states()) {
      json obj = {{"obstacle_id", s.obstacle_id}, {"t", s.timestamp},   {"x", s.position.x},
                  {"y", s.position.y},            {"heading", s.heading}, {"speed", s.speed}};
      if (s.polygon) {
        obj["polygon"] = detail::from_points(*s.polygon);
      }
      out << obj.dump() << '\n';
    }
  }
}

const char * to_string(Scenario scenario)
{
  return scenario == Scenario::kIntersection ? "intersection" : "regular_road";
}

const char * to_string(Priority priority) { return priority == Priority::kCaution ? "caution" : "normal"; }

Scenario classify_scenario(const ObstacleTrack & track, const MapGraph & map, double buffer_m)
{
  const auto & polygon = map.intersection_polygon();
  if (!polygon) {
    return Scenario::kRegularRoad;
  }
  const Point2 p = track.latest().position;
  if (point_in_polygon(*polygon, p) || distance_to_polygon_boundary(*polygon, p) <= buffer_m) {
    return Scenario::kIntersection;
  }
  return Scenario::kRegularRoad;
}

Priority classify_priority(const ObstacleTrack & track, const EgoPlan * ego, double threshold_m)
{
  if (ego == nullptr || ego->empty()) {
    return Priority::kNormal;
  }
  const Point2 p = track.latest().position;
  double best = std::numeric_limits<double>::infinity();
  for (const auto & pose : ego->poses) {
    best = std::min(best, distance(p, pose.point));
  }
  return best < threshold_m ? Priority::kCaution : Priority::kNormal;
}

}  // namespace postgen
