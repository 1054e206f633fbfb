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

#include "postgen/generation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json_util.h"
#include "postgen/annotation.h"
#include "postgen/errors.h"

namespace postgen
{
namespace
{

using detail::json;

constexpr double kMergeTol = 1e-6;

struct SearchGoal
{
  // Lanes the sequence must follow in order, starting with the start lane.
  std::vector<std::string> forced;
  std::optional<std::string> target;
};

struct StartLane
{
  const Lane * lane;
  Projection projection;
};

std::vector<StartLane> lanes_near(const Point2 & p, const MapGraph & map, double capture)
{
  std::vector<StartLane> out;
  for (const auto & [id, lane] : map.lanes()) {
    const Projection proj = project_point(lane.centerline, p);
    if (proj.distance <= capture) {
      out.push_back({&lane, proj});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const StartLane & a, const StartLane & b) {
    return a.projection.distance < b.projection.distance;
  });
  return out;
}

std::optional<Curve> build_curve(const MapGraph & map, const std::vector<std::string> & lane_ids, double start_s)
{
  std::vector<Point2> pts;
  auto append = [&pts](const Point2 & p) {
    if (pts.empty() || distance(pts.back(), p) > kMergeTol) {
      pts.push_back(p);
    }
  };
  const Curve & first = map.lane(lane_ids.front()).centerline;
  append(point_at_s(first, std::min(start_s, first.length())).point);
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first.cumulative_s()[i] > start_s + kMergeTol) {
      append(first.points()[i]);
    }
  }
  for (std::size_t k = 1; k < lane_ids.size(); ++k) {
    for (const auto & p : map.lane(lane_ids[k]).centerline.points()) {
      append(p);
    }
  }
  if (pts.size() < 2) {
    return std::nullopt;
  }
  return Curve(std::move(pts));
}

class PathSearch
{
public:
  PathSearch(const MapGraph & map, const PathSearchOptions & options, SearchGoal goal)
  : map_(map), options_(options), goal_(std::move(goal))
  {
  }

  std::vector<std::vector<std::string>> run(const StartLane & start)
  {
    results_.clear();
    std::vector<std::string> seq{start.lane->id};
    const double length = start.lane->centerline.length() - start.projection.s;
    visit(seq, length);
    return results_;
  }

private:
  bool satisfied(const std::vector<std::string> & seq) const
  {
    if (seq.size() < goal_.forced.size()) {
      return false;
    }
    return !goal_.target || std::find(seq.begin(), seq.end(), *goal_.target) != seq.end();
  }

  void visit(std::vector<std::string> & seq, double length)
  {
    const bool ok = satisfied(seq);
    if ((ok && length >= options_.min_length) || seq.size() >= options_.max_lanes) {
      if (ok) {
        results_.push_back(seq);
      }
      return;
    }
    std::vector<std::string> next;
    const Lane & last = map_.lane(seq.back());
    if (seq.size() < goal_.forced.size()) {
      const std::string & want = goal_.forced[seq.size()];
      if (std::find(last.successor_ids.begin(), last.successor_ids.end(), want) != last.successor_ids.end()) {
        next.push_back(want);
      }
    } else {
      for (const auto & succ : last.successor_ids) {
        if (std::find(seq.begin(), seq.end(), succ) == seq.end()) {
          next.push_back(succ);
        }
      }
    }
    if (next.empty()) {
      if (ok) {
        results_.push_back(seq);
      }
      return;
    }
    for (const auto & id : next) {
      seq.push_back(id);
      visit(seq, length + map_.lane(id).centerline.length());
      seq.pop_back();
    }
  }

  const MapGraph & map_;
  const PathSearchOptions & options_;
  SearchGoal goal_;
  std::vector<std::vector<std::string>> results_;
};

std::vector<PathCandidate> to_candidates(const std::string & intention_id, const MapGraph & map,
                                         const std::vector<std::vector<std::string>> & sequences, double start_s)
{
  std::vector<PathCandidate> out;
  for (const auto & seq : sequences) {
    if (auto curve = build_curve(map, seq, start_s)) {
      out.push_back(PathCandidate{intention_id, seq, std::move(*curve)});
    }
  }
  return out;
}

std::vector<std::string> split_lane_key(const std::string & key)
{
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = key.find(kLaneSequenceSeparator, pos);
    ids.push_back(key.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) {
      break;
    }
    pos = next + 1;
  }
  return ids;
}

}  // namespace

std::vector<IntentionPrior> normalize_priors(std::vector<IntentionPrior> priors)
{
  double sum = 0.0;
  for (const auto & p : priors) {
    if (!std::isfinite(p.prior) || p.prior < 0.0) {
      throw ValidationError("prior of intention '" + p.intention_id + "' must be finite and >= 0");
    }
    sum += p.prior;
  }
  if (!(sum > 0.0)) {
    throw ValidationError("intention priors sum to zero");
  }
  for (auto & p : priors) {
    p.prior /= sum;
  }
  return priors;
}

std::string lane_sequence_key(const std::vector<std::string> & lane_ids)
{
  std::string key;
  for (std::size_t i = 0; i < lane_ids.size(); ++i) {
    if (i > 0) {
      key += kLaneSequenceSeparator;
    }
    key += lane_ids[i];
  }
  return key;
}

void GenerationConfig::validate() const
{
  auto fail = [](const std::string & what) { throw ValidationError("generation config: " + what); };
  if (accel_set.empty()) {
    fail("accel_set must not be empty");
  }
  if (!(a_min <= a_max)) {
    fail("a_min must be <= a_max");
  }
  if (!(v_max > 0.0)) {
    fail("v_max must be > 0");
  }
  if (!(horizon_secs > 0.0) || !(resolution_secs > 0.0) || resolution_secs > horizon_secs) {
    fail("need 0 < resolution_secs <= horizon_secs");
  }
  if (!(min_path_length_m >= 0.0) || max_lanes == 0) {
    fail("min_path_length_m must be >= 0 and max_lanes >= 1");
  }
  if (!(temperature > 0.0) || !(lateral_capture_m >= 0.0) || !(anchor_stride_secs >= 0.0)) {
    fail("temperature must be > 0; lateral_capture_m and anchor_stride_secs >= 0");
  }
}

GenerationConfig load_generation_config(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  const std::string name = path.string();
  const json doc = detail::parse_json_document(in, name);
  if (!doc.is_object()) {
    throw ParseError(name, 0, "generation config must be a JSON object");
  }
  GenerationConfig cfg;
  auto number = [&](const char * key, double & field) {
    if (doc.contains(key)) {
      field = detail::get_number(doc, key, name, 0);
    }
  };
  if (const auto it = doc.find("accel_set"); it != doc.end()) {
    if (!it->is_array()) {
      throw ParseError(name, 0, "accel_set must be an array");
    }
    cfg.accel_set.clear();
    for (const auto & a : *it) {
      if (!a.is_number()) {
        throw ParseError(name, 0, "accel_set entries must be numbers");
      }
      cfg.accel_set.push_back(a.get<double>());
    }
  }
  number("a_min", cfg.a_min);
  number("a_max", cfg.a_max);
  number("v_max", cfg.v_max);
  number("horizon_secs", cfg.horizon_secs);
  number("resolution_secs", cfg.resolution_secs);
  number("min_path_length_m", cfg.min_path_length_m);
  number("temperature", cfg.temperature);
  number("lateral_capture_m", cfg.lateral_capture_m);
  number("anchor_stride_secs", cfg.anchor_stride_secs);
  if (doc.contains("max_lanes")) {
    const double v = detail::get_number(doc, "max_lanes", name, 0);
    if (v < 1.0 || v != std::floor(v)) {
      throw ParseError(name, 0, "max_lanes must be a positive integer");
    }
    cfg.max_lanes = static_cast<std::size_t>(v);
  }
  cfg.validate();
  return cfg;
}

std::vector<IntentionPrior> heuristic_exit_priors(const ObstacleState & state, const MapGraph & map,
                                                  double temperature)
{
  std::vector<IntentionPrior> priors;
  std::vector<double> logits;
  for (const auto & [id, exit] : map.exits()) {
    const Point2 d = exit.position - state.position;
    const double misalignment = std::abs(normalize_angle(std::atan2(d.y, d.x) - state.heading));
    priors.push_back({id, 0.0});
    logits.push_back(-misalignment / temperature);
  }
  if (priors.empty()) {
    return priors;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    priors[i].prior = std::exp(logits[i] - top);
    sum += priors[i].prior;
  }
  for (auto & p : priors) {
    p.prior /= sum;
  }
  return priors;
}

std::vector<IntentionPrior> heuristic_exit_priors(const ObstacleTrack & track, const MapGraph & map,
                                                  double temperature)
{
  return heuristic_exit_priors(track.latest(), map, temperature);
}

std::vector<PathCandidate> search_paths(const std::string & intention_id, const ObstacleState & start,
                                        const MapGraph & map, const PathSearchOptions & options)
{
  const auto near = lanes_near(start.position, map, options.lateral_capture);

  if (const IntersectionExit * exit = map.find_exit(intention_id)) {
    PathSearch search(map, options, SearchGoal{{}, exit->lane_id});
    for (const auto & s : near) {
      auto paths = to_candidates(intention_id, map, search.run(s), s.projection.s);
      if (!paths.empty()) {
        return paths;
      }
    }
    if (options.allow_exit_lane_fallback) {
      const Lane & lane = map.lane(exit->lane_id);
      const StartLane s{&lane, project_point(lane.centerline, start.position)};
      return to_candidates(intention_id, map, search.run(s), s.projection.s);
    }
    if (near.empty()) {
      throw NoAssociationError("obstacle '" + start.obstacle_id + "' is not on any lane");
    }
    return {};
  }

  const std::vector<std::string> key = split_lane_key(intention_id);
  for (const auto & id : key) {
    if (!map.lanes().contains(id)) {
      throw ValidationError("intention '" + intention_id + "' is neither an exit nor a lane sequence");
    }
  }
  if (near.empty()) {
    throw NoAssociationError("obstacle '" + start.obstacle_id + "' is not on any lane");
  }
  // Start on the nearest lane of the key; the remaining key lanes are forced.
  for (const auto & s : near) {
    const auto it = std::find(key.begin(), key.end(), s.lane->id);
    if (it == key.end()) {
      continue;
    }
    PathSearch search(map, options, SearchGoal{std::vector<std::string>(it, key.end()), std::nullopt});
    return to_candidates(intention_id, map, search.run(s), s.projection.s);
  }
  return {};
}

std::vector<PathCandidate> enumerate_lane_paths(const ObstacleState & start, const MapGraph & map,
                                                const PathSearchOptions & options)
{
  const auto near = lanes_near(start.position, map, options.lateral_capture);
  if (near.empty()) {
    throw NoAssociationError("obstacle '" + start.obstacle_id + "' is not on any lane");
  }
  PathSearch search(map, options, SearchGoal{});
  std::vector<PathCandidate> paths;
  for (const auto & seq : search.run(near.front())) {
    auto more = to_candidates(lane_sequence_key(seq), map, {seq}, near.front().projection.s);
    for (auto & p : more) {
      paths.push_back(std::move(p));
    }
  }
  return paths;
}

SpeedProfile::SpeedProfile(double v0, double accel, double duration, double resolution, double v_max)
: v0_(v0), accel_(accel), duration_(duration), resolution_(resolution), v_max_(v_max)
{
  if (!(v0 >= 0.0) || !(v0 <= v_max) || !std::isfinite(accel) || !(resolution > 0.0) || !(duration >= 0.0)) {
    throw std::invalid_argument("speed profile needs 0 <= v0 <= v_max, finite accel, resolution > 0");
  }
  if (accel > 0.0) {
    switch_time_ = (v_max_ - v0_) / accel_;
  } else if (accel < 0.0) {
    switch_time_ = v0_ / -accel_;
  } else {
    switch_time_ = std::numeric_limits<double>::infinity();
  }
}

double SpeedProfile::speed_at(double t) const
{
  return std::min(v_max_, std::max(0.0, v0_ + accel_ * t));
}

double SpeedProfile::distance_at(double t) const
{
  const double ramp = std::min(t, switch_time_);
  double s = v0_ * ramp + 0.5 * accel_ * ramp * ramp;
  if (t > switch_time_) {
    s += (accel_ > 0.0 ? v_max_ : 0.0) * (t - switch_time_);
  }
  return s;
}

double SpeedProfile::accel_at(double t) const { return t < switch_time_ ? accel_ : 0.0; }

std::vector<SpeedProfile> sample_profiles(double v0, const std::vector<double> & accel_set, double horizon,
                                          double resolution, const SpeedLimits & limits)
{
  const double v = std::clamp(v0, 0.0, limits.v_max);
  std::vector<SpeedProfile> out;
  for (const double a : accel_set) {
    if (a >= limits.a_min && a <= limits.a_max) {
      out.emplace_back(v, a, horizon, resolution, limits.v_max);
    }
  }
  return out;
}

CandidateTrajectory realize_trajectory(const PathCandidate & path, const SpeedProfile & profile, double start_time)
{
  CandidateTrajectory traj{path.intention_id, path.lane_ids, start_time, {}, profile};
  const std::size_t n = horizon_steps(profile.duration(), profile.resolution());
  traj.points.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) * profile.resolution();
    const double s = profile.distance_at(t);
    const Pose2 pose = point_at_s(path.curve, s);
    traj.points.push_back(TrajectoryPoint{t, pose.point, pose.heading, profile.speed_at(t),
                                          curvature_at_s(path.curve, s), profile.accel_at(t), s});
  }
  return traj;
}

std::vector<CandidateTrajectory> generate_candidates(const std::vector<PathCandidate> & paths,
                                                     const std::vector<SpeedProfile> & profiles, double start_time)
{
  std::vector<CandidateTrajectory> out;
  out.reserve(paths.size() * profiles.size());
  for (const auto & path : paths) {
    for (const auto & profile : profiles) {
      out.push_back(realize_trajectory(path, profile, start_time));
    }
  }
  return out;
}

std::vector<TimedPoint> extend_trajectory(std::vector<TimedPoint> traj, double target_horizon, double resolution)
{
  if (traj.size() < 2) {
    throw std::invalid_argument("extend_trajectory needs at least 2 points");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("extend_trajectory needs resolution > 0");
  }
  const std::size_t n = traj.size();
  const TimedPoint p2 = traj[n - 1];
  const TimedPoint p1 = traj[n - 2];
  const Point2 d2 = p2.point - p1.point;
  const double dt2 = p2.t - p1.t;
  const double h2 = std::atan2(d2.y, d2.x);
  const double chord_speed = std::hypot(d2.x, d2.y) / dt2;

  double omega = 0.0;
  if (n >= 3) {
    const TimedPoint p0 = traj[n - 3];
    const Point2 d1 = p1.point - p0.point;
    const double h1 = std::atan2(d1.y, d1.x);
    omega = normalize_angle(h2 - h1) / (0.5 * (p2.t - p0.t));
  }
  // Chord headings sit half a step behind the tangent at the last point.
  const double half_turn = 0.5 * omega * dt2;
  const double heading = h2 + half_turn;
  const double speed = std::abs(half_turn) > 1e-12 ? chord_speed * half_turn / std::sin(half_turn) : chord_speed;

  for (std::size_t k = 1;; ++k) {
    const double tau = static_cast<double>(k) * resolution;
    if (p2.t + tau > target_horizon + 1e-9) {
      break;
    }
    Point2 p;
    if (std::abs(omega) < 1e-12) {
      p = p2.point + (speed * tau) * Point2{std::cos(heading), std::sin(heading)};
    } else {
      const double r = speed / omega;
      p = {p2.point.x + r * (std::sin(heading + omega * tau) - std::sin(heading)),
           p2.point.y - r * (std::cos(heading + omega * tau) - std::cos(heading))};
    }
    traj.push_back({p2.t + tau, p});
  }
  return traj;
}

}  // namespace postgen
