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

#include "postgen/costing.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json_util.h"
#include "postgen/errors.h"
#include "postgen/kernels.h"

namespace postgen
{

void CostWeights::validate() const
{
  for (const double t : {theta_acc, theta_centripetal, theta_collision}) {
    if (!std::isfinite(t) || t < 0.0) {
      throw ValidationError("cost weights must be finite and >= 0");
    }
  }
  if (!std::isfinite(z1) || !std::isfinite(z2) || !(z1 > 0.0) || !(z2 > 0.0)) {
    throw ValidationError("normalizers z1, z2 must be finite and > 0");
  }
}

CostWeights CostWeights::with_default_normalizers(std::size_t n_points)
{
  constexpr double kRefSpeed = 15.0;
  constexpr double kRefCurvature = 0.05;
  const double n = static_cast<double>(std::max<std::size_t>(n_points, 1));
  const double ref = kRefSpeed * kRefSpeed * kRefCurvature;
  CostWeights w;
  w.z1 = n * ref * ref;
  w.z2 = n;
  return w;
}

CostWeights load_weights(const std::filesystem::path & path, std::size_t n_points)
{
  auto in = detail::open_input(path);
  const std::string name = path.string();
  const auto doc = detail::parse_json_document(in, name);
  if (!doc.is_object()) {
    throw ParseError(name, 0, "weights file must be a JSON object");
  }
  CostWeights w = CostWeights::with_default_normalizers(n_points);
  w.theta_acc = detail::get_number(doc, "theta_acc", name, 0);
  w.theta_centripetal = detail::get_number(doc, "theta_centripetal", name, 0);
  w.theta_collision = detail::get_number(doc, "theta_collision", name, 0);
  if (doc.contains("z1")) {
    w.z1 = detail::get_number(doc, "z1", name, 0);
  }
  if (doc.contains("z2")) {
    w.z2 = detail::get_number(doc, "z2", name, 0);
  }
  try {
    w.validate();
  } catch (const ValidationError & e) {
    throw ValidationError(name + ": " + e.what());
  }
  return w;
}

double cost_acc(const CandidateTrajectory & traj)
{
  std::vector<double> a;
  a.reserve(traj.points.size());
  for (const auto & p : traj.points) {
    a.push_back(p.accel);
  }
  return kernels::sum_squares(a);
}

double cost_centripetal(const CandidateTrajectory & traj, double z1)
{
  std::vector<double> v;
  std::vector<double> k;
  v.reserve(traj.points.size());
  k.reserve(traj.points.size());
  for (const auto & p : traj.points) {
    v.push_back(p.speed);
    k.push_back(p.curvature);
  }
  return kernels::sum_centripetal(v, k) / z1;
}

double cost_collision(const CandidateTrajectory & traj, const EgoPlan * ego, double z2)
{
  if (ego == nullptr || ego->empty()) {
    return 0.0;
  }
  // exp has no AVX2 intrinsic without SVML; this stays scalar.
  double sum = 0.0;
  for (const auto & p : traj.points) {
    const Point2 e = ego->position_at(traj.start_time + p.t);
    const double dx = p.position.x - e.x;
    const double dy = p.position.y - e.y;
    sum += std::exp(-(dx * dx + dy * dy));
  }
  return sum / z2;
}

double weighted_total(const CostBreakdown & sub, const CostWeights & weights)
{
  return weights.theta_acc * sub.c_acc + weights.theta_centripetal * sub.c_centripetal +
         weights.theta_collision * sub.c_collision;
}

CostBreakdown total_cost(const CandidateTrajectory & traj, const EgoPlan * ego, const CostWeights & weights)
{
  CostBreakdown b;
  b.c_acc = cost_acc(traj);
  b.c_centripetal = cost_centripetal(traj, weights.z1);
  b.c_collision = cost_collision(traj, ego, weights.z2);
  b.total = weighted_total(b, weights);
  return b;
}

double likelihood(double cost)
{
  if (!(cost >= 0.0)) {
    throw std::domain_error("likelihood: cost must be >= 0");
  }
  return std::exp(-cost);
}

std::size_t best_candidate(const std::vector<CandidateScore> & scores)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double ci = scores[i].cost.total;
    const double cb = scores[best].cost.total;
    if (ci < cb || (ci == cb && std::abs(scores[i].accel) < std::abs(scores[best].accel))) {
      best = i;
    }
  }
  return best;
}

PredictionResult rank_intentions(const std::string & obstacle_id, double anchor_time,
                                 const std::vector<IntentionCandidates> & groups, const EgoPlan * ego,
                                 const CostWeights & weights)
{
  weights.validate();
  PredictionResult result;
  result.obstacle_id = obstacle_id;
  result.anchor_time = anchor_time;
  if (groups.empty()) {
    return result;
  }
  for (const auto & g : groups) {
    if (g.candidates.empty()) {
      throw ValidationError("intention '" + g.intention_id + "' has a prior but no candidate trajectories");
    }
    IntentionResult r{g.intention_id, g.prior, 0.0, 0.0, 0.0, 0, {}, g.candidates.front(), {}};
    r.scores.reserve(g.candidates.size());
    for (const auto & c : g.candidates) {
      r.scores.push_back(
          {c.intention_id, lane_sequence_key(c.lane_ids), c.source_profile.accel(), total_cost(c, ego, weights)});
    }
    r.best_index = best_candidate(r.scores);
    r.best_cost = r.scores[r.best_index].cost;
    r.min_cost = r.best_cost.total;
    r.likelihood = likelihood(r.min_cost);
    r.best_trajectory = g.candidates[r.best_index];
    result.intentions.push_back(std::move(r));
  }

  // Factor out the smallest cost; it cancels in Z.
  double floor_cost = std::numeric_limits<double>::infinity();
  for (const auto & r : result.intentions) {
    floor_cost = std::min(floor_cost, r.min_cost);
  }
  double z = 0.0;
  for (auto & r : result.intentions) {
    r.posterior = r.prior * std::exp(-(r.min_cost - floor_cost));
    z += r.posterior;
  }
  std::size_t selected = 0;
  for (std::size_t i = 0; i < result.intentions.size(); ++i) {
    result.intentions[i].posterior /= z;
    if (result.intentions[i].posterior > result.intentions[selected].posterior) {
      selected = i;
    }
  }
  result.selected_intention = result.intentions[selected].intention_id;
  return result;
}

}  // namespace postgen
