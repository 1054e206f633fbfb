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

#include "postgen/autotune.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json_util.h"
#include "postgen/costing.h"
#include "postgen/errors.h"

namespace postgen
{

using detail::json;

void TunerConfig::validate() const
{
  if (!std::isfinite(delta) || !(delta > 0.0)) {
    throw ValidationError("tuner config: delta must be > 0");
  }
  if (!std::isfinite(learning_rate) || !(learning_rate > 0.0)) {
    throw ValidationError("tuner config: learning_rate must be > 0");
  }
  if (!std::isfinite(convergence_tol) || convergence_tol < 0.0) {
    throw ValidationError("tuner config: convergence_tol must be >= 0");
  }
  for (const double t : theta_init) {
    if (!std::isfinite(t) || t < 0.0) {
      throw ValidationError("tuner config: theta_init must be finite and >= 0");
    }
  }
}

TunerConfig load_tuner_config(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  const std::string name = path.string();
  const json doc = detail::parse_json_document(in, name);
  if (!doc.is_object()) {
    throw ParseError(name, 0, "tuner config must be a JSON object");
  }
  TunerConfig cfg;
  auto whole = [&](const char * key) {
    const double v = detail::get_number(doc, key, name, 0);
    if (v < 0.0 || v != std::floor(v)) {
      throw ParseError(name, 0, std::string(key) + " must be a non-negative integer");
    }
    return v;
  };
  if (doc.contains("delta")) {
    cfg.delta = detail::get_number(doc, "delta", name, 0);
  }
  if (doc.contains("learning_rate")) {
    cfg.learning_rate = detail::get_number(doc, "learning_rate", name, 0);
  }
  if (doc.contains("max_iters")) {
    cfg.max_iters = static_cast<std::size_t>(whole("max_iters"));
  }
  if (doc.contains("convergence_tol")) {
    cfg.convergence_tol = detail::get_number(doc, "convergence_tol", name, 0);
  }
  if (doc.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(whole("seed"));
  }
  if (const auto it = doc.find("theta_init"); it != doc.end()) {
    if (!it->is_array() || it->size() != 3) {
      throw ParseError(name, 0, "theta_init must be an array of 3 numbers");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*it)[i].is_number()) {
        throw ParseError(name, 0, "theta_init must be an array of 3 numbers");
      }
      cfg.theta_init[i] = (*it)[i].get<double>();
    }
  }
  try {
    cfg.validate();
  } catch (const ValidationError & e) {
    throw ValidationError(name + ": " + e.what());
  }
  return cfg;
}

SubCosts ground_truth_subcosts(const TrajectoryLabel & label, const EgoPlan * ego, double z1, double z2)
{
  const auto & f = label.future;
  const std::size_t n = f.size();
  if (n < 3) {
    throw std::invalid_argument("ground-truth sub-costs need at least 3 label points");
  }
  const double dt = f[1].t - f[0].t;

  // Second-order differences: central inside, one-sided at both ends.
  auto diff = [n, dt](auto value, std::size_t i) {
    if (i == 0) {
      return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * dt);
    }
    if (i == n - 1) {
      return (3.0 * value(n - 1) - 4.0 * value(n - 2) + value(n - 3)) / (2.0 * dt);
    }
    return (value(i + 1) - value(i - 1)) / (2.0 * dt);
  };

  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = diff([&](std::size_t k) { return f[k].point.x; }, i);
    const double vy = diff([&](std::size_t k) { return f[k].point.y; }, i);
    speed[i] = std::hypot(vx, vy);
  }

  CandidateTrajectory traj{"ground_truth", {}, label.anchor_time, {}, SpeedProfile(0.0, 0.0, 0.0, dt)};
  traj.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    TrajectoryPoint p;
    p.t = f[i].t;
    p.position = f[i].point;
    p.speed = speed[i];
    p.accel = diff([&](std::size_t k) { return speed[k]; }, i);
    p.curvature = menger_curvature(f[c - 1].point, f[c].point, f[c + 1].point);
    traj.points.push_back(p);
  }
  return {cost_acc(traj), cost_centripetal(traj, z1), cost_collision(traj, ego, z2)};
}

HingeProblem::HingeProblem(std::span<const TuningExample> examples)
{
  auto finite = [](const SubCosts & v) { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); };
  for (const auto & ex : examples) {
    if (!finite(ex.ground_truth)) {
      throw ValidationError("non-finite ground-truth sub-costs for (" + ex.obstacle_id + ", " +
                            std::to_string(ex.anchor_time) + ")");
    }
    for (const auto & c : ex.candidates) {
      if (!finite(c)) {
        throw ValidationError("non-finite candidate sub-costs for (" + ex.obstacle_id + ", " +
                              std::to_string(ex.anchor_time) + ")");
      }
      d0_.push_back(ex.ground_truth[0] - c[0]);
      d1_.push_back(ex.ground_truth[1] - c[1]);
      d2_.push_back(ex.ground_truth[2] - c[2]);
    }
  }
}

kernels::HingeEval HingeProblem::evaluate(const SubCosts & theta, double delta) const
{
  return kernels::hinge(kernels::HingeRows{d0_, d1_, d2_}, theta, delta);
}

double hinge_objective(std::span<const TuningExample> examples, const SubCosts & theta, double delta)
{
  return HingeProblem(examples).objective(theta, delta);
}

SubCosts hinge_subgradient(std::span<const TuningExample> examples, const SubCosts & theta, double delta)
{
  return HingeProblem(examples).subgradient(theta, delta);
}

TuneResult tune_weights(std::span<const TuningExample> examples, const TunerConfig & config,
                        const SubCosts & theta_init)
{
  config.validate();
  if (examples.empty()) {
    throw std::invalid_argument("tune_weights needs at least one example");
  }
  const HingeProblem problem(examples);
  TuneResult result;
  result.theta = theta_init;
  auto eval = problem.evaluate(result.theta, config.delta);
  if (!std::isfinite(eval.loss)) {
    throw Error("hinge loss is not finite; check the sub-costs for corrupt values");
  }
  result.loss_history.push_back(eval.loss);

  while (eval.loss > 0.0 && result.iterations < config.max_iters) {
    for (std::size_t k = 0; k < 3; ++k) {
      result.theta[k] = std::max(0.0, result.theta[k] - config.learning_rate * eval.subgradient[k]);
    }
    ++result.iterations;
    const double previous = eval.loss;
    eval = problem.evaluate(result.theta, config.delta);
    if (!std::isfinite(eval.loss)) {
      throw Error("hinge loss became non-finite at iteration " + std::to_string(result.iterations));
    }
    result.loss_history.push_back(eval.loss);
    if (std::abs(previous - eval.loss) < config.convergence_tol) {
      break;
    }
  }
  result.final_loss = eval.loss;
  return result;
}

TuneResult tune_weights(std::span<const TuningExample> examples, const TunerConfig & config)
{
  return tune_weights(examples, config, config.theta_init);
}

ExtractResult extract_examples(const std::vector<PredictionRecord> & predictions,
                               const std::vector<DatasetRecord> & dataset, const EgoPlan * ego)
{
  std::map<AnchorKey, const DatasetRecord *> labels;
  for (const auto & rec : dataset) {
    if (!labels.emplace(make_anchor_key(rec.obstacle_id, rec.anchor_time), &rec).second) {
      throw ValidationError("duplicate dataset key (" + rec.obstacle_id + ", " + std::to_string(rec.anchor_time) +
                            ")");
    }
  }
  std::map<AnchorKey, const PredictionRecord *> preds;
  for (const auto & rec : predictions) {
    if (!preds.emplace(make_anchor_key(rec.obstacle_id, rec.anchor_time), &rec).second) {
      throw ValidationError("duplicate prediction key (" + rec.obstacle_id + ", " +
                            std::to_string(rec.anchor_time) + ")");
    }
  }

  ExtractResult out;
  for (const auto & [key, label] : labels) {
    if (!preds.contains(key)) {
      ++out.skipped_unmatched;
    }
  }
  for (const auto & [key, pred] : preds) {
    const auto it = labels.find(key);
    if (it == labels.end() || pred->intentions.empty()) {
      ++out.skipped_unmatched;
      continue;
    }
    const DatasetRecord & label = *it->second;
    if (label.future.future.size() != pred->n_points || pred->n_points < 3) {
      ++out.skipped_horizon_mismatch;
      continue;
    }
    TuningExample ex;
    ex.obstacle_id = pred->obstacle_id;
    ex.anchor_time = pred->anchor_time;
    ex.ground_truth = ground_truth_subcosts(label.future, ego, pred->z1, pred->z2);
    for (const auto & intention : pred->intentions) {
      for (const auto & c : intention.candidates) {
        ex.candidates.push_back({c.cost.c_acc, c.cost.c_centripetal, c.cost.c_collision});
      }
    }
    out.examples.push_back(std::move(ex));
  }
  return out;
}

}  // namespace postgen
