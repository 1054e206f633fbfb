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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "postgen/annotation.h"
#include "postgen/kernels.h"
#include "postgen/records.h"

namespace postgen
{

using SubCosts = kernels::Vec3;

/// One datum for the margin tuner: the observed trajectory's sub-costs and those of the
/// candidates sampled for the same obstacle and anchor.
struct TuningExample
{
  std::string obstacle_id;
  double anchor_time = 0.0;
  SubCosts ground_truth{0.0, 0.0, 0.0};
  std::vector<SubCosts> candidates;
};

struct TunerConfig
{
  double delta = 0.1;
  double learning_rate = 0.01;
  std::size_t max_iters = 1000;
  double convergence_tol = 1e-8;
  /// Recorded for reproducibility; full-batch descent consumes no randomness.
  std::uint64_t seed = 0;
  SubCosts theta_init{1.0, 1.0, 1.0};

  void validate() const;
};

TunerConfig load_tuner_config(const std::filesystem::path & path);

/// Sub-costs of an observed future under the candidate cost formulas. Velocities and
/// longitudinal accelerations come from second-order finite differences (central inside,
/// one-sided at the ends) and curvature from Menger triples of consecutive points.
/// Throws std::invalid_argument for fewer than 3 points.
SubCosts ground_truth_subcosts(const TrajectoryLabel & label, const EgoPlan * ego, double z1, double z2);

/// Packs every (example, candidate) pair as d = ground_truth - candidate in
/// structure-of-arrays form so the hinge can be evaluated by the SIMD kernels.
class HingeProblem
{
public:
  /// Throws ValidationError if any sub-cost is non-finite.
  explicit HingeProblem(std::span<const TuningExample> examples);

  std::size_t term_count() const { return d0_.size(); }
  kernels::HingeEval evaluate(const SubCosts & theta, double delta) const;
  double objective(const SubCosts & theta, double delta) const { return evaluate(theta, delta).loss; }
  SubCosts subgradient(const SubCosts & theta, double delta) const { return evaluate(theta, delta).subgradient; }

private:
  std::vector<double> d0_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

/// Sum over examples and their candidates of max(0, theta.gt - theta.candidate + delta).
double hinge_objective(std::span<const TuningExample> examples, const SubCosts & theta, double delta);

/// Sum of (gt - candidate) over terms strictly above zero.
SubCosts hinge_subgradient(std::span<const TuningExample> examples, const SubCosts & theta, double delta);

struct TuneResult
{
  SubCosts theta{0.0, 0.0, 0.0};
  /// Loss at the initial theta followed by the loss after each step.
  std::vector<double> loss_history;
  std::size_t iterations = 0;
  double final_loss = 0.0;
};

/// Projected subgradient descent: theta <- max(0, theta - lr * g). Stops after max_iters
/// steps, at zero loss, or when a step changes the loss by less than convergence_tol.
/// Throws Error if the loss becomes non-finite.
TuneResult tune_weights(std::span<const TuningExample> examples, const TunerConfig & config,
                        const SubCosts & theta_init);
TuneResult tune_weights(std::span<const TuningExample> examples, const TunerConfig & config);

struct ExtractResult
{
  /// Sorted by obstacle id, then anchor time.
  std::vector<TuningExample> examples;
  std::size_t skipped_unmatched = 0;
  std::size_t skipped_horizon_mismatch = 0;
};

/// Joins predictions and labels on (obstacle id, anchor time). Every candidate of every
/// intention becomes a sampled trajectory of the example. Throws ValidationError on
/// duplicate keys on either side.
ExtractResult extract_examples(const std::vector<PredictionRecord> & predictions,
                               const std::vector<DatasetRecord> & dataset, const EgoPlan * ego);

}  // namespace postgen
