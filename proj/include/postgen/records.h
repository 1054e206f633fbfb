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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "postgen/annotation.h"
#include "postgen/costing.h"
#include "postgen/scene.h"

// File records shared by the pipeline stages: the labeled dataset written by annotation
// and the prediction results written by ranking. Both are JSON-lines.

namespace postgen
{

/// Join key of a record: obstacle id plus anchor time rounded to whole microseconds.
struct AnchorKey
{
  std::string obstacle_id;
  std::int64_t anchor_us = 0;

  auto operator<=>(const AnchorKey &) const = default;
};

AnchorKey make_anchor_key(const std::string & obstacle_id, double anchor_time);

struct CandidateRecord
{
  double accel = 0.0;
  std::string lanes;
  CostBreakdown cost;
};

struct IntentionRecord
{
  std::string intention_id;
  double prior = 0.0;
  double min_cost = 0.0;
  double likelihood = 0.0;
  double posterior = 0.0;
  std::vector<std::string> lane_ids;
  double best_accel = 0.0;
  CostBreakdown best_cost;
  /// Best trajectory positions at times relative to the anchor.
  std::vector<TimedPoint> best_trajectory;
  std::vector<CandidateRecord> candidates;
};

struct PredictionRecord
{
  std::string obstacle_id;
  double anchor_time = 0.0;
  std::string scenario;
  std::string priority;
  double z1 = 1.0;
  double z2 = 1.0;
  std::size_t n_points = 0;
  std::string selected_intention;
  std::vector<IntentionRecord> intentions;

  const IntentionRecord * selected() const;
};

PredictionRecord to_record(const PredictionResult & result, const CostWeights & weights, Scenario scenario,
                           Priority priority);

/// One JSON object on a single line, without the trailing newline.
std::string serialize_prediction(const PredictionRecord & record);
std::vector<PredictionRecord> parse_predictions(std::istream & in, const std::string & name);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path & path);

/// One JSON object on a single line, without the trailing newline.
std::string serialize_dataset_record(const DatasetRecord & record);
std::vector<DatasetRecord> parse_dataset(std::istream & in, const std::string & name);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path & path);

/// Priors file rows keyed by anchor. Each row's priors are renormalized on load.
using PriorTable = std::map<AnchorKey, std::vector<IntentionPrior>>;

PriorTable parse_priors(std::istream & in, const std::string & name);
PriorTable load_priors(const std::filesystem::path & path);

}  // namespace postgen
