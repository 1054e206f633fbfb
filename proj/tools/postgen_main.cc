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

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "postgen/pipeline.h"

namespace
{

using postgen::kExitUsageError;

// CLI11 stores optional paths as strings; empty means "not given".
std::optional<std::filesystem::path> optional_path(const std::string & s)
{
  if (s.empty()) {
    return std::nullopt;
  }
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"postgen: trajectory candidate generation, ranking, weight tuning and evaluation"};
  app.require_subcommand(1);

  postgen::AnnotateOptions annotate;
  std::string annotate_ego;
  auto * a = app.add_subcommand("annotate", "Label obstacle futures and intentions from a log");
  a->add_option("--log", annotate.log, "Obstacle log (JSON-lines)")->required();
  a->add_option("--map", annotate.map, "Map file (JSON)")->required();
  a->add_option("--ego", annotate_ego, "Ego plan (JSON-lines), optional");
  a->add_option("--horizon", annotate.horizon, "Label horizon in seconds")->required();
  a->add_option("--stride", annotate.stride, "Anchor stride in seconds")->required();
  a->add_option("--resolution", annotate.resolution, "Label time step in seconds")->capture_default_str();
  a->add_option("--min-history", annotate.min_history, "Minimum observed history before an anchor, seconds")
    ->capture_default_str();
  a->add_option("--history", annotate.history, "History window exported per record, seconds")
    ->capture_default_str();
  a->add_option("--road-test-id", annotate.road_test_id, "Identifier stored in every record")
    ->capture_default_str();
  a->add_option("--out", annotate.out, "Output dataset (JSON-lines)")->required();

  postgen::PredictOptions predict;
  std::string predict_ego;
  std::string predict_priors;
  auto * p = app.add_subcommand("predict", "Generate, score and rank candidate trajectories");
  p->add_option("--scene", predict.scene, "Obstacle log (JSON-lines)")->required();
  p->add_option("--map", predict.map, "Map file (JSON)")->required();
  p->add_option("--ego", predict_ego, "Ego plan (JSON-lines), optional");
  p->add_option("--priors", predict_priors, "Intention priors (JSON-lines), optional");
  p->add_option("--weights", predict.weights, "Cost weights (JSON)")->required();
  p->add_option("--config", predict.config, "Generation config (JSON)")->required();
  p->add_option("--out", predict.out, "Output predictions (JSON-lines)")->required();

  postgen::TuneOptions tune;
  std::string tune_ego;
  auto * t = app.add_subcommand("tune", "Fit cost weights to labeled futures");
  t->add_option("--predictions", tune.predictions, "Predictions (JSON-lines)")->required();
  t->add_option("--dataset", tune.dataset, "Labeled dataset (JSON-lines)")->required();
  t->add_option("--tuner-config", tune.tuner_config, "Tuner config (JSON)")->required();
  t->add_option("--ego", tune_ego, "Ego plan used for ground-truth collision costs, optional");
  t->add_option("--out", tune.out, "Output weights (JSON)")->required();

  postgen::EvalOptions eval;
  std::string horizons = "1,3";
  auto * e = app.add_subcommand("eval", "Compute ADE/FDE of predictions against labels");
  e->add_option("--predictions", eval.predictions, "Predictions (JSON-lines)")->required();
  e->add_option("--dataset", eval.dataset, "Labeled dataset (JSON-lines)")->required();
  e->add_option("--horizons", horizons, "Comma-separated horizons in seconds")->capture_default_str();
  e->add_option("--out", eval.out, "Output report (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsageError;
  }

  if (a->parsed()) {
    annotate.ego = optional_path(annotate_ego);
    return postgen::cmd_annotate(annotate, std::cout, std::cerr);
  }
  if (p->parsed()) {
    predict.ego = optional_path(predict_ego);
    predict.priors = optional_path(predict_priors);
    return postgen::cmd_predict(predict, std::cout, std::cerr);
  }
  if (t->parsed()) {
    tune.ego = optional_path(tune_ego);
    return postgen::cmd_tune(tune, std::cout, std::cerr);
  }
  const auto list = postgen::parse_horizon_list(horizons);
  if (!list) {
    std::cerr << "error: malformed --horizons '" << horizons << "'\n";
    return kExitUsageError;
  }
  eval.horizons = *list;
  return postgen::cmd_eval(eval, std::cout, std::cerr);
}
