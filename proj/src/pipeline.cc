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

#include "postgen/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json_util.h"
#include "postgen/annotation.h"
#include "postgen/autotune.h"
#include "postgen/costing.h"
#include "postgen/errors.h"
#include "postgen/evaluation.h"
#include "postgen/generation.h"
#include "postgen/records.h"
#include "postgen/scene.h"

namespace postgen
{

using detail::json;

namespace
{

constexpr double kTimeEps = 1e-9;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

int usage_error(std::ostream & err, const std::string & msg)
{
  err << "error: " << msg << "\n";
  return kExitUsageError;
}

// Runs a command body, mapping library exceptions to exit codes.
template <typename Fn>
int guarded(std::ostream & err, Fn && fn)
{
  try {
    return fn();
  } catch (const Error & e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitDataError;
}

// The track as it was known at `anchor`: states up to the anchor, ending exactly on it.
ObstacleTrack truncate_track(const ObstacleTrack & track, double anchor)
{
  std::vector<ObstacleState> states;
  for (const auto & s : track.states()) {
    if (s.timestamp < anchor - kTimeEps) {
      states.push_back(s);
    }
  }
  states.push_back(track.state_at(anchor));
  return ObstacleTrack(track.obstacle_id(), std::move(states));
}

std::vector<double> prediction_anchors(const ObstacleTrack & track, const GenerationConfig & config)
{
  if (config.anchor_stride_secs > 0.0) {
    return anchor_grid(track.start_time(), track.end_time(), config.anchor_stride_secs);
  }
  return {track.end_time()};
}

std::string format_time(double t)
{
  std::ostringstream os;
  os << t;
  return os.str();
}

// Builds candidate groups for one anchor. Returns an empty vector when the obstacle is off-map.
std::vector<IntentionCandidates> build_groups(const ObstacleTrack & known, const MapGraph & map,
                                              const std::vector<IntentionPrior> * file_priors,
                                              const GenerationConfig & config, Scenario scenario,
                                              std::ostream & err)
{
  const ObstacleState & state = known.latest();
  PathSearchOptions search;
  search.min_length = config.min_path_length_m;
  search.max_lanes = config.max_lanes;
  search.lateral_capture = config.lateral_capture_m;
  search.allow_exit_lane_fallback = scenario == Scenario::kIntersection;

  const SpeedLimits limits{config.a_min, config.a_max, config.v_max};
  const auto profiles =
    sample_profiles(state.speed, config.accel_set, config.horizon_secs, config.resolution_secs, limits);

  std::vector<IntentionPrior> priors;
  std::map<std::string, std::vector<PathCandidate>> paths;
  if (file_priors != nullptr) {
    priors = *file_priors;
  } else if (!map.exits().empty()) {
    priors = heuristic_exit_priors(state, map, config.temperature);
  } else {
    for (auto & path : enumerate_lane_paths(state, map, search)) {
      const std::string key = lane_sequence_key(path.lane_ids);
      path.intention_id = key;
      auto & bucket = paths[key];
      if (bucket.empty()) {
        priors.push_back({key, 1.0});
      }
      bucket.push_back(std::move(path));
    }
    if (priors.empty()) {
      return {};
    }
    priors = normalize_priors(std::move(priors));
  }

  std::vector<IntentionCandidates> groups;
  for (const auto & prior : priors) {
    auto it = paths.find(prior.intention_id);
    std::vector<PathCandidate> found =
      it != paths.end() ? std::move(it->second) : search_paths(prior.intention_id, state, map, search);
    if (found.empty()) {
      err << "note: obstacle '" << known.obstacle_id() << "' at t=" << format_time(state.timestamp)
          << ": no path for intention '" << prior.intention_id << "', dropped\n";
      continue;
    }
    groups.push_back({prior.intention_id, prior.prior, generate_candidates(found, profiles, state.timestamp)});
  }
  if (groups.empty()) {
    return groups;
  }
  double sum = 0.0;
  for (const auto & g : groups) {
    sum += g.prior;
  }
  if (!(sum > 0.0)) {
    return {};
  }
  for (auto & g : groups) {
    g.prior /= sum;
  }
  return groups;
}

std::string weights_document(const CostWeights & w, const TuneResult & result)
{
  json doc = {{"theta_acc", w.theta_acc},
              {"theta_centripetal", w.theta_centripetal},
              {"theta_collision", w.theta_collision},
              {"z1", w.z1},
              {"z2", w.z2},
              {"final_loss", result.final_loss},
              {"iterations", result.iterations}};
  return doc.dump(2) + "\n";
}

}  // namespace

std::optional<std::vector<double>> parse_horizon_list(const std::string & text)
{
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) {
      return std::nullopt;
    }
    item = item.substr(first, last - first + 1);
    double value = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !positive_finite(value)) {
      return std::nullopt;
    }
    out.push_back(value);
    pos = comma + 1;
  }
  if (out.empty()) {
    return std::nullopt;
  }
  return out;
}

int cmd_annotate(const AnnotateOptions & options, std::ostream & out, std::ostream & err)
{
  if (!positive_finite(options.horizon)) {
    return usage_error(err, "--horizon must be > 0");
  }
  if (!positive_finite(options.stride)) {
    return usage_error(err, "--stride must be > 0");
  }
  if (!positive_finite(options.resolution) || options.resolution > options.horizon) {
    return usage_error(err, "--resolution must be > 0 and not exceed --horizon");
  }
  if (!(options.min_history >= 0.0) || !(options.history >= 0.0)) {
    return usage_error(err, "history lengths must be >= 0");
  }
  return guarded(err, [&] {
    const auto tracks = load_obstacle_log(options.log);
    const MapGraph map = load_map(options.map);
    if (options.ego) {
      load_ego_plan(*options.ego);  // validated only; labels do not depend on the ego plan
    }
    AnnotationConfig config;
    config.road_test_id = options.road_test_id;
    config.horizon = options.horizon;
    config.resolution = options.resolution;
    config.stride = options.stride;
    config.min_history_secs = options.min_history;
    config.history_secs = options.history;
    const Dataset dataset = build_dataset(tracks, map, config);

    std::string content;
    for (const auto & rec : dataset.records) {
      content += serialize_dataset_record(rec) + "\n";
    }
    detail::write_atomically(options.out, content);
    out << json{{"records", dataset.records.size()}, {"skipped", dataset.skipped}}.dump() << "\n";
    return kExitOk;
  });
}

int cmd_predict(const PredictOptions & options, std::ostream & out, std::ostream & err)
{
  return guarded(err, [&] {
    const auto tracks = load_obstacle_log(options.scene);
    const MapGraph map = load_map(options.map);
    std::optional<EgoPlan> ego;
    if (options.ego) {
      ego = load_ego_plan(*options.ego);
    }
    PriorTable priors;
    if (options.priors) {
      priors = load_priors(*options.priors);
    }
    const GenerationConfig config = load_generation_config(options.config);
    const std::size_t n_points = horizon_steps(config.horizon_secs, config.resolution_secs);
    const CostWeights weights = load_weights(options.weights, n_points);
    const EgoPlan * ego_ptr = ego ? &*ego : nullptr;

    std::vector<PredictionRecord> records;
    std::size_t off_map = 0;
    for (const auto & track : tracks) {
      for (const double anchor : prediction_anchors(track, config)) {
        const ObstacleTrack known = truncate_track(track, anchor);
        const Scenario scenario = classify_scenario(known, map);
        const Priority priority = classify_priority(known, ego_ptr);
        const auto it = priors.find(make_anchor_key(track.obstacle_id(), anchor));
        std::vector<IntentionCandidates> groups;
        try {
          groups = build_groups(known, map, it != priors.end() ? &it->second : nullptr, config, scenario, err);
        } catch (const NoAssociationError & e) {
          err << "note: " << e.what() << "\n";
        }
        if (groups.empty()) {
          err << "note: obstacle '" << track.obstacle_id() << "' at t=" << format_time(anchor)
              << " is off-map, skipped\n";
          ++off_map;
          continue;
        }
        const PredictionResult result = rank_intentions(track.obstacle_id(), anchor, groups, ego_ptr, weights);
        records.push_back(to_record(result, weights, scenario, priority));
      }
    }
    std::stable_sort(records.begin(), records.end(), [](const PredictionRecord & a, const PredictionRecord & b) {
      return make_anchor_key(a.obstacle_id, a.anchor_time) < make_anchor_key(b.obstacle_id, b.anchor_time);
    });
    std::string content;
    for (const auto & rec : records) {
      content += serialize_prediction(rec) + "\n";
    }
    detail::write_atomically(options.out, content);
    out << json{{"predictions", records.size()}, {"off_map", off_map}}.dump() << "\n";
    return kExitOk;
  });
}

int cmd_tune(const TuneOptions & options, std::ostream & out, std::ostream & err)
{
  return guarded(err, [&] {
    const auto predictions = load_predictions(options.predictions);
    const auto dataset = load_dataset(options.dataset);
    const TunerConfig config = load_tuner_config(options.tuner_config);
    std::optional<EgoPlan> ego;
    if (options.ego) {
      ego = load_ego_plan(*options.ego);
    }
    const ExtractResult extracted = extract_examples(predictions, dataset, ego ? &*ego : nullptr);
    if (extracted.examples.empty()) {
      err << "error: no tuning examples (unmatched " << extracted.skipped_unmatched << ", horizon mismatch "
          << extracted.skipped_horizon_mismatch << ")\n";
      return static_cast<int>(kExitDataError);
    }
    const TuneResult result = tune_weights(extracted.examples, config);

    // Normalizers are carried over from the predictions the sub-costs were computed with.
    CostWeights w;
    w.z1 = predictions.front().z1;
    w.z2 = predictions.front().z2;
    w.theta_acc = result.theta[0];
    w.theta_centripetal = result.theta[1];
    w.theta_collision = result.theta[2];
    detail::write_atomically(options.out, weights_document(w, result));
    out << json{{"examples", extracted.examples.size()},
                {"skipped_unmatched", extracted.skipped_unmatched},
                {"skipped_horizon_mismatch", extracted.skipped_horizon_mismatch},
                {"iterations", result.iterations},
                {"final_loss", result.final_loss}}
             .dump()
        << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_eval(const EvalOptions & options, std::ostream & out, std::ostream & err)
{
  if (options.horizons.empty() ||
      !std::all_of(options.horizons.begin(), options.horizons.end(), positive_finite)) {
    return usage_error(err, "--horizons must be a non-empty list of positive seconds");
  }
  return guarded(err, [&] {
    const auto predictions = load_predictions(options.predictions);
    const auto dataset = load_dataset(options.dataset);
    const MetricReport report = evaluate_run(predictions, dataset, options.horizons);
    detail::write_atomically(options.out, report_to_json(report));
    out << report_to_table(report);
    return static_cast<int>(kExitOk);
  });
}

}  // namespace postgen
