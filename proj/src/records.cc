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

#include "postgen/records.h"

#include <cmath>
#include <fstream>

#include "json_util.h"
#include "postgen/errors.h"

namespace postgen
{

using detail::json;

namespace
{

json cost_to_json(const CostBreakdown & c)
{
  return {{"c_acc", c.c_acc}, {"c_centripetal", c.c_centripetal}, {"c_collision", c.c_collision}, {"total", c.total}};
}

CostBreakdown cost_from_json(const json & obj, const std::string & name, std::size_t line)
{
  if (!obj.is_object()) {
    throw ParseError(name, line, "cost breakdown must be an object");
  }
  return {detail::get_number(obj, "c_acc", name, line), detail::get_number(obj, "c_centripetal", name, line),
          detail::get_number(obj, "c_collision", name, line), detail::get_number(obj, "total", name, line)};
}

json timed_points_to_json(const std::vector<TimedPoint> & pts)
{
  json arr = json::array();
  for (const auto & p : pts) {
    arr.push_back({p.t, p.point.x, p.point.y});
  }
  return arr;
}

std::vector<TimedPoint> timed_points_from_json(const json & arr, const std::string & name, std::size_t line)
{
  if (!arr.is_array()) {
    throw ParseError(name, line, "expected an array of [dt, x, y]");
  }
  std::vector<TimedPoint> out;
  out.reserve(arr.size());
  for (const auto & e : arr) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() || !e[2].is_number()) {
      throw ParseError(name, line, "expected [dt, x, y]");
    }
    out.push_back({e[0].get<double>(), {e[1].get<double>(), e[2].get<double>()}});
  }
  return out;
}

std::vector<std::string> strings_from_json(const json & arr, const std::string & name, std::size_t line)
{
  if (!arr.is_array()) {
    throw ParseError(name, line, "expected an array of strings");
  }
  std::vector<std::string> out;
  for (const auto & e : arr) {
    if (!e.is_string()) {
      throw ParseError(name, line, "expected an array of strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

const json & require(const json & obj, const char * key, const std::string & name, std::size_t line)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(name, line, std::string("missing key '") + key + "'");
  }
  return *it;
}

}  // namespace

AnchorKey make_anchor_key(const std::string & obstacle_id, double anchor_time)
{
  return {obstacle_id, std::llround(anchor_time * 1e6)};
}

const IntentionRecord * PredictionRecord::selected() const
{
  for (const auto & i : intentions) {
    if (i.intention_id == selected_intention) {
      return &i;
    }
  }
  return nullptr;
}

PredictionRecord to_record(const PredictionResult & result, const CostWeights & weights, Scenario scenario,
                           Priority priority)
{
  PredictionRecord rec;
  rec.obstacle_id = result.obstacle_id;
  rec.anchor_time = result.anchor_time;
  rec.scenario = to_string(scenario);
  rec.priority = to_string(priority);
  rec.z1 = weights.z1;
  rec.z2 = weights.z2;
  rec.selected_intention = result.selected_intention;
  for (const auto & r : result.intentions) {
    IntentionRecord ir;
    ir.intention_id = r.intention_id;
    ir.prior = r.prior;
    ir.min_cost = r.min_cost;
    ir.likelihood = r.likelihood;
    ir.posterior = r.posterior;
    ir.lane_ids = r.best_trajectory.lane_ids;
    ir.best_accel = r.best_trajectory.source_profile.accel();
    ir.best_cost = r.best_cost;
    for (const auto & p : r.best_trajectory.points) {
      ir.best_trajectory.push_back({p.t, p.position});
    }
    rec.n_points = r.best_trajectory.points.size();
    for (const auto & s : r.scores) {
      ir.candidates.push_back({s.accel, s.lanes, s.cost});
    }
    rec.intentions.push_back(std::move(ir));
  }
  return rec;
}

std::string serialize_prediction(const PredictionRecord & rec)
{
  json intentions = json::array();
  for (const auto & i : rec.intentions) {
    json cands = json::array();
    for (const auto & c : i.candidates) {
      json obj = cost_to_json(c.cost);
      obj["accel"] = c.accel;
      if (!c.lanes.empty()) {
        obj["lanes"] = c.lanes;
      }
      cands.push_back(std::move(obj));
    }
    intentions.push_back({{"id", i.intention_id},
                          {"prior", i.prior},
                          {"min_cost", i.min_cost},
                          {"likelihood", i.likelihood},
                          {"posterior", i.posterior},
                          {"lanes", i.lane_ids},
                          {"best_accel", i.best_accel},
                          {"best_cost", cost_to_json(i.best_cost)},
                          {"best_trajectory", timed_points_to_json(i.best_trajectory)},
                          {"candidates", std::move(cands)}});
  }
  const json obj = {{"obstacle_id", rec.obstacle_id},
                    {"anchor_time", rec.anchor_time},
                    {"scenario", rec.scenario},
                    {"priority", rec.priority},
                    {"z1", rec.z1},
                    {"z2", rec.z2},
                    {"n_points", rec.n_points},
                    {"selected_intention", rec.selected_intention},
                    {"intentions", std::move(intentions)}};
  return obj.dump();
}

std::vector<PredictionRecord> parse_predictions(std::istream & in, const std::string & name)
{
  std::vector<PredictionRecord> out;
  detail::for_each_json_line(in, name, [&](const json & obj, std::size_t line) {
    PredictionRecord rec;
    rec.obstacle_id = detail::get_string(obj, "obstacle_id", name, line);
    rec.anchor_time = detail::get_number(obj, "anchor_time", name, line);
    rec.scenario = obj.value("scenario", "");
    rec.priority = obj.value("priority", "");
    rec.z1 = detail::get_number(obj, "z1", name, line);
    rec.z2 = detail::get_number(obj, "z2", name, line);
    const double n = detail::get_number(obj, "n_points", name, line);
    if (n < 0.0 || n != std::floor(n)) {
      throw ParseError(name, line, "n_points must be a non-negative integer");
    }
    rec.n_points = static_cast<std::size_t>(n);
    rec.selected_intention = detail::get_string(obj, "selected_intention", name, line);
    const json & intentions = require(obj, "intentions", name, line);
    if (!intentions.is_array()) {
      throw ParseError(name, line, "'intentions' must be an array");
    }
    for (const auto & i : intentions) {
      IntentionRecord ir;
      ir.intention_id = detail::get_string(i, "id", name, line);
      ir.prior = detail::get_number(i, "prior", name, line);
      ir.min_cost = detail::get_number(i, "min_cost", name, line);
      ir.likelihood = detail::get_number(i, "likelihood", name, line);
      ir.posterior = detail::get_number(i, "posterior", name, line);
      if (i.contains("lanes")) {
        ir.lane_ids = strings_from_json(i["lanes"], name, line);
      }
      ir.best_accel = detail::get_number(i, "best_accel", name, line);
      ir.best_cost = cost_from_json(require(i, "best_cost", name, line), name, line);
      ir.best_trajectory = timed_points_from_json(require(i, "best_trajectory", name, line), name, line);
      const json & cands = require(i, "candidates", name, line);
      if (!cands.is_array()) {
        throw ParseError(name, line, "'candidates' must be an array");
      }
      for (const auto & c : cands) {
        CandidateRecord cr;
        cr.accel = detail::get_number(c, "accel", name, line);
        cr.lanes = c.value("lanes", "");
        cr.cost = cost_from_json(c, name, line);
        ir.candidates.push_back(std::move(cr));
      }
      rec.intentions.push_back(std::move(ir));
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_predictions(in, path.string());
}

std::string serialize_dataset_record(const DatasetRecord & rec)
{
  json history = json::array();
  for (const auto & s : rec.history) {
    history.push_back(
        {{"t", s.timestamp}, {"x", s.position.x}, {"y", s.position.y}, {"heading", s.heading}, {"speed", s.speed}});
  }
  const json obj = {
      {"road_test_id", rec.road_test_id},
      {"obstacle_id", rec.obstacle_id},
      {"anchor_time", rec.anchor_time},
      {"history", std::move(history)},
      {"future", timed_points_to_json(rec.future.future)},
      {"exit_label", rec.exit_label ? json(*rec.exit_label) : json(nullptr)},
      {"lane_sequence_label", rec.lane_sequence_label ? json(*rec.lane_sequence_label) : json(nullptr)}};
  return obj.dump();
}

std::vector<DatasetRecord> parse_dataset(std::istream & in, const std::string & name)
{
  std::vector<DatasetRecord> out;
  detail::for_each_json_line(in, name, [&](const json & obj, std::size_t line) {
    DatasetRecord rec;
    rec.road_test_id = detail::get_string(obj, "road_test_id", name, line);
    rec.obstacle_id = detail::get_string(obj, "obstacle_id", name, line);
    rec.anchor_time = detail::get_number(obj, "anchor_time", name, line);
    const json & history = require(obj, "history", name, line);
    if (!history.is_array()) {
      throw ParseError(name, line, "'history' must be an array");
    }
    for (const auto & h : history) {
      ObstacleState s;
      s.obstacle_id = rec.obstacle_id;
      s.timestamp = detail::get_number(h, "t", name, line);
      s.position = {detail::get_number(h, "x", name, line), detail::get_number(h, "y", name, line)};
      s.heading = detail::get_number(h, "heading", name, line);
      s.speed = detail::get_number(h, "speed", name, line);
      rec.history.push_back(std::move(s));
    }
    rec.future.obstacle_id = rec.obstacle_id;
    rec.future.anchor_time = rec.anchor_time;
    rec.future.future = timed_points_from_json(require(obj, "future", name, line), name, line);
    if (!rec.future.future.empty()) {
      rec.future.resolution = rec.future.future.front().t;
      rec.future.horizon = rec.future.future.back().t;
    }
    if (const json & e = require(obj, "exit_label", name, line); !e.is_null()) {
      if (!e.is_string()) {
        throw ParseError(name, line, "'exit_label' must be a string or null");
      }
      rec.exit_label = e.get<std::string>();
    }
    if (const json & l = require(obj, "lane_sequence_label", name, line); !l.is_null()) {
      rec.lane_sequence_label = strings_from_json(l, name, line);
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_dataset(in, path.string());
}

PriorTable parse_priors(std::istream & in, const std::string & name)
{
  PriorTable table;
  detail::for_each_json_line(in, name, [&](const json & obj, std::size_t line) {
    const std::string id = detail::get_string(obj, "obstacle_id", name, line);
    const double anchor = detail::get_number(obj, "anchor_time", name, line);
    const auto it = obj.find("intentions");
    if (it == obj.end() || !it->is_array() || it->empty()) {
      throw ParseError(name, line, "'intentions' must be a non-empty array");
    }
    std::vector<IntentionPrior> priors;
    for (const auto & entry : *it) {
      if (!entry.is_object()) {
        throw ParseError(name, line, "intention entries must be objects");
      }
      const double prior = detail::get_number(entry, "prior", name, line);
      if (prior < 0.0) {
        throw ParseError(name, line, "prior must be >= 0");
      }
      priors.push_back({detail::get_string(entry, "id", name, line), prior});
    }
    try {
      priors = normalize_priors(std::move(priors));
    } catch (const ValidationError & e) {
      throw ParseError(name, line, e.what());
    }
    if (!table.emplace(make_anchor_key(id, anchor), std::move(priors)).second) {
      throw ParseError(name, line, "duplicate priors for obstacle '" + id + "'");
    }
  });
  return table;
}

PriorTable load_priors(const std::filesystem::path & path)
{
  auto in = detail::open_input(path);
  return parse_priors(in, path.string());
}

}  // namespace postgen
