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
#include <optional>
#include <string>
#include <vector>

namespace postgen
{

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsageError = 2 };

struct AnnotateOptions
{
  std::filesystem::path log;
  std::filesystem::path map;
  std::optional<std::filesystem::path> ego;
  double horizon = 8.0;
  double stride = 1.0;
  double resolution = 0.1;
  double min_history = 0.0;
  double history = 1.0;
  std::string road_test_id = "default";
  std::filesystem::path out;
};

struct PredictOptions
{
  std::filesystem::path scene;
  std::filesystem::path map;
  std::optional<std::filesystem::path> ego;
  std::optional<std::filesystem::path> priors;
  std::filesystem::path weights;
  std::filesystem::path config;
  std::filesystem::path out;
};

struct TuneOptions
{
  std::filesystem::path predictions;
  std::filesystem::path dataset;
  std::filesystem::path tuner_config;
  std::optional<std::filesystem::path> ego;
  std::filesystem::path out;
};

struct EvalOptions
{
  std::filesystem::path predictions;
  std::filesystem::path dataset;
  std::vector<double> horizons{1.0, 3.0};
  std::filesystem::path out;
};

/// Parses "1,3" style lists of positive seconds. Returns nullopt on any malformed entry.
std::optional<std::vector<double>> parse_horizon_list(const std::string & text);

int cmd_annotate(const AnnotateOptions & options, std::ostream & out, std::ostream & err);
int cmd_predict(const PredictOptions & options, std::ostream & out, std::ostream & err);
int cmd_tune(const TuneOptions & options, std::ostream & out, std::ostream & err);
int cmd_eval(const EvalOptions & options, std::ostream & out, std::ostream & err);

}  // namespace postgen
