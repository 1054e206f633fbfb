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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postgen/records.h"
#include "postgen/scene.h"

namespace postgen
{

struct GaussianPoint
{
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double rho = 0.0;
};

/// Mean displacement over points with relative time <= horizon. Both sequences must be on
/// the same time grid and reach the horizon; throws CoverageError otherwise.
double ade(std::span<const TimedPoint> pred, std::span<const TimedPoint> truth, double horizon);

/// Displacement at the last grid point with relative time <= horizon.
double fde(std::span<const TimedPoint> pred, std::span<const TimedPoint> truth, double horizon);

/// (1/N) sum of squared displacements. Throws std::invalid_argument on length mismatch or N = 0.
double mse(std::span<const Point2> pred, std::span<const Point2> truth);

/// Negative mean log-density of truth under per-point bivariate normals.
/// Throws std::invalid_argument for sigma <= 0, |rho| >= 1, or length mismatch.
double gaussian_nll(std::span<const GaussianPoint> pred, std::span<const Point2> truth);

struct HorizonMetrics
{
  double horizon = 0.0;
  double ade = 0.0;
  double fde = 0.0;
  std::size_t count = 0;
  /// Joined anchors whose prediction or label stops short of this horizon.
  std::size_t excluded = 0;
};

struct MetricReport
{
  std::vector<HorizonMetrics> horizons;
  std::optional<double> mse;
  std::optional<double> nll;
  /// Unjoined anchors plus (anchor, horizon) pairs excluded for coverage.
  std::size_t skipped = 0;
};

/// Scores each joined anchor's selected-intention trajectory against its label.
/// Per-horizon metrics are means over the anchors that cover the horizon.
MetricReport evaluate_run(const std::vector<PredictionRecord> & predictions,
                          const std::vector<DatasetRecord> & dataset, const std::vector<double> & horizons);

std::string report_to_json(const MetricReport & report);
std::string report_to_table(const MetricReport & report);

}  // namespace postgen
