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

#include "postgen/evaluation.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

#include "json_util.h"
#include "postgen/errors.h"
#include "postgen/kernels.h"

namespace postgen
{
namespace
{

constexpr double kGridTol = 1e-6;

// Number of leading points used for the horizon, after checking coverage and alignment.
std::size_t horizon_prefix(std::span<const TimedPoint> pred, std::span<const TimedPoint> truth, double horizon)
{
  if (pred.empty() || truth.empty() || pred.back().t < horizon - kGridTol || truth.back().t < horizon - kGridTol) {
    throw CoverageError("trajectory does not reach horizon " + std::to_string(horizon) + " s");
  }
  std::size_t n = 0;
  while (n < pred.size() && n < truth.size() && pred[n].t <= horizon + kGridTol) {
    if (std::abs(pred[n].t - truth[n].t) > kGridTol) {
      throw std::invalid_argument("prediction and truth are not on the same time grid");
    }
    ++n;
  }
  if (n == 0) {
    throw CoverageError("no points at or before horizon " + std::to_string(horizon) + " s");
  }
  return n;
}

bool covers(std::span<const TimedPoint> seq, double horizon)
{
  return !seq.empty() && seq.back().t >= horizon - kGridTol && seq.front().t <= horizon + kGridTol;
}

}  // namespace

double ade(std::span<const TimedPoint> pred, std::span<const TimedPoint> truth, double horizon)
{
  const std::size_t n = horizon_prefix(pred, truth, horizon);
  std::vector<double> dx(n);
  std::vector<double> dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = pred[i].point.x - truth[i].point.x;
    dy[i] = pred[i].point.y - truth[i].point.y;
  }
  return kernels::sum_norms(dx, dy) / static_cast<double>(n);
}

double fde(std::span<const TimedPoint> pred, std::span<const TimedPoint> truth, double horizon)
{
  const std::size_t n = horizon_prefix(pred, truth, horizon);
  const double dx = pred[n - 1].point.x - truth[n - 1].point.x;
  const double dy = pred[n - 1].point.y - truth[n - 1].point.y;
  return std::sqrt(dx * dx + dy * dy);
}

double mse(std::span<const Point2> pred, std::span<const Point2> truth)
{
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("mse needs two non-empty sequences of equal length");
  }
  std::vector<double> dx(pred.size());
  std::vector<double> dy(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    dx[i] = pred[i].x - truth[i].x;
    dy[i] = pred[i].y - truth[i].y;
  }
  return kernels::sum_squared_norms(dx, dy) / static_cast<double>(pred.size());
}

double gaussian_nll(std::span<const GaussianPoint> pred, std::span<const Point2> truth)
{
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("gaussian_nll needs two non-empty sequences of equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const GaussianPoint & g = pred[i];
    if (!(g.sigma_x > 0.0) || !(g.sigma_y > 0.0) || !(std::abs(g.rho) < 1.0)) {
      throw std::invalid_argument("gaussian_nll needs sigma > 0 and |rho| < 1");
    }
    const double zx = (truth[i].x - g.mu_x) / g.sigma_x;
    const double zy = (truth[i].y - g.mu_y) / g.sigma_y;
    const double one_minus_r2 = 1.0 - g.rho * g.rho;
    const double q = (zx * zx - 2.0 * g.rho * zx * zy + zy * zy) / one_minus_r2;
    const double log_norm = std::log(2.0 * std::numbers::pi * g.sigma_x * g.sigma_y * std::sqrt(one_minus_r2));
    sum += -log_norm - 0.5 * q;
  }
  return -sum / static_cast<double>(pred.size());
}

MetricReport evaluate_run(const std::vector<PredictionRecord> & predictions,
                          const std::vector<DatasetRecord> & dataset, const std::vector<double> & horizons)
{
  MetricReport report;
  for (const double h : horizons) {
    report.horizons.push_back({h, 0.0, 0.0, 0, 0});
  }
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
  for (const auto & [key, label] : labels) {
    if (!preds.contains(key)) {
      ++report.skipped;
    }
  }

  double mse_sum = 0.0;
  std::size_t mse_count = 0;
  for (const auto & [key, pred] : preds) {
    const auto it = labels.find(key);
    const IntentionRecord * sel = pred->selected();
    if (it == labels.end() || sel == nullptr) {
      ++report.skipped;
      continue;
    }
    const auto & truth = it->second->future.future;
    const auto & traj = sel->best_trajectory;
    for (auto & hm : report.horizons) {
      if (!covers(traj, hm.horizon) || !covers(truth, hm.horizon)) {
        ++hm.excluded;
        ++report.skipped;
        continue;
      }
      hm.ade += ade(traj, truth, hm.horizon);
      hm.fde += fde(traj, truth, hm.horizon);
      ++hm.count;
    }
    const std::size_t n = std::min(traj.size(), truth.size());
    if (n > 0) {
      std::vector<Point2> p(n);
      std::vector<Point2> q(n);
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = traj[i].point;
        q[i] = truth[i].point;
      }
      mse_sum += mse(p, q);
      ++mse_count;
    }
  }
  for (auto & hm : report.horizons) {
    if (hm.count > 0) {
      hm.ade /= static_cast<double>(hm.count);
      hm.fde /= static_cast<double>(hm.count);
    }
  }
  if (mse_count > 0) {
    report.mse = mse_sum / static_cast<double>(mse_count);
  }
  return report;
}

std::string report_to_json(const MetricReport & report)
{
  detail::json hs = detail::json::array();
  for (const auto & h : report.horizons) {
    hs.push_back({{"h", h.horizon}, {"ade", h.ade}, {"fde", h.fde}, {"count", h.count}});
  }
  detail::json doc = {{"horizons", std::move(hs)}, {"skipped", report.skipped}};
  if (report.mse) {
    doc["mse"] = *report.mse;
  }
  if (report.nll) {
    doc["nll"] = *report.nll;
  }
  return doc.dump(2) + "\n";
}

std::string report_to_table(const MetricReport & report)
{
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%10s %12s %12s %8s\n", "horizon_s", "ADE_m", "FDE_m", "count");
  out += line;
  for (const auto & h : report.horizons) {
    std::snprintf(line, sizeof(line), "%10.3g %12.4f %12.4f %8zu\n", h.horizon, h.ade, h.fde, h.count);
    out += line;
  }
  return out;
}

}  // namespace postgen
