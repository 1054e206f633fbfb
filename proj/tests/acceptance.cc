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

// Acceptance suite: one PASS/FAIL line per criterion with its runtime budget.
// Exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "postgen/annotation.h"
#include "postgen/autotune.h"
#include "postgen/costing.h"
#include "postgen/evaluation.h"
#include "postgen/generation.h"
#include "postgen/records.h"
#include "postgen/scene.h"

namespace
{

using namespace postgen;
namespace fs = std::filesystem;

const std::string kData = POSTGEN_TEST_DATA_DIR;
const std::string kCli = POSTGEN_CLI_PATH;

struct Outcome
{
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string & what)
  {
    if (!ok && pass) {
      detail = what;
    }
    pass = pass && ok;
  }
};

std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- criterion 1

Outcome posterior_contract()
{
  Outcome out;
  const Scene scene = load_scene(kData + "/scene.jsonl", kData + "/intersection_map.json", kData + "/ego.jsonl");
  const PriorTable priors = load_priors(kData + "/priors.jsonl");
  const GenerationConfig config = load_generation_config(kData + "/generation.json");
  const CostWeights weights = load_weights(kData + "/weights.json", horizon_steps(config.horizon_secs, 0.1));
  const ObstacleTrack * track = nullptr;
  for (const auto & t : scene.tracks) {
    if (t.obstacle_id() == "car_left") {
      track = &t;
    }
  }
  out.require(track != nullptr, "fixture lacks car_left");
  if (!out.pass) {
    return out;
  }
  const double anchor = 2.0;
  const ObstacleState state = track->state_at(anchor);
  const auto & prior_list = priors.at(make_anchor_key("car_left", anchor));
  PathSearchOptions search;
  search.min_length = config.min_path_length_m;
  search.max_lanes = config.max_lanes;
  const auto profiles = sample_profiles(state.speed, config.accel_set, config.horizon_secs, config.resolution_secs,
                                        {config.a_min, config.a_max, config.v_max});
  std::vector<IntentionCandidates> groups;
  for (const auto & p : prior_list) {
    groups.push_back({p.intention_id, p.prior,
                      generate_candidates(search_paths(p.intention_id, state, scene.map, search), profiles, anchor)});
  }
  out.require(groups.size() == 3, "expected three intentions");
  const auto result = rank_intentions("car_left", anchor, groups, &*scene.ego, weights);
  double sum = 0.0;
  for (const auto & i : result.intentions) {
    sum += i.posterior;
  }
  out.require(std::abs(sum - 1.0) <= 1e-9, "posteriors sum to " + fmt(sum));

  // Equalized min-costs: every intention gets the same candidate set.
  auto equal = groups;
  for (auto & g : equal) {
    g.candidates = groups[0].candidates;
  }
  const auto eq = rank_intentions("car_left", anchor, equal, &*scene.ego, weights);
  const double expected[3] = {0.4, 0.4, 0.2};
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(eq.intentions[i].posterior - expected[i]));
  }
  out.require(worst <= 1e-9, "equal-cost posteriors deviate from priors by " + fmt(worst));
  out.detail = out.pass ? "sum-1 = " + fmt(sum - 1.0) + ", max |posterior-prior| = " + fmt(worst) : out.detail;
  return out;
}

// ------------------------------------------------------------ criteria 2 and 3

std::vector<TuningExample> random_examples(std::mt19937_64 & rng, int n)
{
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::uniform_int_distribution<int> count(1, 8);
  std::vector<TuningExample> out;
  for (int i = 0; i < n; ++i) {
    TuningExample ex{"o" + std::to_string(i), 0.0, {u(rng), u(rng), u(rng)}, {}};
    for (int j = count(rng); j > 0; --j) {
      ex.candidates.push_back({u(rng), u(rng), u(rng)});
    }
    out.push_back(ex);
  }
  return out;
}

Outcome hinge_properties()
{
  Outcome out;
  std::mt19937_64 rng(2024);
  const double delta = 0.1;
  const auto exs = random_examples(rng, 100);
  std::size_t count = 0;
  for (const auto & ex : exs) {
    count += ex.candidates.size();
  }
  std::uniform_real_distribution<double> th(-1.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    out.require(hinge_objective(exs, {th(rng), th(rng), th(rng)}, delta) >= 0.0, "negative objective");
  }
  const double at_zero = hinge_objective(exs, {0, 0, 0}, delta);
  out.require(std::abs(at_zero - static_cast<double>(count) * delta) <= 1e-9 * static_cast<double>(count),
              "L(0) = " + fmt(at_zero) + " vs count*delta");

  // Every candidate exceeds the ground truth by 1/8 > delta under unit weights: L must be exactly 0.
  std::vector<TuningExample> clear;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    TuningExample ex{"c", 0.0, {u(rng), u(rng), u(rng)}, {}};
    ex.candidates.push_back({ex.ground_truth[0] + 0.125, ex.ground_truth[1], ex.ground_truth[2]});
    ex.candidates.push_back({ex.ground_truth[0], ex.ground_truth[1] + 0.0625, ex.ground_truth[2] + 0.0625});
    clear.push_back(ex);
  }
  out.require(hinge_objective(clear, {1, 1, 1}, delta) == 0.0, "L != 0 with all margins cleared");
  clear[10].candidates[0][0] = clear[10].ground_truth[0] + 0.0625;
  out.require(hinge_objective(clear, {1, 1, 1}, delta) > 0.0, "L == 0 with one margin violated");

  std::uniform_real_distribution<double> pos(0.0, 4.0);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  int convex_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const SubCosts a{pos(rng), pos(rng), pos(rng)};
    const SubCosts b{pos(rng), pos(rng), pos(rng)};
    const double l = lam(rng);
    const SubCosts m{l * a[0] + (1 - l) * b[0], l * a[1] + (1 - l) * b[1], l * a[2] + (1 - l) * b[2]};
    const double lhs = hinge_objective(exs, m, delta);
    const double rhs = l * hinge_objective(exs, a, delta) + (1 - l) * hinge_objective(exs, b, delta);
    convex_ok += lhs <= rhs + 1e-9 * (1.0 + rhs) ? 1 : 0;
  }
  out.require(convex_ok == 100, "convexity held on " + std::to_string(convex_ok) + "/100 triples");
  if (out.pass) {
    out.detail = std::to_string(count) + " terms, L(0) = " + fmt(at_zero) + ", convexity 100/100";
  }
  return out;
}

Outcome subgradient_vs_fd()
{
  Outcome out;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> th(0.0, 3.0);
  const double delta = 0.1;
  const double h = 1e-6;
  int done = 0;
  double worst = 0.0;
  while (done < 50) {
    const auto exs = random_examples(rng, 20);
    const SubCosts theta{th(rng), th(rng), th(rng)};
    // Non-kink: every hinge argument at least 10 h away from zero.
    bool kink = false;
    for (const auto & ex : exs) {
      for (const auto & c : ex.candidates) {
        double z = delta;
        for (int k = 0; k < 3; ++k) {
          z += theta[k] * (ex.ground_truth[k] - c[k]);
        }
        kink = kink || std::abs(z) < 1e-3;
      }
    }
    if (kink) {
      continue;
    }
    const SubCosts g = hinge_subgradient(exs, theta, delta);
    for (int k = 0; k < 3; ++k) {
      SubCosts hi = theta;
      SubCosts lo = theta;
      hi[k] += h;
      lo[k] -= h;
      const double fd = (hinge_objective(exs, hi, delta) - hinge_objective(exs, lo, delta)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[k]));
    }
    ++done;
  }
  out.require(worst < 1e-4, "max |analytic - fd| = " + fmt(worst));
  if (out.pass) {
    out.detail = "50 configurations, max |analytic - fd| = " + fmt(worst);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 4

// Ground truth beats every candidate under theta_star by at least `margin`. Every other candidate
// is no worse than the ground truth under unit weights, so the starting point is far from separating.
TuningExample planted_example(std::mt19937_64 & rng, const SubCosts & star, double margin, int n_cand)
{
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  TuningExample ex{"p", 0.0, {u(rng), u(rng), u(rng)}, {}};
  while (static_cast<int>(ex.candidates.size()) < n_cand) {
    SubCosts c{};
    double gap = 0.0;
    bool nonneg = true;
    for (int k = 0; k < 3; ++k) {
      c[k] = ex.ground_truth[k] + off(rng);
      gap += star[k] * (c[k] - ex.ground_truth[k]);
      nonneg = nonneg && c[k] >= 0.0;
    }
    const bool hard = ex.candidates.size() % 2 == 1;
    const double unit_gap = (c[0] + c[1] + c[2]) - (ex.ground_truth[0] + ex.ground_truth[1] + ex.ground_truth[2]);
    if (nonneg && gap >= margin && (!hard || unit_gap <= 0.0)) {
      ex.candidates.push_back(c);
    }
  }
  return ex;
}

Outcome planted_recovery()
{
  Outcome out;
  std::mt19937_64 rng(4242);
  const SubCosts star{1.0, 2.0, 3.0};
  const double margin = 0.5;
  std::vector<TuningExample> train;
  std::vector<TuningExample> held_out;
  for (int i = 0; i < 200; ++i) {
    train.push_back(planted_example(rng, star, margin, 10));
  }
  for (int i = 0; i < 100; ++i) {
    held_out.push_back(planted_example(rng, star, margin, 10));
  }
  TunerConfig cfg;
  cfg.max_iters = 200000;
  const double initial = hinge_objective(train, {1.0, 1.0, 1.0}, cfg.delta);
  const TuneResult r = tune_weights(train, cfg, {1.0, 1.0, 1.0});
  out.require(r.final_loss < 1e-6, "final loss " + fmt(r.final_loss) + " after " + std::to_string(r.iterations));

  int wins = 0;
  for (const auto & ex : held_out) {
    const double gt = r.theta[0] * ex.ground_truth[0] + r.theta[1] * ex.ground_truth[1] +
                      r.theta[2] * ex.ground_truth[2];
    bool best = true;
    for (const auto & c : ex.candidates) {
      best = best && gt < r.theta[0] * c[0] + r.theta[1] * c[1] + r.theta[2] * c[2];
    }
    wins += best ? 1 : 0;
  }
  out.require(wins >= 95, "ground truth argmin on " + std::to_string(wins) + "/100 held-out anchors");
  if (out.pass) {
    out.detail = "loss " + fmt(initial) + " -> " + fmt(r.final_loss) + " in " + std::to_string(r.iterations) + " iterations, theta = (" +
                 fmt(r.theta[0]) + ", " + fmt(r.theta[1]) + ", " + fmt(r.theta[2]) + "), held-out argmin " +
                 std::to_string(wins) + "/100";
  }
  return out;
}

// ---------------------------------------------------------------- criterion 5

// Kahan-summed trapezoid integration of the clamped speed at step h, sampled at multiples of `res`.
std::vector<double> integrated_arc(double v0, double a, double v_max, double res, std::size_t n, double h)
{
  auto v = [&](double t) { return std::min(v_max, std::max(0.0, v0 + a * t)); };
  const auto per = static_cast<long>(std::llround(res / h));
  std::vector<double> out;
  double sum = 0.0;
  double comp = 0.0;
  long step = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (; step < per * static_cast<long>(k); ++step) {
      const double t0 = static_cast<double>(step) * h;
      const double t1 = static_cast<double>(step + 1) * h;
      const double y = 0.5 * (v(t0) + v(t1)) * h - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
    out.push_back(sum);
  }
  return out;
}

Outcome sampling_exactness()
{
  Outcome out;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> accel(-6.0, 4.0);
  std::uniform_real_distribution<double> speed(0.0, 25.0);
  const double v_max = 25.0;
  const double res = 0.1;
  const double horizon = 8.0;
  const PathCandidate path{"straight", {"x"}, Curve({{0, 0}, {400, 0}})};
  double worst = 0.0;
  int stops = 0;
  int caps = 0;
  for (int i = 0; i < 20; ++i) {
    double v0 = speed(rng);
    double a = accel(rng);
    // A quarter of the profiles forced to stop, a quarter forced to hit v_max, within the horizon.
    if (i % 4 == 0) {
      v0 = std::uniform_real_distribution<double>(0.0, 8.0)(rng);
      a = std::uniform_real_distribution<double>(-6.0, -2.0)(rng);
    } else if (i % 4 == 1) {
      v0 = std::uniform_real_distribution<double>(16.0, 24.0)(rng);
      a = std::uniform_real_distribution<double>(2.0, 4.0)(rng);
    }
    const SpeedProfile profile(v0, a, horizon, res, v_max);
    stops += (a < 0 && profile.switch_time() < horizon) ? 1 : 0;
    caps += (a > 0 && profile.switch_time() < horizon) ? 1 : 0;
    const auto traj = realize_trajectory(path, profile);
    const auto oracle = integrated_arc(v0, a, v_max, res, traj.points.size(), 1e-5);
    for (std::size_t k = 0; k < traj.points.size(); ++k) {
      worst = std::max(worst, std::abs(traj.points[k].s - oracle[k]));
      worst = std::max(worst, std::abs(traj.points[k].position.x - oracle[k]));
    }
  }
  out.require(stops >= 5 && caps >= 5, "clamp regimes not exercised");
  out.require(worst <= 1e-9, "max |closed form - integrated| = " + fmt(worst));
  if (out.pass) {
    out.detail = "20 profiles (" + std::to_string(stops) + " stop, " + std::to_string(caps) +
                 " cap), max error " + fmt(worst) + " m";
  }
  return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome cost_formulas()
{
  Outcome out;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(trial);
    CandidateTrajectory traj{"i", {}, 3.0 * u(rng), {}, SpeedProfile(0.0, 0.0, 1.0, 0.1)};
    for (std::size_t k = 0; k < n; ++k) {
      TrajectoryPoint p;
      p.t = 0.1 * static_cast<double>(k + 1);
      p.position = {5.0 * u(rng), 5.0 * u(rng)};
      p.speed = 10.0 + 10.0 * u(rng);
      p.curvature = 0.1 * u(rng);
      p.accel = 4.0 * u(rng);
      traj.points.push_back(p);
    }
    EgoPlan ego;
    for (int k = 0; k < 8; ++k) {
      ego.poses.push_back({traj.start_time + 0.5 * k, {2.0 * u(rng), 2.0 * u(rng)}});
    }
    const double z1 = 1.0 + std::abs(100.0 * u(rng));
    const double z2 = 0.5 + std::abs(u(rng));

    double acc = 0.0;
    double cent = 0.0;
    double coll = 0.0;
    for (const auto & p : traj.points) {
      acc += p.accel * p.accel;
      cent += std::pow(p.speed * p.speed * p.curvature, 2);
      // Ego position by explicit bracket search, clamped at both ends.
      const double t = traj.start_time + p.t;
      Point2 e = ego.poses.front().point;
      if (t >= ego.poses.back().t) {
        e = ego.poses.back().point;
      } else if (t > ego.poses.front().t) {
        for (std::size_t j = 0; j + 1 < ego.poses.size(); ++j) {
          if (t >= ego.poses[j].t && t <= ego.poses[j + 1].t) {
            const double w = (t - ego.poses[j].t) / (ego.poses[j + 1].t - ego.poses[j].t);
            e = {ego.poses[j].point.x + w * (ego.poses[j + 1].point.x - ego.poses[j].point.x),
                 ego.poses[j].point.y + w * (ego.poses[j + 1].point.y - ego.poses[j].point.y)};
            break;
          }
        }
      }
      const double dx = p.position.x - e.x;
      const double dy = p.position.y - e.y;
      coll += std::exp(-(dx * dx + dy * dy));
    }
    cent /= z1;
    coll /= z2;
    worst = std::max(worst, std::abs(cost_acc(traj) - acc));
    worst = std::max(worst, std::abs(cost_centripetal(traj, z1) - cent));
    worst = std::max(worst, std::abs(cost_collision(traj, &ego, z2) - coll));
  }
  out.require(worst <= 1e-10, "max |cost - oracle| = " + fmt(worst));

  // 36-vertex circle, constant speed.
  const double r = 20.0;
  const double v = 10.0;
  std::vector<Point2> ring;
  for (int k = 0; k < 36; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / 36.0 - std::numbers::pi / 2;
    ring.push_back({r * std::cos(ang), r + r * std::sin(ang)});
  }
  const PathCandidate circle{"c", {"ring"}, Curve(ring)};
  const auto traj = realize_trajectory(circle, SpeedProfile(v, 0.0, 3.0, 0.1));
  const double z1 = 5.0;
  const double analytic = static_cast<double>(traj.points.size()) * std::pow(v * v / r, 2) / z1;
  const double rel = std::abs(cost_centripetal(traj, z1) - analytic) / analytic;
  out.require(rel <= 0.005, "circle centripetal off by " + fmt(100 * rel) + "%");
  if (out.pass) {
    out.detail = "max oracle error " + fmt(worst) + ", circle relative error " + fmt(rel);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome metric_correctness()
{
  Outcome out;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_int_distribution<int> len(3, 90);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = len(rng);
    std::vector<TimedPoint> p;
    std::vector<TimedPoint> q;
    std::vector<Point2> pp;
    std::vector<Point2> qq;
    for (int k = 1; k <= n; ++k) {
      p.push_back({0.1 * k, {u(rng), u(rng)}});
      q.push_back({0.1 * k, {u(rng), u(rng)}});
      pp.push_back(p.back().point);
      qq.push_back(q.back().point);
    }
    const double h = 0.1 * std::uniform_int_distribution<int>(1, n)(rng);
    // Brute force: every point with t <= h.
    double sum = 0.0;
    double last = 0.0;
    int m = 0;
    double sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = std::hypot(p[k].point.x - q[k].point.x, p[k].point.y - q[k].point.y);
      sq += d * d;
      if (p[k].t <= h + 1e-9) {
        sum += d;
        last = d;
        ++m;
      }
    }
    worst = std::max(worst, std::abs(ade(p, q, h) - sum / m));
    worst = std::max(worst, std::abs(fde(p, q, h) - last));
    worst = std::max(worst, std::abs(mse(pp, qq) - sq / n));
  }
  out.require(worst <= 1e-10, "max |metric - oracle| = " + fmt(worst));
  const double nll =
    gaussian_nll(std::vector<GaussianPoint>{{1.5, -2.0, 1.0, 1.0, 0.0}}, std::vector<Point2>{{1.5, -2.0}});
  const double nll_err = std::abs(nll - std::log(2.0 * std::numbers::pi));
  out.require(nll_err <= 1e-12, "nll at mean off by " + fmt(nll_err));
  if (out.pass) {
    out.detail = "max oracle error " + fmt(worst) + ", nll error " + fmt(nll_err);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 8

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string & args)
{
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

bool run_pipeline(const fs::path & dir)
{
  const std::string d = kData;
  const std::string o = dir.string();
  return run_cli("annotate --log " + d + "/scene.jsonl --map " + d + "/intersection_map.json --ego " + d +
                 "/ego.jsonl --horizon 3 --stride 1 --out " + o + "/dataset.jsonl") &&
         run_cli("predict --scene " + d + "/scene.jsonl --map " + d + "/intersection_map.json --ego " + d +
                 "/ego.jsonl --priors " + d + "/priors.jsonl --weights " + d + "/weights.json --config " + d +
                 "/generation.json --out " + o + "/predictions.jsonl") &&
         run_cli("tune --predictions " + o + "/predictions.jsonl --dataset " + o + "/dataset.jsonl --tuner-config " +
                 d + "/tuner.json --ego " + d + "/ego.jsonl --out " + o + "/tuned_weights.json") &&
         run_cli("eval --predictions " + o + "/predictions.jsonl --dataset " + o +
                 "/dataset.jsonl --horizons 1,3 --out " + o + "/report.json");
}

Outcome pipeline_determinism()
{
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "postgen_acceptance";
  fs::remove_all(root);
  const fs::path a = root / "a";
  const fs::path b = root / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  out.require(run_pipeline(a), "first pipeline run failed");
  out.require(run_pipeline(b), "second pipeline run failed");
  int matched = 0;
  for (const char * name : {"dataset.jsonl", "predictions.jsonl", "tuned_weights.json", "report.json"}) {
    const std::string x = slurp(a / name);
    out.require(!x.empty(), std::string(name) + " is empty");
    out.require(x == slurp(b / name), std::string(name) + " differs between runs");
    out.require(x == slurp(fs::path(kData) / "golden" / name), std::string(name) + " differs from golden");
    matched += x == slurp(fs::path(kData) / "golden" / name) ? 1 : 0;
  }
  fs::remove_all(root);
  if (out.pass) {
    out.detail = "4/4 outputs byte-identical across runs and to goldens";
  } else {
    out.detail += " (" + std::to_string(matched) + "/4 golden matches)";
  }
  return out;
}

// ---------------------------------------------------------------- criterion 9

double point_segment_distance(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double w = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  w = std::clamp(w, 0.0, 1.0);
  return std::hypot(p.x - (a.x + w * dx), p.y - (a.y + w * dy));
}

Outcome annotation_fidelity()
{
  Outcome out;
  const auto tracks = load_obstacle_log(kData + "/scene.jsonl");
  const MapGraph map = load_map(kData + "/intersection_map.json");
  AnnotationConfig config;
  config.horizon = 3.0;
  config.stride = 0.5;
  const Dataset ds = build_dataset(tracks, map, config);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto & rec : ds.records) {
    const ObstacleTrack * track = nullptr;
    for (const auto & t : tracks) {
      if (t.obstacle_id() == rec.obstacle_id) {
        track = &t;
      }
    }
    const auto & st = track->states();
    for (const auto & tp : rec.future.future) {
      const double t = rec.anchor_time + tp.t;
      // On the interpolant: the bracketing segment at time t contains the point.
      std::size_t j = 0;
      while (j + 2 < st.size() && st[j + 1].timestamp < t) {
        ++j;
      }
      worst = std::max(worst, point_segment_distance(tp.point, st[j].position, st[j + 1].position));
      ++checked;
    }
  }
  out.require(checked > 0, "no label points");
  out.require(worst <= 1e-9, "label point off the interpolant by " + fmt(worst));

  // Hand-built junction: west approach along y = 0, left turn at the origin, north along x = 0.
  // 10 m/s throughout; states at 0, 2, 4 s.
  const ObstacleTrack hand("h", {{"h", 0.0, {-20, 0}, 0.0, 10, {}},
                                 {"h", 2.0, {0, 0}, 0.0, 10, {}},
                                 {"h", 4.0, {0, 20}, std::numbers::pi / 2, 10, {}}});
  const Lane road{"r", Curve({{-30, 0}, {30, 0}}), {}, std::nullopt};
  // Capture radius 3: mid at (-5, 2) is entered at x = -5 - sqrt(5) (t = 1.276 s), north at (0, 12)
  // at y = 9 (t = 2.9 s); east at (12, 0) and south at (0, -12) are never entered.
  // Mid is left again at x = -5 + sqrt(5) (t = 1.724 s); an anchor inside a capture disc passes at the anchor.
  const MapGraph junction({road},
                          {{"east", {12, 0}, 0, "r"},
                           {"mid", {-5, 2}, 0, "r"},
                           {"north", {0, 12}, std::numbers::pi / 2, "r"},
                           {"south", {0, -12}, -std::numbers::pi / 2, "r"}},
                          std::nullopt);
  struct Case
  {
    double anchor;
    double horizon;
    const char * want;
  };
  const Case cases[] = {{0.0, 1.0, ""},      {0.0, 1.2, ""},      {0.0, 1.3, "mid"},  {0.0, 4.0, "mid"},
                        {1.0, 1.0, "mid"},   {1.3, 1.5, "mid"}, {2.0, 0.8, ""},     {2.0, 1.0, "north"},
                        {3.0, 1.0, "north"}, {1.8, 1.2, "north"}, {1.8, 1.0, ""}};
  int good = 0;
  for (const auto & c : cases) {
    const auto label = label_exit_taken(hand, c.anchor, junction, c.horizon, 3.0);
    const std::string got = label ? label->exit_id : "";
    good += got == c.want ? 1 : 0;
    out.require(got == c.want, "anchor " + fmt(c.anchor) + " horizon " + fmt(c.horizon) + ": got '" + got +
                                 "', want '" + c.want + "'");
  }
  if (out.pass) {
    out.detail = std::to_string(checked) + " label points within " + fmt(worst) + " m, " + std::to_string(good) +
                 "/11 exit passages";
  }
  return out;
}

struct Criterion
{
  const char * name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main()
{
  const Criterion criteria[] = {
    {"1 posterior contract", 1.0, posterior_contract},
    {"2 hinge objective properties", 5.0, hinge_properties},
    {"3 subgradient vs finite differences", 5.0, subgradient_vs_fd},
    {"4 planted-weights recovery", 60.0, planted_recovery},
    {"5 sampling exactness", 10.0, sampling_exactness},
    {"6 cost formulas", 5.0, cost_formulas},
    {"7 metric correctness", 5.0, metric_correctness},
    {"8 end-to-end determinism", 30.0, pipeline_determinism},
    {"9 annotation fidelity", 5.0, annotation_fidelity},
  };
  int failed = 0;
  for (const auto & c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over runtime budget");
      o.pass = false;
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] criterion %-38s %8.3f s (budget %5.1f s)  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
