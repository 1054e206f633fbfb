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

#include <cmath>

#include "postgen/kernels.h"

namespace postgen::kernels::scalar
{
namespace
{

constexpr std::size_t kLanes = 4;

double combine(const double (&lanes)[kLanes]) { return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]); }

}  // namespace

double sum_squares(std::span<const double> a)
{
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc[i % kLanes] += a[i] * a[i];
  }
  return combine(acc);
}

double sum_centripetal(std::span<const double> v, std::span<const double> kappa)
{
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (v[i] * v[i]) * kappa[i];
    acc[i % kLanes] += w * w;
  }
  return combine(acc);
}

double sum_norms(std::span<const double> dx, std::span<const double> dy)
{
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < dx.size(); ++i) {
    acc[i % kLanes] += std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
  }
  return combine(acc);
}

double sum_squared_norms(std::span<const double> dx, std::span<const double> dy)
{
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < dx.size(); ++i) {
    acc[i % kLanes] += dx[i] * dx[i] + dy[i] * dy[i];
  }
  return combine(acc);
}

HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta)
{
  double loss[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double g0[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double g1[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double g2[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t lane = i % kLanes;
    const double z = ((theta[0] * rows.d0[i] + theta[1] * rows.d1[i]) + theta[2] * rows.d2[i]) + delta;
    const bool active = z > 0.0;
    loss[lane] += active ? z : 0.0;
    g0[lane] += active ? rows.d0[i] : 0.0;
    g1[lane] += active ? rows.d1[i] : 0.0;
    g2[lane] += active ? rows.d2[i] : 0.0;
  }
  return {combine(loss), {combine(g0), combine(g1), combine(g2)}};
}

}  // namespace postgen::kernels::scalar
