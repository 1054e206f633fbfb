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

#include <array>
#include <span>
#include <string_view>

// Data-parallel reductions behind the cost, metric and tuning code.
//
// Every kernel has a scalar reference and (on x86-64) an AVX2 variant. Both
// accumulate element i into lane i % 4 and combine lanes as (l0 + l1) + (l2 + l3),
// with multiplies and adds kept separate, so the two variants return bit-identical
// results. The dispatching entry points pick the AVX2 variant when the CPU supports it.

namespace postgen::kernels
{

using Vec3 = std::array<double, 3>;

/// Structure-of-arrays view over hinge terms. Row i holds d_i = gt_subcosts - candidate_subcosts.
struct HingeRows
{
  std::span<const double> d0;
  std::span<const double> d1;
  std::span<const double> d2;

  std::size_t size() const { return d0.size(); }
};

struct HingeEval
{
  double loss = 0.0;
  Vec3 subgradient{0.0, 0.0, 0.0};
};

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// Whether the AVX2 variant was compiled in and the running CPU supports it.
bool avx2_available();

/// The variant selected by the dispatching entry points.
Isa active_isa();

// Dispatching entry points.

/// Sum of a_i^2.
double sum_squares(std::span<const double> a);
/// Sum of (v_i^2 * kappa_i)^2.
double sum_centripetal(std::span<const double> v, std::span<const double> kappa);
/// Sum of sqrt(dx_i^2 + dy_i^2).
double sum_norms(std::span<const double> dx, std::span<const double> dy);
/// Sum of dx_i^2 + dy_i^2.
double sum_squared_norms(std::span<const double> dx, std::span<const double> dy);
/// Sum of max(0, theta . d_i + delta), and the sum of d_i over terms strictly above zero.
HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta);

namespace scalar
{
double sum_squares(std::span<const double> a);
double sum_centripetal(std::span<const double> v, std::span<const double> kappa);
double sum_norms(std::span<const double> dx, std::span<const double> dy);
double sum_squared_norms(std::span<const double> dx, std::span<const double> dy);
HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta);
}  // namespace scalar

#if defined(POSTGEN_WITH_AVX2)
namespace avx2
{
double sum_squares(std::span<const double> a);
double sum_centripetal(std::span<const double> v, std::span<const double> kappa);
double sum_norms(std::span<const double> dx, std::span<const double> dy);
double sum_squared_norms(std::span<const double> dx, std::span<const double> dy);
HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta);
}  // namespace avx2
#endif

}  // namespace postgen::kernels
