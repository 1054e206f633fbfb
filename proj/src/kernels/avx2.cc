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

#include <immintrin.h>

#include <cmath>

#include "postgen/kernels.h"

// Compiled with -mavx2 -ffp-contract=off. Tails are folded into the same lanes the
// scalar reference uses, so results match it bit for bit.

namespace postgen::kernels::avx2
{
namespace
{

constexpr std::size_t kLanes = 4;

struct LaneBuffer
{
  alignas(32) double v[kLanes];

  explicit LaneBuffer(__m256d acc) { _mm256_store_pd(v, acc); }
  double combine() const { return (v[0] + v[1]) + (v[2] + v[3]); }
};

}  // namespace

double sum_squares(std::span<const double> a)
{
  const std::size_t n = a.size();
  const std::size_t main = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(a.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
  }
  LaneBuffer lanes(acc);
  for (std::size_t i = main; i < n; ++i) {
    lanes.v[i % kLanes] += a[i] * a[i];
  }
  return lanes.combine();
}

double sum_centripetal(std::span<const double> v, std::span<const double> kappa)
{
  const std::size_t n = v.size();
  const std::size_t main = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += kLanes) {
    const __m256d s = _mm256_loadu_pd(v.data() + i);
    const __m256d k = _mm256_loadu_pd(kappa.data() + i);
    const __m256d w = _mm256_mul_pd(_mm256_mul_pd(s, s), k);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w, w));
  }
  LaneBuffer lanes(acc);
  for (std::size_t i = main; i < n; ++i) {
    const double w = (v[i] * v[i]) * kappa[i];
    lanes.v[i % kLanes] += w * w;
  }
  return lanes.combine();
}

double sum_norms(std::span<const double> dx, std::span<const double> dy)
{
  const std::size_t n = dx.size();
  const std::size_t main = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(dx.data() + i);
    const __m256d y = _mm256_loadu_pd(dy.data() + i);
    const __m256d sq = _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  LaneBuffer lanes(acc);
  for (std::size_t i = main; i < n; ++i) {
    lanes.v[i % kLanes] += std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
  }
  return lanes.combine();
}

double sum_squared_norms(std::span<const double> dx, std::span<const double> dy)
{
  const std::size_t n = dx.size();
  const std::size_t main = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(dx.data() + i);
    const __m256d y = _mm256_loadu_pd(dy.data() + i);
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
  }
  LaneBuffer lanes(acc);
  for (std::size_t i = main; i < n; ++i) {
    lanes.v[i % kLanes] += dx[i] * dx[i] + dy[i] * dy[i];
  }
  return lanes.combine();
}

HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta)
{
  const std::size_t n = rows.size();
  const std::size_t main = n - n % kLanes;
  const __m256d t0 = _mm256_set1_pd(theta[0]);
  const __m256d t1 = _mm256_set1_pd(theta[1]);
  const __m256d t2 = _mm256_set1_pd(theta[2]);
  const __m256d dl = _mm256_set1_pd(delta);
  const __m256d zero = _mm256_setzero_pd();
  __m256d loss = zero;
  __m256d g0 = zero;
  __m256d g1 = zero;
  __m256d g2 = zero;
  for (std::size_t i = 0; i < main; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(rows.d0.data() + i);
    const __m256d b = _mm256_loadu_pd(rows.d1.data() + i);
    const __m256d c = _mm256_loadu_pd(rows.d2.data() + i);
    __m256d z = _mm256_add_pd(_mm256_mul_pd(t0, a), _mm256_mul_pd(t1, b));
    z = _mm256_add_pd(_mm256_add_pd(z, _mm256_mul_pd(t2, c)), dl);
    const __m256d active = _mm256_cmp_pd(z, zero, _CMP_GT_OQ);
    loss = _mm256_add_pd(loss, _mm256_and_pd(active, z));
    g0 = _mm256_add_pd(g0, _mm256_and_pd(active, a));
    g1 = _mm256_add_pd(g1, _mm256_and_pd(active, b));
    g2 = _mm256_add_pd(g2, _mm256_and_pd(active, c));
  }
  LaneBuffer l(loss);
  LaneBuffer a0(g0);
  LaneBuffer a1(g1);
  LaneBuffer a2(g2);
  for (std::size_t i = main; i < n; ++i) {
    const std::size_t lane = i % kLanes;
    const double z = ((theta[0] * rows.d0[i] + theta[1] * rows.d1[i]) + theta[2] * rows.d2[i]) + delta;
    const bool active = z > 0.0;
    l.v[lane] += active ? z : 0.0;
    a0.v[lane] += active ? rows.d0[i] : 0.0;
    a1.v[lane] += active ? rows.d1[i] : 0.0;
    a2.v[lane] += active ? rows.d2[i] : 0.0;
  }
  return {l.combine(), {a0.combine(), a1.combine(), a2.combine()}};
}

}  // namespace postgen::kernels::avx2
