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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "postgen/kernels.h"

namespace postgen::kernels
{
namespace
{

std::vector<double> random_vec(std::mt19937_64 & rng, std::size_t n, double lo, double hi)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto & x : v) {
    x = u(rng);
  }
  return v;
}

TEST(KernelsTest, ScalarMatchesNaiveSums)
{
  std::mt19937_64 rng(21);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 100u}) {
    const auto a = random_vec(rng, n, -3, 3);
    const auto b = random_vec(rng, n, -0.2, 0.2);
    double sq = 0.0;
    double cent = 0.0;
    double norms = 0.0;
    double sqn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sq += a[i] * a[i];
      cent += std::pow(a[i] * a[i] * b[i], 2);
      norms += std::hypot(a[i], b[i]);
      sqn += a[i] * a[i] + b[i] * b[i];
    }
    EXPECT_NEAR(scalar::sum_squares(a), sq, 1e-12 * (1 + sq));
    EXPECT_NEAR(scalar::sum_centripetal(a, b), cent, 1e-12 * (1 + cent));
    EXPECT_NEAR(scalar::sum_norms(a, b), norms, 1e-12 * (1 + norms));
    EXPECT_NEAR(scalar::sum_squared_norms(a, b), sqn, 1e-12 * (1 + sqn));
  }
}

TEST(KernelsTest, HingeScalarSemantics)
{
  const std::vector<double> d0{1.0, -1.0, 0.0};
  const std::vector<double> d1{0.0, 0.0, -0.1};
  const std::vector<double> d2{0.0, 0.0, 0.0};
  // Terms: z = 1 + 0.1, -1 + 0.1, -0.1 + 0.1 (exactly 0: inactive).
  const auto e = scalar::hinge({d0, d1, d2}, {1.0, 1.0, 1.0}, 0.1);
  EXPECT_DOUBLE_EQ(e.loss, 1.1);
  EXPECT_EQ(e.subgradient, (Vec3{1.0, 0.0, 0.0}));
}

TEST(KernelsTest, DispatchReportsIsa)
{
  const Isa isa = active_isa();
  EXPECT_TRUE(isa == Isa::kScalar || isa == Isa::kAvx2);
  if (isa == Isa::kAvx2) {
    EXPECT_TRUE(avx2_available());
  }
  EXPECT_FALSE(isa_name(isa).empty());
}

#if defined(POSTGEN_WITH_AVX2)

class Avx2EquivalenceTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    if (!avx2_available()) {
      GTEST_SKIP() << "CPU lacks AVX2";
    }
  }
};

TEST_F(Avx2EquivalenceTest, ReductionsBitIdentical)
{
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(0, 300);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = trial < 12 ? static_cast<std::size_t>(trial) : len(rng);
    const auto a = random_vec(rng, n, -50, 50);
    const auto b = random_vec(rng, n, -1, 1);
    EXPECT_EQ(avx2::sum_squares(a), scalar::sum_squares(a)) << n;
    EXPECT_EQ(avx2::sum_centripetal(a, b), scalar::sum_centripetal(a, b)) << n;
    EXPECT_EQ(avx2::sum_norms(a, b), scalar::sum_norms(a, b)) << n;
    EXPECT_EQ(avx2::sum_squared_norms(a, b), scalar::sum_squared_norms(a, b)) << n;
  }
}

TEST_F(Avx2EquivalenceTest, HingeBitIdentical)
{
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> len(0, 300);
  std::uniform_real_distribution<double> th(-1, 3);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = trial < 12 ? static_cast<std::size_t>(trial) : len(rng);
    const auto d0 = random_vec(rng, n, -5, 5);
    const auto d1 = random_vec(rng, n, -5, 5);
    const auto d2 = random_vec(rng, n, -5, 5);
    const Vec3 theta{th(rng), th(rng), th(rng)};
    const auto s = scalar::hinge({d0, d1, d2}, theta, 0.1);
    const auto v = avx2::hinge({d0, d1, d2}, theta, 0.1);
    EXPECT_EQ(v.loss, s.loss) << n;
    EXPECT_EQ(v.subgradient, s.subgradient) << n;
  }
  // Exactly-zero hinge arguments stay inactive in both.
  const std::vector<double> z0(9, -0.1);
  const std::vector<double> zero(9, 0.0);
  const auto v = avx2::hinge({z0, zero, zero}, {1.0, 1.0, 1.0}, 0.1);
  EXPECT_EQ(v.loss, 0.0);
  EXPECT_EQ(v.subgradient, (Vec3{0.0, 0.0, 0.0}));
}

#endif

}  // namespace
}  // namespace postgen::kernels
