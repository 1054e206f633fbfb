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

#include <cassert>

#include "postgen/kernels.h"

namespace postgen::kernels
{
namespace
{

struct Table
{
  Isa isa;
  double (*sum_squares)(std::span<const double>);
  double (*sum_centripetal)(std::span<const double>, std::span<const double>);
  double (*sum_norms)(std::span<const double>, std::span<const double>);
  double (*sum_squared_norms)(std::span<const double>, std::span<const double>);
  HingeEval (*hinge)(const HingeRows &, const Vec3 &, double);
};

bool cpu_has_avx2()
{
#if defined(POSTGEN_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Table select()
{
#if defined(POSTGEN_WITH_AVX2)
  if (cpu_has_avx2()) {
    return {Isa::kAvx2, &avx2::sum_squares, &avx2::sum_centripetal, &avx2::sum_norms,
            &avx2::sum_squared_norms, &avx2::hinge};
  }
#endif
  return {Isa::kScalar, &scalar::sum_squares, &scalar::sum_centripetal, &scalar::sum_norms,
          &scalar::sum_squared_norms, &scalar::hinge};
}

const Table & table()
{
  static const Table t = select();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool avx2_available() { return cpu_has_avx2(); }

Isa active_isa() { return table().isa; }

double sum_squares(std::span<const double> a) { return table().sum_squares(a); }

double sum_centripetal(std::span<const double> v, std::span<const double> kappa)
{
  assert(v.size() == kappa.size());
  return table().sum_centripetal(v, kappa);
}

double sum_norms(std::span<const double> dx, std::span<const double> dy)
{
  assert(dx.size() == dy.size());
  return table().sum_norms(dx, dy);
}

double sum_squared_norms(std::span<const double> dx, std::span<const double> dy)
{
  assert(dx.size() == dy.size());
  return table().sum_squared_norms(dx, dy);
}

HingeEval hinge(const HingeRows & rows, const Vec3 & theta, double delta)
{
  assert(rows.d0.size() == rows.d1.size() && rows.d1.size() == rows.d2.size());
  return table().hinge(rows, theta, delta);
}

}  // namespace postgen::kernels
