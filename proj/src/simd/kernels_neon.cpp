// Copyright 2026 The flexlane Authors
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

#include "flexlane/simd/vector_kernels.hpp"

#include <arm_neon.h>

namespace flexlane::simd::detail
{

namespace
{

// Lanes 0-1 live in `lo`, lanes 2-3 in `hi`, matching the scalar layout.
double dot_neon(const double * a, const double * b, std::size_t n)
{
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t j = 0; i < n; ++i, ++j) {
    const double p = a[i] * b[i];
    lane[j] = lane[j] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void scale_neon(double * v, std::size_t n, double factor)
{
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(v + i, vmulq_f64(vld1q_f64(v + i), f));
  }
  for (; i < n; ++i) {
    v[i] *= factor;
  }
}

}  // namespace

const KernelTable & neon_kernels()
{
  static const KernelTable table{&dot_neon, &scale_neon};
  return table;
}

}  // namespace flexlane::simd::detail
