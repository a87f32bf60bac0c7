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

#include <immintrin.h>

// Compiled with -mavx2; only reached after a runtime CPU check.

namespace flexlane::simd::detail
{

namespace
{

double dot_avx2(const double * a, const double * b, std::size_t n)
{
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, p);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j) {
    const double p = a[i] * b[i];
    lane[j] = lane[j] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void scale_avx2(double * v, std::size_t n, double factor)
{
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), f));
  }
  for (; i < n; ++i) {
    v[i] *= factor;
  }
}

}  // namespace

const KernelTable & avx2_kernels()
{
  static const KernelTable table{&dot_avx2, &scale_avx2};
  return table;
}

}  // namespace flexlane::simd::detail
