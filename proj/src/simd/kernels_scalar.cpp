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

namespace flexlane::simd::detail
{

namespace
{

double dot_scalar(const double * a, const double * b, std::size_t n)
{
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double p = a[i + j] * b[i + j];
      lane[j] = lane[j] + p;
    }
  }
  for (std::size_t j = 0; i < n; ++i, ++j) {
    const double p = a[i] * b[i];
    lane[j] = lane[j] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void scale_scalar(double * v, std::size_t n, double factor)
{
  for (std::size_t i = 0; i < n; ++i) {
    v[i] *= factor;
  }
}

}  // namespace

const KernelTable & scalar_kernels()
{
  static const KernelTable table{&dot_scalar, &scale_scalar};
  return table;
}

}  // namespace flexlane::simd::detail
