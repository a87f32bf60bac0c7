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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels behind embedding and retrieval.
//
// Every backend accumulates in four interleaved lanes (element i goes to lane
// i % 4) and reduces as (l0 + l1) + (l2 + l3), with separate multiply and add
// (no FMA contraction). Results are therefore bit-identical across backends,
// which keeps retrieval rankings stable from one machine to the next.

namespace flexlane::simd
{

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

struct KernelTable
{
  double (*dot)(const double * a, const double * b, std::size_t n);
  void (*scale)(double * v, std::size_t n, double factor);
};

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend backend);

/// Kernel table for a specific backend. Requires backend_available(backend).
const KernelTable & kernels(Backend backend);

/// Backend picked at first use: FLEXLANE_SIMD env override if available,
/// else the widest supported.
Backend active_backend();

double dot(std::span<const double> a, std::span<const double> b);
void scale(std::span<double> v, double factor);

/// Scales `v` to unit L2 norm; leaves an all-zero vector untouched.
void normalize(std::span<double> v);

/// out[r] = dot(rows[r*dim .. r*dim+dim), query) for every row.
void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> query, std::span<double> out);

namespace detail
{
const KernelTable & scalar_kernels();
#if defined(FLEXLANE_HAVE_AVX2)
const KernelTable & avx2_kernels();
#endif
#if defined(FLEXLANE_HAVE_NEON)
const KernelTable & neon_kernels();
#endif
}  // namespace detail

}  // namespace flexlane::simd
