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

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "flexlane/simd/vector_kernels.hpp"

namespace flexlane::simd
{

namespace
{

bool cpu_has_avx2()
{
#if defined(FLEXLANE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend pick_backend()
{
  if (const char * forced = std::getenv("FLEXLANE_SIMD")) {
    const std::string name(forced);
    for (auto b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (name == to_string(b) && backend_available(b)) {
        return b;
      }
    }
  }
  if (backend_available(Backend::Avx2)) {
    return Backend::Avx2;
  }
  if (backend_available(Backend::Neon)) {
    return Backend::Neon;
  }
  return Backend::Scalar;
}

const KernelTable & active()
{
  static const KernelTable & table = kernels(active_backend());
  return table;
}

}  // namespace

std::string_view to_string(Backend backend)
{
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend)
{
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
    case Backend::Neon:
#if defined(FLEXLANE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable & kernels(Backend backend)
{
  switch (backend) {
#if defined(FLEXLANE_HAVE_AVX2)
    case Backend::Avx2:
      if (cpu_has_avx2()) {
        return detail::avx2_kernels();
      }
      break;
#endif
#if defined(FLEXLANE_HAVE_NEON)
    case Backend::Neon:
      return detail::neon_kernels();
#endif
    case Backend::Scalar:
      return detail::scalar_kernels();
    default:
      break;
  }
  throw std::invalid_argument("SIMD backend not available: " + std::string(to_string(backend)));
}

Backend active_backend()
{
  static const Backend backend = pick_backend();
  return backend;
}

double dot(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: size mismatch");
  }
  return active().dot(a.data(), b.data(), a.size());
}

void scale(std::span<double> v, double factor) { active().scale(v.data(), v.size(), factor); }

void normalize(std::span<double> v)
{
  const auto & k = active();
  const double sum_sq = k.dot(v.data(), v.data(), v.size());
  if (sum_sq == 0.0) {
    return;
  }
  k.scale(v.data(), v.size(), 1.0 / std::sqrt(sum_sq));
}

void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> query, std::span<double> out)
{
  if (query.size() != dim || rows.size() != dim * out.size()) {
    throw std::invalid_argument("dot_rows: shape mismatch");
  }
  const auto & k = active();
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = k.dot(rows.data() + r * dim, query.data(), dim);
  }
}

}  // namespace flexlane::simd
