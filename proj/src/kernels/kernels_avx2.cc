// Copyright 2026 The clustercoop Authors.
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

// AVX2 variants. This translation unit is the only one built with -mavx2;
// nothing here may be called unless __builtin_cpu_supports("avx2") holds.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "clustercoop/kernels.h"
#include "kernels_internal.h"

namespace clustercoop::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

inline __m256d ipow_pd(__m256d x, unsigned k) {
  __m256d result = _mm256_set1_pd(1.0);
  __m256d base = x;
  while (k != 0) {
    if (k & 1u) result = _mm256_mul_pd(result, base);
    k >>= 1;
    if (k != 0) base = _mm256_mul_pd(base, base);
  }
  return result;
}

inline __m256d apply_pd(__m256d squared, HalfExponent h) {
  if (h.is_integer) return ipow_pd(squared, h.integer);
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, squared);
  for (double& v : lane) v = std::pow(v, h.value);
  return _mm256_load_pd(lane);
}

void hex_norms_avx2(std::span<const double> xs, std::span<const double> ys,
                    double cx, double cy, std::span<double> out) {
  const std::size_t n = xs.size();
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d k = _mm256_set1_pd(kSqrt3Over2);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&xs[i]), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&ys[i]), vcy);
    const __m256d a = abs_pd(dx);
    const __m256d hx = _mm256_mul_pd(half, dx);
    const __m256d sy = _mm256_mul_pd(k, dy);
    const __m256d b = abs_pd(_mm256_add_pd(hx, sy));
    const __m256d c = abs_pd(_mm256_sub_pd(sy, hx));
    _mm256_storeu_pd(&out[i], _mm256_max_pd(a, _mm256_max_pd(b, c)));
  }
  if (i < n) {
    scalar_kernels().hex_norms(xs.subspan(i), ys.subspan(i), cx, cy,
                               out.subspan(i));
  }
}

void marks_avx2(std::span<const double> l2, std::span<const double> g,
                std::span<const double> w, HalfExponent h,
                std::span<double> out) {
  const std::size_t n = l2.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d p = apply_pd(_mm256_loadu_pd(&l2[i]), h);
    const __m256d pg = _mm256_mul_pd(p, _mm256_loadu_pd(&g[i]));
    _mm256_storeu_pd(&out[i], _mm256_div_pd(pg, _mm256_loadu_pd(&w[i])));
  }
  if (i < n) {
    scalar_kernels().marks(l2.subspan(i), g.subspan(i), w.subspan(i), h,
                           out.subspan(i));
  }
}

double power_law_sum_avx2(std::span<const double> xs,
                          std::span<const double> ys,
                          std::span<const double> marks, double ux, double uy,
                          HalfExponent h) {
  const std::size_t n = xs.size();
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vuy = _mm256_set1_pd(uy);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&xs[i]), vux);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&ys[i]), vuy);
    const __m256d d2 =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d term =
        _mm256_div_pd(_mm256_loadu_pd(&marks[i]), apply_pd(d2, h));
    acc = _mm256_add_pd(acc, term);
  }
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  if (i < n) {
    sum += scalar_kernels().power_law_sum(xs.subspan(i), ys.subspan(i),
                                          marks.subspan(i), ux, uy, h);
  }
  return sum;
}

std::size_t count_greater_avx2(std::span<const double> values,
                               double threshold) {
  const std::size_t n = values.size();
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(&values[i]), t, _CMP_GT_OQ);
    count += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(_mm256_movemask_pd(gt))));
  }
  if (i < n) count += scalar_kernels().count_greater(values.subspan(i), threshold);
  return count;
}

}  // namespace

const KernelTable& avx2_kernels_unchecked() noexcept {
  static const KernelTable table{"avx2", hex_norms_avx2, marks_avx2,
                                 power_law_sum_avx2, count_greater_avx2};
  return table;
}

}  // namespace clustercoop::kernels
