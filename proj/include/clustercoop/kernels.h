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

// Data-parallel inner loops of the simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. Element-wise kernels (hex_norms, marks) are
// bit-identical across variants. Reductions (power_law_sum) accumulate in a
// different order and agree to rounding; count_greater is exact.

#ifndef CLUSTERCOOP_KERNELS_H_
#define CLUSTERCOOP_KERNELS_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace clustercoop::kernels {

// x^k for k >= 0 by square-and-multiply. Both kernel variants use this exact
// operation sequence so per-element results round identically.
inline double ipow(double x, unsigned k) noexcept {
  double result = 1.0;
  double base = x;
  while (k != 0) {
    if (k & 1u) result *= base;
    k >>= 1;
    if (k != 0) base *= base;
  }
  return result;
}

// Exponent h = alpha/2 applied to a squared quantity. Integer h takes the
// multiplication path; anything else falls back to std::pow.
struct HalfExponent {
  double value = 2.0;
  unsigned integer = 2;
  bool is_integer = true;

  static HalfExponent from_alpha(double alpha) noexcept {
    HalfExponent h;
    h.value = 0.5 * alpha;
    const double r = std::round(h.value);
    h.is_integer = (r == h.value) && r >= 0.0 && r <= 64.0;
    h.integer = h.is_integer ? static_cast<unsigned>(r) : 0u;
    return h;
  }

  double apply(double squared) const noexcept {
    return is_integer ? ipow(squared, integer) : std::pow(squared, value);
  }
};

struct KernelTable {
  std::string_view name;

  // out[i] = max over the three edge normals of |<(x_i - cx, y_i - cy), n_k>|
  // (edge normals at 0, pi/3, 2pi/3).
  void (*hex_norms)(std::span<const double> xs, std::span<const double> ys,
                    double cx, double cy, std::span<double> out);

  // out[i] = (l2[i])^h * g[i] / w[i]: the unit-omega transmit power of a
  // channel-inverting BS times its side-lobe gain.
  void (*marks)(std::span<const double> l2, std::span<const double> g,
                std::span<const double> w, HalfExponent h,
                std::span<double> out);

  // sum_i marks[i] / ((x_i - ux)^2 + (y_i - uy)^2)^h.
  double (*power_law_sum)(std::span<const double> xs,
                          std::span<const double> ys,
                          std::span<const double> marks, double ux, double uy,
                          HalfExponent h);

  // Number of values strictly greater than threshold.
  std::size_t (*count_greater)(std::span<const double> values,
                               double threshold);
};

const KernelTable& scalar_kernels() noexcept;

// Null when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

// The table used by the simulator: AVX2 when available, unless the
// environment variable CLUSTERCOOP_KERNELS=scalar or select_kernels() says
// otherwise.
const KernelTable& active_kernels() noexcept;

// Returns false (and leaves the selection unchanged) for unknown or
// unavailable names. Accepts "scalar", "avx2" and "auto".
bool select_kernels(std::string_view name) noexcept;

}  // namespace clustercoop::kernels

#endif  // CLUSTERCOOP_KERNELS_H_
