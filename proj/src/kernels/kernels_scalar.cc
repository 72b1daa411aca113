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

#include <algorithm>
#include <cmath>

#include "clustercoop/kernels.h"
#include "kernels_internal.h"

namespace clustercoop::kernels {
namespace {

void hex_norms_scalar(std::span<const double> xs, std::span<const double> ys,
                      double cx, double cy, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double a = std::fabs(dx);
    const double hx = 0.5 * dx;
    const double sy = kSqrt3Over2 * dy;
    const double b = std::fabs(hx + sy);
    const double c = std::fabs(sy - hx);
    out[i] = std::max(a, std::max(b, c));
  }
}

void marks_scalar(std::span<const double> l2, std::span<const double> g,
                  std::span<const double> w, HalfExponent h,
                  std::span<double> out) {
  for (std::size_t i = 0; i < l2.size(); ++i) {
    out[i] = h.apply(l2[i]) * g[i] / w[i];
  }
}

double power_law_sum_scalar(std::span<const double> xs,
                            std::span<const double> ys,
                            std::span<const double> marks, double ux,
                            double uy, HalfExponent h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - ux;
    const double dy = ys[i] - uy;
    const double d2 = dx * dx + dy * dy;
    sum += marks[i] / h.apply(d2);
  }
  return sum;
}

std::size_t count_greater_scalar(std::span<const double> values,
                                 double threshold) {
  std::size_t n = 0;
  for (double v : values) n += v > threshold ? 1 : 0;
  return n;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{
      "scalar", hex_norms_scalar, marks_scalar, power_law_sum_scalar,
      count_greater_scalar};
  return table;
}

}  // namespace clustercoop::kernels
