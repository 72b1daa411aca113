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

// Goodness-of-fit and estimation helpers shared by the tail validation
// report, the acceptance suite and the unit tests.

#ifndef CLUSTERCOOP_STATS_H_
#define CLUSTERCOOP_STATS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace clustercoop::stats {

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
  bool passes(double level) const { return p_value > level; }
};

// Asymptotic Kolmogorov survival function Q(t) = 2 sum (-1)^{k-1} e^{-2k^2t^2}.
double kolmogorov_survival(double t);

// One-sample KS of `samples` against the continuous CDF `cdf`. The samples are
// copied and sorted.
KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval at the normal quantile z (1.96 for 95%).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z = 1.959963984540054);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Chi-square goodness of fit of integer counts against Poisson(mean). Cells
// are pooled from both ends until every expected count is at least 5.
ChiSquareResult chi_square_poisson(std::span<const std::int64_t> counts,
                                   double mean);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
// Unbiased sample variance.
double variance(std::span<const double> v);

}  // namespace clustercoop::stats

#endif  // CLUSTERCOOP_STATS_H_
