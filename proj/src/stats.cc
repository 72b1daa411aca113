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

#include "clustercoop/stats.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "clustercoop/error.h"

namespace clustercoop::stats {

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // series converges slowly; Q is 1 to 1e-20 here
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Stephens' small-sample correction of the KS statistic.
double scaled_statistic(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return (root + 0.12 + 0.11 / root) * d;
}

}  // namespace

KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_one_sample: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return {d, kolmogorov_survival(scaled_statistic(d, n))};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: no samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                              static_cast<double>(j) / ny));
  }
  return {d, kolmogorov_survival(scaled_statistic(d, nx * ny / (nx + ny)))};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z) {
  require(trials > 0, "wilson_interval: zero trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Guard the invariant low <= p <= high against rounding at p = 0 or 1.
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  return ci;
}

ChiSquareResult chi_square_poisson(std::span<const std::int64_t> counts,
                                   double mean) {
  require(!counts.empty(), "chi_square_poisson: no counts");
  require(mean > 0.0, "chi_square_poisson: mean must be positive");
  std::map<std::int64_t, double> observed;
  for (auto c : counts) observed[c] += 1.0;
  const double n = static_cast<double>(counts.size());
  const boost::math::poisson_distribution<double> law(mean);

  // Cells [lo, hi] over the central range, pooled tails on each side.
  std::int64_t lo = static_cast<std::int64_t>(std::floor(mean));
  std::int64_t hi = lo;
  while (lo > 0 && n * boost::math::cdf(law, static_cast<double>(lo - 1)) >= 5.0) --lo;
  while (n * boost::math::cdf(boost::math::complement(law, static_cast<double>(hi))) >= 5.0) ++hi;

  std::vector<double> expected;
  std::vector<double> seen;
  auto observed_between = [&](std::int64_t a, std::int64_t b) {
    double s = 0.0;
    for (auto it = observed.lower_bound(a); it != observed.end() && it->first <= b; ++it)
      s += it->second;
    return s;
  };
  const std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  if (lo > 0) {
    expected.push_back(n * boost::math::cdf(law, static_cast<double>(lo - 1)));
    seen.push_back(observed_between(0, lo - 1));
  } else {
    lo = 0;
  }
  for (std::int64_t k = lo; k < hi; ++k) {
    expected.push_back(n * boost::math::pdf(law, static_cast<double>(k)));
    seen.push_back(observed_between(k, k));
  }
  expected.push_back(
      n * boost::math::cdf(boost::math::complement(law, static_cast<double>(hi - 1))));
  seen.push_back(observed_between(hi, kMax));

  ChiSquareResult result;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = seen[i] - expected[i];
    result.statistic += diff * diff / expected[i];
  }
  result.degrees_of_freedom = static_cast<int>(expected.size()) - 1;
  if (result.degrees_of_freedom < 1) {
    result.p_value = 1.0;
    return result;
  }
  const boost::math::chi_squared_distribution<double> chi(result.degrees_of_freedom);
  result.p_value = boost::math::cdf(boost::math::complement(chi, result.statistic));
  return result;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2,
          "least_squares: need at least two paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "least_squares: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double mean(std::span<const double> v) {
  require(!v.empty(), "mean: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  require(v.size() >= 2, "variance: need two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace clustercoop::stats
