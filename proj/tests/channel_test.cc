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

#include "clustercoop/channel.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <gtest/gtest.h>

#include "clustercoop/analytics.h"
#include "clustercoop/error.h"
#include "clustercoop/random.h"
#include "clustercoop/stats.h"

namespace clustercoop {
namespace {

constexpr int kDraws = 100000;

TEST(ServingDistance, LawMatchesCcdf) {
  RandomStream rng(21);
  std::vector<double> d(kDraws);
  for (double& v : d) v = sample_serving_distance(0.01, rng);
  const stats::KsResult ks = stats::ks_one_sample(
      d, [](double x) { return 1.0 - serving_distance_ccdf(std::max(x, 0.0), 0.01); });
  EXPECT_TRUE(ks.passes(0.01)) << "p = " << ks.p_value;
}

TEST(ScatteringModel, Validation) {
  EXPECT_NO_THROW(ScatteringModel::sparse(6, 10, 1).validate());
  EXPECT_NO_THROW(ScatteringModel::sparse(1, 1, 1).validate());
  EXPECT_THROW(ScatteringModel::sparse(0, 10, 1).validate(), Error);
  EXPECT_THROW(ScatteringModel::sparse(11, 10, 1).validate(), Error);
  EXPECT_THROW(ScatteringModel::sparse(6, 10, 0).validate(), Error);
  EXPECT_NO_THROW(ScatteringModel::rich({{3, 1.0}}).validate());
  EXPECT_NO_THROW(ScatteringModel::rich({{2, 0.25}, {4, 0.75}}).validate());
  // N = 1 gives infinite mean transmit power.
  EXPECT_THROW(ScatteringModel::rich({{1, 1.0}}), Error);
  EXPECT_THROW(ScatteringModel::rich({{3, 0.5}}), Error);
  EXPECT_THROW(ScatteringModel::rich({}), Error);
}

TEST(ScatteringModel, MinimumDiversity) {
  const ScatteringModel m = ScatteringModel::rich({{5, 0.5}, {2, 0.3}, {3, 0.2}});
  EXPECT_EQ(m.min_diversity(), 2);
  EXPECT_DOUBLE_EQ(m.min_diversity_probability(), 0.3);
}

TEST(ScatteringKind, StringRoundTrip) {
  EXPECT_EQ(parse_scattering(to_string(ScatteringKind::kSparse)), ScatteringKind::kSparse);
  EXPECT_EQ(parse_scattering(to_string(ScatteringKind::kRich)), ScatteringKind::kRich);
  EXPECT_THROW(parse_scattering("dense"), Error);
}

TEST(SparseGains, DegenerateMainLobe) {
  RandomStream rng(1);
  const GainDraw g = sample_sparse_gains(ScatteringModel::sparse(1, 1, 1), 50, 0.01, rng);
  EXPECT_EQ(g.main_lobe, 1.0);
  for (double w : g.interferer_main_lobes) EXPECT_EQ(w, 1.0);
}

TEST(SparseGains, SupportAndMoments) {
  RandomStream rng(2);
  const GainDraw g = sample_sparse_gains(ScatteringModel::sparse(6, 10, 1), kDraws, 0.01, rng);
  ASSERT_EQ(g.size(), static_cast<std::size_t>(kDraws));
  ASSERT_EQ(g.interferer_main_lobes.size(), g.size());
  ASSERT_EQ(g.interferer_serving_distances.size(), g.size());
  EXPECT_GE(g.main_lobe, 6.0);
  EXPECT_LE(g.main_lobe, 10.0);
  double above = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_GE(g.interferer_main_lobes[i], 6.0);
    EXPECT_LE(g.interferer_main_lobes[i], 10.0);
    EXPECT_GE(g.side_lobes[i], 0.0);
    EXPECT_LE(g.side_lobes[i], 1.0);
    above += g.side_lobes[i] > 0.9;
  }
  EXPECT_NEAR(stats::mean(g.interferer_main_lobes), 8.0, 0.05);
  EXPECT_NEAR(above / kDraws, 0.1, 0.01);
}

TEST(RichGains, GammaMainLobeExponentialSideLobe) {
  RandomStream rng(3);
  const GainDraw g = sample_rich_gains(ScatteringModel::rich({{3, 1.0}}), kDraws, 0.01, rng);
  EXPECT_NEAR(stats::mean(g.interferer_main_lobes), 3.0, 0.03);
  double above = 0;
  for (double v : g.side_lobes) {
    EXPECT_GT(v, 0.0);
    above += v > 1.0;
  }
  EXPECT_NEAR(above / kDraws, std::exp(-1.0), 0.01);
  const boost::math::gamma_distribution<double> gamma3(3.0, 1.0);
  const stats::KsResult ks = stats::ks_one_sample(
      g.interferer_main_lobes,
      [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(gamma3, x); });
  EXPECT_TRUE(ks.passes(0.01)) << "p = " << ks.p_value;
}

TEST(RichGains, MixtureOfDiversityOrders) {
  RandomStream rng(4);
  const ScatteringModel m = ScatteringModel::rich({{2, 0.5}, {4, 0.5}});
  const GainDraw g = sample_rich_gains(m, kDraws, 0.01, rng);
  EXPECT_NEAR(stats::mean(g.interferer_main_lobes), 3.0, 0.03);
  std::vector<double> n(kDraws);
  for (double& v : n) v = sample_diversity(m, rng);
  EXPECT_NEAR(stats::mean(n), 3.0, 0.02);
}

TEST(GainArrays, MatchStructuredDraw) {
  for (const ScatteringModel& m :
       {ScatteringModel::sparse(6, 10, 1), ScatteringModel::rich({{3, 1.0}})}) {
    RandomStream a(99), b(99);
    const GainDraw g = sample_gains(m, 17, 0.01, a);
    std::vector<double> l2(17), w(17), s(17);
    const double main = sample_gain_arrays(m, 0.01, b, l2, w, s);
    EXPECT_EQ(main, g.main_lobe);
    for (std::size_t i = 0; i < 17; ++i) {
      EXPECT_DOUBLE_EQ(std::sqrt(l2[i]), g.interferer_serving_distances[i]);
      EXPECT_EQ(w[i], g.interferer_main_lobes[i]);
      EXPECT_EQ(s[i], g.side_lobes[i]);
    }
  }
}

TEST(GainDraw, SelectKeepsOrder) {
  RandomStream rng(5);
  const GainDraw g = sample_gains(ScatteringModel::sparse(6, 10, 1), 6, 0.01, rng);
  const std::vector<std::size_t> ids{4, 1};
  const GainDraw s = g.select(ids);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.side_lobes[0], g.side_lobes[4]);
  EXPECT_EQ(s.interferer_main_lobes[1], g.interferer_main_lobes[1]);
  EXPECT_EQ(s.main_lobe, g.main_lobe);
}

TEST(ZeroForcing, InsufficientAntennas) {
  RandomStream rng(6);
  EXPECT_THROW(zf_gain_oracle(2, 3, rng), Error);
}

TEST(ZeroForcing, SingleAntennaIsExponential) {
  RandomStream rng(7);
  std::vector<double> w(kDraws);
  for (double& v : w) v = zf_gain_oracle(1, 1, rng).main_lobe;
  const stats::KsResult ks =
      stats::ks_one_sample(w, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });
  EXPECT_TRUE(ks.passes(0.01)) << "p = " << ks.p_value;
}

TEST(ZeroForcing, FiveAntennasThreeBsMatchGainLaws) {
  RandomStream rng(8);
  std::vector<double> w(kDraws), g(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    const ZeroForcingDraw d = zf_gain_oracle(5, 3, rng);
    w[i] = d.main_lobe;
    g[i] = d.side_lobe_sample;
  }
  const boost::math::gamma_distribution<double> gamma3(3.0, 1.0);
  const stats::KsResult ks_w =
      stats::ks_one_sample(w, [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(gamma3, x); });
  const stats::KsResult ks_g =
      stats::ks_one_sample(g, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });
  EXPECT_TRUE(ks_w.passes(0.01)) << "p = " << ks_w.p_value;
  EXPECT_TRUE(ks_g.passes(0.01)) << "p = " << ks_g.p_value;
}

TEST(ChannelInversion, Values) {
  EXPECT_DOUBLE_EQ(channel_inversion_power(1, 1, 1, 4), 1.0);
  EXPECT_DOUBLE_EQ(channel_inversion_power(1, 2, 8, 4), 2.0);
  EXPECT_DOUBLE_EQ(channel_inversion_power(2, 2, 8, 4), 2 * channel_inversion_power(1, 2, 8, 4));
  try {
    channel_inversion_power(1, 1, 0, 4);
    FAIL() << "expected a singularity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularity);
  }
}

}  // namespace
}  // namespace clustercoop
