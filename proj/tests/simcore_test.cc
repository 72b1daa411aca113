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

#include "clustercoop/simcore.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "clustercoop/analytics.h"
#include "clustercoop/error.h"
#include "clustercoop/stats.h"

namespace clustercoop {
namespace {

SimConfig base_config(Scenario scenario, double ell) {
  SimConfig cfg;
  cfg.scenario = scenario;
  cfg.cluster_size = ell;
  return cfg;
}

TEST(Scenario, StringRoundTrip) {
  for (Scenario s : {Scenario::kClusterCenter, Scenario::kTypical, Scenario::kNoMcc}) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  EXPECT_THROW(parse_scenario("edge"), Error);
}

TEST(SimConfig, Validation) {
  SimConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  for (auto mutate : std::vector<void (*)(SimConfig&)>{
           [](SimConfig& c) { c.alpha = 2.0; },
           [](SimConfig& c) { c.theta = 0.0; },
           [](SimConfig& c) { c.cluster_size = 0.0; },
           [](SimConfig& c) { c.trials = 0; },
           [](SimConfig& c) { c.omega = -1.0; },
           [](SimConfig& c) { c.density = 0.0; },
           [](SimConfig& c) { c.disk_radius = -5.0; },
           [](SimConfig& c) {
             c.scattering.kind = ScatteringKind::kRich;
             c.scattering.diversity_pmf = {{1, 1.0}};
           },
       }) {
    SimConfig bad;
    mutate(bad);
    EXPECT_THROW(bad.validate(), Error);
  }
}

TEST(SimConfig, ApothemMatchesClusterSize) {
  const SimConfig cfg = base_config(Scenario::kClusterCenter, 4.0);
  EXPECT_NEAR(expected_cluster_size(cfg.density, cfg.apothem()), 4.0, 1e-12);
  EXPECT_NEAR(cfg.effective_disk_radius(), default_disk_radius(cfg.density), 0.0);
}

TEST(Realization, ScenarioInvariants) {
  for (Scenario s : {Scenario::kClusterCenter, Scenario::kTypical, Scenario::kNoMcc}) {
    const SimConfig cfg = base_config(s, 3.0);
    for (std::uint64_t i = 0; i < 2000; ++i) {
      RandomStream rng = RandomStream::for_trial(5, i);
      const NetworkRealization r = sample_realization(cfg, rng);
      ASSERT_EQ(r.interferers.size(), r.interferer_ids.size());
      EXPECT_NEAR(r.serving_distance, distance(r.typical_bs, r.typical_mobile), 1e-9);
      EXPECT_GE(r.edge_distance, 0.0);
      EXPECT_LE(r.edge_distance, r.cluster.apothem() + 1e-12);
      if (s == Scenario::kClusterCenter) {
        EXPECT_EQ(r.serving_distance, 0.0);
        EXPECT_EQ(r.edge_distance, r.cluster.apothem());
      }
      if (s != Scenario::kNoMcc) {
        EXPECT_TRUE(hex_contains(r.cluster, r.typical_bs));
      }
      for (std::size_t k = 0; k < r.interferers.size(); ++k) {
        const Point2 y = r.interferers.point(k);
        if (s != Scenario::kNoMcc) {
          EXPECT_FALSE(hex_contains(r.cluster, y));
        }
        if (s != Scenario::kClusterCenter) {
          EXPECT_GT(distance(y, r.typical_mobile), r.serving_distance);
        }
      }
    }
  }
}

TEST(Realization, TypicalServingDistanceLaw) {
  const SimConfig cfg = base_config(Scenario::kTypical, 2.0);
  std::vector<double> d;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    RandomStream rng = RandomStream::for_trial(6, i);
    d.push_back(sample_realization(cfg, rng).serving_distance);
  }
  const stats::KsResult ks = stats::ks_one_sample(
      d, [](double x) { return 1.0 - serving_distance_ccdf(std::max(x, 0.0), 0.01); });
  EXPECT_TRUE(ks.passes(0.01)) << "p = " << ks.p_value;
}

TEST(InterferencePower, HandBuiltRealization) {
  SimConfig cfg;
  NetworkRealization r;
  GainDraw g;
  EXPECT_EQ(interference_power(r, g, cfg), 0.0);
  r.interferers.push_back({2.0, 0.0});
  r.interferer_ids = {0};
  g.side_lobes = {1.0};
  g.interferer_main_lobes = {1.0};
  g.interferer_serving_distances = {1.0};
  EXPECT_DOUBLE_EQ(interference_power(r, g, cfg), 1.0 / 16.0);
  cfg.omega = 3.0;
  EXPECT_DOUBLE_EQ(interference_power(r, g, cfg), 3.0 / 16.0);
  r.interferers.xs[0] = 0.0;
  try {
    interference_power(r, g, cfg);
    FAIL() << "expected a singularity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularity);
  }
}

TEST(NormalizedInterference, MatchesStructuredPath) {
  for (Scenario s : {Scenario::kClusterCenter, Scenario::kTypical, Scenario::kNoMcc}) {
    for (ScatteringKind k : {ScatteringKind::kSparse, ScatteringKind::kRich}) {
      SimConfig cfg = base_config(s, 2.5);
      cfg.scattering.kind = k;
      cfg.omega = 2.0;
      for (std::uint64_t i = 0; i < 300; ++i) {
        RandomStream a = RandomStream::for_trial(8, i);
        RandomStream b = RandomStream::for_trial(8, i);
        const TrialDraw t = sample_trial(cfg, a);
        const double slow = interference_power(t.realization, t.gains, cfg) / cfg.omega;
        const double fast = normalized_interference(cfg, b);
        EXPECT_NEAR(fast, slow, 1e-12 * std::max(1.0, slow));
      }
    }
  }
}

// I is linear in omega and the threshold scales with it, so outage
// indicators do not move.
TEST(RunOutageTrial, OmegaInvariance) {
  for (Scenario s : {Scenario::kClusterCenter, Scenario::kTypical}) {
    SimConfig cfg = base_config(s, 2.0);
    cfg.theta = 30.0;
    std::vector<bool> reference;
    for (double omega : {1.0, 0.1, 100.0}) {
      cfg.omega = omega;
      std::vector<bool> flags;
      for (std::uint64_t i = 0; i < 2000; ++i) {
        RandomStream rng = RandomStream::for_trial(9, i);
        flags.push_back(run_outage_trial(cfg, rng));
      }
      if (reference.empty()) {
        reference = flags;
        EXPECT_GT(std::count(flags.begin(), flags.end(), true), 0);
      } else {
        EXPECT_EQ(flags, reference) << "omega " << omega;
      }
    }
  }
}

TEST(RunOutageTrial, TinyThresholdNeverOutage) {
  SimConfig cfg = base_config(Scenario::kNoMcc, 1.0);
  cfg.theta = 1e-300;
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomStream rng = RandomStream::for_trial(10, i);
    EXPECT_FALSE(run_outage_trial(cfg, rng));
  }
  EXPECT_FALSE(is_outage(0.0, 1e300));
}

TEST(EstimateOutage, NoInterferersPossible) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 1.0);
  cfg.disk_radius = 1e-3;  // expected 3e-8 background points
  cfg.trials = 500;
  const OutageEstimate e = estimate_outage(cfg);
  EXPECT_EQ(e.outage_count, 0u);
  EXPECT_EQ(e.p_hat, 0.0);
  EXPECT_FALSE(e.ope_available());
  EXPECT_TRUE(std::isnan(e.ope_hat));
  EXPECT_DOUBLE_EQ(e.ci_high, 3.0 / 500.0);
}

TEST(EstimateOutage, FromCounts) {
  const OutageEstimate e = outage_from_counts(25, 1000);
  EXPECT_DOUBLE_EQ(e.p_hat, 0.025);
  EXPECT_LE(e.ci_low, e.p_hat);
  EXPECT_GE(e.ci_high, e.p_hat);
  EXPECT_DOUBLE_EQ(e.ope_hat, -std::log(0.025));
  EXPECT_THROW(outage_from_counts(5, 0), Error);
  EXPECT_THROW(outage_from_counts(6, 5), Error);
  const std::vector<double> s{0.1, 0.5, 0.9};
  EXPECT_EQ(outage_from_samples(s, 2.5).outage_count, 2u);  // S > 0.4
}

TEST(EstimateOutage, DeterministicAcrossThreadCounts) {
  SimConfig cfg = base_config(Scenario::kTypical, 3.0);
  cfg.trials = 3000;
  cfg.threads = 1;
  const std::vector<double> serial = simulate_normalized_interference(cfg);
  cfg.threads = 4;
  const std::vector<double> parallel = simulate_normalized_interference(cfg);
  EXPECT_EQ(serial, parallel);
  const OutageEstimate a = estimate_outage(cfg);
  const OutageEstimate b = estimate_outage(cfg);
  EXPECT_EQ(a.outage_count, b.outage_count);
  EXPECT_EQ(a.p_hat, b.p_hat);
}

TEST(EstimateOutage, LargerClustersHelpTheCenterMobile) {
  SimConfig one = base_config(Scenario::kClusterCenter, 1.0);
  one.trials = 100000;
  SimConfig six = one;
  six.cluster_size = 6.0;
  const OutageEstimate a = estimate_outage(one);
  const OutageEstimate b = estimate_outage(six);
  EXPECT_LT(b.ci_high, a.ci_low);
}

TEST(EstimateOutage, TypicalMobileIsWorseThanCenter) {
  SimConfig cc = base_config(Scenario::kClusterCenter, 4.0);
  cc.trials = 20000;
  SimConfig typical = cc;
  typical.scenario = Scenario::kTypical;
  EXPECT_GT(estimate_outage(typical).ci_low, estimate_outage(cc).ci_high);
}

// Common random numbers: a larger hexagon only removes interferers.
TEST(Coupling, InterferenceDecreasesWithClusterSize) {
  for (ScatteringKind k : {ScatteringKind::kSparse, ScatteringKind::kRich}) {
    std::vector<double> prev;
    for (double ell : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      SimConfig cfg = base_config(Scenario::kClusterCenter, ell);
      cfg.scattering.kind = k;
      cfg.trials = 2000;
      const std::vector<double> s = simulate_normalized_interference(cfg);
      if (!prev.empty()) {
        for (std::size_t i = 0; i < s.size(); ++i) ASSERT_LE(s[i], prev[i]) << "trial " << i;
      }
      prev = s;
    }
  }
}

TEST(Zn, EmptySumForTinyCluster) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 1e-9);
  RandomStream rng(11);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_zn(cfg, rng), 0.0);
}

TEST(Zn, LinearInOmega) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 4.0);
  SimConfig scaled = cfg;
  scaled.omega = 5.0;
  RandomStream a(12), b(12);
  for (int i = 0; i < 1000; ++i) {
    const double z = sample_zn(cfg, a);
    EXPECT_NEAR(sample_zn(scaled, b), 5.0 * z, 1e-12 * z);
  }
}

TEST(Zn, WaldIdentity) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 4.0);
  RandomStream rng(13);
  std::vector<double> z(100000);
  for (double& v : z) v = sample_zn(cfg, rng);
  RandomStream direct(14);
  const std::vector<double> pg = sample_pg_products(cfg, 2000000, direct);
  const double expected = 4.0 * stats::mean(pg);
  const double se = std::sqrt(stats::variance(z) / z.size());
  EXPECT_LE(std::fabs(stats::mean(z) - expected), 3.0 * se);
}

TEST(RingBounds, SandwichHolds) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 4.0);
  const RingBoundReport upper = check_ring_bounds(cfg, 2000, 0.2);
  EXPECT_EQ(upper.trials, 2000u);
  EXPECT_EQ(upper.upper_violations, 0u);
  EXPECT_EQ(upper.lower_violations, 0u);
  EXPECT_LE(upper.max_upper_ratio, 1.0);
  EXPECT_GE(upper.min_lower_gap, 0.0);
  SimConfig typical = cfg;
  typical.scenario = Scenario::kTypical;
  EXPECT_THROW(check_ring_bounds(typical, 10, 0.2), Error);
  EXPECT_THROW(check_ring_bounds(cfg, 10, 0.0), Error);
}

TEST(RingBounds, EmptyRealizations) {
  SimConfig cfg = base_config(Scenario::kClusterCenter, 1.0);
  cfg.disk_radius = 1e-3;
  const RingBoundReport r = check_ring_bounds(cfg, 100, 0.2);
  EXPECT_EQ(r.upper_violations + r.lower_violations, 0u);
}

TEST(EmpiricalTail, EdgeCases) {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const std::vector<double> t{0.0, 2.0, 5.0};
  const TailCurve c = empirical_tail(s, t);
  EXPECT_EQ(c.tail_probs, (std::vector<double>{1.0, 1.0 / 3.0, 0.0}));
  EXPECT_THROW(empirical_tail({}, t), Error);
  const std::vector<double> unsorted{2.0, 1.0};
  EXPECT_THROW(empirical_tail(s, unsorted), Error);
}

TEST(EmpiricalTail, UniformOracle) {
  RandomStream rng(15);
  std::vector<double> u(100000);
  for (double& v : u) v = rng.uniform();
  const std::vector<double> half{0.5};
  EXPECT_NEAR(empirical_tail(u, half).tail_probs[0], 0.5, 0.01);
}

TEST(ParallelMap, OrderAndExceptions) {
  const std::vector<double> v =
      parallel_map(1000, 3, [](std::uint64_t i) { return static_cast<double>(i * i); });
  for (std::uint64_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<double>(i * i));
  EXPECT_THROW(parallel_map(100, 4,
                            [](std::uint64_t i) -> double {
                              if (i == 57) throw std::runtime_error("boom");
                              return 0.0;
                            }),
               std::runtime_error);
  EXPECT_GE(resolve_threads(0), 1u);
  EXPECT_EQ(resolve_threads(3), 3u);
}

}  // namespace
}  // namespace clustercoop
