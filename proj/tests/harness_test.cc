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

#include "clustercoop/harness.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "clustercoop/error.h"
#include "clustercoop/random.h"
#include "json.hpp"

namespace clustercoop {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.base.trials = 3000;
  spec.base.seed = 77;
  spec.sweep = {1.0, 2.0, 4.0};
  return spec;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidParameter;
}

TEST(Config, ParsesAllKeys) {
  std::istringstream in(R"(# sweep over cluster sizes
density = 0.02
alpha = 3.5   # path loss
theta = 2
omega = 4
cluster_size = 3
scattering = rich
scenario = typical
trials = 1234
seed = 99
disk_radius = 60
threads = 2
delta = 5
delta_prime = 9
gamma = 0.5
diversity_pmf = 3:0.25, 4:0.75
sweep = 1, 2.5, 4
scenarios = cluster-center, typical
scatterings = sparse
outage_cap_epsilon = 0.1
output_path = /tmp/out.csv
include_baseline = false
)");
  const ExperimentSpec s = parse_config(in);
  EXPECT_EQ(s.base.density, 0.02);
  EXPECT_EQ(s.base.alpha, 3.5);
  EXPECT_EQ(s.base.theta, 2.0);
  EXPECT_EQ(s.base.omega, 4.0);
  EXPECT_EQ(s.base.cluster_size, 3.0);
  EXPECT_EQ(s.base.scattering.kind, ScatteringKind::kRich);
  EXPECT_EQ(s.base.scenario, Scenario::kTypical);
  EXPECT_EQ(s.base.trials, 1234u);
  EXPECT_EQ(s.base.seed, 99u);
  EXPECT_EQ(s.base.disk_radius, 60.0);
  EXPECT_EQ(s.base.threads, 2u);
  EXPECT_EQ(s.base.scattering.delta, 5.0);
  EXPECT_EQ(s.base.scattering.delta_prime, 9.0);
  EXPECT_EQ(s.base.scattering.gamma, 0.5);
  EXPECT_EQ(s.base.scattering.diversity_pmf,
            (std::vector<std::pair<int, double>>{{3, 0.25}, {4, 0.75}}));
  EXPECT_EQ(s.sweep, (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_EQ(s.scenarios, (std::vector<Scenario>{Scenario::kClusterCenter, Scenario::kTypical}));
  EXPECT_EQ(s.scatterings, (std::vector<ScatteringKind>{ScatteringKind::kSparse}));
  EXPECT_EQ(s.outage_cap_epsilon, 0.1);
  EXPECT_EQ(s.output_path, "/tmp/out.csv");
  EXPECT_FALSE(s.include_baseline);
}

TEST(Config, EmptyDocumentGivesDefaults) {
  std::istringstream in("\n# nothing\n");
  const ExperimentSpec s = parse_config(in);
  EXPECT_EQ(s.sweep.size(), 8u);
  EXPECT_EQ(s.base.alpha, 4.0);
}

TEST(Config, RejectsBadDocuments) {
  for (const char* text : {
           "bogus = 1\n",
           "alpha\n",
           "alpha = four\n",
           "alpha = 4 5\n",
           "alpha = 4\nalpha = 5\n",
           "trials = -3\n",
           "trials = 0\n",
           "alpha = 1.5\n",
           "sweep = 2, 1\n",
           "sweep =\n",
           "scenarios = edge\n",
           "scattering = dense\n",
           "outage_cap_epsilon = 1\n",
           "diversity_pmf = 1:1\n",
           "diversity_pmf = 3\n",
           "include_baseline = maybe\n",
       }) {
    std::istringstream in(text);
    EXPECT_EQ(code_of([&] { parse_config(in); }), ErrorCode::kInvalidConfig) << text;
  }
  EXPECT_EQ(code_of([] { load_config("/nonexistent/file.cfg"); }), ErrorCode::kInvalidConfig);
}

TEST(ExperimentSpec, Validation) {
  ExperimentSpec s;
  EXPECT_NO_THROW(s.validate());
  s.sweep = {};
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.sweep = {1, 1};
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.outage_cap_epsilon = 0.0;
  EXPECT_THROW(s.validate(), Error);
}

TEST(Fig3, TableShapeAndBounds) {
  const ExperimentSpec spec = small_spec();
  SampleCache cache;
  const ResultTable t = run_fig3(spec, &cache);
  ASSERT_EQ(t.rows.size(), 3u * 2u * 2u + 2u);
  EXPECT_FALSE(t.partial);
  EXPECT_EQ(cache.size(), t.rows.size());
  for (const ResultRow& r : t.rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_EQ(r.trials, 3000u);
    EXPECT_LE(r.ci_low, r.p_hat);
    EXPECT_GE(r.ci_high, r.p_hat);
    EXPECT_DOUBLE_EQ(r.p_hat, static_cast<double>(r.outage_count) / r.trials);
    if (r.scenario == Scenario::kNoMcc) {
      EXPECT_TRUE(std::isnan(r.ell));
      EXPECT_TRUE(std::isnan(r.bound_lower));
    } else {
      EXPECT_LE(r.bound_lower, r.bound_upper);
    }
  }
  EXPECT_EQ(t.metadata.at("seed"), "77");
  EXPECT_EQ(t.metadata.at("trials"), "3000");
}

// Metadata must be enough to regenerate any row exactly.
TEST(Fig3, RowReproducibleFromMetadata) {
  const ExperimentSpec spec = small_spec();
  const ResultTable t = run_fig3(spec);
  std::ostringstream csv;
  write_csv(t, csv);
  std::istringstream in(csv.str());
  const ResultTable back = read_csv(in);

  ExperimentSpec again;
  again.base.seed = std::stoull(back.metadata.at("seed"));
  again.base.trials = std::stoull(back.metadata.at("trials"));
  again.base.theta = std::stod(back.metadata.at("theta"));
  again.sweep = {back.rows[5].ell};
  const ResultRow& row = back.rows[5];
  const SimConfig cfg = row_config(again.base, row.ell, row.scenario, row.scattering);
  const OutageEstimate e = estimate_outage(cfg);
  EXPECT_EQ(e.outage_count, row.outage_count);
  EXPECT_EQ(e.p_hat, row.p_hat);
  EXPECT_EQ(e.ci_high, row.ci_high);
}

TEST(Fig3, CacheSharesSamplesAcrossThresholds) {
  SampleCache cache;
  SimConfig a;
  a.trials = 500;
  SimConfig b = a;
  b.theta = 10.0;
  b.threads = 3;
  const std::vector<double>& first = cache.get(a);
  const std::vector<double>& second = cache.get(b);
  EXPECT_EQ(&first, &second);
  EXPECT_EQ(sample_key(a), sample_key(b));
  b.cluster_size = 2.0;
  EXPECT_NE(sample_key(a), sample_key(b));
  // Cluster size is irrelevant without cooperation.
  a.scenario = b.scenario = Scenario::kNoMcc;
  EXPECT_EQ(sample_key(a), sample_key(b));
}

TEST(Csv, RoundTripIsExact) {
  ResultTable t;
  t.metadata = {{"seed", "5"}, {"note", "a \"quoted\" value"}};
  t.partial = true;
  ResultRow r;
  r.ell = 1.0 / 3.0;
  r.scenario = Scenario::kTypical;
  r.scattering = ScatteringKind::kRich;
  r.p_hat = 0.1;
  r.ci_low = 0.05;
  r.ci_high = 0.2;
  r.ope_hat = -std::log(0.1);
  r.bound_lower = kNaN;
  r.bound_upper = kNaN;
  r.trials = 1000;
  r.outage_count = 100;
  r.capacity = kNaN;
  r.status = "ok";
  t.rows.push_back(r);
  r.ell = kNaN;
  r.status = "numerical failure";
  t.rows.push_back(r);
  std::ostringstream out;
  write_csv(t, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_csv(in), t);
}

TEST(Csv, StatusCommasAreSanitized) {
  ResultTable t;
  ResultRow r;
  r.status = "bad, very bad";
  t.rows.push_back(r);
  std::ostringstream out;
  write_csv(t, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_csv(in).rows[0].status, "bad; very bad");
}

TEST(Csv, RejectsMalformedInput) {
  for (const char* text : {"", "ell,scenario\n", "# {}\nwrong header\n",
                           "# {not json\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_csv(in), Error) << text;
  }
}

TEST(Json, NanBecomesNull) {
  ResultTable t;
  ResultRow r;
  r.ell = kNaN;
  t.rows.push_back(r);
  std::ostringstream out;
  write_json(t, out);
  const nlohmann::json doc = nlohmann::json::parse(out.str());
  EXPECT_TRUE(doc["rows"][0]["ell"].is_null());
  EXPECT_EQ(doc["rows"][0]["p_hat"], 0.0);
}

ResultTable synthetic_table(std::vector<double> ells, std::vector<double> p_hats,
                            std::vector<double> phi) {
  ResultTable t;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    ResultRow r;
    r.ell = ells[i];
    r.p_hat = p_hats[i];
    r.bound_lower = phi[i];
    r.bound_upper = 2.0 * phi[i];
    t.rows.push_back(r);
  }
  return t;
}

TEST(Calibration, AnchorsAtRightmostPositiveEstimate) {
  const ResultTable t = synthetic_table({1, 2, 3}, {0.1, 0.01, 0.0}, {1.0, 2.0, 3.0});
  const CalibratedCurve c =
      calibrate_overlay(t, Scenario::kClusterCenter, ScatteringKind::kSparse, BoundSide::kLower);
  EXPECT_EQ(c.anchor_ell, 2.0);
  ASSERT_EQ(c.values.size(), 3u);
  EXPECT_EQ(c.values[1], 0.01);
  EXPECT_NEAR(c.b, 0.01 * std::exp(2.0), 1e-15);
  EXPECT_GT(c.values[0], c.values[1]);
  EXPECT_GT(c.values[1], c.values[2]);
}

TEST(Calibration, SinglePointPassesThroughIt) {
  const ResultTable t = synthetic_table({5}, {0.003}, {4.2});
  for (BoundSide side : {BoundSide::kLower, BoundSide::kUpper}) {
    const CalibratedCurve c =
        calibrate_overlay(t, Scenario::kClusterCenter, ScatteringKind::kSparse, side);
    ASSERT_EQ(c.values.size(), 1u);
    EXPECT_EQ(c.values[0], 0.003);
  }
}

TEST(Calibration, UnavailableWithoutOutages) {
  const ResultTable t = synthetic_table({1, 2}, {0.0, 0.0}, {1.0, 2.0});
  EXPECT_EQ(code_of([&] {
              calibrate_overlay(t, Scenario::kClusterCenter, ScatteringKind::kSparse,
                                BoundSide::kLower);
            }),
            ErrorCode::kCalibrationUnavailable);
  EXPECT_EQ(code_of([&] {
              calibrate_overlay(t, Scenario::kTypical, ScatteringKind::kSparse, BoundSide::kLower);
            }),
            ErrorCode::kCalibrationUnavailable);
}

TEST(Capacity, VacuousAndImpossibleTargets) {
  const std::vector<double> s{0.1, 0.2, 0.3, 5.0};
  const CapacityResult all = outage_capacity_from_samples(s, 1.0);
  EXPECT_EQ(all.theta_star, kThetaMax);
  EXPECT_DOUBLE_EQ(all.capacity, std::log1p(kThetaMax));
  const std::vector<double> huge(10, 1e6);  // outage even at theta_min
  const CapacityResult none = outage_capacity_from_samples(huge, 0.05);
  EXPECT_EQ(none.capacity, 0.0);
  EXPECT_THROW(outage_capacity_from_samples({}, 0.05), Error);
  EXPECT_THROW(outage_capacity_from_samples(s, 0.0), Error);
}

TEST(Capacity, BisectionFindsTheQuantile) {
  // Outage iff S > 1 / theta: with S = 0.1 .. 1.0 and epsilon 0.25 the two
  // largest samples may be in outage, so theta* is just below 1 / 0.8.
  std::vector<double> s;
  for (int i = 1; i <= 10; ++i) s.push_back(0.1 * i);
  const CapacityResult c = outage_capacity_from_samples(s, 0.25);
  EXPECT_TRUE(c.converged);
  EXPECT_LE(c.theta_low, 1.0 / 0.8);
  EXPECT_NEAR(c.theta_star, 1.0 / 0.8, 1e-6);
  EXPECT_DOUBLE_EQ(c.capacity, std::log1p(c.theta_star));
}

TEST(Capacity, MonotoneInEpsilon) {
  SimConfig cfg;
  cfg.trials = 4000;
  cfg.scenario = Scenario::kTypical;
  SampleCache cache;
  double prev = -1.0;
  for (double eps : {0.01, 0.02, 0.05, 0.1, 0.3, 0.9}) {
    const double c = outage_capacity(cfg, 3.0, eps, &cache).capacity;
    EXPECT_GE(c, prev) << "epsilon " << eps;
    prev = c;
  }
  EXPECT_EQ(cache.size(), 1u);
}

TEST(Fig4, CapacityColumnFilled) {
  ExperimentSpec spec = small_spec();
  spec.scatterings = {ScatteringKind::kSparse};
  const ResultTable t = run_fig4(spec);
  EXPECT_EQ(t.metadata.at("table"), "fig4");
  for (const ResultRow& r : t.rows) {
    EXPECT_TRUE(std::isfinite(r.capacity));
    EXPECT_GE(r.capacity, 0.0);
  }
}

TEST(BoundTable, AnalyticRowsOnly) {
  ExperimentSpec spec;
  spec.sweep = {1, 4};
  const ResultTable t = bound_table(spec);
  ASSERT_EQ(t.rows.size(), 8u);
  for (const ResultRow& r : t.rows) {
    EXPECT_EQ(r.trials, 0u);
    EXPECT_TRUE(std::isnan(r.p_hat));
    EXPECT_LE(r.bound_lower, r.bound_upper);
  }
}

TailOptions quick_tails() {
  TailOptions o;
  o.ks_samples = 5000;
  o.pg_samples = 200000;
  o.zn_samples = 50000;
  return o;
}

TEST(Tails, DeterministicAndPassingAtDefaults) {
  SimConfig cfg;
  const TailReport a = validate_tails(cfg, quick_tails());
  const TailReport b = validate_tails(cfg, quick_tails());
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].statistic, b.checks[i].statistic) << a.checks[i].name;
    EXPECT_TRUE(a.checks[i].passed) << a.checks[i].name << ": " << a.checks[i].detail;
  }
  EXPECT_TRUE(a.all_passed());
}

TEST(Tails, PerturbedAnalyticSideFails) {
  SimConfig cfg;
  TailOptions o = quick_tails();
  o.analytic_alpha_offset = 0.3;
  const TailReport r = validate_tails(cfg, o);
  EXPECT_FALSE(r.all_passed());
  for (const TailCheck& c : r.checks) {
    if (c.name == "sparse-pg-tail") {
      EXPECT_FALSE(c.passed);
    }
  }
}

}  // namespace
}  // namespace clustercoop
