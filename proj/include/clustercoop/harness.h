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

// Experiment orchestration: outage sweeps over cluster size, calibrated bound
// overlays, outage capacity, tail validation, and table persistence.

#ifndef CLUSTERCOOP_HARNESS_H_
#define CLUSTERCOOP_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clustercoop/analytics.h"
#include "clustercoop/simcore.h"

namespace clustercoop {

struct ExperimentSpec {
  SimConfig base;
  std::vector<double> sweep{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<Scenario> scenarios{Scenario::kClusterCenter, Scenario::kTypical};
  std::vector<ScatteringKind> scatterings{ScatteringKind::kSparse,
                                          ScatteringKind::kRich};
  double outage_cap_epsilon = 0.05;
  std::string output_path;
  // Adds one no-mcc row per scattering model (cluster size does not apply).
  bool include_baseline = true;

  void validate() const;
};

// Analytic parameters matching a simulation configuration.
ModelParams model_params(const SimConfig& cfg);

// cfg with the cluster size, scenario and scattering kind of one table row.
SimConfig row_config(const SimConfig& base, double ell, Scenario scenario,
                     ScatteringKind scattering);

struct ResultRow {
  double ell = 0.0;  // NaN for the no-mcc baseline
  Scenario scenario = Scenario::kClusterCenter;
  ScatteringKind scattering = ScatteringKind::kSparse;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ope_hat = 0.0;  // NaN when unavailable
  double bound_lower = 0.0;  // OPE bounds; NaN when none apply
  double bound_upper = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outage_count = 0;
  double capacity = 0.0;  // outage capacity in nats; NaN unless computed
  std::string status = "ok";

  friend bool operator==(const ResultRow& a, const ResultRow& b);
};

struct ResultTable {
  std::vector<ResultRow> rows;
  // Flat string map: seed, trials, model parameters, artifact version.
  std::map<std::string, std::string> metadata;
  bool partial = false;

  friend bool operator==(const ResultTable& a, const ResultTable& b) = default;
};

// Caches normalized-interference samples per configuration so experiments
// that share a configuration (different theta, different figure) simulate it
// once. Not thread-safe.
class SampleCache {
 public:
  const std::vector<double>& get(const SimConfig& cfg);
  std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::string, std::vector<double>> cache_;
};

// Key identifying the sampled distribution of cfg (theta is excluded).
std::string sample_key(const SimConfig& cfg);

ResultTable run_fig3(const ExperimentSpec& spec, SampleCache* cache = nullptr);

enum class BoundSide { kLower, kUpper };

struct CalibratedCurve {
  std::vector<double> ells;
  std::vector<double> values;  // b exp(-phi(ell))
  double b = 0.0;
  double anchor_ell = 0.0;
};

// Anchors b exp(-phi) to p_hat at the largest ell with p_hat > 0 among the
// rows of (scenario, scattering). phi is the table's bound_lower (kLower) or
// bound_upper (kUpper) column. Throws Error(kCalibrationUnavailable) when no
// usable row exists.
CalibratedCurve calibrate_overlay(const ResultTable& table, Scenario scenario,
                                  ScatteringKind scattering, BoundSide side);

struct CapacityResult {
  double capacity = 0.0;    // ln(1 + theta_star)
  double theta_star = 0.0;  // largest feasible theta found
  double theta_low = 0.0;   // final bracket
  double theta_high = 0.0;
  bool converged = true;
  std::string warning;
};

inline constexpr double kThetaMin = 1e-3;
inline constexpr double kThetaMax = 1e3;
inline constexpr int kCapacityIterations = 40;

// Largest ln(1 + theta) with p_hat(theta) <= epsilon on one common set of
// trials (cfg with cluster size ell).
CapacityResult outage_capacity(const SimConfig& cfg, double ell, double epsilon,
                               SampleCache* cache = nullptr);
CapacityResult outage_capacity_from_samples(const std::vector<double>& normalized,
                                            double epsilon);

// Outage capacity per (ell, scenario, scattering) plus the no-mcc baseline.
ResultTable run_fig4(const ExperimentSpec& spec, SampleCache* cache = nullptr);

// Analytic bound curves over the sweep; no simulation.
ResultTable bound_table(const ExperimentSpec& spec);

struct TailCheck {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct TailReport {
  std::vector<TailCheck> checks;
  bool all_passed() const;
};

struct TailOptions {
  std::uint64_t ks_samples = 100000;
  std::uint64_t pg_samples = 10000000;
  std::uint64_t zn_samples = 1000000;
  double zn_cluster_size = 4.0;
  // Added to alpha on the analytic side only (negative control).
  double analytic_alpha_offset = 0.0;
};

TailReport validate_tails(const SimConfig& cfg, const TailOptions& options = {});

// Table persistence. CSV: one "# {json metadata}" line, a header line, then
// one line per row with doubles at round-trip precision.
void write_csv(const ResultTable& table, std::ostream& out);
ResultTable read_csv(std::istream& in);
void write_json(const ResultTable& table, std::ostream& out);

// Flat "key = value" configuration ('#' starts a comment). Unknown keys and
// malformed values throw Error(kInvalidConfig).
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec load_config(const std::string& path);

std::string artifact_version();

}  // namespace clustercoop

#endif  // CLUSTERCOOP_HARNESS_H_
