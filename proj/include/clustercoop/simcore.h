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

// Monte Carlo engine for cluster-cooperative downlink outage.
//
// One trial draws, in this order and from one RandomStream:
//   1. the background BS process on the simulation disk,
//   2. the serving main lobe, then (L^2, W, G) for every background BS,
//   3. for typical and no-mcc scenarios: the typical BS, its serving distance
//      and the direction to its mobile.
// Gains are attached to BS identity before any scenario filtering, so two
// configurations that differ only in cluster size see the same network and
// the same gains (the coupling the monotonicity properties rely on).
//
// Trials are keyed by (seed, trial index) and never share a stream, so
// results do not depend on thread count or scheduling.

#ifndef CLUSTERCOOP_SIMCORE_H_
#define CLUSTERCOOP_SIMCORE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "clustercoop/channel.h"
#include "clustercoop/geometry.h"
#include "clustercoop/random.h"

namespace clustercoop {

enum class Scenario { kClusterCenter, kTypical, kNoMcc };

std::string to_string(Scenario scenario);
Scenario parse_scenario(const std::string& text);

struct SimConfig {
  double density = 0.01;
  double cluster_size = 1.0;  // expected BSs per cluster
  double alpha = 4.0;
  double theta = 3.0;
  double omega = 1.0;
  ScatteringModel scattering;
  Scenario scenario = Scenario::kClusterCenter;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  double disk_radius = 0.0;  // 0 selects default_disk_radius(density)
  unsigned threads = 1;      // 0 selects the hardware concurrency

  void validate() const;
  double apothem() const;
  double effective_disk_radius() const;
};

struct NetworkRealization {
  PointSet interferers;
  // Index of each interferer in the background process.
  std::vector<std::size_t> interferer_ids;
  std::size_t background_size = 0;
  Point2 typical_bs;
  Point2 typical_mobile;
  double serving_distance = 0.0;  // 0 for the cluster-center mobile
  double edge_distance = 0.0;
  Hexagon cluster{{0.0, 0.0}, 1.0};
};

// A realization together with the gains of its interferers (aligned with
// realization.interferers).
struct TrialDraw {
  NetworkRealization realization;
  GainDraw gains;
};

TrialDraw sample_trial(const SimConfig& cfg, RandomStream& rng);
NetworkRealization sample_realization(const SimConfig& cfg, RandomStream& rng);
NetworkRealization sample_realization(const SimConfig& cfg, Scenario scenario,
                                      RandomStream& rng);

// I = sum over interferers of (omega L^alpha / W) G |Y - U|^-alpha.
double interference_power(const NetworkRealization& realization,
                          const GainDraw& gains, const SimConfig& cfg);

// Draws one trial and reports whether I > omega / theta.
bool run_outage_trial(const SimConfig& cfg, RandomStream& rng);

// Interference normalized by omega for one trial. Uses the same draws as
// sample_trial and the runtime-selected kernels; agrees with
// interference_power / omega to rounding.
double normalized_interference(const SimConfig& cfg, RandomStream& rng);

// normalized_interference for trials 0 .. cfg.trials-1.
std::vector<double> simulate_normalized_interference(const SimConfig& cfg);

inline bool is_outage(double normalized, double theta) {
  return normalized > 1.0 / theta;
}

struct OutageEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outage_count = 0;
  // -ln p_hat; NaN when no outage was observed.
  double ope_hat = std::numeric_limits<double>::quiet_NaN();

  bool ope_available() const { return outage_count > 0; }
};

OutageEstimate outage_from_counts(std::uint64_t outage_count,
                                  std::uint64_t trials);
OutageEstimate outage_from_samples(std::span<const double> normalized,
                                   double theta);
OutageEstimate estimate_outage(const SimConfig& cfg);

// n i.i.d. products P G for a single interferer, drawn in chunks through
// sample_gain_arrays.
std::vector<double> sample_pg_products(const SimConfig& cfg, std::uint64_t n,
                                       RandomStream& rng);

// Compound Poisson sum of Poisson(cluster_size) i.i.d. P G products.
double sample_zn(const SimConfig& cfg, RandomStream& rng);

struct RingBoundReport {
  std::uint64_t trials = 0;
  std::uint64_t upper_violations = 0;
  std::uint64_t lower_violations = 0;
  double max_upper_ratio = 0.0;  // max I / I_upper over trials with I > 0
  double min_lower_gap = 0.0;    // min (I - I_lower) / I over trials with I > 0
};

// Per-realization check of I_lower <= I <= I_upper for the cluster-center
// mobile, using ring weights for the upper bound and the (1 + epsilon)
// inflated hexagon for the lower bound. Trials use the streams of cfg.seed.
RingBoundReport check_ring_bounds(const SimConfig& cfg, std::uint64_t trials,
                                  double epsilon);

struct TailCurve {
  enum class Kind { kEmpirical, kAnalytic };
  std::vector<double> thresholds;
  std::vector<double> tail_probs;
  Kind kind = Kind::kEmpirical;
};

TailCurve empirical_tail(std::span<const double> samples,
                         std::span<const double> thresholds);

// Evaluates fn(i) for i in [0, count) on `threads` workers (0: hardware
// concurrency) and returns the results in index order.
std::vector<double> parallel_map(std::uint64_t count, unsigned threads,
                                 const std::function<double(std::uint64_t)>& fn);

unsigned resolve_threads(unsigned threads);

}  // namespace clustercoop

#endif  // CLUSTERCOOP_SIMCORE_H_
