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

// Beamforming-gain models and channel-inversion power control.
//
// Sparse scattering: main lobe W ~ Uniform[delta, delta'], side lobe
// G ~ Uniform[0, gamma]. Rich scattering: W | N=n ~ Gamma(n, 1) (the sum of n
// unit-mean exponentials, i.e. |f^H h|^2 for n residual complex-Gaussian
// degrees of freedom) and G ~ Exponential(1). zf_gain_oracle builds the
// zero-forcing beamformer explicitly so the rich-scattering laws can be
// checked rather than assumed.

#ifndef CLUSTERCOOP_CHANNEL_H_
#define CLUSTERCOOP_CHANNEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clustercoop/random.h"

namespace clustercoop {

enum class ScatteringKind { kSparse, kRich };

std::string to_string(ScatteringKind kind);
ScatteringKind parse_scattering(const std::string& text);

struct ScatteringModel {
  ScatteringKind kind = ScatteringKind::kSparse;
  // Sparse parameters.
  double delta = 6.0;
  double delta_prime = 10.0;
  double gamma = 1.0;
  // Rich parameters: pmf over diversity orders, pairs (n, probability).
  std::vector<std::pair<int, double>> diversity_pmf{{3, 1.0}};

  static ScatteringModel sparse(double delta, double delta_prime, double gamma);
  static ScatteringModel rich(std::vector<std::pair<int, double>> pmf);

  // Throws Error(kInvalidParameter) when an invariant is broken.
  void validate() const;

  // Minimum diversity order (nu) and its probability.
  int min_diversity() const;
  double min_diversity_probability() const;
};

struct GainDraw {
  double main_lobe = 1.0;                         // W of the serving BS
  std::vector<double> side_lobes;                 // G per interferer
  std::vector<double> interferer_main_lobes;      // W per interferer
  std::vector<double> interferer_serving_distances;  // L per interferer

  std::size_t size() const { return side_lobes.size(); }
  // Keeps entries at `ids`, in that order.
  GainDraw select(std::span<const std::size_t> ids) const;
};

// Distance from a BS to the mobile it serves; CCDF exp(-pi density x^2).
double sample_serving_distance(double density, RandomStream& rng);

// Squared serving distance, exponential with mean 1 / (pi density).
double sample_serving_distance_squared(double density, RandomStream& rng);

GainDraw sample_sparse_gains(const ScatteringModel& model,
                             std::size_t n_interferers, double density,
                             RandomStream& rng);
GainDraw sample_rich_gains(const ScatteringModel& model,
                           std::size_t n_interferers, double density,
                           RandomStream& rng);
// Dispatches on model.kind.
GainDraw sample_gains(const ScatteringModel& model, std::size_t n_interferers,
                      double density, RandomStream& rng);

// Flat-array form of sample_gains used by the simulator's hot loop. Draws in
// the same order as sample_gains: the serving main lobe, then per interferer
// (squared serving distance, main lobe, side lobe). The spans must have equal
// length. Returns the serving BS main lobe.
double sample_gain_arrays(const ScatteringModel& model, double density,
                          RandomStream& rng, std::span<double> serving_l2,
                          std::span<double> main_lobes,
                          std::span<double> side_lobes);

// Draws N from the pmf.
int sample_diversity(const ScatteringModel& model, RandomStream& rng);

struct ZeroForcingDraw {
  double main_lobe = 0.0;
  double side_lobe_sample = 0.0;
};

// Zero-forcing beamformer on i.i.d. CN(0, 1) channels: Q antennas, M BSs in
// the cluster (M - 1 nulls).
ZeroForcingDraw zf_gain_oracle(int q_antennas, int m_cluster,
                               RandomStream& rng);

// P = omega L^alpha / W.
double channel_inversion_power(double omega, double serving_distance,
                               double main_lobe, double alpha);

}  // namespace clustercoop

#endif  // CLUSTERCOOP_CHANNEL_H_
