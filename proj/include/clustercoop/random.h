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

#ifndef CLUSTERCOOP_RANDOM_H_
#define CLUSTERCOOP_RANDOM_H_

#include <cstdint>
#include <random>

namespace clustercoop {

// Mixes a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

// A random stream is an mt19937_64 engine plus the handful of variate
// transforms the simulator needs. Streams are cheap to create; the simulator
// derives one per (seed, trial-index) pair so results never depend on the
// order trials are executed in.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Substream for one trial of a run seeded with `seed`.
  static RandomStream for_trial(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL)));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }
  // Exponential with unit mean.
  double exponential() noexcept;
  double normal() { return normal_(engine_); }
  std::int64_t poisson(double mean);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace clustercoop

#endif  // CLUSTERCOOP_RANDOM_H_
