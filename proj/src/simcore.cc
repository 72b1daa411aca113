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

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "clustercoop/error.h"
#include "clustercoop/kernels.h"
#include "clustercoop/stats.h"

namespace clustercoop {

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kClusterCenter: return "cluster-center";
    case Scenario::kTypical: return "typical";
    case Scenario::kNoMcc: return "no-mcc";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& text) {
  if (text == "cluster-center") return Scenario::kClusterCenter;
  if (text == "typical") return Scenario::kTypical;
  if (text == "no-mcc") return Scenario::kNoMcc;
  throw_invalid("unknown scenario '" + text + "'");
}

void SimConfig::validate() const {
  require(density > 0.0 && std::isfinite(density), "density must be positive");
  require(cluster_size > 0.0 && std::isfinite(cluster_size),
          "cluster size must be positive");
  require(alpha > 2.0 && std::isfinite(alpha), "alpha must exceed 2");
  require(theta > 0.0 && std::isfinite(theta), "theta must be positive");
  require(omega > 0.0 && std::isfinite(omega), "omega must be positive");
  require(trials >= 1, "trials must be at least 1");
  require(disk_radius >= 0.0 && std::isfinite(disk_radius),
          "disk radius must be non-negative (0 selects the default)");
  scattering.validate();
}

double SimConfig::apothem() const {
  return apothem_for_cluster_size(density, cluster_size);
}

double SimConfig::effective_disk_radius() const {
  return disk_radius > 0.0 ? disk_radius : default_disk_radius(density);
}

namespace {

struct TypicalPlacement {
  Point2 bs;
  Point2 mobile;
  double serving_distance = 0.0;
};

// Step 3 of the trial: shared by both trial paths so they draw identically.
TypicalPlacement place_typical_mobile(const Hexagon& cluster, double density,
                                      RandomStream& rng) {
  TypicalPlacement t;
  t.bs = sample_uniform_in_hexagon(cluster, rng);
  t.serving_distance =
      std::sqrt(sample_serving_distance_squared(density, rng));
  const double phi = 2.0 * kPi * rng.uniform();
  t.mobile = t.bs + Point2{t.serving_distance * std::cos(phi),
                           t.serving_distance * std::sin(phi)};
  return t;
}

bool keeps_interferer(Scenario scenario, const Hexagon& cluster,
                      const TypicalPlacement& t, Point2 y) {
  const double l2 = t.serving_distance * t.serving_distance;
  switch (scenario) {
    case Scenario::kClusterCenter:
      return !cluster.contains(y);
    case Scenario::kTypical:
      return !cluster.contains(y) && norm2(y - t.mobile) > l2;
    case Scenario::kNoMcc:
      return norm2(y - t.mobile) > l2;
  }
  return false;
}

}  // namespace

TrialDraw sample_trial(const SimConfig& cfg, RandomStream& rng) {
  const Hexagon cluster({0.0, 0.0}, cfg.apothem());
  const PointSet background =
      sample_ppp(cfg.density, cfg.effective_disk_radius(), rng);
  const GainDraw all_gains =
      sample_gains(cfg.scattering, background.size(), cfg.density, rng);

  TypicalPlacement t;
  if (cfg.scenario != Scenario::kClusterCenter) {
    t = place_typical_mobile(cluster, cfg.density, rng);
  }

  TrialDraw draw;
  NetworkRealization& r = draw.realization;
  r.cluster = cluster;
  r.background_size = background.size();
  r.typical_bs = t.bs;
  r.typical_mobile = t.mobile;
  r.serving_distance = t.serving_distance;
  r.edge_distance = edge_distance(cluster, t.bs);
  r.interferers.generating_density = background.generating_density;
  r.interferers.region_radius = background.region_radius;
  for (std::size_t i = 0; i < background.size(); ++i) {
    const Point2 y = background.point(i);
    if (keeps_interferer(cfg.scenario, cluster, t, y)) {
      r.interferers.push_back(y);
      r.interferer_ids.push_back(i);
    }
  }
  draw.gains = all_gains.select(r.interferer_ids);
  return draw;
}

NetworkRealization sample_realization(const SimConfig& cfg, RandomStream& rng) {
  return sample_trial(cfg, rng).realization;
}

NetworkRealization sample_realization(const SimConfig& cfg, Scenario scenario,
                                      RandomStream& rng) {
  SimConfig c = cfg;
  c.scenario = scenario;
  return sample_realization(c, rng);
}

double interference_power(const NetworkRealization& realization,
                          const GainDraw& gains, const SimConfig& cfg) {
  const std::size_t n = realization.interferers.size();
  require(gains.size() == n &&
              gains.interferer_main_lobes.size() == n &&
              gains.interferer_serving_distances.size() == n,
          "interference_power: gain lists do not match the interferer count");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance(realization.interferers.point(i),
                              realization.typical_mobile);
    if (d == 0.0) {
      throw Error(ErrorCode::kSingularity,
                  "interference_power: interferer coincides with the mobile");
    }
    const double p =
        channel_inversion_power(cfg.omega, gains.interferer_serving_distances[i],
                                gains.interferer_main_lobes[i], cfg.alpha);
    total += p * gains.side_lobes[i] * std::pow(d, -cfg.alpha);
  }
  return total;
}

bool run_outage_trial(const SimConfig& cfg, RandomStream& rng) {
  const TrialDraw draw = sample_trial(cfg, rng);
  const double i = interference_power(draw.realization, draw.gains, cfg);
  return i > cfg.omega / cfg.theta;
}

namespace {

struct Workspace {
  PointSet background;
  std::vector<double> l2, w, g, marks, gauge;
  std::vector<double> kept_x, kept_y, kept_marks;
};

}  // namespace

double normalized_interference(const SimConfig& cfg, RandomStream& rng) {
  thread_local Workspace ws;
  const kernels::KernelTable& k = kernels::active_kernels();
  const kernels::HalfExponent h = kernels::HalfExponent::from_alpha(cfg.alpha);
  const Hexagon cluster({0.0, 0.0}, cfg.apothem());

  sample_ppp_into(cfg.density, cfg.effective_disk_radius(), rng, ws.background);
  const std::size_t n = ws.background.size();
  ws.l2.resize(n);
  ws.w.resize(n);
  ws.g.resize(n);
  ws.marks.resize(n);
  ws.gauge.resize(n);
  sample_gain_arrays(cfg.scattering, cfg.density, rng, ws.l2, ws.w, ws.g);

  TypicalPlacement t;
  if (cfg.scenario != Scenario::kClusterCenter) {
    t = place_typical_mobile(cluster, cfg.density, rng);
  }

  k.marks(ws.l2, ws.g, ws.w, h, ws.marks);
  k.hex_norms(ws.background.xs, ws.background.ys, 0.0, 0.0, ws.gauge);

  ws.kept_x.clear();
  ws.kept_y.clear();
  ws.kept_marks.clear();
  const double apothem = cluster.apothem();
  const double l2 = t.serving_distance * t.serving_distance;
  const bool use_hex = cfg.scenario != Scenario::kNoMcc;
  const bool use_disk = cfg.scenario != Scenario::kClusterCenter;
  for (std::size_t i = 0; i < n; ++i) {
    if (use_hex && !(ws.gauge[i] > apothem)) continue;
    if (use_disk) {
      const double dx = ws.background.xs[i] - t.mobile.x;
      const double dy = ws.background.ys[i] - t.mobile.y;
      if (!(dx * dx + dy * dy > l2)) continue;
    }
    ws.kept_x.push_back(ws.background.xs[i]);
    ws.kept_y.push_back(ws.background.ys[i]);
    ws.kept_marks.push_back(ws.marks[i]);
  }
  return k.power_law_sum(ws.kept_x, ws.kept_y, ws.kept_marks, t.mobile.x,
                         t.mobile.y, h);
}

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<double> parallel_map(
    std::uint64_t count, unsigned threads,
    const std::function<double(std::uint64_t)>& fn) {
  std::vector<double> out(count);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(count, begin + chunk);
      try {
        for (std::uint64_t i = begin; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> simulate_normalized_interference(const SimConfig& cfg) {
  cfg.validate();
  return parallel_map(cfg.trials, cfg.threads, [&cfg](std::uint64_t i) {
    RandomStream rng = RandomStream::for_trial(cfg.seed, i);
    return normalized_interference(cfg, rng);
  });
}

OutageEstimate outage_from_counts(std::uint64_t outage_count,
                                  std::uint64_t trials) {
  require(trials >= 1, "outage estimate needs at least one trial");
  require(outage_count <= trials, "outage count exceeds trial count");
  OutageEstimate e;
  e.trials = trials;
  e.outage_count = outage_count;
  e.p_hat = static_cast<double>(outage_count) / static_cast<double>(trials);
  if (outage_count == 0) {
    // Rule of three: one-sided 95% upper bound.
    e.ci_low = 0.0;
    e.ci_high = std::min(1.0, 3.0 / static_cast<double>(trials));
    return e;
  }
  const stats::Interval ci = stats::wilson_interval(outage_count, trials);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.ope_hat = -std::log(e.p_hat);
  return e;
}

OutageEstimate outage_from_samples(std::span<const double> normalized,
                                   double theta) {
  require(theta > 0.0, "theta must be positive");
  std::uint64_t count = 0;
  for (double s : normalized) count += is_outage(s, theta) ? 1 : 0;
  return outage_from_counts(count, normalized.size());
}

OutageEstimate estimate_outage(const SimConfig& cfg) {
  const std::vector<double> s = simulate_normalized_interference(cfg);
  return outage_from_samples(s, cfg.theta);
}

std::vector<double> sample_pg_products(const SimConfig& cfg, std::uint64_t n,
                                       RandomStream& rng) {
  cfg.validate();
  constexpr std::uint64_t kChunk = 1 << 16;
  const kernels::KernelTable& k = kernels::active_kernels();
  const kernels::HalfExponent h = kernels::HalfExponent::from_alpha(cfg.alpha);
  std::vector<double> out(n);
  std::vector<double> l2(kChunk), w(kChunk), g(kChunk);
  for (std::uint64_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t m = static_cast<std::size_t>(std::min(kChunk, n - begin));
    const std::span<double> l2s(l2.data(), m), ws(w.data(), m), gs(g.data(), m);
    sample_gain_arrays(cfg.scattering, cfg.density, rng, l2s, ws, gs);
    const std::span<double> dst(out.data() + begin, m);
    k.marks(l2s, gs, ws, h, dst);
    for (double& v : dst) v *= cfg.omega;
  }
  return out;
}

double sample_zn(const SimConfig& cfg, RandomStream& rng) {
  const auto k = static_cast<std::size_t>(rng.poisson(cfg.cluster_size));
  const GainDraw gains = sample_gains(cfg.scattering, k, cfg.density, rng);
  double z = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    z += channel_inversion_power(cfg.omega, gains.interferer_serving_distances[i],
                                 gains.interferer_main_lobes[i], cfg.alpha) *
         gains.side_lobes[i];
  }
  return z;
}

RingBoundReport check_ring_bounds(const SimConfig& cfg, std::uint64_t trials,
                                  double epsilon) {
  cfg.validate();
  require(cfg.scenario == Scenario::kClusterCenter,
          "check_ring_bounds: needs the cluster-center scenario");
  require(epsilon > 0.0, "check_ring_bounds: epsilon must be positive");
  const double apothem = cfg.apothem();
  const double circumradius = 2.0 * apothem / kSqrt3;
  const double inner_limit = std::sqrt(1.0 + epsilon) * apothem;
  const double lower_weight =
      std::pow((1.0 + epsilon) * circumradius, -cfg.alpha);
  // Guards the floating-point comparison only; the inequalities are exact.
  constexpr double kSlack = 1e-12;

  RingBoundReport report;
  report.trials = trials;
  report.max_upper_ratio = 0.0;
  report.min_lower_gap = 1.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::for_trial(cfg.seed, t);
    const TrialDraw draw = sample_trial(cfg, rng);
    const NetworkRealization& r = draw.realization;
    double exact = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    for (std::size_t i = 0; i < r.interferers.size(); ++i) {
      const Point2 y = r.interferers.point(i);
      const double v =
          channel_inversion_power(cfg.omega,
                                  draw.gains.interferer_serving_distances[i],
                                  draw.gains.interferer_main_lobes[i],
                                  cfg.alpha) *
          draw.gains.side_lobes[i];
      exact += v * std::pow(distance(y, r.typical_mobile), -cfg.alpha);
      const double gauge = hex_gauge(y - r.cluster.center());
      const int ring = hex_ring_index(gauge, apothem);
      upper += v * std::pow(std::sqrt(static_cast<double>(ring)) * apothem,
                            -cfg.alpha);
      if (gauge <= inner_limit) lower += v * lower_weight;
    }
    if (exact > upper * (1.0 + kSlack)) ++report.upper_violations;
    if (lower > exact * (1.0 + kSlack)) ++report.lower_violations;
    if (exact > 0.0) {
      report.max_upper_ratio = std::max(report.max_upper_ratio, exact / upper);
      report.min_lower_gap =
          std::min(report.min_lower_gap, (exact - lower) / exact);
    }
  }
  return report;
}

TailCurve empirical_tail(std::span<const double> samples,
                         std::span<const double> thresholds) {
  require(!samples.empty(), "empirical_tail: samples must be non-empty");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    require(thresholds[i] > thresholds[i - 1],
            "empirical_tail: thresholds must be strictly increasing");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  TailCurve curve;
  curve.kind = TailCurve::Kind::kEmpirical;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  curve.tail_probs.reserve(thresholds.size());
  const double n = static_cast<double>(sorted.size());
  for (double x : thresholds) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    curve.tail_probs.push_back(static_cast<double>(above) / n);
  }
  return curve;
}

}  // namespace clustercoop
