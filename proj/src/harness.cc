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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "clustercoop/error.h"
#include "clustercoop/kernels.h"
#include "clustercoop/stats.h"

namespace clustercoop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw Error(ErrorCode::kInvalidConfig, "not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || text.front() == '-') {
    throw Error(ErrorCode::kInvalidConfig, "not an unsigned integer: '" + text + "'");
  }
  return v;
}

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::string pmf_to_string(const std::vector<std::pair<int, double>>& pmf) {
  std::string out;
  for (const auto& [n, p] : pmf) {
    if (!out.empty()) out += ";";
    out += std::to_string(n) + ":" + format_double(p);
  }
  return out;
}

std::string sweep_to_string(const std::vector<double>& sweep) {
  std::string out;
  for (double v : sweep) {
    if (!out.empty()) out += ";";
    out += format_double(v);
  }
  return out;
}

// Bound pair for one row; NaN where no theorem applies.
std::pair<double, double> bounds_for(double ell, Scenario scenario,
                                     ScatteringKind scattering,
                                     const ModelParams& params) {
  if (!std::isfinite(ell) || scenario == Scenario::kNoMcc) return {kNaN, kNaN};
  if (scenario == Scenario::kTypical) {
    if (ell < 1.0) return {kNaN, kNaN};
    const BoundPair b = ope_bounds_typical(ell, params.alpha);
    return {b.lower, b.upper};
  }
  if (scattering == ScatteringKind::kSparse) {
    const BoundPair b = ope_bounds_cc_sparse(ell, params);
    return {b.lower, b.upper};
  }
  if (ell < 1.0) return {kNaN, kNaN};
  const BoundPair b = ope_bounds_cc_rich(ell, params.alpha, params.nu);
  return {b.lower, b.upper};
}

std::map<std::string, std::string> table_metadata(const ExperimentSpec& spec,
                                                  const std::string& kind) {
  const SimConfig& b = spec.base;
  return {
      {"artifact", "clustercoop"},
      {"version", artifact_version()},
      {"table", kind},
      {"seed", std::to_string(b.seed)},
      {"trials", std::to_string(b.trials)},
      {"density", format_double(b.density)},
      {"alpha", format_double(b.alpha)},
      {"theta", format_double(b.theta)},
      {"omega", format_double(b.omega)},
      {"delta", format_double(b.scattering.delta)},
      {"delta_prime", format_double(b.scattering.delta_prime)},
      {"gamma", format_double(b.scattering.gamma)},
      {"diversity_pmf", pmf_to_string(b.scattering.diversity_pmf)},
      {"disk_radius", format_double(b.effective_disk_radius())},
      {"sweep", sweep_to_string(spec.sweep)},
      {"outage_cap_epsilon", format_double(spec.outage_cap_epsilon)},
      {"kernels", std::string(kernels::active_kernels().name)},
  };
}

// Rows (ell, scenario, scattering) of a sweep, baseline rows last.
struct RowKey {
  double ell;
  Scenario scenario;
  ScatteringKind scattering;
};

std::vector<RowKey> sweep_rows(const ExperimentSpec& spec) {
  std::vector<RowKey> keys;
  for (double ell : spec.sweep) {
    for (Scenario s : spec.scenarios) {
      if (s == Scenario::kNoMcc) continue;
      for (ScatteringKind k : spec.scatterings) keys.push_back({ell, s, k});
    }
  }
  const bool baseline =
      spec.include_baseline ||
      std::find(spec.scenarios.begin(), spec.scenarios.end(), Scenario::kNoMcc) !=
          spec.scenarios.end();
  if (baseline) {
    for (ScatteringKind k : spec.scatterings) {
      keys.push_back({kNaN, Scenario::kNoMcc, k});
    }
  }
  return keys;
}

const std::vector<double>& samples_for(const SimConfig& cfg, SampleCache* cache,
                                       std::vector<double>& local) {
  if (cache != nullptr) return cache->get(cfg);
  local = simulate_normalized_interference(cfg);
  return local;
}

}  // namespace

std::string artifact_version() { return CLUSTERCOOP_VERSION; }

bool operator==(const ResultRow& a, const ResultRow& b) {
  return same_double(a.ell, b.ell) && a.scenario == b.scenario &&
         a.scattering == b.scattering && same_double(a.p_hat, b.p_hat) &&
         same_double(a.ci_low, b.ci_low) && same_double(a.ci_high, b.ci_high) &&
         same_double(a.ope_hat, b.ope_hat) &&
         same_double(a.bound_lower, b.bound_lower) &&
         same_double(a.bound_upper, b.bound_upper) && a.trials == b.trials &&
         a.outage_count == b.outage_count && same_double(a.capacity, b.capacity) &&
         a.status == b.status;
}

void ExperimentSpec::validate() const {
  base.validate();
  require(!sweep.empty(), "sweep must be non-empty");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    require(sweep[i] > 0.0 && std::isfinite(sweep[i]),
            "sweep values must be positive");
    if (i > 0) require(sweep[i] > sweep[i - 1], "sweep must be increasing");
  }
  require(!scenarios.empty(), "at least one scenario is required");
  require(!scatterings.empty(), "at least one scattering model is required");
  require(outage_cap_epsilon > 0.0 && outage_cap_epsilon < 1.0,
          "outage_cap_epsilon must lie in (0, 1)");
  ScatteringModel rich = base.scattering;
  rich.kind = ScatteringKind::kRich;
  ScatteringModel sparse = base.scattering;
  sparse.kind = ScatteringKind::kSparse;
  for (ScatteringKind k : scatterings) {
    (k == ScatteringKind::kRich ? rich : sparse).validate();
  }
}

ModelParams model_params(const SimConfig& cfg) {
  ModelParams p;
  p.density = cfg.density;
  p.alpha = cfg.alpha;
  p.theta = cfg.theta;
  p.omega = cfg.omega;
  p.delta = cfg.scattering.delta;
  p.delta_prime = cfg.scattering.delta_prime;
  p.gamma = cfg.scattering.gamma;
  p.nu = cfg.scattering.min_diversity();
  p.pr_n_equals_nu = cfg.scattering.min_diversity_probability();
  return p;
}

SimConfig row_config(const SimConfig& base, double ell, Scenario scenario,
                     ScatteringKind scattering) {
  SimConfig c = base;
  if (std::isfinite(ell)) c.cluster_size = ell;
  c.scenario = scenario;
  c.scattering.kind = scattering;
  return c;
}

std::string sample_key(const SimConfig& cfg) {
  std::string key;
  key += format_double(cfg.density) + "|" + format_double(cfg.alpha) + "|" +
         format_double(cfg.omega) + "|" + to_string(cfg.scattering.kind) + "|" +
         to_string(cfg.scenario) + "|" + std::to_string(cfg.trials) + "|" +
         std::to_string(cfg.seed) + "|" + format_double(cfg.effective_disk_radius());
  if (cfg.scenario != Scenario::kNoMcc) key += "|" + format_double(cfg.cluster_size);
  if (cfg.scattering.kind == ScatteringKind::kSparse) {
    key += "|" + format_double(cfg.scattering.delta) + "|" +
           format_double(cfg.scattering.delta_prime) + "|" +
           format_double(cfg.scattering.gamma);
  } else {
    key += "|" + pmf_to_string(cfg.scattering.diversity_pmf);
  }
  return key;
}

const std::vector<double>& SampleCache::get(const SimConfig& cfg) {
  const std::string key = sample_key(cfg);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, simulate_normalized_interference(cfg)).first;
  }
  return it->second;
}

ResultTable run_fig3(const ExperimentSpec& spec, SampleCache* cache) {
  spec.validate();
  ResultTable table;
  table.metadata = table_metadata(spec, "fig3");
  const ModelParams params = model_params(spec.base);
  for (const RowKey& key : sweep_rows(spec)) {
    ResultRow row;
    row.ell = key.ell;
    row.scenario = key.scenario;
    row.scattering = key.scattering;
    row.capacity = kNaN;
    std::tie(row.bound_lower, row.bound_upper) =
        bounds_for(key.ell, key.scenario, key.scattering, params);
    try {
      const SimConfig cfg =
          row_config(spec.base, key.ell, key.scenario, key.scattering);
      std::vector<double> local;
      const OutageEstimate e =
          outage_from_samples(samples_for(cfg, cache, local), cfg.theta);
      row.p_hat = e.p_hat;
      row.ci_low = e.ci_low;
      row.ci_high = e.ci_high;
      row.ope_hat = e.ope_hat;
      row.trials = e.trials;
      row.outage_count = e.outage_count;
    } catch (const Error& err) {
      row.p_hat = row.ci_low = row.ci_high = row.ope_hat = kNaN;
      row.status = err.what();
      table.partial = true;
    }
    table.rows.push_back(row);
  }
  return table;
}

CalibratedCurve calibrate_overlay(const ResultTable& table, Scenario scenario,
                                  ScatteringKind scattering, BoundSide side) {
  std::vector<const ResultRow*> rows;
  for (const ResultRow& r : table.rows) {
    if (r.scenario == scenario && r.scattering == scattering &&
        std::isfinite(r.ell) && r.status == "ok") {
      rows.push_back(&r);
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow* a, const ResultRow* b) { return a->ell < b->ell; });
  auto phi = [side](const ResultRow& r) {
    return side == BoundSide::kLower ? r.bound_lower : r.bound_upper;
  };
  const ResultRow* anchor = nullptr;
  for (const ResultRow* r : rows) {
    if (r->p_hat > 0.0 && std::isfinite(phi(*r))) anchor = r;
  }
  if (anchor == nullptr) {
    throw Error(ErrorCode::kCalibrationUnavailable,
                "calibrate_overlay: no row with a positive outage estimate");
  }
  CalibratedCurve curve;
  curve.anchor_ell = anchor->ell;
  curve.b = anchor->p_hat * std::exp(phi(*anchor));
  for (const ResultRow* r : rows) {
    if (!std::isfinite(phi(*r))) continue;
    curve.ells.push_back(r->ell);
    curve.values.push_back(r == anchor ? anchor->p_hat
                                       : curve.b * std::exp(-phi(*r)));
  }
  return curve;
}

CapacityResult outage_capacity_from_samples(const std::vector<double>& normalized,
                                            double epsilon) {
  require(!normalized.empty(), "outage_capacity: no samples");
  require(epsilon > 0.0 && epsilon <= 1.0, "outage_capacity: epsilon must lie in (0, 1]");
  std::vector<double> sorted(normalized);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // p_hat(theta) = Pr(S > 1/theta), non-decreasing in theta.
  auto p_hat = [&](double theta) {
    const auto above =
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), 1.0 / theta);
    return static_cast<double>(above) / n;
  };
  CapacityResult r;
  if (p_hat(kThetaMin) > epsilon) {
    r.theta_star = 0.0;
    r.capacity = 0.0;
    r.theta_low = 0.0;
    r.theta_high = kThetaMin;
    return r;
  }
  if (p_hat(kThetaMax) <= epsilon) {
    r.theta_star = r.theta_low = r.theta_high = kThetaMax;
    r.capacity = std::log1p(kThetaMax);
    return r;
  }
  double lo = std::log(kThetaMin);  // feasible
  double hi = std::log(kThetaMax);  // infeasible
  for (int i = 0; i < kCapacityIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (p_hat(std::exp(mid)) <= epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.theta_low = std::exp(lo);
  r.theta_high = std::exp(hi);
  r.theta_star = r.theta_low;
  r.capacity = std::log1p(r.theta_star);
  r.converged = (hi - lo) < 1e-6;
  if (!r.converged) r.warning = "bisection budget exhausted; returning bracket";
  return r;
}

CapacityResult outage_capacity(const SimConfig& cfg, double ell, double epsilon,
                               SampleCache* cache) {
  SimConfig c = cfg;
  c.cluster_size = ell;
  c.validate();
  std::vector<double> local;
  return outage_capacity_from_samples(samples_for(c, cache, local), epsilon);
}

ResultTable run_fig4(const ExperimentSpec& spec, SampleCache* cache) {
  ResultTable table = run_fig3(spec, cache);
  table.metadata["table"] = "fig4";
  for (ResultRow& row : table.rows) {
    if (row.status != "ok") continue;
    try {
      const SimConfig cfg =
          row_config(spec.base, row.ell, row.scenario, row.scattering);
      std::vector<double> local;
      const CapacityResult c = outage_capacity_from_samples(
          samples_for(cfg, cache, local), spec.outage_cap_epsilon);
      row.capacity = c.capacity;
      if (!c.converged) row.status = c.warning;
    } catch (const Error& err) {
      row.capacity = kNaN;
      row.status = err.what();
      table.partial = true;
    }
  }
  return table;
}

ResultTable bound_table(const ExperimentSpec& spec) {
  spec.validate();
  ResultTable table;
  table.metadata = table_metadata(spec, "bounds");
  table.metadata["trials"] = "0";
  const ModelParams params = model_params(spec.base);
  for (double ell : spec.sweep) {
    for (Scenario s : {Scenario::kClusterCenter, Scenario::kTypical}) {
      for (ScatteringKind k : {ScatteringKind::kSparse, ScatteringKind::kRich}) {
        ResultRow row;
        row.ell = ell;
        row.scenario = s;
        row.scattering = k;
        row.p_hat = row.ci_low = row.ci_high = row.ope_hat = kNaN;
        std::tie(row.bound_lower, row.bound_upper) = bounds_for(ell, s, k, params);
        // Asymptotic throughput scaling for the cluster-center mobile.
        row.capacity = (s == Scenario::kClusterCenter && ell >= 1.0)
                           ? throughput_scaling(ell, params.alpha)
                           : kNaN;
        row.status = "analytic";
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Tail validation.

bool TailReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const TailCheck& c) { return c.passed; });
}

namespace {

// Independent stream per named check.
RandomStream check_stream(std::uint64_t seed, std::uint64_t tag) {
  return RandomStream(mix64(seed ^ mix64(tag * 0x2545f4914f6cdd1dULL + 1)));
}

TailCheck ks_check(const std::string& name, const stats::KsResult& ks) {
  constexpr double kLevel = 0.01;
  TailCheck c;
  c.name = name;
  c.statistic = ks.p_value;
  c.threshold = kLevel;
  c.passed = ks.passes(kLevel);
  char buf[96];
  std::snprintf(buf, sizeof buf, "D = %.5f, p = %.4f", ks.statistic, ks.p_value);
  c.detail = buf;
  return c;
}

// x with empirical tail fraction `level` among sorted samples.
double empirical_quantile_for_tail(const std::vector<double>& sorted, double level) {
  const auto n = static_cast<double>(sorted.size());
  const auto idx = static_cast<std::size_t>(std::floor((1.0 - level) * n));
  return sorted[std::min(idx, sorted.size() - 1)];
}

double tail_fraction(const std::vector<double>& sorted, double x) {
  const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(above) / static_cast<double>(sorted.size());
}

// Largest |empirical - analytic| in binomial standard errors over thresholds.
TailCheck tail_agreement(const std::string& name, const std::vector<double>& sorted,
                         const std::vector<double>& xs,
                         const std::function<double(double)>& analytic) {
  constexpr double kMaxZ = 4.0;
  const double n = static_cast<double>(sorted.size());
  double worst_z = 0.0;
  double worst_rel = 0.0;
  for (double x : xs) {
    const double q = analytic(x);
    const double emp = tail_fraction(sorted, x);
    const double se = std::sqrt(std::max(q * (1.0 - q), 1e-300) / n);
    worst_z = std::max(worst_z, std::fabs(emp - q) / se);
    worst_rel = std::max(worst_rel, std::fabs(emp / q - 1.0));
  }
  TailCheck c;
  c.name = name;
  c.statistic = worst_z;
  c.threshold = kMaxZ;
  c.passed = std::isfinite(worst_z) && worst_z <= kMaxZ;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |z| = %.3f, max relative error = %.4f over %zu thresholds",
                worst_z, worst_rel, xs.size());
  c.detail = buf;
  return c;
}

}  // namespace

TailReport validate_tails(const SimConfig& cfg_in, const TailOptions& opt) {
  cfg_in.validate();
  TailReport report;
  const std::uint64_t seed = cfg_in.seed;
  SimConfig sparse = cfg_in;
  sparse.scattering.kind = ScatteringKind::kSparse;
  SimConfig rich = cfg_in;
  rich.scattering.kind = ScatteringKind::kRich;
  rich.scattering.validate();
  ModelParams analytic = model_params(cfg_in);
  analytic.alpha += opt.analytic_alpha_offset;

  // Serving distance law.
  {
    RandomStream rng = check_stream(seed, 1);
    std::vector<double> d(opt.ks_samples);
    for (double& v : d) v = sample_serving_distance(cfg_in.density, rng);
    report.checks.push_back(ks_check(
        "serving-distance-law", stats::ks_one_sample(d, [&](double x) {
          return x <= 0.0 ? 0.0 : 1.0 - serving_distance_ccdf(x, cfg_in.density);
        })));
  }
  // Edge distance law.
  {
    RandomStream rng = check_stream(seed, 2);
    const Hexagon hex({0.0, 0.0}, cfg_in.apothem());
    std::vector<double> d(opt.ks_samples);
    for (double& v : d) v = edge_distance(hex, sample_uniform_in_hexagon(hex, rng));
    report.checks.push_back(ks_check(
        "edge-distance-law", stats::ks_one_sample(d, [&](double x) {
          return edge_distance_cdf(std::clamp(x, 0.0, hex.apothem()), hex.apothem());
        })));
  }
  // Zero-forcing oracle against the rich-scattering gain laws.
  {
    const int nu = rich.scattering.min_diversity();
    const int m = 3;
    RandomStream zf_rng = check_stream(seed, 3);
    RandomStream law_rng = check_stream(seed, 4);
    std::vector<double> zf_w(opt.ks_samples), zf_g(opt.ks_samples);
    for (std::uint64_t i = 0; i < opt.ks_samples; ++i) {
      const ZeroForcingDraw z = zf_gain_oracle(nu + m - 1, m, zf_rng);
      zf_w[i] = z.main_lobe;
      zf_g[i] = z.side_lobe_sample;
    }
    const ScatteringModel fixed = ScatteringModel::rich({{nu, 1.0}});
    std::vector<double> law_w(opt.ks_samples), law_g(opt.ks_samples);
    for (std::uint64_t i = 0; i < opt.ks_samples; ++i) {
      const GainDraw g = sample_rich_gains(fixed, 1, cfg_in.density, law_rng);
      law_w[i] = g.main_lobe;
      law_g[i] = g.side_lobes[0];
    }
    report.checks.push_back(
        ks_check("zf-main-lobe-law", stats::ks_two_sample(zf_w, law_w)));
    report.checks.push_back(
        ks_check("zf-side-lobe-law", stats::ks_two_sample(zf_g, law_g)));
  }
  // Sparse P G tail against quadrature, at empirical tail levels 10^-k/2.
  {
    RandomStream rng = check_stream(seed, 5);
    std::vector<double> pg = sample_pg_products(sparse, opt.pg_samples, rng);
    std::sort(pg.begin(), pg.end());
    std::vector<double> xs;
    for (int k = 1; k <= 8; ++k) {
      xs.push_back(empirical_quantile_for_tail(pg, std::pow(10.0, -0.5 * k)));
    }
    report.checks.push_back(tail_agreement(
        "sparse-pg-tail", pg, xs,
        [&](double x) { return tail_pg_sparse_quadrature(x, analytic); }));
  }
  // Rich P G tail against the exact mixture law.
  {
    RandomStream rng = check_stream(seed, 6);
    std::vector<double> pg = sample_pg_products(rich, opt.pg_samples, rng);
    std::sort(pg.begin(), pg.end());
    std::vector<double> xs;
    for (int k = 1; k <= 8; ++k) {
      xs.push_back(empirical_quantile_for_tail(pg, std::pow(10.0, -0.5 * k)));
    }
    const auto pmf = rich.scattering.diversity_pmf;
    report.checks.push_back(tail_agreement(
        "rich-pg-tail", pg, xs,
        [&](double x) { return tail_pg_rich_exact(x, analytic, pmf); }));
  }
  // Both tail asymptotes against their exact laws far out.
  {
    const double rate = sparse_tail_rate(analytic);
    const double x = std::pow(1e4 / rate, 0.5 * analytic.alpha);
    const double ratio = -log_tail_pg_sparse(x, analytic) /
                         (rate * std::pow(x, 2.0 / analytic.alpha));
    TailCheck c;
    c.name = "sparse-pg-rate";
    c.statistic = ratio;
    c.threshold = 0.1;
    c.passed = std::fabs(ratio - 1.0) <= 0.1;
    c.detail = "-ln tail / (rate x^(2/alpha)) at exponent 1e4: " + format_double(ratio);
    report.checks.push_back(c);
  }
  {
    ModelParams leading = analytic;
    const auto pmf = rich.scattering.diversity_pmf;
    // x where the leading term is 1e-9.
    const double x = std::pow(tail_pg_rich(1.0, leading) / 1e-9, 1.0 / leading.nu);
    const double ratio = tail_pg_rich_exact(x, leading, pmf) / tail_pg_rich(x, leading);
    TailCheck c;
    c.name = "rich-pg-asymptote";
    c.statistic = ratio;
    c.threshold = 0.05;
    c.passed = std::fabs(ratio - 1.0) <= 0.05;
    c.detail = "exact / leading term at tail 1e-9: " + format_double(ratio);
    report.checks.push_back(c);
  }
  // Compound Poisson sums.
  {
    SimConfig zc = sparse;
    zc.cluster_size = opt.zn_cluster_size;
    RandomStream rng = check_stream(seed, 7);
    std::vector<double> z(opt.zn_samples);
    for (double& v : z) v = sample_zn(zc, rng);
    // Wald: E[Z] = ell E[P G].
    RandomStream direct = check_stream(seed, 8);
    const std::vector<double> pg = sample_pg_products(zc, opt.pg_samples, direct);
    const double expected = zc.cluster_size * stats::mean(pg);
    const double se = std::sqrt(stats::variance(z) / static_cast<double>(z.size()));
    const double zscore = (stats::mean(z) - expected) / se;
    TailCheck wald;
    wald.name = "zn-mean";
    wald.statistic = std::fabs(zscore);
    wald.threshold = 3.0;
    wald.passed = std::fabs(zscore) <= 3.0;
    wald.detail = "mean " + format_double(stats::mean(z)) + " vs " +
                  format_double(expected) + " (z = " + format_double(zscore) + ")";
    report.checks.push_back(wald);

    std::sort(z.begin(), z.end());
    const double scale = std::pow(zc.cluster_size, 0.5 * analytic.alpha);
    double worst = 1.0;
    for (double level : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      const double x = empirical_quantile_for_tail(z, level) / scale;
      const double emp = -std::log(tail_fraction(z, x * scale));
      const ZnAsymptote a =
          zn_tail_asymptote(x, zc.cluster_size, analytic, TailScattering::kSparse);
      const double r = emp / a.value;
      if (std::fabs(std::log(r)) > std::fabs(std::log(worst))) worst = r;
    }
    TailCheck c;
    c.name = "zn-sparse-exponent";
    c.statistic = worst;
    c.threshold = 2.0;
    c.passed = worst >= 0.5 && worst <= 2.0;
    c.detail = "worst empirical / asymptotic exponent ratio: " + format_double(worst);
    report.checks.push_back(c);
  }
  {
    SimConfig zc = rich;
    zc.cluster_size = 16.0;
    RandomStream rng = check_stream(seed, 9);
    std::vector<double> z(opt.zn_samples);
    for (double& v : z) v = sample_zn(zc, rng);
    std::sort(z.begin(), z.end());
    const double scale = std::pow(zc.cluster_size, 0.5 * analytic.alpha);
    double worst = 1.0;
    for (double level : {1e-3, 3e-4, 1e-4}) {
      const double x = empirical_quantile_for_tail(z, level) / scale;
      const double emp = tail_fraction(z, x * scale);
      const ZnAsymptote a =
          zn_tail_asymptote(x, zc.cluster_size, analytic, TailScattering::kRich);
      const double r = emp / a.value;
      if (std::fabs(std::log(r)) > std::fabs(std::log(worst))) worst = r;
    }
    TailCheck c;
    c.name = "zn-rich-tail";
    c.statistic = worst;
    c.threshold = 2.0;
    c.passed = worst >= 0.5 && worst <= 2.0;
    c.detail = "worst empirical / asymptotic tail ratio at cluster size 16: " +
               format_double(worst);
    report.checks.push_back(c);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Persistence.

namespace {

constexpr const char* kCsvHeader =
    "ell,scenario,scattering,p_hat,ci_low,ci_high,ope_hat,bound_lower,"
    "bound_upper,trials,outage_count,capacity,status";

std::string sanitize_status(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void write_csv(const ResultTable& table, std::ostream& out) {
  nlohmann::json meta(table.metadata);
  meta["partial"] = table.partial ? "true" : "false";
  out << "# " << meta.dump() << "\n" << kCsvHeader << "\n";
  for (const ResultRow& r : table.rows) {
    out << format_double(r.ell) << ',' << to_string(r.scenario) << ','
        << to_string(r.scattering) << ',' << format_double(r.p_hat) << ','
        << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
        << format_double(r.ope_hat) << ',' << format_double(r.bound_lower) << ','
        << format_double(r.bound_upper) << ',' << r.trials << ','
        << r.outage_count << ',' << format_double(r.capacity) << ','
        << sanitize_status(r.status) << "\n";
  }
}

ResultTable read_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw Error(ErrorCode::kInvalidConfig, "read_csv: missing metadata line");
  }
  try {
    const nlohmann::json meta = nlohmann::json::parse(line.substr(2));
    for (const auto& [key, value] : meta.items()) {
      if (key == "partial") {
        table.partial = value.get<std::string>() == "true";
      } else {
        table.metadata[key] = value.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("read_csv: bad metadata: ") + e.what());
  }
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::kInvalidConfig, "read_csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 13) {
      throw Error(ErrorCode::kInvalidConfig, "read_csv: wrong field count");
    }
    ResultRow r;
    r.ell = parse_double(f[0]);
    r.scenario = parse_scenario(f[1]);
    r.scattering = parse_scattering(f[2]);
    r.p_hat = parse_double(f[3]);
    r.ci_low = parse_double(f[4]);
    r.ci_high = parse_double(f[5]);
    r.ope_hat = parse_double(f[6]);
    r.bound_lower = parse_double(f[7]);
    r.bound_upper = parse_double(f[8]);
    r.trials = parse_u64(f[9]);
    r.outage_count = parse_u64(f[10]);
    r.capacity = parse_double(f[11]);
    r.status = f[12];
    table.rows.push_back(r);
  }
  return table;
}

void write_json(const ResultTable& table, std::ostream& out) {
  nlohmann::json doc;
  doc["metadata"] = table.metadata;
  doc["partial"] = table.partial;
  doc["rows"] = nlohmann::json::array();
  for (const ResultRow& r : table.rows) {
    doc["rows"].push_back({
        {"ell", json_number(r.ell)},
        {"scenario", to_string(r.scenario)},
        {"scattering", to_string(r.scattering)},
        {"p_hat", json_number(r.p_hat)},
        {"ci_low", json_number(r.ci_low)},
        {"ci_high", json_number(r.ci_high)},
        {"ope_hat", json_number(r.ope_hat)},
        {"bound_lower", json_number(r.bound_lower)},
        {"bound_upper", json_number(r.bound_upper)},
        {"trials", r.trials},
        {"outage_count", r.outage_count},
        {"capacity", json_number(r.capacity)},
        {"status", r.status},
    });
  }
  out << doc.dump(2) << "\n";
}

}  // namespace clustercoop
