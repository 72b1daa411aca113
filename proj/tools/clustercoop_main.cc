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

// clustercoop: command-line driver for outage sweeps, capacity curves, tail
// validation and analytic bound tables.
//
// Exit status: 0 success, 1 invalid configuration or arguments, 2 numerical
// failure, 3 a tail-validation check failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "clustercoop/error.h"
#include "clustercoop/harness.h"
#include "clustercoop/kernels.h"

namespace cc = clustercoop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  std::string out;
  std::string format = "csv";
  std::string kernels = "auto";
  std::string gnuplot;
};

struct SimulateOptions {
  std::optional<double> ell;
  std::optional<std::string> scenario;
  std::optional<std::string> scattering;
  std::optional<double> theta;
  std::optional<double> alpha;
};

struct TailsOptions {
  cc::TailOptions tails;
};

int exit_code_for(cc::ErrorCode code) {
  switch (code) {
    case cc::ErrorCode::kInvalidConfig:
    case cc::ErrorCode::kInvalidParameter:
      return kExitConfig;
    case cc::ErrorCode::kSingularity:
    case cc::ErrorCode::kNumericalFailure:
    case cc::ErrorCode::kCalibrationUnavailable:
      return kExitNumerical;
  }
  return kExitNumerical;
}

cc::ExperimentSpec build_spec(const CommonOptions& o) {
  cc::ExperimentSpec spec =
      o.config_path.empty() ? cc::ExperimentSpec{} : cc::load_config(o.config_path);
  if (o.seed) spec.base.seed = *o.seed;
  if (o.trials) spec.base.trials = *o.trials;
  if (o.threads) spec.base.threads = *o.threads;
  if (!o.out.empty()) spec.output_path = o.out;
  if (!cc::kernels::select_kernels(o.kernels)) {
    throw cc::Error(cc::ErrorCode::kInvalidConfig,
                    "kernels '" + o.kernels + "' unavailable on this machine");
  }
  spec.validate();
  return spec;
}

// Writes to spec.output_path, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw cc::Error(cc::ErrorCode::kInvalidConfig, "cannot write '" + path + "'");
  write(out);
  if (!out) throw cc::Error(cc::ErrorCode::kInvalidConfig, "write to '" + path + "' failed");
}

void emit_table(const cc::ResultTable& table, const cc::ExperimentSpec& spec,
                const CommonOptions& o) {
  emit(spec.output_path, [&](std::ostream& out) {
    if (o.format == "json") {
      cc::write_json(table, out);
    } else {
      cc::write_csv(table, out);
    }
  });
  if (o.gnuplot.empty()) return;
  // One whitespace-separated block per (scenario, scattering), blank-line
  // separated, for gnuplot's "index".
  emit(o.gnuplot, [&](std::ostream& out) {
    out << "# ell p_hat ci_low ci_high ope_hat bound_lower bound_upper capacity\n";
    std::string current;
    for (const cc::ResultRow& r : table.rows) {
      const std::string block = cc::to_string(r.scenario) + "/" + cc::to_string(r.scattering);
      if (block != current) {
        if (!current.empty()) out << "\n\n";
        out << "# " << block << "\n";
        current = block;
      }
      char line[256];
      std::snprintf(line, sizeof line, "%.10g %.10g %.10g %.10g %.10g %.10g %.10g %.10g\n",
                    r.ell, r.p_hat, r.ci_low, r.ci_high, r.ope_hat, r.bound_lower,
                    r.bound_upper, r.capacity);
      out << line;
    }
  });
}

int run_simulate(const CommonOptions& o, const SimulateOptions& s) {
  cc::ExperimentSpec spec = build_spec(o);
  cc::SimConfig cfg = spec.base;
  if (s.ell) cfg.cluster_size = *s.ell;
  if (s.scenario) cfg.scenario = cc::parse_scenario(*s.scenario);
  if (s.scattering) cfg.scattering.kind = cc::parse_scattering(*s.scattering);
  if (s.theta) cfg.theta = *s.theta;
  if (s.alpha) cfg.alpha = *s.alpha;
  cfg.validate();
  spec.base = cfg;

  const cc::OutageEstimate e = cc::estimate_outage(cfg);
  cc::ResultTable table = cc::bound_table(
      [&] {
        cc::ExperimentSpec one = spec;
        one.sweep = {cfg.cluster_size};
        return one;
      }());
  cc::ResultRow row;
  for (const cc::ResultRow& r : table.rows) {
    if (r.scenario == cfg.scenario && r.scattering == cfg.scattering.kind) row = r;
  }
  row.ell = cfg.scenario == cc::Scenario::kNoMcc ? std::nan("") : cfg.cluster_size;
  row.scenario = cfg.scenario;
  row.scattering = cfg.scattering.kind;
  if (cfg.scenario == cc::Scenario::kNoMcc) row.bound_lower = row.bound_upper = std::nan("");
  row.p_hat = e.p_hat;
  row.ci_low = e.ci_low;
  row.ci_high = e.ci_high;
  row.ope_hat = e.ope_hat;
  row.trials = e.trials;
  row.outage_count = e.outage_count;
  row.capacity = std::nan("");
  row.status = "ok";
  table.rows = {row};
  table.metadata["table"] = "simulate";
  table.metadata["trials"] = std::to_string(cfg.trials);
  emit_table(table, spec, o);
  return kExitOk;
}

int run_table(const CommonOptions& o, const std::string& which) {
  const cc::ExperimentSpec spec = build_spec(o);
  cc::SampleCache cache;
  cc::ResultTable table;
  if (which == "fig3") {
    table = cc::run_fig3(spec, &cache);
  } else if (which == "fig4") {
    table = cc::run_fig4(spec, &cache);
  } else {
    table = cc::bound_table(spec);
  }
  emit_table(table, spec, o);
  return table.partial ? kExitNumerical : kExitOk;
}

int run_tails(const CommonOptions& o, const TailsOptions& t) {
  const cc::ExperimentSpec spec = build_spec(o);
  const cc::TailReport report = cc::validate_tails(spec.base, t.tails);
  emit(spec.output_path, [&](std::ostream& out) {
    if (o.format == "json") {
      nlohmann::json doc = nlohmann::json::array();
      for (const cc::TailCheck& c : report.checks) {
        doc.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"statistic", std::isfinite(c.statistic) ? nlohmann::json(c.statistic)
                                                                : nlohmann::json(nullptr)},
                       {"threshold", c.threshold},
                       {"detail", c.detail}});
      }
      out << nlohmann::json{{"seed", spec.base.seed}, {"checks", doc}}.dump(2) << "\n";
      return;
    }
    nlohmann::json meta{{"artifact", "clustercoop"},
                        {"version", cc::artifact_version()},
                        {"table", "tails"},
                        {"seed", std::to_string(spec.base.seed)}};
    out << "# " << meta.dump() << "\n" << "check,passed,statistic,threshold,detail\n";
    for (const cc::TailCheck& c : report.checks) {
      std::string detail = c.detail;
      for (char& ch : detail) {
        if (ch == ',') ch = ';';
      }
      char nums[96];
      std::snprintf(nums, sizeof nums, "%.17g,%.17g", c.statistic, c.threshold);
      out << c.name << ',' << (c.passed ? "PASS" : "FAIL") << ',' << nums << ','
          << detail << "\n";
    }
  });
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per configuration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--kernels", o.kernels, "numeric kernels")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-cooperative downlink outage simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cc::artifact_version());

  CommonOptions common;
  SimulateOptions sim;
  TailsOptions tails;

  CLI::App* simulate = app.add_subcommand("simulate", "one outage estimate");
  add_common(simulate, common);
  simulate->add_option("--ell", sim.ell, "expected cluster size")->check(CLI::PositiveNumber);
  simulate->add_option("--scenario", sim.scenario, "cluster-center | typical | no-mcc");
  simulate->add_option("--scattering", sim.scattering, "sparse | rich");
  simulate->add_option("--theta", sim.theta, "SIR threshold")->check(CLI::PositiveNumber);
  simulate->add_option("--alpha", sim.alpha, "path-loss exponent");

  CLI::App* fig3 = app.add_subcommand("fig3", "outage probability versus cluster size");
  add_common(fig3, common);
  fig3->add_option("--gnuplot", common.gnuplot, "also write gnuplot data here");

  CLI::App* fig4 = app.add_subcommand("fig4", "outage capacity versus cluster size");
  add_common(fig4, common);
  fig4->add_option("--gnuplot", common.gnuplot, "also write gnuplot data here");

  CLI::App* bounds = app.add_subcommand("bounds", "analytic bound curves over the sweep");
  add_common(bounds, common);
  bounds->add_option("--gnuplot", common.gnuplot, "also write gnuplot data here");

  CLI::App* tail = app.add_subcommand("tails", "empirical versus analytic tail checks");
  add_common(tail, common);
  tail->add_option("--ks-samples", tails.tails.ks_samples, "draws per distance and gain law");
  tail->add_option("--pg-samples", tails.tails.pg_samples, "draws per P G tail check");
  tail->add_option("--zn-samples", tails.tails.zn_samples, "draws per compound sum check");
  tail->add_option("--perturb-alpha", tails.tails.analytic_alpha_offset,
                   "offset added to alpha on the analytic side only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(common, sim);
    if (fig3->parsed()) return run_table(common, "fig3");
    if (fig4->parsed()) return run_table(common, "fig4");
    if (bounds->parsed()) return run_table(common, "bounds");
    if (tail->parsed()) return run_tails(common, tails);
  } catch (const cc::Error& e) {
    std::cerr << "clustercoop: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "clustercoop: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
