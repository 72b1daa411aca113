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

// Closed-form laws, tail asymptotes and OPE bound curves.
//
// Every log is natural. Functions named *_asymptote or documented as
// asymptotic describe a limit, not a finite-x law; callers compare them to
// simulation with one-sided or loose tolerances.

#ifndef CLUSTERCOOP_ANALYTICS_H_
#define CLUSTERCOOP_ANALYTICS_H_

#include <span>
#include <string>
#include <utility>

namespace clustercoop {

struct ModelParams {
  double density = 0.01;
  double alpha = 4.0;
  double theta = 3.0;
  double omega = 1.0;
  double delta = 6.0;
  double delta_prime = 10.0;
  double gamma = 1.0;
  int nu = 3;
  double pr_n_equals_nu = 1.0;

  void validate() const;
};

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  std::string regime;
};

double serving_distance_ccdf(double x, double density);
double edge_distance_cdf(double x, double apothem);

double c1(const ModelParams& p);
double c2(const ModelParams& p);

// Cluster-center mobile, sparse scattering.
BoundPair ope_bounds_cc_sparse(double ell, const ModelParams& p);
// Typical mobile; identical for sparse and rich scattering.
BoundPair ope_bounds_typical(double ell, double alpha);
// Cluster-center mobile, rich scattering.
BoundPair ope_bounds_cc_rich(double ell, double alpha, int nu);

// Pr(P G > x) under sparse uniform gains, by quadrature over the density of
// W / G. Throws Error(kNumericalFailure) if the quadrature misses tolerance.
double tail_pg_sparse_quadrature(double x, const ModelParams& p);
// ln Pr(P G > x), accurate where the tail itself underflows.
double log_tail_pg_sparse(double x, const ModelParams& p);

// Rate r of the Weibull-like sparse tail: -ln Pr(P G > x) ~ r x^(2/alpha).
double sparse_tail_rate(const ModelParams& p);

// Leading-order (large x) rich-scattering tail of P G; pure power law with
// exponent -nu.
double tail_pg_rich(double x, const ModelParams& p);

// Exact rich-scattering tail of P G for a diversity pmf of (n, probability)
// pairs, by quadrature over the squared serving distance.
double tail_pg_rich_exact(double x, const ModelParams& p,
                          std::span<const std::pair<int, double>> pmf);

enum class TailScattering { kSparse, kRich };

struct ZnAsymptote {
  // Sparse: the exponent -ln Pr(Z_n > ell^(alpha/2) x). Rich: the tail
  // probability Pr(Z_n > ell^(alpha/2) x) itself.
  double value = 0.0;
  bool is_exponent = true;
  bool is_lower_bound = false;  // sparse with alpha <= 4
  std::string regime;
};

ZnAsymptote zn_tail_asymptote(double x, double ell, const ModelParams& p,
                              TailScattering scattering);

// Asymptotic cluster-center throughput ln(1 + theta) in nats.
double throughput_scaling(double ell, double alpha);

}  // namespace clustercoop

#endif  // CLUSTERCOOP_ANALYTICS_H_
