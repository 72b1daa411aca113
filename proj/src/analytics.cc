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

#include "clustercoop/analytics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "clustercoop/error.h"

namespace clustercoop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kQuadTolerance = 1e-10;
// Bisection depth cap; the adaptive rule halves its absolute target at every
// level, so deeper levels chase rounding noise.
constexpr unsigned kQuadMaxDepth = 3;
// A panel is accepted when its error estimate is within this multiple of the
// requested tolerance; Kronrod estimates are pessimistic.
constexpr double kQuadAcceptance = 1e4;

struct Quadrature {
  double value = 0.0;
  double error = 0.0;

  Quadrature& operator+=(const Quadrature& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

template <class F>
Quadrature integrate(F f, double a, double b) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  Quadrature q;
  q.value = Rule::integrate(f, a, b, kQuadMaxDepth, kQuadTolerance, &q.error);
  return q;
}

// Throws unless the accumulated error estimate is within tolerance of the
// accumulated value.
double accept(const Quadrature& q) {
  if (!std::isfinite(q.value) ||
      q.error > kQuadAcceptance * kQuadTolerance * std::fabs(q.value) + 1e-300) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "quadrature did not converge: error %.3g for value %.3g",
                  q.error, q.value);
    throw Error(ErrorCode::kNumericalFailure, buf);
  }
  return q.value;
}

void require_alpha(double alpha) {
  require(alpha > 2.0 && std::isfinite(alpha), "alpha must exceed 2");
}

}  // namespace

void ModelParams::validate() const {
  require(density > 0.0, "density must be positive");
  require_alpha(alpha);
  require(theta > 0.0, "theta must be positive");
  require(omega > 0.0, "omega must be positive");
  require(delta > 0.0 && delta <= delta_prime, "need 0 < delta <= delta'");
  require(gamma > 0.0, "gamma must be positive");
  require(nu >= 2, "nu must be at least 2");
  require(pr_n_equals_nu > 0.0 && pr_n_equals_nu <= 1.0,
          "Pr(N = nu) must lie in (0, 1]");
}

double serving_distance_ccdf(double x, double density) {
  require(x >= 0.0, "serving_distance_ccdf: x must be non-negative");
  require(density > 0.0, "serving_distance_ccdf: density must be positive");
  return std::exp(-kPi * density * x * x);
}

double edge_distance_cdf(double x, double apothem) {
  require(apothem > 0.0, "edge_distance_cdf: apothem must be positive");
  require(x >= 0.0 && x <= apothem, "edge_distance_cdf: x outside [0, apothem]");
  const double r = 1.0 - x / apothem;
  return 1.0 - r * r;
}

double c1(const ModelParams& p) {
  p.validate();
  return kPi / (2.0 * kSqrt3) *
         std::pow(p.delta / (p.theta * p.gamma), 2.0 / p.alpha);
}

double c2(const ModelParams& p) {
  p.validate();
  const double a = p.alpha;
  const double num = kPi * std::pow(p.density, 1.0 - a / 4.0) *
                     std::pow(p.delta, 2.0 / a);
  const double den = std::pow(p.omega, (4.0 - a) / (2.0 * a)) *
                     std::sqrt(p.theta) * std::pow(2.0 * kSqrt3, a / 4.0) *
                     std::pow(p.gamma, 2.0 / a);
  return num / den;
}

BoundPair ope_bounds_cc_sparse(double ell, const ModelParams& p) {
  p.validate();
  require(ell > 0.0, "ope_bounds_cc_sparse: ell must be positive");
  const double k1 = c1(p);
  const double upper = 4.0 * k1 * ell / 3.0;
  if (p.alpha > 4.0) return {k1 * ell, upper, "cluster-center sparse, alpha > 4"};
  return {c2(p) * std::pow(ell, p.alpha / 4.0), upper,
          "cluster-center sparse, 2 < alpha <= 4"};
}

BoundPair ope_bounds_typical(double ell, double alpha) {
  require_alpha(alpha);
  require(ell >= 1.0, "ope_bounds_typical: ell must be at least 1");
  const double l = std::log(ell);
  return {0.5 * (1.0 - 2.0 / alpha) * l, 0.5 * l, "typical mobile"};
}

BoundPair ope_bounds_cc_rich(double ell, double alpha, int nu) {
  require_alpha(alpha);
  require(ell >= 1.0, "ope_bounds_cc_rich: ell must be at least 1");
  require(nu >= 2, "ope_bounds_cc_rich: nu must be at least 2");
  const double l = std::log(ell);
  const double top = 0.5 * alpha * nu;
  return {(top - 1.0) * l, top * l, "cluster-center rich"};
}

double sparse_tail_rate(const ModelParams& p) {
  p.validate();
  return kPi * p.density * std::pow(p.delta / (p.gamma * p.omega), 2.0 / p.alpha);
}

// With beta = W / G and c = pi lambda (x / omega)^(2/alpha),
//   Pr(P G > x) = int exp(-c tau^(2/alpha)) f(tau) dtau, tau >= delta/gamma,
// where f is the density of beta:
//   (min(delta', gamma tau)^2 - delta^2) / (2 (delta' - delta) gamma tau^2),
// which equals (delta + delta') / (2 gamma tau^2) for tau >= delta'/gamma.
// The result is returned as ln; the factor exp(-c (delta/gamma)^(2/alpha)) is
// kept out of the integrand so large x does not underflow.
double log_tail_pg_sparse(double x, const ModelParams& p) {
  p.validate();
  require(x > 0.0 && std::isfinite(x), "tail_pg_sparse: x must be positive");
  const double e = 2.0 / p.alpha;
  const double c = kPi * p.density * std::pow(x / p.omega, e);
  const double lo = p.delta / p.gamma;
  const double hi = p.delta_prime / p.gamma;
  const double a0 = c * std::pow(lo, e);

  Quadrature body;
  if (hi > lo) {
    const double spread = p.delta_prime - p.delta;
    // v = tau - lo; the exponent c (tau^e - lo^e) is formed as
    // a0 ((1 + v/lo)^e - 1) to avoid cancellation near the left end.
    auto f = [&](double v) {
      const double tau = lo + v;
      const double excess = a0 * std::expm1(e * std::log1p(v / lo));
      // (gamma tau)^2 - delta^2 with gamma lo = delta.
      const double gv = p.gamma * v;
      return std::exp(-excess) * gv * (2.0 * p.delta + gv) /
             (2.0 * spread * p.gamma * tau * tau);
    };
    // The integrand peaks within ~1/slope of the left end for large c; panel
    // edges at geometric offsets keep the peak resolved.
    const double slope = a0 * e / lo;
    const double width = hi - lo;
    double left = 0.0;
    for (double step = 1.0 / std::max(slope, 1e-300); left < width; step *= 4.0) {
      const double right = std::min(width, step);
      if (right > left) body += integrate(f, left, right);
      left = right;
    }
  }

  // Tail piece with u = 1 / tau on (0, gamma/delta'].
  const double weight = (p.delta + p.delta_prime) / (2.0 * p.gamma);
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    return std::exp(-a0 * std::expm1(-e * std::log(u * lo)));
  };
  // g rises from 0 to ~1 around u = c^(1/e); panel edges refine there.
  Quadrature tail;
  const double top = 1.0 / hi;
  const double knee = std::min(top, std::pow(c, 1.0 / e));
  double u_left = 0.0;
  for (double u = knee / 64.0; u_left < top; u *= 4.0) {
    const double u_right = std::min(top, u);
    tail += integrate(g, u_left, u_right);
    u_left = u_right;
  }
  tail.value *= weight;
  tail.error *= weight;
  body += tail;

  const double total = accept(body);
  if (!(total > 0.0)) return -std::numeric_limits<double>::infinity();
  return -a0 + std::log(total);
}

double tail_pg_sparse_quadrature(double x, const ModelParams& p) {
  return std::min(1.0, std::exp(log_tail_pg_sparse(x, p)));
}

double tail_pg_rich(double x, const ModelParams& p) {
  p.validate();
  require(x > 0.0, "tail_pg_rich: x must be positive");
  const double k = 0.5 * p.alpha * p.nu;
  const double log_value = p.nu * std::log(p.omega) + std::lgamma(k + 1.0) +
                           std::log(p.pr_n_equals_nu) -
                           k * std::log(kPi * p.density) - p.nu * std::log(x);
  return std::exp(log_value);
}

// Conditioning on L and W: Pr(G > x W / (omega L^alpha)) = exp(-x W / (omega
// L^alpha)); averaging over W ~ Gamma(n, 1) gives (1 + x / (omega L^alpha))^-n.
// L^2 = s / (pi lambda) with s ~ Exp(1).
double tail_pg_rich_exact(double x, const ModelParams& p,
                          std::span<const std::pair<int, double>> pmf) {
  p.validate();
  require(x > 0.0, "tail_pg_rich_exact: x must be positive");
  require(!pmf.empty(), "tail_pg_rich_exact: empty pmf");
  const double scale = x / p.omega;
  const double h = 0.5 * p.alpha;
  double total = 0.0;
  for (const auto& [n, prob] : pmf) {
    if (prob == 0.0) continue;
    auto f = [&, n = n](double s) {
      if (s <= 0.0) return 0.0;
      const double ratio = scale * std::pow(s / (kPi * p.density), -h);
      return std::exp(-s - n * std::log1p(ratio));
    };
    // The integrand switches on near s = pi lambda (x / omega)^(1/h) and,
    // for large x, peaks near s = h n.
    const double knee = std::max(1.0, h * n);
    const double onset =
        std::min(knee, kPi * p.density * std::pow(scale, 1.0 / h));
    Quadrature q;
    double left = 0.0;
    for (double s = onset / 64.0; left < knee; s *= 4.0) {
      const double right = std::min(knee, s);
      q += integrate(f, left, right);
      left = right;
    }
    q += integrate(f, knee, 4.0 * knee);
    q += integrate(f, 4.0 * knee, std::numeric_limits<double>::infinity());
    total += prob * accept(q);
  }
  return std::min(1.0, total);
}

ZnAsymptote zn_tail_asymptote(double x, double ell, const ModelParams& p,
                              TailScattering scattering) {
  p.validate();
  require(x > 0.0, "zn_tail_asymptote: x must be positive");
  require(ell > 0.0, "zn_tail_asymptote: ell must be positive");
  ZnAsymptote out;
  if (scattering == TailScattering::kSparse) {
    const double rate = sparse_tail_rate(p);
    out.is_exponent = true;
    if (p.alpha > 4.0) {
      out.value = rate * ell * std::pow(x, 2.0 / p.alpha);
      out.regime = "sparse, alpha > 4 (asymptotic equivalence)";
    } else {
      out.value = rate * std::pow(ell, p.alpha / 4.0) * std::sqrt(x);
      out.is_lower_bound = true;
      out.regime = "sparse, 2 < alpha <= 4 (asymptotic lower bound)";
    }
    return out;
  }
  out.is_exponent = false;
  const double k = 0.5 * p.alpha * p.nu;
  out.value = tail_pg_rich(x, p) * std::pow(ell, 1.0 - k);
  out.regime = "rich (asymptotic tail)";
  return out;
}

double throughput_scaling(double ell, double alpha) {
  require_alpha(alpha);
  require(ell >= 1.0, "throughput_scaling: ell must be at least 1");
  return 0.5 * alpha * std::log(ell);
}

}  // namespace clustercoop
