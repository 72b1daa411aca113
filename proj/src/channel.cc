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

#include "clustercoop/channel.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "clustercoop/error.h"

namespace clustercoop {

std::string to_string(ScatteringKind kind) {
  return kind == ScatteringKind::kSparse ? "sparse" : "rich";
}

ScatteringKind parse_scattering(const std::string& text) {
  if (text == "sparse") return ScatteringKind::kSparse;
  if (text == "rich") return ScatteringKind::kRich;
  throw_invalid("unknown scattering model '" + text + "'");
}

ScatteringModel ScatteringModel::sparse(double delta, double delta_prime,
                                        double gamma) {
  ScatteringModel m;
  m.kind = ScatteringKind::kSparse;
  m.delta = delta;
  m.delta_prime = delta_prime;
  m.gamma = gamma;
  m.validate();
  return m;
}

ScatteringModel ScatteringModel::rich(std::vector<std::pair<int, double>> pmf) {
  ScatteringModel m;
  m.kind = ScatteringKind::kRich;
  m.diversity_pmf = std::move(pmf);
  m.validate();
  return m;
}

void ScatteringModel::validate() const {
  if (kind == ScatteringKind::kSparse) {
    require(delta > 0.0 && delta <= delta_prime,
            "sparse model needs 0 < delta <= delta'");
    require(gamma > 0.0, "sparse model needs gamma > 0");
    require(std::isfinite(delta_prime) && std::isfinite(gamma),
            "sparse model parameters must be finite");
    return;
  }
  require(!diversity_pmf.empty(), "rich model needs a diversity pmf");
  double total = 0.0;
  for (const auto& [n, p] : diversity_pmf) {
    require(n >= 2, "rich model needs every diversity order > 1");
    require(p >= 0.0, "diversity pmf has a negative probability");
    total += p;
  }
  require(std::fabs(total - 1.0) < 1e-9, "diversity pmf must sum to 1");
  require(min_diversity_probability() > 0.0,
          "minimum diversity order must carry positive probability");
}

int ScatteringModel::min_diversity() const {
  int nu = 0;
  for (const auto& [n, p] : diversity_pmf) {
    if (p > 0.0 && (nu == 0 || n < nu)) nu = n;
  }
  return nu;
}

double ScatteringModel::min_diversity_probability() const {
  const int nu = min_diversity();
  double p = 0.0;
  for (const auto& [n, q] : diversity_pmf) {
    if (n == nu) p += q;
  }
  return p;
}

GainDraw GainDraw::select(std::span<const std::size_t> ids) const {
  GainDraw out;
  out.main_lobe = main_lobe;
  out.side_lobes.reserve(ids.size());
  out.interferer_main_lobes.reserve(ids.size());
  out.interferer_serving_distances.reserve(ids.size());
  for (std::size_t id : ids) {
    out.side_lobes.push_back(side_lobes[id]);
    out.interferer_main_lobes.push_back(interferer_main_lobes[id]);
    out.interferer_serving_distances.push_back(interferer_serving_distances[id]);
  }
  return out;
}

double sample_serving_distance_squared(double density, RandomStream& rng) {
  return rng.exponential() / (std::numbers::pi * density);
}

double sample_serving_distance(double density, RandomStream& rng) {
  require(density > 0.0, "sample_serving_distance: density must be positive");
  return std::sqrt(sample_serving_distance_squared(density, rng));
}

int sample_diversity(const ScatteringModel& model, RandomStream& rng) {
  if (model.diversity_pmf.size() == 1) return model.diversity_pmf.front().first;
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [n, p] : model.diversity_pmf) {
    acc += p;
    if (u < acc) return n;
  }
  return model.diversity_pmf.back().first;
}

namespace {

double gamma_integer(int shape, RandomStream& rng) {
  double s = 0.0;
  for (int k = 0; k < shape; ++k) s += rng.exponential();
  return s;
}

}  // namespace

double sample_gain_arrays(const ScatteringModel& model, double density,
                          RandomStream& rng, std::span<double> serving_l2,
                          std::span<double> main_lobes,
                          std::span<double> side_lobes) {
  require(density > 0.0, "sample_gains: density must be positive");
  require(serving_l2.size() == main_lobes.size() &&
              serving_l2.size() == side_lobes.size(),
          "sample_gains: output spans differ in length");
  const std::size_t n = serving_l2.size();
  if (model.kind == ScatteringKind::kSparse) {
    const double main = rng.uniform(model.delta, model.delta_prime);
    for (std::size_t i = 0; i < n; ++i) {
      serving_l2[i] = sample_serving_distance_squared(density, rng);
      main_lobes[i] = rng.uniform(model.delta, model.delta_prime);
      side_lobes[i] = model.gamma * rng.uniform();
    }
    return main;
  }
  const double main = gamma_integer(sample_diversity(model, rng), rng);
  for (std::size_t i = 0; i < n; ++i) {
    serving_l2[i] = sample_serving_distance_squared(density, rng);
    main_lobes[i] = gamma_integer(sample_diversity(model, rng), rng);
    side_lobes[i] = rng.exponential();
  }
  return main;
}

namespace {

GainDraw gains_from_arrays(const ScatteringModel& model,
                           std::size_t n_interferers, double density,
                           RandomStream& rng) {
  GainDraw draw;
  draw.side_lobes.resize(n_interferers);
  draw.interferer_main_lobes.resize(n_interferers);
  draw.interferer_serving_distances.resize(n_interferers);
  draw.main_lobe = sample_gain_arrays(model, density, rng,
                                      draw.interferer_serving_distances,
                                      draw.interferer_main_lobes,
                                      draw.side_lobes);
  for (double& l : draw.interferer_serving_distances) l = std::sqrt(l);
  return draw;
}

}  // namespace

GainDraw sample_sparse_gains(const ScatteringModel& model,
                             std::size_t n_interferers, double density,
                             RandomStream& rng) {
  require(model.kind == ScatteringKind::kSparse,
          "sample_sparse_gains: model is not sparse");
  return gains_from_arrays(model, n_interferers, density, rng);
}

GainDraw sample_rich_gains(const ScatteringModel& model,
                           std::size_t n_interferers, double density,
                           RandomStream& rng) {
  require(model.kind == ScatteringKind::kRich,
          "sample_rich_gains: model is not rich");
  return gains_from_arrays(model, n_interferers, density, rng);
}

GainDraw sample_gains(const ScatteringModel& model, std::size_t n_interferers,
                      double density, RandomStream& rng) {
  return gains_from_arrays(model, n_interferers, density, rng);
}

ZeroForcingDraw zf_gain_oracle(int q_antennas, int m_cluster,
                               RandomStream& rng) {
  require(m_cluster >= 1, "zf_gain_oracle: cluster must hold at least one BS");
  require(q_antennas >= m_cluster,
          "zf_gain_oracle: insufficient antennas (Q < M)");
  using Complex = std::complex<double>;
  using Vec = std::vector<Complex>;
  const auto q = static_cast<std::size_t>(q_antennas);
  // CN(0, 1): real and imaginary parts N(0, 1/2).
  const double s = std::sqrt(0.5);
  auto gaussian = [&] {
    Vec v(q);
    for (auto& c : v) {
      const double re = s * rng.normal();
      const double im = s * rng.normal();
      c = {re, im};
    }
    return v;
  };
  auto dot = [](const Vec& a, const Vec& b) {  // a^H b
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
  };

  // Orthonormal basis of the interference channels (modified Gram-Schmidt).
  std::vector<Vec> basis;
  for (int k = 0; k + 1 < m_cluster; ++k) {
    Vec v = gaussian();
    for (const Vec& e : basis) {
      const Complex c = dot(e, v);
      for (std::size_t i = 0; i < q; ++i) v[i] -= c * e[i];
    }
    const double nrm = std::sqrt(std::real(dot(v, v)));
    if (nrm == 0.0) throw Error(ErrorCode::kNumericalFailure,
                                "zf_gain_oracle: degenerate channel draw");
    for (auto& c : v) c /= nrm;
    basis.push_back(std::move(v));
  }

  // Beamformer: data channel projected onto the null space of the
  // interference channels, normalized.
  Vec f = gaussian();
  for (const Vec& e : basis) {
    const Complex c = dot(e, f);
    for (std::size_t i = 0; i < q; ++i) f[i] -= c * e[i];
  }
  const double w = std::real(dot(f, f));
  if (w == 0.0) throw Error(ErrorCode::kNumericalFailure,
                            "zf_gain_oracle: degenerate data channel");
  const double nrm = std::sqrt(w);
  for (auto& c : f) c /= nrm;

  const Vec other = gaussian();
  return {w, std::norm(dot(f, other))};
}

double channel_inversion_power(double omega, double serving_distance,
                               double main_lobe, double alpha) {
  require(omega > 0.0 && serving_distance > 0.0,
          "channel_inversion_power: omega and distance must be positive");
  require(alpha > 2.0, "channel_inversion_power: alpha must exceed 2");
  if (main_lobe == 0.0) {
    throw Error(ErrorCode::kSingularity,
                "channel_inversion_power: zero main-lobe gain");
  }
  require(main_lobe > 0.0, "channel_inversion_power: negative main-lobe gain");
  return omega * std::pow(serving_distance, alpha) / main_lobe;
}

}  // namespace clustercoop
