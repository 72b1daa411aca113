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

#include "clustercoop/geometry.h"

#include <algorithm>
#include <string>

#include "clustercoop/error.h"

namespace clustercoop {

double hex_gauge(Point2 p) {
  // Same operation order as kernels::hex_norms so the two agree bit for bit.
  const double a = std::fabs(p.x);
  const double hx = 0.5 * p.x;
  const double sy = 0.86602540378443864676 * p.y;
  const double b = std::fabs(hx + sy);
  const double c = std::fabs(sy - hx);
  return std::max(a, std::max(b, c));
}

Hexagon::Hexagon(Point2 center, double apothem)
    : center_(center), apothem_(apothem) {
  require(apothem > 0.0 && std::isfinite(apothem),
          "Hexagon: apothem must be positive and finite");
}

bool Hexagon::contains(Point2 p) const {
  return hex_gauge(p - center_) <= apothem_;
}

bool hex_contains(const Hexagon& hex, Point2 p) { return hex.contains(p); }

double edge_distance(const Hexagon& hex, Point2 p) {
  const double g = hex_gauge(p - hex.center());
  require(g <= hex.apothem(), "edge_distance: point lies outside the hexagon");
  return hex.apothem() - g;
}

bool hex_ring_contains(Point2 center, double apothem, int n, Point2 p) {
  require(n >= 1, "hex_ring_contains: ring index must be >= 1");
  const double g = hex_gauge(p - center);
  const double dn = static_cast<double>(n);
  return g <= std::sqrt(dn + 1.0) * apothem && g > std::sqrt(dn) * apothem;
}

int hex_ring_index(double gauge, double apothem) {
  require(gauge > apothem, "hex_ring_index: point lies inside the cluster");
  const double r = gauge / apothem;
  int n = std::max(1, static_cast<int>(std::ceil(r * r)) - 1);
  // Nudge so the result matches the exact predicate of hex_ring_contains.
  while (!(gauge <= std::sqrt(static_cast<double>(n) + 1.0) * apothem)) ++n;
  while (n > 1 && !(gauge > std::sqrt(static_cast<double>(n)) * apothem)) --n;
  return n;
}

double expected_cluster_size(double density, double apothem) {
  require(density > 0.0, "expected_cluster_size: density must be positive");
  require(apothem > 0.0, "expected_cluster_size: apothem must be positive");
  return 2.0 * kSqrt3 * apothem * apothem * density;
}

double apothem_for_cluster_size(double density, double cluster_size) {
  require(density > 0.0, "apothem_for_cluster_size: density must be positive");
  require(cluster_size > 0.0,
          "apothem_for_cluster_size: cluster size must be positive");
  return std::sqrt(cluster_size / (2.0 * kSqrt3 * density));
}

void sample_ppp_into(double density, double disk_radius, RandomStream& rng,
                     PointSet& out) {
  require(density >= 0.0, "sample_ppp: density must be non-negative");
  require(disk_radius > 0.0, "sample_ppp: disk radius must be positive");
  out.generating_density = density;
  out.region_radius = disk_radius;
  const auto count = static_cast<std::size_t>(
      rng.poisson(density * kPi * disk_radius * disk_radius));
  out.xs.resize(count);
  out.ys.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = disk_radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    out.xs[i] = r * std::cos(phi);
    out.ys[i] = r * std::sin(phi);
  }
}

PointSet sample_ppp(double density, double disk_radius, RandomStream& rng) {
  PointSet set;
  sample_ppp_into(density, disk_radius, rng, set);
  return set;
}

Point2 sample_uniform_in_hexagon(const Hexagon& hex, RandomStream& rng) {
  // Normals at 0 and +-pi/3: |x| <= apothem, vertices at +-pi/2 on the y axis.
  const double rx = hex.apothem();
  const double ry = hex.circumradius();
  for (;;) {
    const Point2 offset{rng.uniform(-rx, rx), rng.uniform(-ry, ry)};
    if (hex_gauge(offset) <= hex.apothem()) return hex.center() + offset;
  }
}

double default_disk_radius(double density) {
  require(density > 0.0, "default_disk_radius: density must be positive");
  return std::sqrt(200.0 / (density * kPi));
}

}  // namespace clustercoop
