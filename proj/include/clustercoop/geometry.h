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

// Point-process sampling and hexagonal cluster geometry.
//
// Cluster regions are hexagons with a fixed orientation: the three edge
// normals point at angles 0, pi/3 and 2pi/3, vertices at pi/6 + k pi/3.
// Membership is closed, so points on the boundary belong to the hexagon.

#ifndef CLUSTERCOOP_GEOMETRY_H_
#define CLUSTERCOOP_GEOMETRY_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "clustercoop/random.h"

namespace clustercoop {

inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kPi = std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double distance(Point2 a, Point2 b) { return std::sqrt(norm2(a - b)); }
inline Point2 rotate(Point2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Gauge of the unit-apothem hexagon: max over the edge normals of
// |<p, n_k>|. C(center, r) = { p : hex_gauge(p - center) <= r }.
double hex_gauge(Point2 p);

class Hexagon {
 public:
  Hexagon(Point2 center, double apothem);

  Point2 center() const { return center_; }
  double apothem() const { return apothem_; }
  double circumradius() const { return 2.0 * apothem_ / kSqrt3; }
  double area() const { return 2.0 * kSqrt3 * apothem_ * apothem_; }

  bool contains(Point2 p) const;

 private:
  Point2 center_;
  double apothem_;
};

// A realized point set, stored as parallel coordinate arrays so the kernels
// can stream over it.
struct PointSet {
  std::vector<double> xs;
  std::vector<double> ys;
  double generating_density = 0.0;
  double region_radius = 0.0;

  std::size_t size() const { return xs.size(); }
  bool empty() const { return xs.empty(); }
  Point2 point(std::size_t i) const { return {xs[i], ys[i]}; }
  void push_back(Point2 p) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
};

// Homogeneous PPP of the given density restricted to the disk of radius
// disk_radius centered at the origin.
PointSet sample_ppp(double density, double disk_radius, RandomStream& rng);

// As sample_ppp, reusing the storage of `out`.
void sample_ppp_into(double density, double disk_radius, RandomStream& rng,
                     PointSet& out);

bool hex_contains(const Hexagon& hex, Point2 p);

// Distance from p to the complement of the hexagon. p must lie inside.
double edge_distance(const Hexagon& hex, Point2 p);

// Membership in the hexagonal ring C(center, sqrt(n+1) a) \ C(center, sqrt(n) a).
bool hex_ring_contains(Point2 center, double apothem, int n, Point2 p);

// The ring index n >= 1 of a point with hexagonal gauge `gauge` > apothem.
// Agrees with hex_ring_contains.
int hex_ring_index(double gauge, double apothem);

double expected_cluster_size(double density, double apothem);
double apothem_for_cluster_size(double density, double cluster_size);

// Uniform point in the hexagon (rejection from the bounding box).
Point2 sample_uniform_in_hexagon(const Hexagon& hex, RandomStream& rng);

// Default simulation disk: expected BS count 200 at the given density.
double default_disk_radius(double density);

}  // namespace clustercoop

#endif  // CLUSTERCOOP_GEOMETRY_H_
