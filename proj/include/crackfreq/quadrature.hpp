// Copyright 2026 The crackfreq Authors
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

#pragma once

#include "crackfreq/common.hpp"

#include <array>
#include <functional>
#include <vector>

namespace crackfreq
{

struct TetRule
{
  std::vector<Eigen::Vector4d> bary;
  std::vector<double> weights;  // sum to 1 (fractions of the tet volume)
};

const TetRule & tet_rule_4();
const TetRule & tet_rule_11();

struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [a, b] via the Golub-Welsch eigenproblem.
GaussRule gauss_legendre(int n, double a, double b);

struct SpherePoint
{
  Vec3 direction;
  double weight;  // on the unit sphere; multiply by r^2 for |x| = r
  double psi;
  double phi;
};

// Product rule in (psi, phi): psi polar angle from the x1 axis (Gauss-Legendre),
// phi azimuth in the (x2, x3) plane from +x2 (midpoint cells, offset off the cut).
std::vector<SpherePoint> sphere_product_rule(int n_psi = 64, int n_phi = 128);

inline Vec3 spherical_direction(double psi, double phi)
{
  return Vec3(std::cos(psi), std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi));
}

double tet_volume(const Vec3 & a, const Vec3 & b, const Vec3 & c, const Vec3 & d);

using TetIntegrand = std::function<double(const Vec3 &)>;

// Integral over a tetrahedron. Tets with a vertex at the origin are refined dyadically
// toward it (levels), the remaining pieces use the 11-point rule when singular is set.
double integrate_tet(const std::array<Vec3, 4> & v, const TetIntegrand & f, bool singular,
  int origin_levels = 3);

// Integral over tet intersected with the ball |x| <= r, by recursive subdivision of
// pieces cut by the sphere.
double integrate_tet_clipped(const std::array<Vec3, 4> & v, const TetIntegrand & f, double r,
  bool singular, int depth = 3);

// Lower bound for the distance from the origin to a tetrahedron.
double tet_min_radius_bound(const std::array<Vec3, 4> & v);
double tet_max_radius(const std::array<Vec3, 4> & v);

}  // namespace crackfreq
