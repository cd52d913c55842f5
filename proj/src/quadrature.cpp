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

#include "crackfreq/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace crackfreq
{

namespace
{

TetRule make_rule_4()
{
  TetRule rule;
  const double a = (5.0 - std::sqrt(5.0)) / 20.0;
  const double b = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d l = Eigen::Vector4d::Constant(a);
    l[k] = b;
    rule.bary.push_back(l);
    rule.weights.push_back(0.25);
  }
  return rule;
}

TetRule make_rule_11()
{
  TetRule rule;
  rule.bary.push_back(Eigen::Vector4d::Constant(0.25));
  rule.weights.push_back(-74.0 / 5625.0 * 6.0);
  const double a = 1.0 / 14.0;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d l = Eigen::Vector4d::Constant(a);
    l[k] = 11.0 / 14.0;
    rule.bary.push_back(l);
    rule.weights.push_back(343.0 / 45000.0 * 6.0);
  }
  const double s = std::sqrt(5.0 / 14.0);
  const double b = (1.0 + s) / 4.0;
  const double c = (1.0 - s) / 4.0;
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (const auto & p : pairs) {
    Eigen::Vector4d l = Eigen::Vector4d::Constant(c);
    l[p[0]] = b;
    l[p[1]] = b;
    rule.bary.push_back(l);
    rule.weights.push_back(56.0 / 2250.0 * 6.0);
  }
  return rule;
}

std::array<std::array<Vec3, 4>, 8> subdivide(const std::array<Vec3, 4> & v)
{
  const Vec3 m01 = 0.5 * (v[0] + v[1]);
  const Vec3 m02 = 0.5 * (v[0] + v[2]);
  const Vec3 m03 = 0.5 * (v[0] + v[3]);
  const Vec3 m12 = 0.5 * (v[1] + v[2]);
  const Vec3 m13 = 0.5 * (v[1] + v[3]);
  const Vec3 m23 = 0.5 * (v[2] + v[3]);
  return {{{v[0], m01, m02, m03},
    {m01, v[1], m12, m13},
    {m02, m12, v[2], m23},
    {m03, m13, m23, v[3]},
    {m01, m02, m03, m13},
    {m01, m02, m12, m13},
    {m02, m03, m13, m23},
    {m02, m12, m13, m23}}};
}

double apply_rule(const std::array<Vec3, 4> & v, const TetIntegrand & f, const TetRule & rule,
  double clip_radius)
{
  const double vol = std::abs(tet_volume(v[0], v[1], v[2], v[3]));
  if (vol == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Eigen::Vector4d & l = rule.bary[q];
    const Vec3 x = l[0] * v[0] + l[1] * v[1] + l[2] * v[2] + l[3] * v[3];
    if (clip_radius > 0.0 && x.norm() > clip_radius) continue;
    s += rule.weights[q] * f(x);
  }
  return s * vol;
}

}  // namespace

const TetRule & tet_rule_4()
{
  static const TetRule rule = make_rule_4();
  return rule;
}

const TetRule & tet_rule_11()
{
  static const TetRule rule = make_rule_11();
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b)
{
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = off;
    j(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussRule rule;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes.push_back(mid + half * es.eigenvalues()[k]);
    rule.weights.push_back(2.0 * v0 * v0 * half);
  }
  return rule;
}

std::vector<SpherePoint> sphere_product_rule(int n_psi, int n_phi)
{
  static std::map<std::pair<int, int>, std::vector<SpherePoint>> cache;
  const auto key = std::make_pair(n_psi, n_phi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const GaussRule g = gauss_legendre(n_psi, 0.0, M_PI);
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(n_psi * n_phi));
  const double dphi = 2.0 * M_PI / n_phi;
  for (int a = 0; a < n_psi; ++a) {
    const double psi = g.nodes[a];
    for (int c = 0; c < n_phi; ++c) {
      const double phi = (c + 0.5) * dphi;
      pts.push_back({spherical_direction(psi, phi), g.weights[a] * std::sin(psi) * dphi, psi, phi});
    }
  }
  cache.emplace(key, pts);
  return pts;
}

double tet_volume(const Vec3 & a, const Vec3 & b, const Vec3 & c, const Vec3 & d)
{
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

double integrate_tet(const std::array<Vec3, 4> & v, const TetIntegrand & f, bool singular,
  int origin_levels)
{
  int origin_vertex = -1;
  for (int k = 0; k < 4; ++k) {
    if (v[k].norm() < 1e-14) origin_vertex = k;
  }
  if (origin_vertex < 0 || origin_levels <= 0) {
    return apply_rule(v, f, singular || origin_vertex >= 0 ? tet_rule_11() : tet_rule_4(), -1.0);
  }
  const auto children = subdivide(v);
  double s = 0.0;
  for (int c = 0; c < 8; ++c) {
    if (c == origin_vertex) {
      s += integrate_tet(children[c], f, singular, origin_levels - 1);
    } else {
      s += apply_rule(children[c], f, singular ? tet_rule_11() : tet_rule_4(), -1.0);
    }
  }
  return s;
}

double tet_max_radius(const std::array<Vec3, 4> & v)
{
  double m = 0.0;
  for (const auto & p : v) m = std::max(m, p.norm());
  return m;
}

double tet_min_radius_bound(const std::array<Vec3, 4> & v)
{
  const Vec3 c = 0.25 * (v[0] + v[1] + v[2] + v[3]);
  double spread = 0.0;
  for (const auto & p : v) spread = std::max(spread, (p - c).norm());
  return std::max(0.0, c.norm() - spread);
}

double integrate_tet_clipped(const std::array<Vec3, 4> & v, const TetIntegrand & f, double r,
  bool singular, int depth)
{
  if (tet_max_radius(v) <= r) return integrate_tet(v, f, singular);
  if (tet_min_radius_bound(v) >= r) return 0.0;
  if (depth <= 0) return apply_rule(v, f, singular ? tet_rule_11() : tet_rule_4(), r);
  const auto children = subdivide(v);
  double s = 0.0;
  for (const auto & child : children) s += integrate_tet_clipped(child, f, r, singular, depth - 1);
  return s;
}

}  // namespace crackfreq
