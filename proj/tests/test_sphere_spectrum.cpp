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

#include "crackfreq/fem.hpp"
#include "crackfreq/sphere_spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <utility>

using namespace crackfreq;

namespace
{

struct Spectra
{
  SphereMesh coarse = build_slit_sphere_mesh(2, 0.05);
  SphereMesh fine = build_slit_sphere_mesh(2, 0.025);
  std::vector<SphericalEigenpair> coarse_pairs = solve_eigenpairs(coarse, 6);
  std::vector<SphericalEigenpair> fine_pairs = solve_eigenpairs(fine, 6);
};

const Spectra & spectra()
{
  static const Spectra s;
  return s;
}

double closed_form_first(const Vec3 & t)
{
  const double psi = std::acos(std::clamp(t[0], -1.0, 1.0));
  double phi = std::atan2(t[2], t[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  return std::sqrt(std::sin(psi)) * std::sin(0.5 * phi);
}

}  // namespace

TEST_CASE("oracle eigenvalues")
{
  CHECK(oracle_eigenvalue(1, 2) == 0.75);
  CHECK(oracle_eigenvalue(2, 2) == 2.0);
  CHECK(oracle_eigenvalue(4, 3) == 8.0);
  for (int k = 1; k < 10; ++k) {
    const double l = 0.5 * k;
    CHECK(oracle_eigenvalue(k, 2) == doctest::Approx(l * (l + 1.0)).epsilon(1e-15));
  }
}

TEST_CASE("slit sphere mesh topology")
{
  const SphereMesh m = build_slit_sphere_mesh(2, 0.2);
  for (const Vec3 & v : m.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-12);

  std::map<std::pair<int, int>, int> edges;
  double longest = 0.0;
  for (const auto & t : m.triangles) {
    for (int a = 0; a < 3; ++a) {
      const int i = t[a], j = t[(a + 1) % 3];
      ++edges[{std::min(i, j), std::max(i, j)}];
      longest = std::max(longest, (m.vertices[i] - m.vertices[j]).norm());
    }
  }
  const long euler = static_cast<long>(m.vertices.size()) - static_cast<long>(edges.size()) +
                     static_cast<long>(m.triangles.size());
  CHECK(euler == 2);
  for (const auto & [e, count] : edges) CHECK(count == 2);
  CHECK(longest <= 1.5 * 0.2);

  REQUIRE_FALSE(m.cut_vertices.empty());
  std::set<int> cut(m.cut_vertices.begin(), m.cut_vertices.end());
  for (int i = 0; i < static_cast<int>(m.vertices.size()); ++i) {
    const Vec3 & v = m.vertices[i];
    const bool on = v[1] >= -1e-12 && std::abs(v[2]) <= 1e-12;
    CHECK(on == (cut.count(i) == 1));
  }
  // The cut is a union of mesh edges: consecutive cut vertices along psi share an edge.
  std::vector<int> along(m.cut_vertices.begin(), m.cut_vertices.end());
  std::sort(along.begin(), along.end(), [&](int a, int b) { return m.vertices[a][0] > m.vertices[b][0]; });
  for (std::size_t i = 0; i + 1 < along.size(); ++i) {
    const int a = along[i], b = along[i + 1];
    CHECK(edges.count({std::min(a, b), std::max(a, b)}) == 1);
  }

  const SphereMesh finer = build_slit_sphere_mesh(2, 0.1);
  const double ratio = static_cast<double>(finer.vertices.size()) / m.vertices.size();
  CHECK(ratio >= 2.0);
  CHECK(ratio <= 8.0);

  CHECK_THROWS_AS(build_slit_sphere_mesh(3, 0.2), Error);
}

TEST_CASE("first eigenvalue and clusters at h = 0.05")
{
  const auto & s = spectra();
  const auto one = solve_eigenpairs(s.coarse, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].mu >= 0.75 * 0.97);
  CHECK(one[0].mu <= 0.75 * 1.05);

  const auto three = solve_eigenpairs(s.coarse, 3);
  REQUIRE(three.size() == 3);
  for (const auto & p : three) {
    REQUIRE(p.k_index >= 1);
    CHECK(std::abs(p.mu - oracle_eigenvalue(p.k_index, 2)) <= 0.1 * oracle_eigenvalue(p.k_index, 2));
  }
  CHECK(three[0].k_index == 1);
  CHECK(three[1].k_index == 2);
}

TEST_CASE("eigenpair contract")
{
  const auto & s = spectra();
  const SphereMatrices mats = assemble_sphere(s.coarse);
  const auto & pairs = s.coarse_pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].mu > 0.0);
    if (i > 0) CHECK(pairs[i].mu >= pairs[i - 1].mu);
    CHECK(std::abs(sphere_inner(mats, pairs[i].psi, pairs[i].psi) - 1.0) <= 1e-8);
    for (int c : s.coarse.cut_vertices) CHECK(pairs[i].psi[c] == 0.0);
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(sphere_inner(mats, pairs[i].psi, pairs[j].psi)) <= 1e-6);
  }
}

TEST_CASE("oracle consistency and refinement trend")
{
  const auto & s = spectra();
  for (const auto & [pairs, tol] : {std::pair{&s.coarse_pairs, 0.1}, std::pair{&s.fine_pairs, 0.05}}) {
    std::map<int, std::pair<double, int>> clusters;
    for (const auto & p : *pairs) {
      if (p.k_index == 0) continue;
      clusters[p.multiplicity_cluster].first += p.mu;
      clusters[p.multiplicity_cluster].second += 1;
    }
    for (const auto & p : *pairs) {
      if (p.k_index == 0) continue;
      const auto & c = clusters[p.multiplicity_cluster];
      const double mean = c.first / c.second;
      const double oracle = oracle_eigenvalue(p.k_index, 2);
      CHECK(std::abs(mean - oracle) / oracle <= tol);
    }
  }
  const double mu_h = s.coarse_pairs[0].mu;
  const double mu_h2 = s.fine_pairs[0].mu;
  CHECK(std::abs(mu_h - mu_h2) < std::abs(mu_h - 0.75));
}

TEST_CASE("point evaluation")
{
  const auto & s = spectra();
  const auto & first = s.coarse_pairs[0];
  for (int v = 0; v < static_cast<int>(s.coarse.vertices.size()); v += 97) {
    CHECK(std::abs(eval_eigenfunction(first, s.coarse, s.coarse.vertices[v]) - first.psi[v]) < 1e-12);
  }
  for (double psi : {0.3, 1.0, 1.9, 2.8}) {
    CHECK(std::abs(eval_eigenfunction(first, s.coarse, spherical_direction(psi, 0.0))) < 1e-14);
  }

  // Shape against sqrt(sin psi) sin(phi / 2), up to sign and scale.
  double num = 0.0, den_a = 0.0, den_b = 0.0;
  double best = 0.0, best_phi = 0.0;
  for (const auto & q : sphere_product_rule(32, 64)) {
    const double a = eval_eigenfunction(first, s.coarse, q.direction);
    const double b = closed_form_first(q.direction);
    num += q.weight * a * b;
    den_a += q.weight * a * a;
    den_b += q.weight * b * b;
    if (std::abs(a) > best) {
      best = std::abs(a);
      best_phi = q.phi;
    }
  }
  CHECK(std::abs(num) / std::sqrt(den_a * den_b) > 0.999);
  CHECK(std::abs(best_phi - M_PI) < 0.2);
}

TEST_CASE("degree one half extension is discrete harmonic")
{
  const auto & s = spectra();
  const auto & first = s.fine_pairs[0];
  std::vector<double> ratios;
  for (double h : {0.2, 0.1}) {
    const MeshPtr mesh = mesh_slit_ball(1.0, h);
    const ScalarField u = interpolate(mesh, [&](const Vec3 & x) {
      const double r = x.norm();
      if (r == 0.0) return 0.0;
      return std::sqrt(r) * eval_eigenfunction(first, s.fine, x / r);
    });
    const P1Matrices mats = assemble_p1(*mesh);
    std::vector<char> fixed(mesh->num_vertices(), 0);
    for (int i = 0; i < mesh->num_vertices(); ++i) fixed[i] = mesh->dirichlet[i] || mesh->on_sphere[i];
    Eigen::VectorXd residual = mats.stiffness * u.nodal;
    for (int i = 0; i < mesh->num_vertices(); ++i) {
      if (fixed[i]) residual[i] = 0.0;
    }
    // Dual norm of the residual: energy of w with K w = residual on the free nodes.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh->num_vertices());
    SolveReport rep;
    pcg_solve(mats.stiffness, residual, fixed, w, SolverOptions{}, rep);
    const double dual = std::sqrt(w.dot(mats.stiffness * w));
    const double energy = std::sqrt(u.nodal.dot(mats.stiffness * u.nodal));
    ratios.push_back(dual / energy / h);
    MESSAGE("h = " << h << " relative dual residual " << dual / energy);
  }
  for (double c : ratios) CHECK(c <= 1.0);
  CHECK(ratios[1] * 0.1 < ratios[0] * 0.2);
}
