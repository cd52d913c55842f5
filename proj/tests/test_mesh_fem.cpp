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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

using namespace crackfreq;

namespace
{

double sqrt_rho_sin_half(const Vec3 & x)
{
  const double rho = std::hypot(x[1], x[2]);
  double phi = std::atan2(x[2], x[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  return std::sqrt(rho) * std::sin(0.5 * phi);
}

Vec3 sqrt_rho_sin_half_grad(const Vec3 & x)
{
  const double rho = std::hypot(x[1], x[2]);
  if (rho == 0.0) return Vec3::Zero();
  double phi = std::atan2(x[2], x[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  // d/drho and (1/rho) d/dphi in the (x2, x3) plane.
  const double dr = 0.5 / std::sqrt(rho) * std::sin(0.5 * phi);
  const double dp = 0.5 / std::sqrt(rho) * std::cos(0.5 * phi);
  const double c = std::cos(phi), s = std::sin(phi);
  return Vec3(0.0, dr * c - dp * s, dr * s + dp * c);
}

double x3(const Vec3 & x) { return x[2]; }

double max_edge(const TetMesh & m)
{
  double e = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto p = m.tet_points(t);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) e = std::max(e, (p[a] - p[b]).norm());
    }
  }
  return e;
}

std::set<std::array<int, 3>> tet_faces(const TetMesh & m)
{
  std::set<std::array<int, 3>> faces;
  for (const auto & t : m.tets) {
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f{};
      int k = 0;
      for (int a = 0; a < 4; ++a) {
        if (a != skip) f[k++] = t[a];
      }
      std::sort(f.begin(), f.end());
      faces.insert(f);
    }
  }
  return faces;
}

}  // namespace

TEST_CASE("slit ball mesh at (0.5, 0.1)")
{
  const MeshPtr m = mesh_slit_ball(0.5, 0.1);
  const double ball = 4.0 / 3.0 * M_PI * 0.125;
  CHECK(std::abs(m->volume() - ball) <= 0.03 * ball);
  CHECK(max_edge(*m) <= 1.5 * 0.1);
  for (const Vec3 & v : m->vertices) CHECK(v.norm() <= 0.5 * (1.0 + 1e-10));
  for (int t = 0; t < m->num_tets(); ++t) {
    const auto p = m->tet_points(t);
    CHECK(tet_volume(p[0], p[1], p[2], p[3]) >= 1e-12 * 1e-3);
  }
  REQUIRE_FALSE(m->crack_faces.empty());
  const auto faces = tet_faces(*m);
  for (auto f : m->crack_faces) {
    for (int v : f) {
      CHECK(std::abs(m->vertices[v][2]) <= 1e-12);
      CHECK(m->vertices[v][1] >= -1e-12);
      CHECK(m->dirichlet[v]);
    }
    std::sort(f.begin(), f.end());
    CHECK(faces.count(f) == 1);
  }
  for (const auto & f : m->sphere_faces) {
    for (int v : f) CHECK(std::abs(m->vertices[v].norm() - 0.5) <= 1e-12);
  }

  const MeshPtr fine = mesh_slit_ball(0.5, 0.05);
  const double ratio = static_cast<double>(fine->num_tets()) / m->num_tets();
  CHECK(ratio >= 4.0);
  CHECK(ratio <= 16.0);

  CHECK_THROWS_AS(mesh_slit_ball(0.5, 0.2), Error);
}

TEST_CASE("mesh checksum and export")
{
  const MeshPtr a = mesh_slit_ball(0.5, 0.125);
  const MeshPtr b = mesh_slit_ball(0.5, 0.125);
  const MeshPtr c = mesh_slit_ball(0.5, 0.1);
  CHECK(mesh_checksum(*a) == mesh_checksum(*b));
  CHECK(mesh_checksum(*a) != mesh_checksum(*c));
  const std::string path = "test_mesh_fem_export.txt";
  export_mesh(*a, path);
  std::ifstream in(path);
  CHECK(in.good());
  std::remove(path.c_str());
}

TEST_CASE("approximating profile")
{
  CHECK(approx_profile(16, 2.0, 0.0).value == doctest::Approx(0.5).epsilon(1e-15));
  for (double t : {1.0 / 16.0, 0.1, 0.25, 0.7}) {
    const ProfileValue p = approx_profile(16, 2.0, t);
    CHECK(p.value == doctest::Approx(2.0 * std::sqrt(t)).epsilon(1e-14));
    CHECK(p.derivative == doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-14));
  }
  CHECK(approx_profile(16, 2.0, 0.25).property_residual == 0.0);
  for (int n : {1, 16, 64, 1024}) {
    for (double alpha : {1.5, 2.0, 3.0}) {
      for (int i = 0; i <= 400; ++i) {
        const double t = 2.0 * i / (400.0 * n);
        const ProfileValue p = approx_profile(n, alpha, t);
        CHECK(p.property_residual >= -1e-12);
        // Derivative against central differences.
        const double s = 1e-7 / n;
        if (t > s) {
          const double fd = (approx_profile(n, alpha, t + s).value - approx_profile(n, alpha, t - s).value) / (2 * s);
          CHECK(std::abs(fd - p.derivative) <= 1e-5 * (1.0 + std::abs(p.derivative)));
        }
      }
    }
  }
  CHECK(transition_eta(0.3) == 1.0);
  CHECK(transition_eta(1.2) == 0.0);
  CHECK(transition_eta(0.75) == doctest::Approx(0.5));
}

TEST_CASE("approximating domain meshes")
{
  const MeshPtr ball = mesh_slit_ball(0.5, 0.1);
  std::vector<double> vols;
  for (int n : {64, 256, 1024}) {
    const MeshPtr m = mesh_approx_domain(0.5, n, 2.0, 0.1);
    CHECK(m->kind == DomainKind::approx_domain);
    vols.push_back(m->volume());
    CHECK(vols.back() < ball->volume());
    REQUIRE_FALSE(m->crack_faces.empty());
    for (const auto & f : m->crack_faces) {
      for (int v : f) CHECK(m->dirichlet[v]);
    }
    for (const auto * set : {&m->crack_faces, &m->tip_faces}) {
      for (const auto & f : *set) {
        for (int v : f) {
          // Tip faces also touch unmapped nodes next to the axis.
          if (!m->dirichlet[v]) continue;
          const Vec3 & x = m->vertices[v];
          CHECK(std::abs(x[1] - approx_profile(n, 2.0, std::abs(x[2])).value) <= 1e-10);
        }
      }
    }
  }
  CHECK(vols[0] < vols[1]);
  CHECK(vols[1] < vols[2]);

  try {
    mesh_approx_domain(0.5, 8, 2.0, 0.1);
    CHECK(false);
  } catch (const Error & e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("linear fields are reproduced")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  const MeshPtr m = mesh_slit_ball(0.5, 0.1);
  SolveReport rep;
  const ScalarField u = assemble_solve(m, flat, make_zero_potential(), x3, &rep);
  double worst = 0.0;
  for (int v = 0; v < m->num_vertices(); ++v) worst = std::max(worst, std::abs(u.nodal[v] - m->vertices[v][2]));
  CHECK(worst <= 1e-9);
  CHECK(rep.relative_residual <= 1e-10);
}

TEST_CASE("Galerkin orthogonality")
{
  const CoefficientBundle b = build_bundle(make_radial_quadratic_crack(0.1));
  const PotentialSpec f = make_a1_potential(3.0, 1.0);
  const MeshPtr m = mesh_slit_ball(0.375, 0.09);
  const ScalarField u = assemble_solve(m, b, f, sqrt_rho_sin_half);
  const Eigen::SparseMatrix<double> s = assemble_operator(*m, b, f);
  Eigen::VectorXd lifted = Eigen::VectorXd::Zero(m->num_vertices());
  for (int v = 0; v < m->num_vertices(); ++v) {
    if (m->on_sphere[v] && !m->dirichlet[v]) lifted[v] = u.nodal[v];
  }
  Eigen::VectorXd load = -(s * lifted);
  Eigen::VectorXd res = s * u.nodal;
  for (int v = 0; v < m->num_vertices(); ++v) {
    if (m->dirichlet[v] || m->on_sphere[v]) {
      load[v] = 0.0;
      res[v] = 0.0;
    }
  }
  CHECK(res.norm() <= 1e-10 * load.norm() * 1.01);
}

TEST_CASE("H1 error decreases under refinement")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  std::vector<double> errors;
  for (double h : {0.1, 0.05}) {
    const MeshPtr m = mesh_slit_ball(0.5, h);
    const ScalarField u = assemble_solve(m, flat, make_zero_potential(), sqrt_rho_sin_half);
    const double err2 = integrate_ball(u, 0.5, [](const Vec3 & x, double val, const Vec3 & g) {
      const double d = val - sqrt_rho_sin_half(x);
      return d * d + (g - sqrt_rho_sin_half_grad(x)).squaredNorm();
    });
    errors.push_back(std::sqrt(err2));
    MESSAGE("h = " << h << " H1 error " << errors.back());
  }
  CHECK(errors[1] < errors[0]);
}

TEST_CASE("crack values and approximating-domain trace")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  const MeshPtr m = mesh_approx_domain(0.5, 256, 2.0, 0.1);
  // Boundary data vanishing near the approximating surface.
  const ScalarField u = assemble_solve(m, flat, make_zero_potential(), [](const Vec3 & x) {
    return x[1] < 0.0 ? x[1] * x[1] : 0.0;
  });
  for (const auto * set : {&m->crack_faces, &m->tip_faces}) {
    for (const auto & f : *set) {
      for (int v : f) {
        if (m->dirichlet[v]) CHECK(std::abs(u.nodal[v]) <= 1e-9);
      }
    }
  }
  for (int v = 0; v < m->num_vertices(); ++v) {
    if (u.dirichlet_mask[v]) CHECK(u.nodal[v] == 0.0);
  }
}

TEST_CASE("h1 distance closed forms")
{
  const MeshPtr m = mesh_slit_ball(0.5, 0.05);
  const ScalarField a = interpolate(m, x3, false);
  const ScalarField z = zero_field(m);
  const L2H1 same = h1_distance(a, a, 0.5);
  CHECK(same.l2 == 0.0);
  CHECK(same.h1 == 0.0);

  const L2H1 d = h1_distance(a, z, 0.5);
  const double l2sq = 4.0 * M_PI * std::pow(0.5, 5) / 15.0;
  const double h1sq = l2sq + 4.0 * M_PI * std::pow(0.5, 3) / 3.0;
  // Polyhedral ball: the deficit is the faceting error.
  CHECK(d.l2 * d.l2 == doctest::Approx(l2sq).epsilon(0.02));
  CHECK(d.h1 * d.h1 == doctest::Approx(h1sq).epsilon(0.02));
  CHECK(d.h1 * d.h1 <= h1sq);
  CHECK_THROWS_AS(h1_distance(a, z, 0.6), Error);
}

TEST_CASE("approximation convergence in n")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  const PotentialSpec zero = make_zero_potential();
  const MeshPtr ball = mesh_slit_ball(0.5, 0.1);
  const ScalarField u = assemble_solve(ball, flat, zero, sqrt_rho_sin_half);
  std::vector<double> d;
  for (int n : {64, 256, 1024}) {
    const ScalarField un = assemble_solve(mesh_approx_domain(0.5, n, 2.0, 0.1), flat, zero, sqrt_rho_sin_half);
    d.push_back(h1_distance(un, u, 0.5).h1);
    MESSAGE("n = " << n << " h1 distance " << d.back());
  }
  CHECK(d[1] < d[0]);
  CHECK(d[2] <= d[1]);
}

TEST_CASE("discrete coercivity below r0")
{
  const CoefficientBundle b = build_bundle(make_radial_quadratic_crack(0.1));
  const PotentialSpec f = make_a1_potential(3.0, 1.0);
  const MeshPtr m = mesh_slit_ball(0.375, 0.09);
  const Eigen::SparseMatrix<double> q = assemble_operator(*m, b, f);
  const Eigen::SparseMatrix<double> k = assemble_p1(*m).stiffness;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(m->num_vertices());
    // Smooth random field: a random trig combination, zero on the crack and sphere.
    const double k1 = g(rng), k2 = g(rng), k3 = g(rng), ph = g(rng);
    for (int i = 0; i < m->num_vertices(); ++i) {
      const Vec3 & x = m->vertices[i];
      v[i] = (m->dirichlet[i] || m->on_sphere[i]) ? 0.0 : std::sin(8.0 * (k1 * x[0] + k2 * x[1] + k3 * x[2]) + ph) + g(rng);
    }
    CHECK(v.dot(q * v) >= 0.25 * v.dot(k * v));
  }
}

TEST_CASE("reflection symmetry across the crack plane")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  const PotentialSpec zero = make_zero_potential();
  const MeshPtr m = mesh_slit_ball(0.5, 0.1);
  auto g = [](const Vec3 & x) { return std::exp(x[0]) * (1.0 + x[2]) + x[1] * x[2] * x[2]; };
  auto g_reflected = [&](const Vec3 & x) { return g(Vec3(x[0], x[1], -x[2])); };
  const ScalarField u = assemble_solve(m, flat, zero, g);
  const ScalarField v = assemble_solve(m, flat, zero, g_reflected);
  double worst = 0.0, scale = 0.0;
  for (const Vec3 & x : {Vec3(0.1, -0.2, 0.15), Vec3(-0.2, 0.1, 0.2), Vec3(0.0, 0.3, 0.05), Vec3(0.2, -0.1, -0.3)}) {
    const Vec3 rx(x[0], x[1], -x[2]);
    worst = std::max(worst, std::abs(sample(u, x).value - sample(v, rx).value));
    scale = std::max(scale, std::abs(sample(u, x).value));
  }
  CHECK(worst <= 0.02 * scale);
}
