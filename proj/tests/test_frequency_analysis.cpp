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

#include "crackfreq/frequency_analysis.hpp"

#include <doctest.h>

#include <cmath>

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

struct Fixture
{
  CoefficientBundle flat = build_bundle(make_flat_crack());
  PotentialSpec zero = make_zero_potential();
  MeshPtr mesh = mesh_slit_ball(0.5, 0.05, MeshOptions{0.5, 1.0 / 256.0});
  MeshPtr reference = mesh_slit_ball(1.0, 0.15);
  SphereMesh sphere = build_slit_sphere_mesh(2, 0.05);
  SphereMatrices sphere_mats = assemble_sphere(sphere);
  std::vector<SphericalEigenpair> pairs = solve_eigenpairs(sphere, 6);
  ScalarField x3 = interpolate(mesh, [](const Vec3 & x) { return x[2]; });
  ScalarField sq = interpolate(mesh, sqrt_rho_sin_half);
  ScalarField x1sq = interpolate(mesh, [](const Vec3 & x) { return x[0] * sqrt_rho_sin_half(x); });
  std::vector<double> radii = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};

  double y1(const Vec3 & x) const
  {
    const double r = x.norm();
    return r == 0.0 ? 0.0 : std::sqrt(r) * eval_eigenfunction(pairs[0], sphere, x / r);
  }
};

const Fixture & fx()
{
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("height and energy closed forms")
{
  const auto & f = fx();
  for (double r : {0.2, 0.3, 0.4}) {
    const HeightEnergy a = height_energy(f.x3, f.flat, f.zero, r);
    CHECK(a.H == doctest::Approx(4.0 * M_PI / 3.0 * r * r).epsilon(0.01));
    CHECK(a.D == doctest::Approx(4.0 * M_PI / 3.0 * r * r).epsilon(0.01));
    const HeightEnergy b = height_energy(f.sq, f.flat, f.zero, r);
    CHECK(b.H == doctest::Approx(M_PI * M_PI / 2.0 * r).epsilon(0.02));
    CHECK(b.D == doctest::Approx(M_PI * M_PI / 4.0 * r).epsilon(0.03));
  }
  const HeightEnergy z = height_energy(zero_field(f.mesh), f.flat, f.zero, 0.3);
  CHECK(z.H == 0.0);
  CHECK(z.D == 0.0);
  try {
    height_energy(f.x3, f.flat, f.zero, 0.001);
    CHECK(false);
  } catch (const Error & e) {
    CHECK(e.kind() == ErrorKind::resolution);
  }
}

TEST_CASE("eps_bar by potential mode")
{
  CHECK(eps_bar(make_zero_potential()) == 0.0);
  CHECK(eps_bar(make_a1_potential(3.0, 1.0)) == 0.0);
  CHECK(eps_bar(make_a1_potential(0.5, 1.0)) == doctest::Approx(-0.5));
  CHECK(eps_bar(make_a2_constant(1.0, 2.0)) == doctest::Approx(-0.5));
}

TEST_CASE("frequency of homogeneous fields")
{
  const auto & f = fx();
  struct Case
  {
    const ScalarField * u;
    double degree;
    double tol;
  };
  for (const Case & c : {Case{&f.x3, 1.0, 0.02}, Case{&f.sq, 0.5, 0.03}, Case{&f.x1sq, 1.5, 0.03}}) {
    RadialProfile p = frequency_profile(*c.u, f.flat, f.zero, f.radii);
    REQUIRE(p.N.size() == f.radii.size());
    attach_limit(p);
    for (std::size_t i = 0; i < p.N.size(); ++i) {
      CHECK(p.H[i] > 0.0);
      CHECK(p.N[i] == doctest::Approx(p.D[i] / p.H[i]).epsilon(1e-14));
      CHECK(p.N[i] > -0.25);
      CHECK(std::abs(p.N[i] - c.degree) <= c.tol * c.degree);
    }
    CHECK(std::abs(vanishing_order(*c.u, f.flat, f.radii) - c.degree) <= 0.05);
    CHECK(std::abs(p.ell_estimate - c.degree) <= 0.1);
    CHECK(p.k0 == static_cast<int>(std::lround(2.0 * c.degree)));
  }
  const LimitEstimate e = estimate_limit(frequency_profile(f.x3, f.flat, f.zero, f.radii));
  CHECK(e.ell == doctest::Approx(1.0).epsilon(0.02));
  CHECK(e.k0 == 2);
  CHECK_THROWS_AS(vanishing_order(zero_field(f.mesh), f.flat, f.radii), Error);
}

TEST_CASE("limit fit on synthetic profiles")
{
  RadialProfile p;
  p.radii = {0.05, 0.07, 0.1, 0.14, 0.2, 0.28, 0.4};
  for (double r : p.radii) {
    p.H.push_back(r);
    p.N.push_back(0.5);
    p.D.push_back(0.5 * r);
  }
  LimitEstimate e = estimate_limit(p);
  CHECK(e.ell == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.k0 == 1);
  CHECK(e.monotone_defect == 0.0);

  p.eps_bar = -0.5;
  for (std::size_t i = 0; i < p.radii.size(); ++i) p.N[i] = 0.5 + 0.3 * std::sqrt(p.radii[i]);
  e = estimate_limit(p);
  CHECK(std::abs(e.ell - 0.5) <= 0.02);
  CHECK(e.k0 == 1);

  for (std::size_t i = 0; i < p.radii.size(); ++i) p.N[i] = 0.73;
  CHECK(estimate_limit(p).k0 == 0);

  RadialProfile short_profile = p;
  short_profile.radii.resize(4);
  CHECK_THROWS_AS(estimate_limit(short_profile), Error);
}

TEST_CASE("solved field: monotonicity and height limit")
{
  const auto & f = fx();
  const ScalarField u = assemble_solve(f.mesh, f.flat, f.zero, sqrt_rho_sin_half);
  RadialProfile p = frequency_profile(u, f.flat, f.zero, f.radii);
  for (std::size_t i = 0; i + 1 < p.N.size(); ++i) CHECK(p.N[i + 1] - p.N[i] >= -0.02 * std::abs(p.N[i]));
  const HeightLimit hl = height_limit(p, 1);
  CHECK(hl.limit > 0.0);
  CHECK(hl.relative_change <= 0.05);

  double min_n = 1e9, max_n = -1e9;
  for (double n : p.N) {
    min_n = std::min(min_n, n);
    max_n = std::max(max_n, n);
  }
  const std::vector<double> Rs = {1.0, 1.25, 1.5, 2.0};
  const auto ratios = doubling_check(u, f.flat, 0.2, Rs);
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    CHECK(ratios[i] >= std::pow(Rs[i], 2.0 * min_n - 0.1) * (1.0 - 1e-12));
    CHECK(ratios[i] <= std::pow(Rs[i], 2.0 * max_n + 0.1) * (1.0 + 1e-12));
  }
}

TEST_CASE("doubling ratios")
{
  const auto & f = fx();
  const std::vector<double> Rs = {1.0, 1.5, 2.0};
  const auto a = doubling_check(f.x3, f.flat, 0.2, Rs);
  const auto b = doubling_check(f.sq, f.flat, 0.2, Rs);
  CHECK(a[0] == 1.0);
  CHECK(b[0] == 1.0);
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    CHECK(a[i] == doctest::Approx(Rs[i] * Rs[i]).epsilon(0.02));
    CHECK(b[i] == doctest::Approx(Rs[i]).epsilon(0.02));
  }
  CHECK_THROWS_AS(doubling_check(f.x3, f.flat, 0.2, {2.5}), Error);
}

TEST_CASE("blow-up family")
{
  const auto & f = fx();
  for (double lambda : {0.4, 0.2, 0.1}) {
    const ScalarField v = blowup_field(f.x3, f.flat, lambda, f.reference);
    CHECK(unit_sphere_mass(v, f.flat, lambda) == doctest::Approx(1.0).epsilon(1e-6));
    const double c = std::sqrt(3.0 / (4.0 * M_PI));
    double worst = 0.0;
    for (int i = 0; i < f.reference->num_vertices(); ++i) {
      worst = std::max(worst, std::abs(v.nodal[i] - c * f.reference->vertices[i][2]));
    }
    CHECK(worst <= 0.01 * c);
  }
  const ScalarField a = blowup_field(f.sq, f.flat, 0.4, f.reference);
  const ScalarField b = blowup_field(f.sq, f.flat, 0.2, f.reference);
  CHECK(h1_distance(a, b, 1.0).h1 <= 0.01);
  CHECK_THROWS_AS(blowup_field(f.sq, f.flat, 0.2, f.mesh), Error);
}

TEST_CASE("blow-up convergence to the eigen-profile")
{
  const auto & f = fx();
  const std::vector<double> lambdas = {0.4, 0.2, 0.1};
  const EigenCluster k1 = select_cluster(f.sphere, f.pairs, 1);
  const EigenCluster k2 = select_cluster(f.sphere, f.pairs, 2);
  const ScalarField exact = interpolate(f.mesh, [&](const Vec3 & x) { return f.y1(x); });
  for (double e : blowup_convergence(exact, f.flat, lambdas, k1, f.reference)) CHECK(e <= 0.02);
  for (double e : blowup_convergence(f.x3, f.flat, lambdas, k2, f.reference)) CHECK(e <= 0.02);

  // sqrt mode plus 0.2 of a degree-one mode: the remainder decays like lambda^{1/2}.
  const ScalarField u = assemble_solve(f.mesh, f.flat, f.zero,
    [](const Vec3 & x) { return sqrt_rho_sin_half(x) + 0.2 * x[2]; });
  const auto errs = blowup_convergence(u, f.flat, lambdas, k1, f.reference);
  MESSAGE("blow-up errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);

  CHECK_THROWS_AS(select_cluster(f.sphere, f.pairs, 9), Error);
}

TEST_CASE("Fourier coefficients")
{
  const auto & f = fx();
  const double c = 1.7;
  auto u = [&](const Vec3 & x) { return c * f.y1(x); };
  for (double lambda : {0.1, 0.2, 0.4}) {
    CHECK(fourier_coefficient(u, f.pairs[0], f.sphere, f.sphere_mats, lambda) ==
          doctest::Approx(c * std::sqrt(lambda)).epsilon(1e-4));
    for (const auto & p : f.pairs) {
      if (p.multiplicity_cluster == f.pairs[0].multiplicity_cluster) continue;
      CHECK(std::abs(fourier_coefficient(u, p, f.sphere, f.sphere_mats, lambda)) <= 1e-6);
    }
    CHECK(fourier_coefficient([](const Vec3 &) { return 0.0; }, f.pairs[0], f.sphere, f.sphere_mats, lambda) == 0.0);
  }
}

TEST_CASE("Upsilon vanishes for the flat crack without potential")
{
  const auto & f = fx();
  const EigenCluster k1 = select_cluster(f.sphere, f.pairs, 1);
  const ScalarField exact = interpolate(f.mesh, [&](const Vec3 & x) { return f.y1(x); });
  const FourierTable t = upsilon_beta(exact, f.flat, f.zero, k1, {0.1, 0.2}, {0.2, 0.3, 0.4});
  for (const auto & row : t.rows) CHECK(row.upsilon == 0.0);
  REQUIRE(t.beta_by_R.size() == 3);
  for (std::size_t i = 0; i < t.R_values.size(); ++i) {
    const double R = t.R_values[i];
    const double phi = fourier_coefficient(exact, k1.pairs[0], f.sphere, f.sphere_mats, R);
    CHECK(t.beta_by_R[i][0] == doctest::Approx(phi / std::sqrt(R)).epsilon(1e-9));
    CHECK(t.beta_by_R[i][0] == doctest::Approx(1.0).epsilon(0.01));
  }
  CHECK_THROWS_AS(upsilon_beta(exact, f.flat, f.zero, k1, {0.45}, {0.2, 0.4}), Error);
}

TEST_CASE("Parseval partial sums")
{
  const auto & f = fx();
  for (const ScalarField * u : {&f.x3, &f.sq, &f.x1sq}) {
    for (double lambda : {0.1, 0.2, 0.4}) {
      const ParsevalCheck pc = parseval_check(*u, f.sphere, f.sphere_mats, f.pairs, lambda);
      CHECK(pc.pass);
      CHECK(pc.partial_sum <= (1.0 + 1e-3) * pc.norm);
    }
  }
}
