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

#include "crackfreq/straightening.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace crackfreq;

namespace
{

Vecd v3(double a, double b, double c)
{
  Vecd out(3);
  out << a, b, c;
  return out;
}

Vecd e(int i)
{
  Vecd out = Vecd::Zero(3);
  out[i] = 1.0;
  return out;
}

std::vector<Vecd> random_points(int count, double r, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vecd> pts;
  while (static_cast<int>(pts.size()) < count) {
    Vecd x = v3(u(rng), u(rng), u(rng));
    if (x.norm() > 1.0 || x.norm() < 1e-3) continue;
    pts.push_back(x * r);
  }
  return pts;
}

}  // namespace

TEST_CASE("flat bundle is the identity")
{
  const CoefficientBundle b = build_bundle(make_flat_crack());
  CHECK(b.r_tilde == 0.5);
  for (const Vecd & x : random_points(50, 0.5, 1)) {
    CHECK((coefficient_A<double>(b, x) - Matd::Identity(3, 3)).norm() == 0.0);
    CHECK(coefficient_mu<double>(b, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((coefficient_beta<double>(b, x) - x).norm() < 1e-15);
    CHECK(dA_form(b, x, e(0), e(1)).norm() == 0.0);
  }
}

TEST_CASE("radial quadratic coefficients at (1, 0, 0)")
{
  const CoefficientBundle b = build_bundle(make_radial_quadratic_crack(0.1, 2, 2.0));
  const Vecd x = v3(1, 0, 0);
  Matd expected(3, 3);
  expected << 1.0, -0.2, 0.0, -0.2, 1.04, 0.0, 0.0, 0.0, 1.0;
  CHECK((coefficient_A<double>(b, x) - expected).norm() < 1e-14);
  CHECK(det_jac<double>(b, x) == 1.0);
  CHECK(coefficient_mu<double>(b, x) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((coefficient_beta<double>(b, x) - v3(1, -0.2, 0)).norm() < 1e-14);

  const Vecd d = dA_form(b, x, e(1), e(1));
  CHECK(d[0] == doctest::Approx(0.08).epsilon(1e-13));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 0.0);
}

TEST_CASE("straighten_point examples and round trip")
{
  const CoefficientBundle b = build_bundle(make_radial_quadratic_crack(0.1, 2, 2.0));
  REQUIRE(b.r_tilde >= 1.0);
  CHECK(straighten_point(b, v3(0, 0, 0), Direction::forward).norm() == 0.0);
  CHECK((straighten_point(b, v3(1, 0, 0), Direction::forward) - v3(1, 0.1, 0)).norm() < 1e-15);

  const CoefficientBundle c = build_bundle(make_polynomial_crack({0.0, 0.0, 0.3, -0.2, 0.1}));
  for (const Vecd & p : random_points(100, 0.95 * c.r_tilde, 2)) {
    const Vecd q = straighten_point(c, straighten_point(c, p, Direction::forward), Direction::inverse);
    CHECK((q - p).norm() < 1e-12);
  }
  CHECK_THROWS_AS(straighten_point(c, v3(2.0 * c.r_tilde, 0, 0), Direction::forward), Error);
}

TEST_CASE("forward map sends the flat slit onto the crack")
{
  const CrackSpec crack = make_radial_quadratic_crack(0.3);
  const CoefficientBundle b = build_bundle(crack);
  Vecd xp(1);
  for (int i = 0; i <= 10; ++i) {
    const double x1 = -0.3 + 0.06 * i;
    const Vecd y = straighten_point(b, v3(x1, 0.1, 0.0), Direction::forward);
    CHECK(contains_crack(crack, y, false));
    const Vecd below = straighten_point(b, v3(x1, -0.01, 0.0), Direction::forward);
    CHECK_FALSE(contains_crack(crack, below, false));
  }
}

TEST_CASE("transform_potential examples")
{
  const CoefficientBundle flat = build_bundle(make_flat_crack());
  const CoefficientBundle shear = build_bundle(make_radial_quadratic_crack(0.2));
  const PotentialSpec zero = make_zero_potential();
  const PotentialSpec one = make_a2_constant(1.0, 2.0);
  const PotentialSpec a1 = make_a1_potential(1.5, 2.0);
  for (const Vecd & x : random_points(40, 0.5, 3)) {
    CHECK(transform_potential(shear, zero, x) == 0.0);
    CHECK(transform_potential(shear, one, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transform_potential(flat, a1, x) == doctest::Approx(potential_value<double>(a1, x)).epsilon(1e-15));
    // |F(x)| <= |x| + c |x|^2 keeps the a1 decay.
    const double bound = 2.0 * std::pow(x.norm(), -0.5) * std::pow(1.0 + 0.2 * 0.5, 0.5);
    CHECK(std::abs(transform_potential(shear, a1, x)) <= bound);
  }
  try {
    transform_potential(shear, a1, v3(0, 0, 0));
    CHECK(false);
  } catch (const Error & err) {
    CHECK(err.kind() == ErrorKind::singularity);
  }
}

TEST_CASE("potential construction preconditions")
{
  CHECK_THROWS_AS(make_a1_potential(0.0, 1.0), Error);
  CHECK_THROWS_AS(make_a2_constant(1.0, 1.5), Error);
  CHECK(potential_epsilon(make_a1_potential(3.0, 1.0), 2) == 3.0);
  CHECK(potential_epsilon(make_a2_constant(1.0, 3.0), 2) == doctest::Approx(1.0));
}

TEST_CASE("bundle invariants on sampled points")
{
  for (const CrackSpec & crack : {make_radial_quadratic_crack(0.1), make_polynomial_crack({0.0, 0.0, -0.4, 0.3, 0.2}),
         make_radial_quadratic_crack(0.5)}) {
    const CoefficientBundle b = build_bundle(crack);
    CHECK(b.r_tilde > 0.0);
    CHECK((coefficient_A<double>(b, v3(0, 0, 0)) - Matd::Identity(3, 3)).norm() == 0.0);
    CHECK(coefficient_mu<double>(b, v3(0, 0, 0)) == 1.0);
    for (const Vecd & x : random_points(200, b.r_tilde, 4)) {
      const Matd a = coefficient_A<double>(b, x);
      CHECK((a - a.transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Matd> es(a);
      CHECK(es.eigenvalues().minCoeff() >= 0.5);
      CHECK(es.eigenvalues().maxCoeff() <= 2.0);
      CHECK(coefficient_mu<double>(b, x) >= 0.5);
      const double bx = coefficient_beta<double>(b, x).dot(x);
      CHECK(std::abs(bx - x.squaredNorm()) <= 1e-12 * x.squaredNorm());
      // Last row and column: (0, 0, det Jac F).
      CHECK(a(2, 0) == 0.0);
      CHECK(a(2, 1) == 0.0);
      CHECK(a(2, 2) == det_jac<double>(b, x));
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const Vecd d1 = dA_form(b, x, e(i), e(j));
          const Vecd d2 = dA_form(b, x, e(j), e(i));
          CHECK((d1 - d2).norm() < 1e-15);
          CHECK(d1[2] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("dA matches central differences of A")
{
  const CoefficientBundle b = build_bundle(make_polynomial_crack({0.0, 0.0, 0.3, -0.5, 0.4}));
  const double step = 1e-5;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Vecd & x : random_points(50, 0.9 * b.r_tilde, 5)) {
    const Vecd v1 = v3(u(rng), u(rng), u(rng));
    const Vecd v2 = v3(u(rng), u(rng), u(rng));
    const Vecd d = dA_form(b, x, v1, v2);
    for (int l = 0; l < 2; ++l) {
      Vecd xp = x, xm = x;
      xp[l] += step;
      xm[l] -= step;
      const Matd da = (coefficient_A<double>(b, xp) - coefficient_A<double>(b, xm)) / (2.0 * step);
      const double fd = v1.dot(da * v2);
      CHECK(std::abs(fd - d[l]) <= 1e-6 * std::max(1.0, std::abs(d[l])));
    }
  }
}

TEST_CASE("asymptotic constants and Jac beta near the origin")
{
  const CoefficientBundle b = build_bundle(make_radial_quadratic_crack(0.4));
  const std::vector<double> radii = {0.2, 0.1, 0.05, 0.025};
  const AsymptoticConstants k = asymptotic_constants(b, radii);
  CHECK(std::isfinite(k.k_a));
  CHECK(k.k_a > 0.0);
  for (double r : radii) {
    for (const Vecd & x : ball_samples(3, r, 100, true)) {
      if (std::abs(x.norm() - r) > 1e-12) continue;
      CHECK((coefficient_A<double>(b, x) - Matd::Identity(3, 3)).operatorNorm() <= k.k_a * r * (1.0 + 1e-9));
      CHECK(std::abs(coefficient_mu<double>(b, x) - 1.0) <= k.k_mu * r * (1.0 + 1e-9));
      CHECK((coefficient_beta<double>(b, x) - x).norm() <= k.k_beta * r * r * (1.0 + 1e-9));
    }
  }

  std::vector<double> dev;
  for (double r : radii) {
    double worst = 0.0;
    for (const Vecd & x : ball_samples(3, r, 400, true)) {
      if (std::abs(x.norm() - r) > 1e-12) continue;
      worst = std::max(worst, (jac_beta(b, x) - Matd::Identity(3, 3)).operatorNorm());
    }
    dev.push_back(worst);
  }
  for (std::size_t i = 1; i < dev.size(); ++i) CHECK(dev[i] <= 0.5 * dev[i - 1] * 1.05);
}
