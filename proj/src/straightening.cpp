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

#include <algorithm>
#include <limits>

namespace crackfreq
{

namespace
{

double halton(int index, int base)
{
  double f = 1.0;
  double r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

Vec<Dual> seed(const Vecd & x)
{
  const int d = static_cast<int>(x.size());
  Vec<Dual> xd(d);
  for (int i = 0; i < d; ++i) {
    xd[i].value() = x[i];
    xd[i].derivatives() = Vecd::Unit(d, i);
  }
  return xd;
}

bool normalization_holds(const CoefficientBundle & b, const std::vector<Vecd> & pts)
{
  for (const auto & x : pts) {
    const Matd a = coefficient_A<double>(b, x);
    Eigen::SelfAdjointEigenSolver<Matd> es(a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 0.5) return false;
    if (es.eigenvalues().maxCoeff() > 2.0) return false;
    if (coefficient_mu<double>(b, x) < 0.5) return false;
  }
  return true;
}

}  // namespace

std::vector<Vecd> ball_samples(int dim, double r, int count, bool include_sphere)
{
  std::vector<Vecd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 1; pts.size() < static_cast<std::size_t>(count); ++k) {
    // Gaussian-free direction: uniform in the cube, rejected outside the unit ball.
    Vecd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = 2.0 * halton(k, kPrimes[i]) - 1.0;
    const double n = v.norm();
    if (n > 1.0 || n < 1e-12) continue;
    const bool on_sphere = include_sphere && (pts.size() % 2 == 0);
    pts.push_back(on_sphere ? Vecd(v * (r / n)) : Vecd(v * r));
  }
  return pts;
}

CoefficientBundle build_bundle(const CrackSpec & crack)
{
  CoefficientBundle b;
  b.crack = crack;
  const int d = crack.dim_n + 1;
  double r = crack.domain_radius;
  bool ok = false;
  while (r >= 1e-3) {
    if (normalization_holds(b, ball_samples(d, r, 1000, true))) {
      ok = true;
      break;
    }
    r *= 0.5;
  }
  if (!ok) {
    throw Error(ErrorKind::construction,
      "ellipticity/norm normalization fails even at radius 1e-3 (crack too wild)");
  }
  b.r_tilde = r;
  const auto pts = ball_samples(d, r, 1000, true);
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dist = (pts[i] - pts[i + 1]).norm();
    if (dist < 1e-12) continue;
    const Matd diff = coefficient_A<double>(b, pts[i]) - coefficient_A<double>(b, pts[i + 1]);
    lip = std::max(lip, diff.operatorNorm() / dist);
  }
  b.lipschitz_bound = lip;
  return b;
}

Mat3 coefficient_A3(const CoefficientBundle & b, const Vec3 & x)
{
  if (b.crack.family == CrackFamily::flat) return Mat3::Identity();
  return Mat3(coefficient_A<double>(b, to_vecd(x)));
}

double coefficient_mu3(const CoefficientBundle & b, const Vec3 & x)
{
  if (b.crack.family == CrackFamily::flat) return 1.0;
  return coefficient_mu<double>(b, to_vecd(x));
}

Vec3 coefficient_beta3(const CoefficientBundle & b, const Vec3 & x)
{
  if (b.crack.family == CrackFamily::flat) return x;
  return to_vec3(coefficient_beta<double>(b, to_vecd(x)));
}

Vecd dA_form(const CoefficientBundle & b, const Vecd & x, const Vecd & v1, const Vecd & v2)
{
  const int n = b.crack.dim_n;
  const int d = n + 1;
  if (x.size() != d || v1.size() != d || v2.size() != d) {
    throw Error(ErrorKind::domain, "dA_form expects vectors of length N+1");
  }
  Vecd out = Vecd::Zero(d);
  if (b.crack.family == CrackFamily::flat) return out;
  const Vecd xp = x.head(n - 1);
  const Vecd grad = crack_grad<double>(b.crack, xp);
  const Matd hess = crack_hessian(b.crack, xp);
  // A = [[I, -grad g, 0], [-grad g^T, 1 + |grad g|^2, 0], [0, 0, 1]] depends on x' only.
  for (int l = 0; l < n - 1; ++l) {
    double s = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      s -= hess(i, l) * (v1[i] * v2[n - 1] + v1[n - 1] * v2[i]);
    }
    s += 2.0 * grad.dot(hess.col(l)) * v1[n - 1] * v2[n - 1];
    out[l] = s;
  }
  return out;
}

Matd jac_beta(const CoefficientBundle & b, const Vecd & x)
{
  const int d = b.ambient();
  if (x.squaredNorm() == 0.0) return Matd::Identity(d, d);
  const Vec<Dual> beta = coefficient_beta<Dual>(b, seed(x));
  Matd j(d, d);
  for (int i = 0; i < d; ++i) j.row(i) = beta[i].derivatives().transpose();
  return j;
}

double div_beta(const CoefficientBundle & b, const Vecd & x) { return jac_beta(b, x).trace(); }

Vecd straighten_point(const CoefficientBundle & b, const Vecd & p, Direction direction)
{
  if (p.size() != b.ambient()) throw Error(ErrorKind::domain, "point has wrong dimension");
  if (p.norm() > b.r_tilde * (1.0 + 1e-12)) {
    throw Error(ErrorKind::domain, "point lies outside the radius of validity");
  }
  return direction == Direction::forward ? bundle_F<double>(b, p) : bundle_F_inverse<double>(b, p);
}

AsymptoticConstants asymptotic_constants(
  const CoefficientBundle & b, const std::vector<double> & radii, int samples_per_radius)
{
  AsymptoticConstants k;
  const int d = b.ambient();
  for (double r : radii) {
    const auto pts = ball_samples(d, 1.0, 2 * samples_per_radius, true);
    for (std::size_t i = 0; i < pts.size(); i += 2) {
      const Vecd x = pts[i] * r;
      const Matd a = coefficient_A<double>(b, x);
      k.k_a = std::max(k.k_a, (a - Matd::Identity(d, d)).operatorNorm() / r);
      k.k_mu = std::max(k.k_mu, std::abs(coefficient_mu<double>(b, x) - 1.0) / r);
      k.k_beta = std::max(k.k_beta, (coefficient_beta<double>(b, x) - x).norm() / (r * r));
    }
  }
  return k;
}

PotentialSpec make_zero_potential()
{
  PotentialSpec f;
  f.mode = PotentialMode::a1;
  f.delta = 1.0;
  f.amplitude = 0.0;
  return f;
}

PotentialSpec make_a1_potential(double delta, double amplitude)
{
  if (!(delta > 0.0)) throw Error(ErrorKind::construction, "a1 potential requires delta > 0");
  PotentialSpec f;
  f.mode = PotentialMode::a1;
  f.delta = delta;
  f.amplitude = amplitude;
  return f;
}

PotentialSpec make_a2_potential(const std::vector<PotentialTerm> & terms, double p, int dim_n)
{
  if (!(p > 0.5 * (dim_n + 1))) {
    throw Error(ErrorKind::construction, "a2 potential requires p > (N+1)/2");
  }
  PotentialSpec f;
  f.mode = PotentialMode::a2;
  f.p = p;
  f.terms = terms;
  return f;
}

PotentialSpec make_a2_constant(double value, double p)
{
  PotentialTerm t;
  t.coef = value;
  return make_a2_potential({t}, p, 2);
}

double potential_epsilon(const PotentialSpec & f, int dim_n)
{
  if (f.mode == PotentialMode::a1) return f.delta;
  return (2.0 * f.p - dim_n - 1.0) / f.p;
}

double transform_potential(const CoefficientBundle & b, const PotentialSpec & f, const Vecd & x)
{
  return transformed_potential<double>(b, f, x);
}

double transform_potential3(const CoefficientBundle & b, const PotentialSpec & f, const Vec3 & x)
{
  if (f.is_zero()) return 0.0;
  return transformed_potential<double>(b, f, to_vecd(x));
}

Vecd transformed_potential_gradient(const CoefficientBundle & b, const PotentialSpec & f, const Vecd & x)
{
  const int d = b.ambient();
  if (f.is_zero()) return Vecd::Zero(d);
  const Dual v = transformed_potential<Dual>(b, f, seed(x));
  Vecd g = v.derivatives();
  if (g.size() != d) g = Vecd::Zero(d);
  return g;
}

}  // namespace crackfreq
