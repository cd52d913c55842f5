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

#include "crackfreq/crack_geometry.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <array>
#include <cmath>
#include <vector>

namespace crackfreq
{

// Shear straightening F(x', x_N, x_{N+1}) = (x', x_N + g(x'), x_{N+1}) and its coefficients.
struct CoefficientBundle
{
  CrackSpec crack;
  double r_tilde = 0.0;
  double lipschitz_bound = 0.0;

  int ambient() const { return crack.dim_n + 1; }
};

CoefficientBundle build_bundle(const CrackSpec & crack);

using Dual = Eigen::AutoDiffScalar<Vecd>;

template <typename Scalar>
Vec<Scalar> bundle_F(const CoefficientBundle & b, const Vec<Scalar> & x)
{
  const int n = b.crack.dim_n;
  Vec<Scalar> y = x;
  y[n - 1] += crack_g<Scalar>(b.crack, Vec<Scalar>(x.head(n - 1)));
  return y;
}

template <typename Scalar>
Vec<Scalar> bundle_F_inverse(const CoefficientBundle & b, const Vec<Scalar> & y)
{
  const int n = b.crack.dim_n;
  Vec<Scalar> x = y;
  x[n - 1] -= crack_g<Scalar>(b.crack, Vec<Scalar>(y.head(n - 1)));
  return x;
}

template <typename Scalar>
Mat<Scalar> jac_F(const CoefficientBundle & b, const Vec<Scalar> & x)
{
  const int n = b.crack.dim_n;
  Mat<Scalar> j = Mat<Scalar>::Identity(n + 1, n + 1);
  const Vec<Scalar> grad = crack_grad<Scalar>(b.crack, Vec<Scalar>(x.head(n - 1)));
  for (int i = 0; i < n - 1; ++i) j(n - 1, i) = grad[i];
  return j;
}

template <typename Scalar>
Scalar det_jac(const CoefficientBundle &, const Vec<Scalar> &)
{
  return Scalar(1);
}

template <typename Scalar>
Mat<Scalar> coefficient_A(const CoefficientBundle & b, const Vec<Scalar> & x)
{
  const int n = b.crack.dim_n;
  // Jac F is unit lower triangular; its inverse negates the off-diagonal row.
  Mat<Scalar> jinv = Mat<Scalar>::Identity(n + 1, n + 1);
  const Vec<Scalar> grad = crack_grad<Scalar>(b.crack, Vec<Scalar>(x.head(n - 1)));
  for (int i = 0; i < n - 1; ++i) jinv(n - 1, i) = -grad[i];
  return jinv * jinv.transpose();
}

template <typename Scalar>
Scalar coefficient_mu(const CoefficientBundle & b, const Vec<Scalar> & x)
{
  const Scalar r2 = x.squaredNorm();
  if (r2 == Scalar(0)) return Scalar(1);
  return (coefficient_A<Scalar>(b, x) * x).dot(x) / r2;
}

template <typename Scalar>
Vec<Scalar> coefficient_beta(const CoefficientBundle & b, const Vec<Scalar> & x)
{
  const Scalar r2 = x.squaredNorm();
  if (r2 == Scalar(0)) return x;
  const Vec<Scalar> ax = coefficient_A<Scalar>(b, x) * x;
  return ax * (r2 / ax.dot(x));
}

Mat3 coefficient_A3(const CoefficientBundle & b, const Vec3 & x);
double coefficient_mu3(const CoefficientBundle & b, const Vec3 & x);
Vec3 coefficient_beta3(const CoefficientBundle & b, const Vec3 & x);

// (sum_{j,k} d a_jk / d x_l v1_j v2_k)_{l=1..N}, last component 0.
Vecd dA_form(const CoefficientBundle & b, const Vecd & x, const Vecd & v1, const Vecd & v2);
Matd jac_beta(const CoefficientBundle & b, const Vecd & x);
double div_beta(const CoefficientBundle & b, const Vecd & x);

enum class Direction { forward, inverse };
Vecd straighten_point(const CoefficientBundle & b, const Vecd & p, Direction direction);

// Fitted constants K with |A-Id| <= K r, |mu-1| <= K r, |beta-x| <= K r^2 on spheres |x| = r.
struct AsymptoticConstants
{
  double k_a = 0.0;
  double k_mu = 0.0;
  double k_beta = 0.0;
};
AsymptoticConstants asymptotic_constants(
  const CoefficientBundle & b, const std::vector<double> & radii, int samples_per_radius = 200);

// Deterministic quasi-random points in the closed ball of radius r (Halton sequence).
std::vector<Vecd> ball_samples(int dim, double r, int count, bool include_sphere);

// Potentials

enum class PotentialMode { a1, a2 };
enum class TrigKind { none, sine, cosine };

struct PotentialTerm
{
  double coef = 0.0;
  std::array<int, kMaxAmbient> powers{};
  TrigKind trig = TrigKind::none;
  std::array<double, kMaxAmbient> wave{};
  double phase = 0.0;
};

// a1: f(x) = amplitude |x|^{-2+delta}; a2: finite sum of polynomial times trig terms.
struct PotentialSpec
{
  PotentialMode mode = PotentialMode::a1;
  double delta = 1.0;
  double amplitude = 0.0;
  double p = 0.0;
  std::vector<PotentialTerm> terms;

  bool is_zero() const
  {
    return mode == PotentialMode::a1 ? amplitude == 0.0 : terms.empty();
  }
};

PotentialSpec make_zero_potential();
PotentialSpec make_a1_potential(double delta, double amplitude);
PotentialSpec make_a2_constant(double value, double p);
PotentialSpec make_a2_potential(const std::vector<PotentialTerm> & terms, double p, int dim_n = 2);

// Exponent eps: delta in a1, (2p-N-1)/p in a2.
double potential_epsilon(const PotentialSpec & f, int dim_n);

template <typename Scalar>
Scalar potential_value(const PotentialSpec & f, const Vec<Scalar> & x)
{
  using std::cos;
  using std::pow;
  using std::sin;
  using std::sqrt;
  if (f.mode == PotentialMode::a1) {
    if (f.amplitude == 0.0) return Scalar(0);
    const Scalar r2 = x.squaredNorm();
    if (r2 == Scalar(0)) {
      if (f.delta == 2.0) return Scalar(f.amplitude);
      throw Error(ErrorKind::singularity, "potential evaluated at the origin in mode a1");
    }
    return Scalar(f.amplitude) * pow(sqrt(r2), f.delta - 2.0);
  }
  Scalar sum(0);
  for (const auto & t : f.terms) {
    Scalar term(t.coef);
    for (int i = 0; i < x.size(); ++i) {
      for (int k = 0; k < t.powers[i]; ++k) term *= x[i];
    }
    if (t.trig != TrigKind::none) {
      Scalar arg(t.phase);
      for (int i = 0; i < x.size(); ++i) arg += Scalar(t.wave[i]) * x[i];
      term *= (t.trig == TrigKind::sine) ? Scalar(sin(arg)) : Scalar(cos(arg));
    }
    sum += term;
  }
  return sum;
}

template <typename Scalar>
Scalar transformed_potential(const CoefficientBundle & b, const PotentialSpec & f, const Vec<Scalar> & x)
{
  using std::abs;
  return abs(det_jac<Scalar>(b, x)) * potential_value<Scalar>(f, bundle_F<Scalar>(b, x));
}

// f~(x) = |det Jac F(x)| f(F(x)).
double transform_potential(const CoefficientBundle & b, const PotentialSpec & f, const Vecd & x);
double transform_potential3(const CoefficientBundle & b, const PotentialSpec & f, const Vec3 & x);
Vecd transformed_potential_gradient(const CoefficientBundle & b, const PotentialSpec & f, const Vecd & x);

}  // namespace crackfreq
