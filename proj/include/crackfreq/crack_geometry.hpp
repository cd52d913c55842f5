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
#include <cmath>
#include <vector>

namespace crackfreq
{

enum class CrackFamily { flat, polynomial, radial_quadratic };

// Crack profile g on R^{N-1}; the crack is {x_{N+1} = 0, x_N >= g(x')}.
struct CrackSpec
{
  CrackFamily family = CrackFamily::flat;
  std::vector<double> coeffs;
  int dim_n = 2;
  double domain_radius = 0.5;
  // Exponents of the monomials matching coeffs (polynomial family only).
  std::vector<std::array<int, kMaxAmbient>> exponents;

  int num_vars() const { return dim_n - 1; }
};

// Monomials of total degree <= 4 in m variables, graded then lexicographic.
std::vector<std::array<int, kMaxAmbient>> monomial_exponents(int m, int max_degree = 4);

CrackSpec make_flat_crack(int dim_n = 2, double domain_radius = 0.5);
CrackSpec make_radial_quadratic_crack(double c, int dim_n = 2, double domain_radius = 0.5);
// coeffs follow monomial_exponents(dim_n - 1); missing trailing entries are zero.
CrackSpec make_polynomial_crack(
  const std::vector<double> & coeffs, int dim_n = 2, double domain_radius = 0.5);

template <typename Scalar>
Scalar crack_g(const CrackSpec & spec, const Vec<Scalar> & xp)
{
  switch (spec.family) {
    case CrackFamily::flat:
      return Scalar(0);
    case CrackFamily::radial_quadratic:
      return Scalar(spec.coeffs[0]) * xp.squaredNorm();
    case CrackFamily::polynomial: {
      Scalar sum(0);
      for (std::size_t m = 0; m < spec.coeffs.size(); ++m) {
        if (spec.coeffs[m] == 0.0) continue;
        Scalar term(spec.coeffs[m]);
        for (int i = 0; i < spec.num_vars(); ++i) {
          for (int p = 0; p < spec.exponents[m][i]; ++p) term *= xp[i];
        }
        sum += term;
      }
      return sum;
    }
  }
  return Scalar(0);
}

template <typename Scalar>
Vec<Scalar> crack_grad(const CrackSpec & spec, const Vec<Scalar> & xp)
{
  const int m_vars = spec.num_vars();
  Vec<Scalar> grad(m_vars);
  for (int i = 0; i < m_vars; ++i) grad[i] = Scalar(0);
  switch (spec.family) {
    case CrackFamily::flat:
      break;
    case CrackFamily::radial_quadratic:
      for (int i = 0; i < m_vars; ++i) grad[i] = Scalar(2.0 * spec.coeffs[0]) * xp[i];
      break;
    case CrackFamily::polynomial:
      for (std::size_t m = 0; m < spec.coeffs.size(); ++m) {
        if (spec.coeffs[m] == 0.0) continue;
        for (int d = 0; d < m_vars; ++d) {
          const int ed = spec.exponents[m][d];
          if (ed == 0) continue;
          Scalar term(spec.coeffs[m] * ed);
          for (int i = 0; i < m_vars; ++i) {
            const int e = spec.exponents[m][i] - (i == d ? 1 : 0);
            for (int p = 0; p < e; ++p) term *= xp[i];
          }
          grad[d] += term;
        }
      }
      break;
  }
  return grad;
}

Matd crack_hessian(const CrackSpec & spec, const Vecd & xp);

struct CrackLocalData
{
  double g = 0.0;
  Vecd grad_g;
  double star_defect = 0.0;
  Vecd normal;
};

CrackLocalData crack_local_data(const CrackSpec & spec, const Vecd & xp);

bool contains_crack(const CrackSpec & spec, const Vecd & p, bool straightened);

}  // namespace crackfreq
