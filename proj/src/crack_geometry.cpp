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

#include "crackfreq/crack_geometry.hpp"

#include <sstream>

namespace crackfreq
{

namespace
{

void check_common(int dim_n, double domain_radius)
{
  if (dim_n < 2 || dim_n + 1 > kMaxAmbient) {
    throw Error(ErrorKind::construction, "dim_n must lie in [2, " +
      std::to_string(kMaxAmbient - 1) + "]");
  }
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
    throw Error(ErrorKind::construction, "domain_radius must be positive");
  }
}

}  // namespace

std::vector<std::array<int, kMaxAmbient>> monomial_exponents(int m, int max_degree)
{
  std::vector<std::array<int, kMaxAmbient>> out;
  for (int degree = 0; degree <= max_degree; ++degree) {
    std::array<int, kMaxAmbient> e{};
    // Enumerate compositions of degree into m parts, first variable highest.
    std::vector<std::array<int, kMaxAmbient>> level;
    auto rec = [&](auto && self, int var, int left) -> void {
      if (var == m - 1) {
        e[var] = left;
        level.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[var] = k;
        self(self, var + 1, left - k);
      }
    };
    if (m == 0) continue;
    rec(rec, 0, degree);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

CrackSpec make_flat_crack(int dim_n, double domain_radius)
{
  check_common(dim_n, domain_radius);
  CrackSpec spec;
  spec.family = CrackFamily::flat;
  spec.dim_n = dim_n;
  spec.domain_radius = domain_radius;
  return spec;
}

CrackSpec make_radial_quadratic_crack(double c, int dim_n, double domain_radius)
{
  check_common(dim_n, domain_radius);
  if (!std::isfinite(c)) throw Error(ErrorKind::construction, "c must be finite");
  CrackSpec spec;
  spec.family = CrackFamily::radial_quadratic;
  spec.coeffs = {c};
  spec.dim_n = dim_n;
  spec.domain_radius = domain_radius;
  return spec;
}

CrackSpec make_polynomial_crack(const std::vector<double> & coeffs, int dim_n, double domain_radius)
{
  check_common(dim_n, domain_radius);
  CrackSpec spec;
  spec.family = CrackFamily::polynomial;
  spec.dim_n = dim_n;
  spec.domain_radius = domain_radius;
  const auto all = monomial_exponents(dim_n - 1, 4);
  if (coeffs.size() > all.size()) {
    std::ostringstream msg;
    msg << "polynomial crack accepts at most " << all.size()
        << " coefficients (total degree <= 4)";
    throw Error(ErrorKind::construction, msg.str());
  }
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    int degree = 0;
    for (int i = 0; i < dim_n - 1; ++i) degree += all[m][i];
    if (!std::isfinite(coeffs[m])) throw Error(ErrorKind::construction, "non-finite coefficient");
    if (degree <= 1 && coeffs[m] != 0.0) {
      throw Error(ErrorKind::construction,
        "constant and linear coefficients must be zero so that g(0)=0 and grad g(0)=0");
    }
  }
  spec.coeffs = coeffs;
  spec.exponents.assign(all.begin(), all.begin() + static_cast<long>(coeffs.size()));
  return spec;
}

Matd crack_hessian(const CrackSpec & spec, const Vecd & xp)
{
  const int m_vars = spec.num_vars();
  Matd hess = Matd::Zero(m_vars, m_vars);
  switch (spec.family) {
    case CrackFamily::flat:
      break;
    case CrackFamily::radial_quadratic:
      hess.diagonal().setConstant(2.0 * spec.coeffs[0]);
      break;
    case CrackFamily::polynomial:
      for (std::size_t m = 0; m < spec.coeffs.size(); ++m) {
        if (spec.coeffs[m] == 0.0) continue;
        for (int a = 0; a < m_vars; ++a) {
          for (int b = 0; b < m_vars; ++b) {
            std::array<int, kMaxAmbient> e = spec.exponents[m];
            double factor = spec.coeffs[m];
            factor *= e[a];
            e[a] -= 1;
            if (e[a] < 0) continue;
            factor *= e[b];
            e[b] -= 1;
            if (e[b] < 0 || factor == 0.0) continue;
            double term = factor;
            for (int i = 0; i < m_vars; ++i) {
              for (int p = 0; p < e[i]; ++p) term *= xp[i];
            }
            hess(a, b) += term;
          }
        }
      }
      break;
  }
  return hess;
}

CrackLocalData crack_local_data(const CrackSpec & spec, const Vecd & xp)
{
  if (xp.size() != spec.num_vars()) {
    throw Error(ErrorKind::domain, "xp must have length N-1");
  }
  if (xp.norm() > spec.domain_radius * (1.0 + 1e-14)) {
    throw Error(ErrorKind::domain, "point lies outside the crack domain radius");
  }
  CrackLocalData out;
  out.g = crack_g<double>(spec, xp);
  out.grad_g = crack_grad<double>(spec, xp);
  out.star_defect = out.g - out.grad_g.dot(xp);
  const int n = spec.dim_n;
  out.normal = Vecd(n);
  out.normal.head(n - 1) = -out.grad_g;
  out.normal[n - 1] = 1.0;
  out.normal /= std::sqrt(1.0 + out.grad_g.squaredNorm());
  return out;
}

bool contains_crack(const CrackSpec & spec, const Vecd & p, bool straightened)
{
  const int n = spec.dim_n;
  if (p.size() != n + 1) throw Error(ErrorKind::domain, "point must have length N+1");
  if (std::abs(p[n]) > 1e-12) return false;
  const double threshold = straightened ? 0.0 : crack_g<double>(spec, Vecd(p.head(n - 1)));
  return p[n - 1] >= threshold;
}

}  // namespace crackfreq
