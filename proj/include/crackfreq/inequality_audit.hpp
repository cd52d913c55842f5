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

#include "crackfreq/fem.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace crackfreq
{

// residual >= 0 means the inequality holds; identities report -|lhs - rhs|.
struct AuditReport
{
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double radius = 0.0;
  std::string field;
  std::string mode;
};

AuditReport inequality_report(const std::string & name, double lhs, double rhs, double tolerance, double radius);
AuditReport identity_report(const std::string & name, double lhs, double rhs, double tolerance, double radius);

AuditReport hardy_residual(const ScalarField & u, double r, double tolerance_scale = 1.0);

struct CoercivityResult
{
  AuditReport report;
  double C = 0.0;
  double eps = 0.0;
  double r0 = 0.0;  // largest radius allowed by C r^eps < (N-1)/4
};

// Smallest C >= 0 making the inequality hold on u at each probe radius (mode a2).
double fit_coercivity_constant(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const std::vector<double> & probe_radii);

// C < 0 selects 4 amplitude / (N-1) in mode a1; mode a2 requires an explicit C.
CoercivityResult coercivity_audit(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  double r, double C = -1.0, double tolerance_scale = 1.0);

// sup over B_r of |f(x)| |x|^2 on a 100 x 100 radial-angular grid.
double xi_f(const PotentialSpec & f, double r);

// Polynomial of degree <= 3 in (x1, x2, x3); coefficients follow cubic_exponents().
struct Cubic
{
  std::array<double, 20> coeffs{};
};

const std::array<std::array<int, 3>, 20> & cubic_exponents();
Cubic random_cubic(std::mt19937_64 & rng);

struct RellichResult
{
  double max_residual = 0.0;
  double scale = 0.0;
  bool pass = false;
};

RellichResult rellich_necas_residual(const Cubic & v, const CoefficientBundle & bundle,
  const std::vector<Vec3> & points);

enum class PohozaevMode { a1_inequality, a2_inequality, approx_identity };

struct PohozaevTerms
{
  double sphere_energy = 0.0;  // r int_{dB_r} A grad U . grad U
  double sphere_normal = 0.0;  // 2r int_{dB_r} (A grad U . nu)^2 / mu
  double gamma_term = 0.0;  // approximating-domain boundary term, nonnegative in theory
  double volume = 0.0;
  double potential = 0.0;
};

AuditReport pohozaev_residual(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  double r, PohozaevMode mode, double tolerance_scale = 1.0, PohozaevTerms * terms = nullptr);
// One report per radius with the volume integrals accumulated once.
std::vector<AuditReport> pohozaev_profile(const ScalarField & u, const CoefficientBundle & bundle,
  const PotentialSpec & f, const std::vector<double> & radii, PohozaevMode mode, double tolerance_scale = 1.0,
  std::vector<PohozaevTerms> * terms = nullptr);

AuditReport boundary_identity_residual(const ScalarField & u, const CoefficientBundle & bundle,
  const PotentialSpec & f, double r, double tolerance_scale = 1.0);

struct StarShapedResult
{
  double min_value = 0.0;
  Vec3 argmin = Vec3::Zero();
};

StarShapedResult star_shaped_upstairs(const CoefficientBundle & bundle, double r, int n, double alpha,
  int sample_count = 40000);

std::string audits_json(const std::vector<AuditReport> & reports);
std::string audits_table(const std::vector<AuditReport> & reports);

}  // namespace crackfreq
