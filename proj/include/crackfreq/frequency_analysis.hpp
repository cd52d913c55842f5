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
#include "crackfreq/sphere_spectrum.hpp"

#include <string>
#include <vector>

namespace crackfreq
{

struct SurfaceSample
{
  Vec3 x;
  Vec3 normal;
  double weight;  // includes r^2
  double value;
  Vec3 grad;
};

// Field samples on |x| = r at the product-rule nodes; with rec the gradient is the recovered one.
std::vector<SurfaceSample> sample_sphere(const ScalarField & u, double r, const RecoveredGradient * rec = nullptr);

// Throws a resolution error when r is below four local edge lengths or beyond the mesh.
void check_resolved(const ScalarField & u, double r);

struct HeightEnergy
{
  double H = 0.0;
  double D = 0.0;
};

double height(const ScalarField & u, const CoefficientBundle & bundle, double r);
HeightEnergy height_energy(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f, double r);

// min(0, eps - 1) with eps from the potential's mode.
double eps_bar(const PotentialSpec & f, int dim_n = 2);

struct RadialProfile
{
  std::vector<double> radii;
  std::vector<double> H;
  std::vector<double> D;
  std::vector<double> N;
  double eps_bar = 0.0;
  double ell_estimate = 0.0;
  int k0 = 0;  // 0 when unmatched
  std::vector<double> fit_report;
};

RadialProfile frequency_profile(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const std::vector<double> & radii);

struct LimitEstimate
{
  double ell = 0.0;
  int k0 = 0;
  double monotone_defect = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double growth_constant = 0.0;
  std::vector<double> residuals;
};

LimitEstimate estimate_limit(const RadialProfile & profile);
// Fills ell_estimate, k0 and fit_report.
void attach_limit(RadialProfile & profile);

struct HeightLimit
{
  std::vector<double> intercepts;  // one per window, largest radii first
  double limit = 0.0;
  double relative_change = 0.0;
};

// Intercepts of H(r)/r^{k0} fitted on sliding windows of three radii.
HeightLimit height_limit(const RadialProfile & profile, int k0);

std::vector<double> doubling_check(const ScalarField & u, const CoefficientBundle & bundle, double lambda,
  const std::vector<double> & Rs);

// U(lambda x)/sqrt(H(lambda)) sampled on the nodes of a unit-ball reference mesh.
ScalarField blowup_field(const ScalarField & u, const CoefficientBundle & bundle, double lambda, MeshPtr reference);

// Surface integral of mu(lambda x) |v|^2 over the unit sphere.
double unit_sphere_mass(const ScalarField & v, const CoefficientBundle & bundle, double lambda);

struct EigenCluster
{
  const SphereMesh * mesh = nullptr;
  std::vector<SphericalEigenpair> pairs;
  int k = 0;
};

EigenCluster select_cluster(const SphereMesh & mesh, const std::vector<SphericalEigenpair> & pairs, int k);

std::vector<double> blowup_convergence(const ScalarField & u, const CoefficientBundle & bundle,
  const std::vector<double> & lambdas, const EigenCluster & cluster, MeshPtr reference);

double fourier_coefficient(const ScalarField & u, const SphericalEigenpair & basis, const SphereMesh & mesh,
  const SphereMatrices & mats, double lambda);
double fourier_coefficient(const PointFunction & u, const SphericalEigenpair & basis, const SphereMesh & mesh,
  const SphereMatrices & mats, double lambda);

// Nodal samples of U(lambda theta) at the sphere vertices.
Eigen::VectorXd sphere_trace(const ScalarField & u, const SphereMesh & mesh, double lambda);

struct FourierRow
{
  double lambda;
  int k;
  int m;
  double phi;
  double upsilon;
};

struct FourierTable
{
  int k0 = 0;
  std::vector<double> lambdas;
  std::vector<FourierRow> rows;
  std::vector<double> R_values;
  std::vector<std::vector<double>> beta_by_R;  // [R index][m]
  std::vector<double> beta;  // at R_used
  double R_used = 0.0;
  std::vector<double> tail_exponents;  // fitted power of Upsilon per m
  std::vector<double> t_grid;
  std::vector<std::vector<double>> upsilon_grid;  // [m][t index]
};

struct FourierOptions
{
  double t_min = 0.05;
  int points_per_octave = 8;
};

FourierTable upsilon_beta(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const EigenCluster & cluster, const std::vector<double> & lambdas, const std::vector<double> & Rs,
  const FourierOptions & options = {});

struct ParsevalCheck
{
  double partial_sum = 0.0;
  double norm = 0.0;
  bool pass = false;
};

ParsevalCheck parseval_check(const ScalarField & u, const SphereMesh & mesh, const SphereMatrices & mats,
  const std::vector<SphericalEigenpair> & basis, double lambda);

double vanishing_order(const ScalarField & u, const CoefficientBundle & bundle, const std::vector<double> & radii);

// CSV "r,H,D,N".
std::string profile_csv(const RadialProfile & profile);
// CSV "lambda,k,m,phi,upsilon".
std::string fourier_csv(const FourierTable & table);
std::string fourier_json(const FourierTable & table, double ell);

}  // namespace crackfreq
