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

#include "crackfreq/mesh.hpp"
#include "crackfreq/quadrature.hpp"
#include "crackfreq/straightening.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace crackfreq
{

using PointFunction = std::function<double(const Vec3 &)>;

struct ScalarField
{
  MeshPtr mesh;
  Eigen::VectorXd nodal;
  std::vector<char> dirichlet_mask;
};

ScalarField zero_field(MeshPtr mesh);
// Nodal interpolation at the reference positions. With enforce_crack the crack nodes are
// zeroed and masked.
ScalarField interpolate(MeshPtr mesh, const PointFunction & f, bool enforce_crack = true);

struct P1Matrices
{
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
};

// Plain Laplacian stiffness and mass.
P1Matrices assemble_p1(const TetMesh & mesh);
// Bilinear form of the weak problem: int A grad u . grad v - int f~ u v.
Eigen::SparseMatrix<double> assemble_operator(
  const TetMesh & mesh, const CoefficientBundle & bundle, const PotentialSpec & f);

struct SolverOptions
{
  double rel_tol = 1e-10;
  int max_iterations = 0;  // 0 selects 20 sqrt(unknowns)
};

struct SolveReport
{
  int unknowns = 0;
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;
};

ScalarField assemble_solve(MeshPtr mesh, const CoefficientBundle & bundle, const PotentialSpec & f,
  const PointFunction & boundary_data, SolveReport * report = nullptr, const SolverOptions & options = {});

// Jacobi-preconditioned conjugate gradients on the unmasked entries of x.
void pcg_solve(const Eigen::SparseMatrix<double> & a, const Eigen::VectorXd & b,
  const std::vector<char> & fixed, Eigen::VectorXd & x, const SolverOptions & options, SolveReport & report);

struct FieldSample
{
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  bool inside = false;
};

// Point evaluation; outside an approximating domain the field is zero.
FieldSample sample(const ScalarField & u, const Vec3 & x);

struct TetField
{
  std::array<Vec3, 4> points;
  Eigen::Matrix<double, 4, 3> grads;
  Eigen::Vector4d values;
  Vec3 grad;

  double value_at(const Vec3 & x) const;
};
TetField tet_field(const ScalarField & u, int t);

// Volume-weighted nodal averages of the element gradients, one per side of the plane x3 = 0
// so that the jump across the crack is kept.
struct RecoveredGradient
{
  std::vector<Vec3> upper;
  std::vector<Vec3> lower;
};

RecoveredGradient recover_gradient(const ScalarField & u);
// Interpolated recovered gradient at x; zero outside the mesh.
Vec3 recovered_gradient_at(const RecoveredGradient & rec, const ScalarField & u, const Vec3 & x);

using FieldIntegrand = std::function<double(const Vec3 & x, double u, const Vec3 & grad)>;

// Integral over B_r of integrand(x, u, grad u), tets cut by the sphere clipped.
double integrate_ball(const ScalarField & u, double r, const FieldIntegrand & integrand, bool singular = false);

// Per-tet integrand, built once per tet.
using TetIntegrandFactory = std::function<TetIntegrand(int)>;

// Same integral for many radii: full tet integrals are accumulated once.
class RadialIntegrator
{
public:
  RadialIntegrator(const ScalarField & u, const FieldIntegrand & integrand, bool singular = false);
  RadialIntegrator(MeshPtr mesh, TetIntegrandFactory factory, bool singular = false, int clip_depth = 3);
  double operator()(double r) const;

private:
  MeshPtr mesh_;
  TetIntegrandFactory factory_;
  bool singular_;
  int clip_depth_;
  std::vector<int> order_;
  std::vector<double> tmax_;
  std::vector<double> tmin_;
  std::vector<double> prefix_;
};

struct L2H1
{
  double l2 = 0.0;
  double h1 = 0.0;
};

L2H1 h1_distance(const ScalarField & u, const ScalarField & v, double region_radius);

}  // namespace crackfreq
