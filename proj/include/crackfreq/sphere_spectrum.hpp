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

#include <Eigen/SparseCore>

#include <array>
#include <string>
#include <vector>

namespace crackfreq
{

// Node angles in [0, pi], geometrically refined toward both poles.
std::vector<double> graded_polar_grid(double spacing);

// Lat-long triangulation of S^2 about the x1 axis; the cut is the half great circle phi = 0.
struct SphereMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> cut_vertices;
  std::vector<char> on_cut;
  double mesh_size = 0.0;

  // Structure used for point location.
  std::vector<double> theta;  // ring angles, theta.front() = 0, theta.back() = pi
  int n_phi = 0;
  std::vector<std::vector<int>> cell_triangles;  // (ring band, phi cell) -> triangles

  int ring_vertex(int i, int k) const;
};

SphereMesh build_slit_sphere_mesh(int dim_n, double h);

double oracle_eigenvalue(int k, int dim_n);

struct SphericalEigenpair
{
  double mu = 0.0;
  Eigen::VectorXd psi;
  int k_index = 0;  // 0 when no oracle value lies within 10%
  int multiplicity_cluster = 0;
};

struct SphereMatrices
{
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
};

SphereMatrices assemble_sphere(const SphereMesh & mesh);

struct EigenOptions
{
  int max_iterations = 2000;
  double eig_tol = 1e-10;
  double residual_tol = 1e-8;
  double cluster_tol = 1e-4;
  int guard = 6;
};

std::vector<SphericalEigenpair> solve_eigenpairs(
  const SphereMesh & mesh, int count, const EigenOptions & options = {});

// Location on the sphere mesh: triangle index and barycentric weights.
struct SphereLocation
{
  int triangle = -1;
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
};

SphereLocation locate_on_sphere(const SphereMesh & mesh, const Vec3 & theta);

double eval_eigenfunction(const SphericalEigenpair & pair, const SphereMesh & mesh, const Vec3 & theta);
double eval_nodal(const Eigen::VectorXd & nodal, const SphereMesh & mesh, const Vec3 & theta);

// Integral over S^2 of the P1 interpolants of a and b.
double sphere_inner(const SphereMatrices & m, const Eigen::VectorXd & a, const Eigen::VectorXd & b);

void export_sphere_mesh(const SphereMesh & mesh, const std::string & path);
std::string eigenpairs_json(const std::vector<SphericalEigenpair> & pairs, double h);

}  // namespace crackfreq
