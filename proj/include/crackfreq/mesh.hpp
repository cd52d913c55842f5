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
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace crackfreq
{

enum class DomainKind { slit_ball, approx_domain };

// Profile of the approximating surfaces x_N = f~_n(x_{N+1}) = f_n(|x_{N+1}|).
struct ProfileValue
{
  double value = 0.0;
  double derivative = 0.0;
  double property_residual = 0.0;
};

double transition_eta(double t);
double transition_eta_derivative(double t);
ProfileValue approx_profile(int n, double alpha, double t);

// Structured tetrahedral mesh in spherical coordinates (R, theta, phi) about the x1 axis,
// phi measured in the (x2, x3) plane from +x2. Each index cell is split into six Kuhn
// tetrahedra; cells collapsed on the axis and at the origin lose their degenerate pieces.
struct TetMesh
{
  std::vector<Vec3> vertices;
  std::vector<Vec3> reference;  // positions before the approximating-domain map
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 3>> crack_faces;
  std::vector<std::array<int, 3>> sphere_faces;
  std::vector<std::array<int, 3>> tip_faces;
  std::vector<char> dirichlet;  // homogeneous crack condition
  std::vector<char> on_sphere;  // outer boundary, carries boundary data
  double mesh_size = 0.0;
  double radius = 0.0;
  double grading = 0.5;
  DomainKind kind = DomainKind::slit_ball;
  int n = 0;
  double alpha = 0.0;

  std::vector<double> radial;  // radial node values, radial.front() = 0
  std::vector<double> theta;
  int n_phi = 0;
  std::vector<int> cell_begin;  // CSR: cell -> tets
  std::vector<double> layer_edge;  // longest edge per radial layer

  // Approximating domain: upper surface angle tabulated on [profile_rho0, rho0 + table_step * size).
  double profile_rho0 = 0.0;
  double table_step = 0.0;
  std::vector<double> angle_table;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  std::array<Vec3, 4> tet_points(int t) const;
  // Longest edge among tets of the radial layer containing radius r.
  double local_size(double r) const;
  double volume() const;
};

using MeshPtr = std::shared_ptr<const TetMesh>;

struct MeshOptions
{
  double grading = 0.5;
  double inner_fraction = 1.0 / 32.0;
};

MeshPtr mesh_slit_ball(double r, double h, const MeshOptions & options = {});
MeshPtr mesh_approx_domain(double r, int n, double alpha, double h, const MeshOptions & options = {});

// Angle of the upper approximating surface at distance rho from the x1 axis.
double approx_surface_angle(int n, double alpha, double rho);
bool in_excluded_sliver(const TetMesh & mesh, const Vec3 & x);

struct PointLocation
{
  int tet = -1;
  Eigen::Vector4d bary = Eigen::Vector4d::Zero();
  bool inside = false;
};

PointLocation locate(const TetMesh & mesh, const Vec3 & x);

// Barycentric gradients of tet t as rows.
Eigen::Matrix<double, 4, 3> bary_gradients(const std::array<Vec3, 4> & p);

std::uint64_t mesh_checksum(const TetMesh & mesh);
void export_mesh(const TetMesh & mesh, const std::string & path);

}  // namespace crackfreq
