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

#include "crackfreq/sphere_spectrum.hpp"

#include "crackfreq/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace crackfreq
{

std::vector<double> graded_polar_grid(double spacing)
{
  const double half = 0.5 * M_PI;
  const double ratio = 1.25;
  const double theta_c = std::min(4.0 * spacing, 0.6 * half);
  std::vector<double> pts{0.0};
  for (double t = theta_c / 32.0; t < theta_c; t *= ratio) pts.push_back(t);
  const double last = pts.back();
  const int m = std::max(1, static_cast<int>(std::ceil((half - last) / spacing - 1e-9)));
  for (int j = 1; j <= m; ++j) pts.push_back(last + (half - last) * j / m);
  std::vector<double> grid = pts;
  for (int j = static_cast<int>(pts.size()) - 2; j >= 0; --j) grid.push_back(M_PI - pts[j]);
  grid.back() = M_PI;
  return grid;
}

int SphereMesh::ring_vertex(int i, int k) const
{
  const int rings = static_cast<int>(theta.size());
  if (i == 0) return 0;
  if (i == rings - 1) return 1 + (rings - 2) * n_phi;
  return 1 + (i - 1) * n_phi + ((k % n_phi) + n_phi) % n_phi;
}

SphereMesh build_slit_sphere_mesh(int dim_n, double h)
{
  if (dim_n != 2) throw Error(ErrorKind::unsupported_dimension, "slit sphere mesh requires N = 2");
  if (!(h >= 0.005 && h <= 0.5)) throw Error(ErrorKind::meshing, "sphere mesh size must lie in [0.005, 0.5]");
  SphereMesh mesh;
  mesh.mesh_size = h;
  const double side = 1.06 * h;
  mesh.theta = graded_polar_grid(side);
  mesh.n_phi = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI / side)));
  const int rings = static_cast<int>(mesh.theta.size());
  const int kk = mesh.n_phi;

  mesh.vertices.push_back(Vec3(1, 0, 0));
  for (int i = 1; i < rings - 1; ++i) {
    for (int k = 0; k < kk; ++k) {
      mesh.vertices.push_back(spherical_direction(mesh.theta[i], 2.0 * M_PI * k / kk));
    }
  }
  mesh.vertices.push_back(Vec3(-1, 0, 0));
  const int nv = static_cast<int>(mesh.vertices.size());
  for (auto & v : mesh.vertices) v.normalize();

  mesh.cell_triangles.assign(static_cast<std::size_t>((rings - 1) * kk), {});
  auto add = [&](int band, int k, int a, int b, int c) {
    if (a == b || b == c || a == c) return;
    std::array<int, 3> t{a, b, c};
    const Vec3 & p = mesh.vertices[a];
    const Vec3 n = (mesh.vertices[b] - p).cross(mesh.vertices[c] - p);
    if (n.dot(p + mesh.vertices[b] + mesh.vertices[c]) < 0.0) std::swap(t[1], t[2]);
    mesh.cell_triangles[static_cast<std::size_t>(band * kk + k)].push_back(
      static_cast<int>(mesh.triangles.size()));
    mesh.triangles.push_back(t);
  };
  for (int i = 0; i < rings - 1; ++i) {
    for (int k = 0; k < kk; ++k) {
      const int a = mesh.ring_vertex(i, k);
      const int b = mesh.ring_vertex(i + 1, k);
      const int c = mesh.ring_vertex(i + 1, k + 1);
      const int d = mesh.ring_vertex(i, k + 1);
      add(i, k, a, b, c);
      add(i, k, a, c, d);
    }
  }

  mesh.on_cut.assign(static_cast<std::size_t>(nv), 0);
  for (int i = 0; i < rings; ++i) mesh.on_cut[static_cast<std::size_t>(mesh.ring_vertex(i, 0))] = 1;
  for (int v = 0; v < nv; ++v) {
    if (mesh.on_cut[static_cast<std::size_t>(v)]) mesh.cut_vertices.push_back(v);
  }
  return mesh;
}

double oracle_eigenvalue(int k, int dim_n)
{
  if (k < 1 || dim_n < 2) throw Error(ErrorKind::domain, "oracle_eigenvalue requires k >= 1 and N >= 2");
  return k * (k + 2.0 * dim_n - 2.0) / 4.0;
}

SphereMatrices assemble_sphere(const SphereMesh & mesh)
{
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (const auto & t : mesh.triangles) {
    const Vec3 & p0 = mesh.vertices[t[0]];
    const Vec3 e1 = mesh.vertices[t[1]] - p0;
    const Vec3 e2 = mesh.vertices[t[2]] - p0;
    const double area = 0.5 * e1.cross(e2).norm();
    Eigen::Matrix2d g;
    g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
    const Eigen::Matrix2d gi = g.inverse();
    // Gradients of barycentrics in the (e1, e2) frame.
    Eigen::Matrix<double, 2, 3> d;
    d << -1, 1, 0, -1, 0, 1;
    const Eigen::Matrix3d local = area * d.transpose() * gi * d;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        kt.emplace_back(t[a], t[b], local(a, b));
        mt.emplace_back(t[a], t[b], area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  }
  SphereMatrices out;
  out.stiffness.resize(nv, nv);
  out.mass.resize(nv, nv);
  out.stiffness.setFromTriplets(kt.begin(), kt.end());
  out.mass.setFromTriplets(mt.begin(), mt.end());
  return out;
}

double sphere_inner(const SphereMatrices & m, const Eigen::VectorXd & a, const Eigen::VectorXd & b)
{
  return a.dot(m.mass * b);
}

std::vector<SphericalEigenpair> solve_eigenpairs(
  const SphereMesh & mesh, int count, const EigenOptions & options)
{
  if (count < 1) throw Error(ErrorKind::domain, "count must be >= 1");
  const SphereMatrices mats = assemble_sphere(mesh);
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<int> free_index(static_cast<std::size_t>(nv), -1);
  std::vector<int> free_nodes;
  for (int v = 0; v < nv; ++v) {
    if (!mesh.on_cut[static_cast<std::size_t>(v)]) {
      free_index[static_cast<std::size_t>(v)] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(v);
    }
  }
  const int nf = static_cast<int>(free_nodes.size());
  auto restrict = [&](const Eigen::SparseMatrix<double> & a) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < a.outerSize(); ++c) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) {
        const int i = free_index[static_cast<std::size_t>(it.row())];
        const int j = free_index[static_cast<std::size_t>(it.col())];
        if (i >= 0 && j >= 0) trip.emplace_back(i, j, it.value());
      }
    }
    Eigen::SparseMatrix<double> r(nf, nf);
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
  };
  const Eigen::SparseMatrix<double> k = restrict(mats.stiffness);
  const Eigen::SparseMatrix<double> m = restrict(mats.mass);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(k);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::solver, "stiffness factorization failed");

  const int b = std::min(nf, count + options.guard);
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd x(nf, b);
  for (int j = 0; j < b; ++j) {
    for (int i = 0; i < nf; ++i) x(i, j) = uni(rng);
  }
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(b);
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(b, -1.0);
  double worst_residual = 0.0;
  bool converged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd y = ldlt.solve(Eigen::MatrixXd(m * x));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nf, b);
    const Eigen::MatrixXd kq = k * q;
    const Eigen::MatrixXd mq = m * q;
    Eigen::MatrixXd kr = q.transpose() * kq;
    Eigen::MatrixXd mr = q.transpose() * mq;
    kr = 0.5 * (kr + kr.transpose()).eval();
    mr = 0.5 * (mr + mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kr, mr);
    mu = ges.eigenvalues();
    x = q * ges.eigenvectors();
    const Eigen::MatrixXd kx = kq * ges.eigenvectors();
    const Eigen::MatrixXd mx = mq * ges.eigenvectors();
    worst_residual = 0.0;
    double worst_change = 0.0;
    for (int j = 0; j < count; ++j) {
      const double res = (kx.col(j) - mu[j] * mx.col(j)).norm() / kx.col(j).norm();
      worst_residual = std::max(worst_residual, res);
      worst_change = std::max(worst_change, std::abs(mu[j] - prev[j]) / std::abs(mu[j]));
    }
    prev = mu;
    if (worst_change <= options.eig_tol && worst_residual <= options.residual_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::convergence,
      "eigen-iteration did not converge, worst residual " + std::to_string(worst_residual));
  }

  std::vector<SphericalEigenpair> pairs;
  int cluster = 0;
  for (int j = 0; j < count; ++j) {
    SphericalEigenpair p;
    p.mu = mu[j];
    p.psi = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd col = x.col(j);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
    for (int i = 0; i < nf; ++i) p.psi[free_nodes[static_cast<std::size_t>(i)]] = col[i];
    if (j == 0 || (mu[j] - mu[j - 1]) / mu[j] > options.cluster_tol) ++cluster;
    p.multiplicity_cluster = cluster;
    double best = 0.1;
    for (int kidx = 1; kidx <= 200; ++kidx) {
      const double o = oracle_eigenvalue(kidx, 2);
      const double rel = std::abs(p.mu - o) / o;
      if (rel <= best) {
        best = rel;
        p.k_index = kidx;
      }
      if (o > 2.0 * p.mu) break;
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

SphereLocation locate_on_sphere(const SphereMesh & mesh, const Vec3 & theta)
{
  const double nrm = theta.norm();
  if (std::abs(nrm - 1.0) > 1e-8) throw Error(ErrorKind::domain, "direction must be a unit vector");
  const Vec3 u = theta / nrm;
  const double psi = std::acos(std::clamp(u[0], -1.0, 1.0));
  double phi = std::atan2(u[2], u[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  const int bands = static_cast<int>(mesh.theta.size()) - 1;
  int band = static_cast<int>(std::upper_bound(mesh.theta.begin(), mesh.theta.end(), psi) - mesh.theta.begin()) - 1;
  band = std::clamp(band, 0, bands - 1);
  const int kk = mesh.n_phi;
  const int cell = std::clamp(static_cast<int>(std::floor(phi / (2.0 * M_PI) * kk)), 0, kk - 1);

  SphereLocation best;
  double best_min = -1e300;
  for (int db = -1; db <= 1; ++db) {
    const int bi = band + db;
    if (bi < 0 || bi >= bands) continue;
    for (int dk = -1; dk <= 1; ++dk) {
      const int ki = ((cell + dk) % kk + kk) % kk;
      for (int t : mesh.cell_triangles[static_cast<std::size_t>(bi * kk + ki)]) {
        const auto & tri = mesh.triangles[static_cast<std::size_t>(t)];
        const Vec3 & a = mesh.vertices[tri[0]];
        const Vec3 & b = mesh.vertices[tri[1]];
        const Vec3 & c = mesh.vertices[tri[2]];
        const Vec3 n = (b - a).cross(c - a);
        const double denom = n.dot(u);
        if (denom <= 0.0) continue;
        const Vec3 p = u * (n.dot(a) / denom);
        Eigen::Matrix<double, 3, 2> e;
        e.col(0) = b - a;
        e.col(1) = c - a;
        const Eigen::Vector2d st = (e.transpose() * e).ldlt().solve(e.transpose() * (p - a));
        const Eigen::Vector3d l(1.0 - st[0] - st[1], st[0], st[1]);
        if (l.minCoeff() > best_min) {
          best_min = l.minCoeff();
          best.triangle = t;
          best.bary = l;
        }
      }
    }
  }
  if (best.triangle < 0 || best_min < -1e-6) {
    throw Error(ErrorKind::geometry, "containing triangle not found on the sphere mesh");
  }
  return best;
}

double eval_nodal(const Eigen::VectorXd & nodal, const SphereMesh & mesh, const Vec3 & theta)
{
  const SphereLocation loc = locate_on_sphere(mesh, theta);
  const auto & tri = mesh.triangles[static_cast<std::size_t>(loc.triangle)];
  return loc.bary[0] * nodal[tri[0]] + loc.bary[1] * nodal[tri[1]] + loc.bary[2] * nodal[tri[2]];
}

double eval_eigenfunction(const SphericalEigenpair & pair, const SphereMesh & mesh, const Vec3 & theta)
{
  return eval_nodal(pair.psi, mesh, theta);
}

void export_sphere_mesh(const SphereMesh & mesh, const std::string & path)
{
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << std::setprecision(17);
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto & v : mesh.vertices) out << v[0] << " " << v[1] << " " << v[2] << "\n";
  out << "triangles " << mesh.triangles.size() << "\n";
  for (const auto & t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "cut " << mesh.cut_vertices.size() << "\n";
  for (std::size_t i = 0; i < mesh.cut_vertices.size(); ++i) {
    out << (i ? " " : "") << mesh.cut_vertices[i];
  }
  out << "\n";
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

std::string eigenpairs_json(const std::vector<SphericalEigenpair> & pairs, double h)
{
  nlohmann::json j;
  j["h"] = h;
  j["pairs"] = nlohmann::json::array();
  for (const auto & p : pairs) {
    nlohmann::json e;
    e["mu"] = p.mu;
    e["k_index"] = p.k_index;
    e["cluster"] = p.multiplicity_cluster;
    e["psi_nodal"] = std::vector<double>(p.psi.data(), p.psi.data() + p.psi.size());
    j["pairs"].push_back(e);
  }
  return j.dump();
}

}  // namespace crackfreq
