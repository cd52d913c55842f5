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

#include "crackfreq/mesh.hpp"

#include "crackfreq/io.hpp"
#include "crackfreq/quadrature.hpp"
#include "crackfreq/sphere_spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace crackfreq
{

namespace
{

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double bump_derivative(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

double profile_f(double t, double alpha)
{
  const double e = transition_eta(t);
  return e + (1.0 - e) * std::pow(t, 1.0 / alpha);
}

double profile_f_derivative(double t, double alpha)
{
  if (t >= 1.0) return std::pow(t, 1.0 / alpha - 1.0) / alpha;
  if (t <= 0.5) return 0.0;
  const double e = transition_eta(t);
  const double de = transition_eta_derivative(t);
  const double p = std::pow(t, 1.0 / alpha);
  return de * (1.0 - p) + (1.0 - e) * p / (alpha * t);
}

// Upper approximating surface as a function of the distance from the x1 axis.
struct SurfaceSolver
{
  int n;
  double alpha;
  double scale;  // n^{-1/(2 alpha)}
  double s_min;

  SurfaceSolver(int n_in, double alpha_in) : n(n_in), alpha(alpha_in)
  {
    scale = std::pow(static_cast<double>(n), -0.5 / alpha);
    const double lo = 0.5 / n;
    const double hi = 1.0 / n;
    s_min = lo;
    double best = rho_of(lo);
    for (int q = 1; q <= 400; ++q) {
      const double s = lo + (hi - lo) * q / 400.0;
      const double v = rho_of(s);
      if (v < best) {
        best = v;
        s_min = s;
      }
    }
  }

  double f(double s) const { return profile_f(n * s, alpha) * scale; }
  double rho_of(double s) const { return std::hypot(f(s), s); }

  // Largest-branch solution of |(f_n(s), s)| = rho.
  double solve(double rho) const
  {
    double a = s_min;
    double b = std::max(rho, 1.0 / n);
    for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
      const double m = 0.5 * (a + b);
      if (rho_of(m) < rho) a = m; else b = m;
    }
    return 0.5 * (a + b);
  }

  double angle(double rho) const
  {
    const double s = solve(rho);
    return std::atan2(s, f(s));
  }
};

struct Grid
{
  std::vector<double> radial;
  std::vector<double> theta;
  int kk = 0;
  int jj = 0;  // index of the outer shell
  int ii = 0;  // index of the south pole ring
  int per_shell = 0;

  int id(int j, int i, int k) const
  {
    if (j == 0) return 0;
    const int base = 1 + (j - 1) * per_shell;
    if (i == 0) return base;
    if (i == ii) return base + 1 + (ii - 1) * kk;
    return base + 1 + (i - 1) * kk + ((k % kk) + kk) % kk;
  }
  int num_nodes() const { return 1 + jj * per_shell; }
  int cell(int j, int i, int k) const { return (j * ii + i) * kk + k; }
};

Grid make_grid(double r, double h, const MeshOptions & options)
{
  if (!(r > 0.0) || !(h > 0.0) || h > r / 4.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::meshing, "mesh requires 0 < h <= r/4 (got r=" + format_double(r) +
      ", h=" + format_double(h) + ")");
  }
  if (!(options.grading > 0.0 && options.grading <= 1.0)) {
    throw Error(ErrorKind::meshing, "grading must lie in (0, 1]");
  }
  Grid g;
  const double side = 0.866 * h;
  const double p = std::log2(1.0 / options.grading);
  const double r_min = r * options.inner_fraction;
  std::vector<double> down{r};
  double rr = r;
  while (rr > r_min * (1.0 + 1e-9)) {
    const double local = side * std::pow(rr / r, p);
    rr = rr / (1.0 + local / rr);
    if (rr < r_min * 1.2) rr = r_min;
    down.push_back(rr);
  }
  down.push_back(0.0);
  g.radial.assign(down.rbegin(), down.rend());
  g.theta = graded_polar_grid(side / r);
  g.kk = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI * r / side)));
  g.jj = static_cast<int>(g.radial.size()) - 1;
  g.ii = static_cast<int>(g.theta.size()) - 1;
  g.per_shell = 2 + (g.ii - 1) * g.kk;
  return g;
}

const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

double signed_volume(const std::array<Vec3, 4> & p)
{
  return tet_volume(p[0], p[1], p[2], p[3]);
}

MeshPtr build(double r, double h, const MeshOptions & options, const SurfaceSolver * surface)
{
  const Grid g = make_grid(r, h, options);
  auto mesh = std::make_shared<TetMesh>();
  mesh->mesh_size = h;
  mesh->radius = r;
  mesh->grading = options.grading;
  mesh->radial = g.radial;
  mesh->theta = g.theta;
  mesh->n_phi = g.kk;
  const int nn = g.num_nodes();
  const double dphi = 2.0 * M_PI / g.kk;

  mesh->reference.assign(static_cast<std::size_t>(nn), Vec3::Zero());
  std::vector<int> kidx(static_cast<std::size_t>(nn), -1);
  for (int j = 1; j <= g.jj; ++j) {
    for (int i = 0; i <= g.ii; ++i) {
      const int kmax = (i == 0 || i == g.ii) ? 1 : g.kk;
      for (int k = 0; k < kmax; ++k) {
        const int v = g.id(j, i, k);
        Vec3 x = g.radial[j] * spherical_direction(g.theta[i], dphi * k);
        if (i == 0 || i == g.ii) x = Vec3(i == 0 ? g.radial[j] : -g.radial[j], 0, 0);
        if (k == 0 && i != 0 && i != g.ii) x[2] = 0.0;
        mesh->reference[static_cast<std::size_t>(v)] = x;
        kidx[static_cast<std::size_t>(v)] = (i == 0 || i == g.ii) ? -1 : k;
      }
    }
  }

  // Split the k = 0 nodes beyond the profile tip into upper and lower copies.
  const double rho0 = surface ? surface->f(0.0) : 0.0;
  std::vector<int> lower(static_cast<std::size_t>(nn), -1);
  if (surface) {
    for (int v = 0; v < nn; ++v) {
      const Vec3 & x = mesh->reference[static_cast<std::size_t>(v)];
      if (kidx[static_cast<std::size_t>(v)] == 0 && std::hypot(x[1], x[2]) > rho0 * (1.0 + 1e-12)) {
        lower[static_cast<std::size_t>(v)] = static_cast<int>(mesh->reference.size());
        Vec3 y = x;
        y[2] = -0.0;
        mesh->reference.push_back(y);
      }
    }
  }
  const int nv = static_cast<int>(mesh->reference.size());
  std::vector<char> split(static_cast<std::size_t>(nv), 0);
  std::vector<char> is_lower(static_cast<std::size_t>(nv), 0);
  for (int v = 0; v < nn; ++v) {
    if (lower[static_cast<std::size_t>(v)] >= 0) {
      split[static_cast<std::size_t>(v)] = 1;
      split[static_cast<std::size_t>(lower[static_cast<std::size_t>(v)])] = 1;
      is_lower[static_cast<std::size_t>(lower[static_cast<std::size_t>(v)])] = 1;
    }
  }

  // Physical positions.
  mesh->vertices = mesh->reference;
  if (surface) {
    for (int v = 0; v < nv; ++v) {
      const Vec3 & x = mesh->reference[static_cast<std::size_t>(v)];
      const double rho = std::hypot(x[1], x[2]);
      if (rho <= rho0 * (1.0 + 1e-12)) continue;
      const double s = surface->solve(rho);
      if (split[static_cast<std::size_t>(v)]) {
        mesh->vertices[static_cast<std::size_t>(v)] =
          Vec3(x[0], surface->f(s), is_lower[static_cast<std::size_t>(v)] ? -s : s);
        continue;
      }
      const double phin = std::atan2(s, surface->f(s));
      double phi = std::atan2(x[2], x[1]);
      if (phi < 0.0) phi += 2.0 * M_PI;
      const double mapped = phin + phi * (2.0 * M_PI - 2.0 * phin) / (2.0 * M_PI);
      mesh->vertices[static_cast<std::size_t>(v)] =
        Vec3(x[0], rho * std::cos(mapped), rho * std::sin(mapped));
    }
  }

  auto wrap_id = [&](int j, int i, int k) {
    const int v = g.id(j, i, k);
    if (k == g.kk && surface && lower[static_cast<std::size_t>(v)] >= 0) {
      return lower[static_cast<std::size_t>(v)];
    }
    return v;
  };

  const int ncell = g.jj * g.ii * g.kk;
  mesh->cell_begin.assign(static_cast<std::size_t>(ncell + 1), 0);
  mesh->tets.reserve(static_cast<std::size_t>(ncell) * 6);
  mesh->layer_edge.assign(static_cast<std::size_t>(g.jj), 0.0);
  const double min_volume = 1e-12 * h * h * h * std::pow(options.inner_fraction, 3.0);
  auto add_face = [&](std::vector<std::array<int, 3>> & dst, int a, int b, int c) {
    if (a == b || b == c || a == c) return;
    dst.push_back({a, b, c});
  };
  for (int j = 0; j < g.jj; ++j) {
    for (int i = 0; i < g.ii; ++i) {
      for (int k = 0; k < g.kk; ++k) {
        const int c = g.cell(j, i, k);
        mesh->cell_begin[static_cast<std::size_t>(c)] = static_cast<int>(mesh->tets.size());
        int corner[2][2][2];
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            for (int e = 0; e < 2; ++e) corner[a][b][e] = wrap_id(j + a, i + b, k + e);
          }
        }
        for (const auto & perm : kPerms) {
          int step[3] = {0, 0, 0};
          std::array<int, 4> ids{};
          ids[0] = corner[0][0][0];
          for (int s = 0; s < 3; ++s) {
            step[perm[s]] = 1;
            ids[static_cast<std::size_t>(s + 1)] = corner[step[0]][step[1]][step[2]];
          }
          bool repeated = false;
          for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) repeated = repeated || ids[a] == ids[b];
          }
          if (repeated) continue;
          std::array<Vec3, 4> ref;
          std::array<Vec3, 4> phys;
          for (int a = 0; a < 4; ++a) {
            ref[a] = mesh->reference[static_cast<std::size_t>(ids[a])];
            phys[a] = mesh->vertices[static_cast<std::size_t>(ids[a])];
          }
          const double vref = signed_volume(ref);
          if (vref < 0.0) std::swap(ids[2], ids[3]);
          std::array<Vec3, 4> q;
          for (int a = 0; a < 4; ++a) q[a] = mesh->vertices[static_cast<std::size_t>(ids[a])];
          const double vol = signed_volume(q);
          if (vol < min_volume) {
            throw Error(ErrorKind::meshing, "degenerate or inverted tetrahedron in cell (" +
              std::to_string(j) + "," + std::to_string(i) + "," + std::to_string(k) + ")");
          }
          mesh->tets.push_back(ids);
          double& le = mesh->layer_edge[static_cast<std::size_t>(j)];
          for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) le = std::max(le, (q[a] - q[b]).norm());
          }
        }
        // Faces on the slit plane, seen from the upper (k = 0) and lower (k = K-1) cells.
        if (k == 0) {
          add_face(mesh->crack_faces, corner[0][0][0], corner[1][0][0], corner[1][1][0]);
          add_face(mesh->crack_faces, corner[0][0][0], corner[0][1][0], corner[1][1][0]);
        }
        if (surface && k == g.kk - 1) {
          add_face(mesh->crack_faces, corner[0][0][1], corner[1][0][1], corner[1][1][1]);
          add_face(mesh->crack_faces, corner[0][0][1], corner[0][1][1], corner[1][1][1]);
        }
        if (j == g.jj - 1) {
          add_face(mesh->sphere_faces, corner[1][0][0], corner[1][1][0], corner[1][1][1]);
          add_face(mesh->sphere_faces, corner[1][0][0], corner[1][0][1], corner[1][1][1]);
        }
      }
    }
  }
  mesh->cell_begin[static_cast<std::size_t>(ncell)] = static_cast<int>(mesh->tets.size());

  mesh->dirichlet.assign(static_cast<std::size_t>(nv), 0);
  mesh->on_sphere.assign(static_cast<std::size_t>(nv), 0);
  for (int v = 0; v < nv; ++v) {
    const Vec3 & x = mesh->reference[static_cast<std::size_t>(v)];
    if (std::abs(x.norm() - r) <= 1e-12 * r) mesh->on_sphere[static_cast<std::size_t>(v)] = 1;
    if (surface) {
      mesh->dirichlet[static_cast<std::size_t>(v)] = split[static_cast<std::size_t>(v)];
    } else {
      const bool axis = std::hypot(x[1], x[2]) == 0.0;
      mesh->dirichlet[static_cast<std::size_t>(v)] = (v < nn && kidx[static_cast<std::size_t>(v)] == 0) || axis;
    }
  }

  if (surface) {
    // Keep only faces on gamma (all vertices split); mixed faces border the tip.
    std::vector<std::array<int, 3>> gamma;
    for (const auto & f : mesh->crack_faces) {
      int count = 0;
      for (int v : f) count += split[static_cast<std::size_t>(v)];
      if (count == 3) gamma.push_back(f);
      else if (count > 0) mesh->tip_faces.push_back(f);
    }
    mesh->crack_faces = gamma;
  }
  return mesh;
}

}  // namespace

double transition_eta(double t)
{
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = bump(1.0 - t);
  const double b = bump(t - 0.5);
  return a / (a + b);
}

double transition_eta_derivative(double t)
{
  if (t <= 0.5 || t >= 1.0) return 0.0;
  const double a = bump(1.0 - t);
  const double b = bump(t - 0.5);
  const double da = -bump_derivative(1.0 - t);
  const double db = bump_derivative(t - 0.5);
  return (da * b - a * db) / ((a + b) * (a + b));
}

ProfileValue approx_profile(int n, double alpha, double t)
{
  if (n < 1 || !(alpha > 1.0) || !(t >= 0.0)) {
    throw Error(ErrorKind::domain, "approx_profile requires n >= 1, alpha > 1, t >= 0");
  }
  const double scale = std::pow(static_cast<double>(n), -0.5 / alpha);
  ProfileValue out;
  const double nt = n * t;
  out.value = profile_f(nt, alpha) * scale;
  out.derivative = n * profile_f_derivative(nt, alpha) * scale;
  if (nt >= 1.0) {
    // Pure power tail: f_n = alpha t f_n' exactly.
    out.property_residual = 0.0;
  } else {
    out.property_residual = out.value - alpha * t * out.derivative;
  }
  return out;
}

double approx_surface_angle(int n, double alpha, double rho)
{
  const SurfaceSolver s(n, alpha);
  if (rho <= s.f(0.0)) return 0.0;
  return s.angle(rho);
}

std::array<Vec3, 4> TetMesh::tet_points(int t) const
{
  const auto & ids = tets[static_cast<std::size_t>(t)];
  return {vertices[ids[0]], vertices[ids[1]], vertices[ids[2]], vertices[ids[3]]};
}

double TetMesh::local_size(double r) const
{
  const auto it = std::upper_bound(radial.begin(), radial.end(), r);
  int j = static_cast<int>(it - radial.begin()) - 1;
  j = std::clamp(j, 0, static_cast<int>(layer_edge.size()) - 1);
  return layer_edge[static_cast<std::size_t>(j)];
}

double TetMesh::volume() const
{
  double v = 0.0;
  for (int t = 0; t < num_tets(); ++t) {
    const auto p = tet_points(t);
    v += tet_volume(p[0], p[1], p[2], p[3]);
  }
  return v;
}

MeshPtr mesh_slit_ball(double r, double h, const MeshOptions & options)
{
  return build(r, h, options, nullptr);
}

MeshPtr mesh_approx_domain(double r, int n, double alpha, double h, const MeshOptions & options)
{
  if (n < 1 || !(alpha > 1.0)) throw Error(ErrorKind::precondition, "need n >= 1 and alpha > 1");
  const SurfaceSolver surface(n, alpha);
  if (!(std::pow(static_cast<double>(n), 0.5 / alpha) > 1.0 / r)) {
    throw Error(ErrorKind::precondition,
      "approximating domain requires n^{1/(2 alpha)} > 1/r so that gamma is nonempty");
  }
  if (h > r / 4.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::precondition, "approximating domain requires h <= r/4");
  }
  MeshPtr base = build(r, h, options, &surface);
  auto mesh = std::const_pointer_cast<TetMesh>(base);
  mesh->kind = DomainKind::approx_domain;
  mesh->n = n;
  mesh->alpha = alpha;
  mesh->profile_rho0 = surface.f(0.0);
  const int count = 4096;
  mesh->table_step = (1.05 * r - mesh->profile_rho0) / (count - 1);
  mesh->angle_table.resize(count);
  for (int q = 0; q < count; ++q) {
    const double rho = mesh->profile_rho0 + q * mesh->table_step;
    mesh->angle_table[static_cast<std::size_t>(q)] = q == 0 ? 0.0 : surface.angle(rho);
  }
  return base;
}

namespace
{

double table_angle(const TetMesh & mesh, double rho)
{
  if (rho <= mesh.profile_rho0) return 0.0;
  const double u = (rho - mesh.profile_rho0) / mesh.table_step;
  const int q = static_cast<int>(u);
  const int last = static_cast<int>(mesh.angle_table.size()) - 1;
  if (q >= last) return mesh.angle_table.back();
  const double w = u - q;
  return (1.0 - w) * mesh.angle_table[static_cast<std::size_t>(q)] +
    w * mesh.angle_table[static_cast<std::size_t>(q + 1)];
}

Eigen::Vector4d barycentric(const std::array<Vec3, 4> & p, const Vec3 & x)
{
  Mat3 e;
  e.col(0) = p[1] - p[0];
  e.col(1) = p[2] - p[0];
  e.col(2) = p[3] - p[0];
  const Vec3 l = e.inverse() * (x - p[0]);
  return Eigen::Vector4d(1.0 - l.sum(), l[0], l[1], l[2]);
}

}  // namespace

bool in_excluded_sliver(const TetMesh & mesh, const Vec3 & x)
{
  if (mesh.kind != DomainKind::approx_domain) return false;
  const double rho = std::hypot(x[1], x[2]);
  if (rho <= mesh.profile_rho0) return false;
  const ProfileValue pv = approx_profile(mesh.n, mesh.alpha, std::abs(x[2]));
  return x[1] > pv.value;
}

PointLocation locate(const TetMesh & mesh, const Vec3 & x)
{
  PointLocation out;
  if (in_excluded_sliver(mesh, x)) return out;
  const double r = x.norm();
  const int jj = static_cast<int>(mesh.radial.size()) - 1;
  const int ii = static_cast<int>(mesh.theta.size()) - 1;
  const int kk = mesh.n_phi;
  int j = static_cast<int>(std::upper_bound(mesh.radial.begin(), mesh.radial.end(), r) - mesh.radial.begin()) - 1;
  j = std::clamp(j, 0, jj - 1);
  double th = r > 0.0 ? std::acos(std::clamp(x[0] / r, -1.0, 1.0)) : 0.0;
  int i = static_cast<int>(std::upper_bound(mesh.theta.begin(), mesh.theta.end(), th) - mesh.theta.begin()) - 1;
  i = std::clamp(i, 0, ii - 1);
  double phi = std::atan2(x[2], x[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  if (mesh.kind == DomainKind::approx_domain) {
    const double rho = std::hypot(x[1], x[2]);
    const double phin = table_angle(mesh, rho);
    if (phin > 0.0) {
      phi = std::clamp((phi - phin) * 2.0 * M_PI / (2.0 * M_PI - 2.0 * phin), 0.0, 2.0 * M_PI);
    }
  }
  const int k = std::clamp(static_cast<int>(std::floor(phi / (2.0 * M_PI) * kk)), 0, kk - 1);

  double best = -1e300;
  auto scan = [&](int cj, int ci, int ck) {
    if (cj < 0 || cj >= jj || ci < 0 || ci >= ii) return;
    ck = ((ck % kk) + kk) % kk;
    const int c = (cj * ii + ci) * kk + ck;
    for (int t = mesh.cell_begin[static_cast<std::size_t>(c)]; t < mesh.cell_begin[static_cast<std::size_t>(c + 1)]; ++t) {
      const Eigen::Vector4d l = barycentric(mesh.tet_points(t), x);
      const double m = l.minCoeff();
      if (m > best) {
        best = m;
        out.tet = t;
        out.bary = l;
      }
    }
  };
  scan(j, i, k);
  if (best < -1e-10) {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        for (int dk = -1; dk <= 1; ++dk) {
          if (dj || di || dk) scan(j + dj, i + di, k + dk);
        }
      }
    }
  }
  if (best < -1e-10 && (i <= 1 || i >= ii - 2)) {
    // Near the axis every phi cell touches the point.
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -2; di <= 2; ++di) {
        for (int ck = 0; ck < kk; ++ck) scan(j + dj, i + di, ck);
      }
    }
  }
  if (out.tet < 0) throw Error(ErrorKind::geometry, "point location failed");
  out.inside = best >= -1e-8;
  return out;
}

Eigen::Matrix<double, 4, 3> bary_gradients(const std::array<Vec3, 4> & p)
{
  Mat3 e;
  e.col(0) = p[1] - p[0];
  e.col(1) = p[2] - p[0];
  e.col(2) = p[3] - p[0];
  const Mat3 inv = e.inverse();
  Eigen::Matrix<double, 4, 3> g;
  g.row(1) = inv.row(0);
  g.row(2) = inv.row(1);
  g.row(3) = inv.row(2);
  g.row(0) = -(g.row(1) + g.row(2) + g.row(3));
  return g;
}

std::uint64_t mesh_checksum(const TetMesh & mesh)
{
  std::uint64_t hash = 14695981039346656037ull;
  for (const auto & v : mesh.vertices) hash = fnv1a64(v.data(), 3 * sizeof(double), hash);
  return hash;
}

void export_mesh(const TetMesh & mesh, const std::string & path)
{
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << std::setprecision(17);
  out << "# crackfreq tet mesh, checksum " << hex64(mesh_checksum(mesh)) << "\n";
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto & v : mesh.vertices) out << v[0] << " " << v[1] << " " << v[2] << "\n";
  out << "tets " << mesh.tets.size() << "\n";
  for (const auto & t : mesh.tets) out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  auto faces = [&](const char * name, const std::vector<std::array<int, 3>> & list) {
    out << name << " " << list.size() << "\n";
    for (const auto & f : list) out << f[0] << " " << f[1] << " " << f[2] << "\n";
  };
  faces("crack_faces", mesh.crack_faces);
  faces("sphere_faces", mesh.sphere_faces);
  faces("tip_faces", mesh.tip_faces);
  out << "dirichlet";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.dirichlet[static_cast<std::size_t>(v)]) out << " " << v;
  }
  out << "\n";
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

}  // namespace crackfreq
