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

#include "crackfreq/fem.hpp"

#include "crackfreq/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crackfreq
{

namespace
{

Eigen::SparseMatrix<double> sparsity(const TetMesh & mesh)
{
  const int nv = mesh.num_vertices();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv));
  for (const auto & t : mesh.tets) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) adj[static_cast<std::size_t>(t[a])].push_back(t[b]);
    }
  }
  Eigen::VectorXi nnz(nv);
  for (int v = 0; v < nv; ++v) {
    auto & row = adj[static_cast<std::size_t>(v)];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    nnz[v] = static_cast<int>(row.size());
  }
  Eigen::SparseMatrix<double> a(nv, nv);
  a.reserve(nnz);
  for (int v = 0; v < nv; ++v) {
    for (int w : adj[static_cast<std::size_t>(v)]) a.insert(w, v) = 0.0;
  }
  a.makeCompressed();
  return a;
}

double abs_volume(const std::array<Vec3, 4> & p) { return std::abs(tet_volume(p[0], p[1], p[2], p[3])); }

bool touches_origin(const std::array<Vec3, 4> & p)
{
  for (const auto & q : p) {
    if (q.norm() < 1e-14) return true;
  }
  return false;
}

}  // namespace

ScalarField zero_field(MeshPtr mesh)
{
  ScalarField u;
  u.nodal = Eigen::VectorXd::Zero(mesh->num_vertices());
  u.dirichlet_mask = mesh->dirichlet;
  u.mesh = std::move(mesh);
  return u;
}

ScalarField interpolate(MeshPtr mesh, const PointFunction & f, bool enforce_crack)
{
  ScalarField u;
  const int nv = mesh->num_vertices();
  u.nodal.resize(nv);
  u.dirichlet_mask.assign(static_cast<std::size_t>(nv), 0);
  for (int v = 0; v < nv; ++v) {
    if (enforce_crack && mesh->dirichlet[static_cast<std::size_t>(v)]) {
      u.nodal[v] = 0.0;
      u.dirichlet_mask[static_cast<std::size_t>(v)] = 1;
    } else {
      u.nodal[v] = f(mesh->reference[static_cast<std::size_t>(v)]);
    }
  }
  u.mesh = std::move(mesh);
  return u;
}

P1Matrices assemble_p1(const TetMesh & mesh)
{
  P1Matrices out;
  out.stiffness = sparsity(mesh);
  out.mass = out.stiffness;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto p = mesh.tet_points(t);
    const auto & ids = mesh.tets[static_cast<std::size_t>(t)];
    const double vol = abs_volume(p);
    const Eigen::Matrix<double, 4, 3> g = bary_gradients(p);
    const Eigen::Matrix4d k = vol * g * g.transpose();
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        out.stiffness.coeffRef(ids[a], ids[b]) += k(a, b);
        out.mass.coeffRef(ids[a], ids[b]) += vol / 20.0 * (a == b ? 2.0 : 1.0);
      }
    }
  }
  return out;
}

Eigen::SparseMatrix<double> assemble_operator(
  const TetMesh & mesh, const CoefficientBundle & bundle, const PotentialSpec & f)
{
  Eigen::SparseMatrix<double> s = sparsity(mesh);
  const bool flat = bundle.crack.family == CrackFamily::flat;
  const bool has_f = !f.is_zero();
  const bool singular = f.mode == PotentialMode::a1;
  const TetRule & r4 = tet_rule_4();
  const TetRule & rf = singular ? tet_rule_11() : tet_rule_4();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto p = mesh.tet_points(t);
    const auto & ids = mesh.tets[static_cast<std::size_t>(t)];
    const double vol = abs_volume(p);
    const Eigen::Matrix<double, 4, 3> g = bary_gradients(p);
    Mat3 abar = Mat3::Identity();
    if (!flat) {
      abar.setZero();
      for (std::size_t q = 0; q < r4.weights.size(); ++q) {
        const Eigen::Vector4d & l = r4.bary[q];
        const Vec3 x = l[0] * p[0] + l[1] * p[1] + l[2] * p[2] + l[3] * p[3];
        abar += r4.weights[q] * coefficient_A3(bundle, x);
      }
    }
    Eigen::Matrix4d local = vol * g * abar * g.transpose();
    if (has_f) {
      Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
      if (touches_origin(p)) {
        Mat3 e;
        e.col(0) = p[1] - p[0];
        e.col(1) = p[2] - p[0];
        e.col(2) = p[3] - p[0];
        const Mat3 inv = e.inverse();
        for (int a = 0; a < 4; ++a) {
          for (int b = a; b < 4; ++b) {
            const double val = integrate_tet(p, [&](const Vec3 & x) {
              const Vec3 l3 = inv * (x - p[0]);
              const Eigen::Vector4d l(1.0 - l3.sum(), l3[0], l3[1], l3[2]);
              return transform_potential3(bundle, f, x) * l[a] * l[b];
            }, true);
            m(a, b) = val;
            m(b, a) = val;
          }
        }
      } else {
        for (std::size_t q = 0; q < rf.weights.size(); ++q) {
          const Eigen::Vector4d & l = rf.bary[q];
          const Vec3 x = l[0] * p[0] + l[1] * p[1] + l[2] * p[2] + l[3] * p[3];
          m += (rf.weights[q] * vol * transform_potential3(bundle, f, x)) * (l * l.transpose());
        }
      }
      local -= m;
    }
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) s.coeffRef(ids[a], ids[b]) += local(a, b);
    }
  }
  return s;
}

void pcg_solve(const Eigen::SparseMatrix<double> & a, const Eigen::VectorXd & b,
  const std::vector<char> & fixed, Eigen::VectorXd & x, const SolverOptions & options, SolveReport & report)
{
  const int n = static_cast<int>(b.size());
  Eigen::VectorXd mask(n);
  int unknowns = 0;
  for (int i = 0; i < n; ++i) {
    mask[i] = fixed[static_cast<std::size_t>(i)] ? 0.0 : 1.0;
    unknowns += fixed[static_cast<std::size_t>(i)] ? 0 : 1;
  }
  report.unknowns = unknowns;
  const int max_it = options.max_iterations > 0
    ? options.max_iterations
    : static_cast<int>(std::ceil(20.0 * std::sqrt(static_cast<double>(std::max(unknowns, 1)))));
  Eigen::VectorXd dinv(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    dinv[i] = (mask[i] > 0.0 && d > 0.0) ? 1.0 / d : 0.0;
    if (mask[i] > 0.0 && !(d > 0.0)) {
      throw Error(ErrorKind::well_posedness, "nonpositive diagonal entry in the system matrix");
    }
  }
  x = x.cwiseProduct(mask);
  const double bnorm = b.cwiseProduct(mask).norm();
  report.history.clear();
  if (bnorm == 0.0) {
    x.setZero();
    report.iterations = 0;
    report.relative_residual = 0.0;
    return;
  }
  Eigen::VectorXd r = (b - a * x).cwiseProduct(mask);
  Eigen::VectorXd z = r.cwiseProduct(dinv);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  Eigen::VectorXd q(n);
  int it = 0;
  double rel = r.norm() / bnorm;
  report.history.push_back(rel);
  while (rel > options.rel_tol && it < max_it) {
    q.noalias() = a * p;
    q = q.cwiseProduct(mask);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) {
      throw Error(ErrorKind::well_posedness,
        "system matrix is not positive definite on the free space (coercivity radius violated)");
    }
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    ++it;
    if (it % 50 == 0) r = (b - a * x).cwiseProduct(mask);
    rel = r.norm() / bnorm;
    report.history.push_back(rel);
    z = r.cwiseProduct(dinv);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  report.iterations = it;
  rel = (b - a * x).cwiseProduct(mask).norm() / bnorm;
  report.relative_residual = rel;
  if (rel > options.rel_tol * 10.0) {
    std::string log;
    for (std::size_t i = 0; i < report.history.size(); i += std::max<std::size_t>(1, report.history.size() / 10)) {
      log += " [" + std::to_string(i) + "] " + std::to_string(report.history[i]);
    }
    throw Error(ErrorKind::solver, "conjugate gradients did not converge in " + std::to_string(it) +
      " iterations, relative residual " + std::to_string(rel) + "; log:" + log);
  }
}

ScalarField assemble_solve(MeshPtr mesh, const CoefficientBundle & bundle, const PotentialSpec & f,
  const PointFunction & boundary_data, SolveReport * report, const SolverOptions & options)
{
  if (mesh->radius > bundle.r_tilde * (1.0 + 1e-12)) {
    throw Error(ErrorKind::domain, "mesh radius exceeds the radius of validity of the coefficients");
  }
  const Eigen::SparseMatrix<double> s = assemble_operator(*mesh, bundle, f);
  const int nv = mesh->num_vertices();
  std::vector<char> fixed(static_cast<std::size_t>(nv), 0);
  Eigen::VectorXd ub = Eigen::VectorXd::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    if (mesh->dirichlet[static_cast<std::size_t>(v)]) {
      fixed[static_cast<std::size_t>(v)] = 1;
    } else if (mesh->on_sphere[static_cast<std::size_t>(v)]) {
      fixed[static_cast<std::size_t>(v)] = 1;
      ub[v] = boundary_data(mesh->reference[static_cast<std::size_t>(v)]);
    }
  }
  const Eigen::VectorXd load = -(s * ub);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
  SolveReport local;
  pcg_solve(s, load, fixed, x, options, local);
  if (report) *report = local;
  ScalarField u;
  u.nodal = x;
  for (int v = 0; v < nv; ++v) {
    if (fixed[static_cast<std::size_t>(v)]) u.nodal[v] = ub[v];
  }
  u.dirichlet_mask = mesh->dirichlet;
  u.mesh = std::move(mesh);
  return u;
}

double TetField::value_at(const Vec3 & x) const
{
  const Vec3 d = x - points[0];
  return values[0] + grad.dot(d);
}

TetField tet_field(const ScalarField & u, int t)
{
  TetField tf;
  tf.points = u.mesh->tet_points(t);
  tf.grads = bary_gradients(tf.points);
  const auto & ids = u.mesh->tets[static_cast<std::size_t>(t)];
  for (int a = 0; a < 4; ++a) tf.values[a] = u.nodal[ids[a]];
  tf.grad = tf.grads.transpose() * tf.values;
  return tf;
}

namespace
{

bool upper_side(const std::array<Vec3, 4> & p) { return p[0][2] + p[1][2] + p[2][2] + p[3][2] >= 0.0; }

}  // namespace

RecoveredGradient recover_gradient(const ScalarField & u)
{
  const TetMesh & mesh = *u.mesh;
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  RecoveredGradient rec;
  rec.upper.assign(nv, Vec3::Zero());
  rec.lower.assign(nv, Vec3::Zero());
  std::vector<double> wu(nv, 0.0), wl(nv, 0.0);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetField tf = tet_field(u, t);
    const double vol = abs_volume(tf.points);
    const bool up = upper_side(tf.points);
    for (int v : mesh.tets[static_cast<std::size_t>(t)]) {
      const auto k = static_cast<std::size_t>(v);
      if (up) {
        rec.upper[k] += vol * tf.grad;
        wu[k] += vol;
      } else {
        rec.lower[k] += vol * tf.grad;
        wl[k] += vol;
      }
    }
  }
  for (std::size_t k = 0; k < nv; ++k) {
    if (wu[k] > 0.0) rec.upper[k] /= wu[k];
    if (wl[k] > 0.0) rec.lower[k] /= wl[k];
  }
  return rec;
}

Vec3 recovered_gradient_at(const RecoveredGradient & rec, const ScalarField & u, const Vec3 & x)
{
  const PointLocation loc = locate(*u.mesh, x);
  if (loc.tet < 0) return Vec3::Zero();
  const auto & ids = u.mesh->tets[static_cast<std::size_t>(loc.tet)];
  const auto & side = upper_side(u.mesh->tet_points(loc.tet)) ? rec.upper : rec.lower;
  Vec3 g = Vec3::Zero();
  for (int a = 0; a < 4; ++a) g += loc.bary[a] * side[static_cast<std::size_t>(ids[a])];
  return g;
}

FieldSample sample(const ScalarField & u, const Vec3 & x)
{
  FieldSample s;
  const PointLocation loc = locate(*u.mesh, x);
  if (loc.tet < 0) return s;
  const TetField tf = tet_field(u, loc.tet);
  s.value = tf.values.dot(loc.bary);
  s.grad = tf.grad;
  s.inside = loc.inside;
  return s;
}

namespace
{

double tet_integral(const ScalarField & u, int t, double r, const FieldIntegrand & integrand, bool singular,
  bool clipped)
{
  const TetField tf = tet_field(u, t);
  const TetIntegrand fn = [&](const Vec3 & x) { return integrand(x, tf.value_at(x), tf.grad); };
  return clipped ? integrate_tet_clipped(tf.points, fn, r, singular) : integrate_tet(tf.points, fn, singular);
}

}  // namespace

double integrate_ball(const ScalarField & u, double r, const FieldIntegrand & integrand, bool singular)
{
  double sum = 0.0;
  for (int t = 0; t < u.mesh->num_tets(); ++t) {
    const auto p = u.mesh->tet_points(t);
    if (tet_min_radius_bound(p) >= r) continue;
    sum += tet_integral(u, t, r, integrand, singular, tet_max_radius(p) > r);
  }
  return sum;
}

RadialIntegrator::RadialIntegrator(const ScalarField & u, const FieldIntegrand & integrand, bool singular)
  : RadialIntegrator(u.mesh,
      [&u, integrand](int t) -> TetIntegrand {
        const TetField tf = tet_field(u, t);
        return [tf, integrand](const Vec3 & x) { return integrand(x, tf.value_at(x), tf.grad); };
      },
      singular)
{
}

RadialIntegrator::RadialIntegrator(MeshPtr mesh, TetIntegrandFactory factory, bool singular, int clip_depth)
  : mesh_(std::move(mesh)), factory_(std::move(factory)), singular_(singular), clip_depth_(clip_depth)
{
  const int nt = mesh_->num_tets();
  tmax_.resize(static_cast<std::size_t>(nt));
  tmin_.resize(static_cast<std::size_t>(nt));
  std::vector<double> full(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const auto p = mesh_->tet_points(t);
    tmax_[static_cast<std::size_t>(t)] = tet_max_radius(p);
    tmin_[static_cast<std::size_t>(t)] = tet_min_radius_bound(p);
    full[static_cast<std::size_t>(t)] = integrate_tet(p, factory_(t), singular_);
  }
  order_.resize(static_cast<std::size_t>(nt));
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
    [&](int a, int b) { return tmax_[static_cast<std::size_t>(a)] < tmax_[static_cast<std::size_t>(b)]; });
  prefix_.assign(static_cast<std::size_t>(nt + 1), 0.0);
  for (int q = 0; q < nt; ++q) {
    prefix_[static_cast<std::size_t>(q + 1)] =
      prefix_[static_cast<std::size_t>(q)] + full[static_cast<std::size_t>(order_[static_cast<std::size_t>(q)])];
  }
}

double RadialIntegrator::operator()(double r) const
{
  const int nt = static_cast<int>(order_.size());
  int lo = 0;
  int hi = nt;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (tmax_[static_cast<std::size_t>(order_[static_cast<std::size_t>(mid)])] <= r) lo = mid + 1; else hi = mid;
  }
  double sum = prefix_[static_cast<std::size_t>(lo)];
  for (int q = lo; q < nt; ++q) {
    const int t = order_[static_cast<std::size_t>(q)];
    if (tmin_[static_cast<std::size_t>(t)] >= r) continue;
    sum += integrate_tet_clipped(mesh_->tet_points(t), factory_(t), r, singular_, clip_depth_);
  }
  return sum;
}

L2H1 h1_distance(const ScalarField & u, const ScalarField & v, double region_radius)
{
  const double reach = std::min(u.mesh->radius, v.mesh->radius);
  if (!(region_radius > 0.0) || region_radius > reach * (1.0 + 1e-9)) {
    throw Error(ErrorKind::domain, "region radius exceeds the meshes being compared");
  }
  // Integrate on the covering mesh; the other field is point-evaluated.
  const bool u_target = u.mesh->kind == DomainKind::slit_ball || v.mesh->kind != DomainKind::slit_ball;
  const ScalarField & target = u_target ? u : v;
  const ScalarField & other = u_target ? v : u;
  const bool same = target.mesh == other.mesh;
  double l2 = 0.0;
  double grad2 = 0.0;
  const TetRule & rule = tet_rule_4();
  for (int t = 0; t < target.mesh->num_tets(); ++t) {
    const auto p = target.mesh->tet_points(t);
    if (tet_min_radius_bound(p) >= region_radius) continue;
    const TetField tf = tet_field(target, t);
    if (same) {
      const TetField of = tet_field(other, t);
      auto diff_val = [&](const Vec3 & x) { const double d = tf.value_at(x) - of.value_at(x); return d * d; };
      const Vec3 dg = tf.grad - of.grad;
      if (tet_max_radius(p) <= region_radius) {
        l2 += integrate_tet(p, diff_val, false);
        grad2 += dg.squaredNorm() * abs_volume(p);
      } else {
        l2 += integrate_tet_clipped(p, diff_val, region_radius, false);
        grad2 += integrate_tet_clipped(p, [&](const Vec3 &) { return dg.squaredNorm(); }, region_radius, false);
      }
      continue;
    }
    auto both = [&](const Vec3 & x, bool want_grad) {
      const FieldSample s = sample(other, x);
      if (want_grad) return (tf.grad - s.grad).squaredNorm();
      const double d = tf.value_at(x) - s.value;
      return d * d;
    };
    if (tet_max_radius(p) <= region_radius) {
      const double vol = abs_volume(p);
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Eigen::Vector4d & l = rule.bary[q];
        const Vec3 x = l[0] * p[0] + l[1] * p[1] + l[2] * p[2] + l[3] * p[3];
        const FieldSample s = sample(other, x);
        const double d = tf.value_at(x) - s.value;
        l2 += rule.weights[q] * vol * d * d;
        grad2 += rule.weights[q] * vol * (tf.grad - s.grad).squaredNorm();
      }
    } else {
      l2 += integrate_tet_clipped(p, [&](const Vec3 & x) { return both(x, false); }, region_radius, false, 2);
      grad2 += integrate_tet_clipped(p, [&](const Vec3 & x) { return both(x, true); }, region_radius, false, 2);
    }
  }
  L2H1 out;
  out.l2 = std::sqrt(std::max(0.0, l2));
  out.h1 = std::sqrt(std::max(0.0, l2 + grad2));
  return out;
}

}  // namespace crackfreq
