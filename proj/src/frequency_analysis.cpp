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

#include "crackfreq/frequency_analysis.hpp"

#include "crackfreq/io.hpp"
#include "crackfreq/quadrature.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

namespace crackfreq
{

namespace
{

constexpr int kDim = 2;

bool is_flat(const CoefficientBundle & b) { return b.crack.family == CrackFamily::flat; }

bool singular_potential(const PotentialSpec & f)
{
  return f.mode == PotentialMode::a1 && f.amplitude != 0.0 && f.delta < 2.0;
}

Mat3 coeff_a(const CoefficientBundle & b, const Vec3 & x)
{
  return is_flat(b) ? Mat3::Identity().eval() : coefficient_A3(b, x);
}

double coeff_mu(const CoefficientBundle & b, const Vec3 & x) { return is_flat(b) ? 1.0 : coefficient_mu3(b, x); }

double potential_at(const CoefficientBundle & b, const PotentialSpec & f, const Vec3 & x)
{
  return f.is_zero() ? 0.0 : transform_potential3(b, f, x);
}

// Weighted least squares for y ~ c0 + c1 * x^p; returns (c0, c1) and the condition number.
struct LineFit
{
  double c0 = 0.0;
  double c1 = 0.0;
  double condition = 0.0;
};

LineFit fit_power(const std::vector<double> & x, const std::vector<double> & y, const std::vector<double> & w,
  double p)
{
  const int m = static_cast<int>(x.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
    a(i, 0) = sw;
    a(i, 1) = sw * std::pow(x[static_cast<std::size_t>(i)], p);
    rhs[i] = sw * y[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto & sv = svd.singularValues();
  LineFit fit;
  fit.condition = sv[1] > 0.0 ? sv[0] / sv[1] : std::numeric_limits<double>::infinity();
  if (fit.condition > 1e8) {
    throw Error(ErrorKind::ill_conditioned, "limit fit condition number " + std::to_string(fit.condition));
  }
  const Eigen::Vector2d c = svd.solve(rhs);
  fit.c0 = c[0];
  fit.c1 = c[1];
  return fit;
}

}  // namespace

std::vector<SurfaceSample> sample_sphere(const ScalarField & u, double r, const RecoveredGradient * rec)
{
  static const std::vector<SpherePoint> rule = sphere_product_rule(64, 128);
  std::vector<SurfaceSample> out;
  out.reserve(rule.size());
  for (const auto & q : rule) {
    SurfaceSample s;
    s.normal = q.direction;
    s.x = r * q.direction;
    s.weight = q.weight * r * r;
    if (rec) {
      s.value = sample(u, s.x).value;
      s.grad = recovered_gradient_at(*rec, u, s.x);
    } else {
      const FieldSample fs = sample(u, s.x);
      s.value = fs.value;
      s.grad = fs.grad;
    }
    out.push_back(s);
  }
  return out;
}

void check_resolved(const ScalarField & u, double r)
{
  const TetMesh & mesh = *u.mesh;
  if (!(r > 0.0) || r > mesh.radius * (1.0 + 1e-12)) {
    throw Error(ErrorKind::domain, "radius " + std::to_string(r) + " outside the meshed ball");
  }
  const double local = mesh.local_size(r);
  if (r < 4.0 * local) {
    throw Error(ErrorKind::resolution,
      "radius " + std::to_string(r) + " below four local edge lengths (" + std::to_string(local) + ")");
  }
}

double height(const ScalarField & u, const CoefficientBundle & bundle, double r)
{
  check_resolved(u, r);
  double sum = 0.0;
  for (const auto & s : sample_sphere(u, r)) sum += s.weight * coeff_mu(bundle, s.x) * s.value * s.value;
  return sum / std::pow(r, kDim);
}

HeightEnergy height_energy(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f, double r)
{
  HeightEnergy out;
  out.H = height(u, bundle, r);
  const FieldIntegrand integrand = [&](const Vec3 & x, double v, const Vec3 & g) {
    return (coeff_a(bundle, x) * g).dot(g) - potential_at(bundle, f, x) * v * v;
  };
  out.D = integrate_ball(u, r, integrand, singular_potential(f)) * std::pow(r, 1 - kDim);
  return out;
}

double eps_bar(const PotentialSpec & f, int dim_n)
{
  return std::min(0.0, potential_epsilon(f, dim_n) - 1.0);
}

RadialProfile frequency_profile(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const std::vector<double> & radii)
{
  if (radii.empty() || !std::is_sorted(radii.begin(), radii.end())) {
    throw Error(ErrorKind::precondition, "profile radii must be ascending and nonempty");
  }
  for (double r : radii) check_resolved(u, r);
  RadialProfile p;
  p.radii = radii;
  p.eps_bar = eps_bar(f, kDim);
  const RadialIntegrator energy(u,
    [&](const Vec3 & x, double v, const Vec3 & g) {
      return (coeff_a(bundle, x) * g).dot(g) - potential_at(bundle, f, x) * v * v;
    },
    singular_potential(f));
  for (double r : radii) {
    const double h = height(u, bundle, r);
    const double d = energy(r) * std::pow(r, 1 - kDim);
    p.H.push_back(h);
    p.D.push_back(d);
    p.N.push_back(h > 0.0 ? d / h : std::numeric_limits<double>::quiet_NaN());
  }
  return p;
}

LimitEstimate estimate_limit(const RadialProfile & profile)
{
  const auto & r = profile.radii;
  if (r.size() < 5 || r.back() < 2.0 * r.front()) {
    throw Error(ErrorKind::precondition, "limit fit needs at least 5 radii spanning an octave");
  }
  const double p = profile.eps_bar + 1.0;
  const std::vector<double> rs(r.begin(), r.begin() + 3);
  const std::vector<double> ns(profile.N.begin(), profile.N.begin() + 3);
  std::vector<double> w;
  for (double x : rs) w.push_back(1.0 / x);
  const LineFit fit = fit_power(rs, ns, w, p);

  LimitEstimate est;
  est.c0 = fit.c0;
  est.c1 = fit.c1;
  est.ell = fit.c0;
  const double twice = 2.0 * est.ell;
  const double nearest = std::round(twice);
  est.k0 = (std::abs(twice - nearest) <= 0.1 && nearest >= 1.0) ? static_cast<int>(nearest) : 0;
  for (std::size_t i = 0; i < rs.size(); ++i) est.residuals.push_back(ns[i] - fit.c0 - fit.c1 * std::pow(rs[i], p));

  est.growth_constant = fit.c0 != 0.0 ? std::max(0.0, -fit.c1 / fit.c0) : 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double g0 = profile.N[i] * std::exp(est.growth_constant * std::pow(r[i], p));
    const double g1 = profile.N[i + 1] * std::exp(est.growth_constant * std::pow(r[i + 1], p));
    defect = std::min(defect, g1 - g0);
  }
  est.monotone_defect = defect;
  return est;
}

void attach_limit(RadialProfile & profile)
{
  const LimitEstimate est = estimate_limit(profile);
  profile.ell_estimate = est.ell;
  profile.k0 = est.k0;
  profile.fit_report = est.residuals;
}

HeightLimit height_limit(const RadialProfile & profile, int k0)
{
  const std::size_t n = profile.radii.size();
  if (n < 4) throw Error(ErrorKind::precondition, "height limit needs at least 4 radii");
  const double p = profile.eps_bar + 1.0;
  HeightLimit out;
  for (std::size_t start = n - 3;; --start) {
    std::vector<double> rs, qs, w;
    for (std::size_t i = start; i < start + 3; ++i) {
      rs.push_back(profile.radii[i]);
      qs.push_back(profile.H[i] / std::pow(profile.radii[i], k0));
      w.push_back(1.0);
    }
    out.intercepts.push_back(fit_power(rs, qs, w, p).c0);
    if (start == 0) break;
  }
  const std::size_t m = out.intercepts.size();
  out.limit = out.intercepts[m - 1];
  out.relative_change = std::abs(out.intercepts[m - 1] - out.intercepts[m - 2]) / std::abs(out.limit);
  return out;
}

std::vector<double> doubling_check(const ScalarField & u, const CoefficientBundle & bundle, double lambda,
  const std::vector<double> & Rs)
{
  const double base = height(u, bundle, lambda);
  std::vector<double> ratios;
  for (double R : Rs) {
    if (R < 1.0 || R > 2.0) throw Error(ErrorKind::precondition, "doubling factor outside [1, 2]");
    ratios.push_back(R == 1.0 ? 1.0 : height(u, bundle, R * lambda) / base);
  }
  return ratios;
}

double unit_sphere_mass(const ScalarField & v, const CoefficientBundle & bundle, double lambda)
{
  double sum = 0.0;
  for (const auto & s : sample_sphere(v, 1.0)) sum += s.weight * coeff_mu(bundle, lambda * s.x) * s.value * s.value;
  return sum;
}

ScalarField blowup_field(const ScalarField & u, const CoefficientBundle & bundle, double lambda, MeshPtr reference)
{
  if (std::abs(reference->radius - 1.0) > 1e-12 || reference->kind != DomainKind::slit_ball) {
    throw Error(ErrorKind::precondition, "blow-up reference mesh must be the unit slit ball");
  }
  const double h = height(u, bundle, lambda);
  if (!(h >= 1e-300)) throw Error(ErrorKind::underflow, "height below 1e-300 at lambda " + std::to_string(lambda));
  ScalarField v = zero_field(reference);
  const double scale = 1.0 / std::sqrt(h);
  for (int i = 0; i < reference->num_vertices(); ++i) {
    if (v.dirichlet_mask[static_cast<std::size_t>(i)]) continue;
    v.nodal[i] = sample(u, lambda * reference->vertices[static_cast<std::size_t>(i)]).value * scale;
  }
  v.nodal /= std::sqrt(unit_sphere_mass(v, bundle, lambda));
  return v;
}

EigenCluster select_cluster(const SphereMesh & mesh, const std::vector<SphericalEigenpair> & pairs, int k)
{
  EigenCluster c;
  c.mesh = &mesh;
  c.k = k;
  for (const auto & p : pairs) {
    if (p.k_index == k) c.pairs.push_back(p);
  }
  if (k < 1 || c.pairs.empty()) {
    throw Error(ErrorKind::precondition, "no computed eigenpair matches k = " + std::to_string(k));
  }
  return c;
}

std::vector<double> blowup_convergence(const ScalarField & u, const CoefficientBundle & bundle,
  const std::vector<double> & lambdas, const EigenCluster & cluster, MeshPtr reference)
{
  if (cluster.k < 1 || cluster.pairs.empty() || cluster.mesh == nullptr) {
    throw Error(ErrorKind::precondition, "blow-up comparison needs a matched eigencluster");
  }
  const TetMesh & ref = *reference;
  const P1Matrices p1 = assemble_p1(ref);
  const Eigen::SparseMatrix<double> gram = p1.stiffness + p1.mass;

  const int nv = ref.num_vertices();
  const int m = static_cast<int>(cluster.pairs.size());
  Eigen::MatrixXd basis(nv, m);
  for (int i = 0; i < nv; ++i) {
    const Vec3 & x = ref.vertices[static_cast<std::size_t>(i)];
    const double r = x.norm();
    for (int j = 0; j < m; ++j) {
      basis(i, j) = (r == 0.0 || ref.dirichlet[static_cast<std::size_t>(i)])
        ? 0.0
        : std::pow(r, 0.5 * cluster.k) * eval_eigenfunction(cluster.pairs[static_cast<std::size_t>(j)], *cluster.mesh,
                                                            x / r);
    }
  }
  const Eigen::MatrixXd gb = gram * basis;
  const Eigen::MatrixXd small = basis.transpose() * gb;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(small);

  std::vector<double> errors;
  for (double lambda : lambdas) {
    const ScalarField v = blowup_field(u, bundle, lambda, reference);
    const Eigen::VectorXd coef = ldlt.solve(gb.transpose() * v.nodal);
    const Eigen::VectorXd res = v.nodal - basis * coef;
    errors.push_back(std::sqrt(std::max(0.0, res.dot(gram * res))));
  }
  return errors;
}

Eigen::VectorXd sphere_trace(const ScalarField & u, const SphereMesh & mesh, double lambda)
{
  Eigen::VectorXd trace = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.vertices.size()));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (mesh.on_cut[i]) continue;
    trace[static_cast<Eigen::Index>(i)] = sample(u, lambda * mesh.vertices[i]).value;
  }
  return trace;
}

double fourier_coefficient(const ScalarField & u, const SphericalEigenpair & basis, const SphereMesh & mesh,
  const SphereMatrices & mats, double lambda)
{
  check_resolved(u, lambda);
  return sphere_inner(mats, sphere_trace(u, mesh, lambda), basis.psi);
}

double fourier_coefficient(const PointFunction & u, const SphericalEigenpair & basis, const SphereMesh & mesh,
  const SphereMatrices & mats, double lambda)
{
  Eigen::VectorXd trace = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.vertices.size()));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!mesh.on_cut[i]) trace[static_cast<Eigen::Index>(i)] = u(lambda * mesh.vertices[i]);
  }
  return sphere_inner(mats, trace, basis.psi);
}

FourierTable upsilon_beta(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const EigenCluster & cluster, const std::vector<double> & lambdas, const std::vector<double> & Rs,
  const FourierOptions & options)
{
  if (cluster.k < 1 || cluster.pairs.empty() || cluster.mesh == nullptr) {
    throw Error(ErrorKind::precondition, "Fourier table needs a matched eigencluster");
  }
  if (Rs.empty()) throw Error(ErrorKind::precondition, "no R values");
  const double r_max = *std::max_element(Rs.begin(), Rs.end());
  for (double l : lambdas) {
    if (l > r_max) throw Error(ErrorKind::precondition, "lambda above R");
  }
  const SphereMesh & smesh = *cluster.mesh;
  const SphereMatrices mats = assemble_sphere(smesh);
  const int k0 = cluster.k;
  const int mcount = static_cast<int>(cluster.pairs.size());

  FourierTable table;
  table.k0 = k0;
  table.lambdas = lambdas;
  table.R_values = Rs;

  // t grid: geometric with the R values and lambdas merged in.
  std::vector<double> grid;
  const double step = std::pow(2.0, 1.0 / options.points_per_octave);
  for (double t = options.t_min; t < r_max * (1.0 - 1e-12); t *= step) grid.push_back(t);
  for (double R : Rs) grid.push_back(R);
  for (double l : lambdas) {
    if (l >= options.t_min) grid.push_back(l);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
    grid.end());
  table.t_grid = grid;

  const bool vanishing = is_flat(bundle) && f.is_zero();
  const RecoveredGradient rec = vanishing ? RecoveredGradient{} : recover_gradient(u);
  std::vector<std::vector<double>> ups(static_cast<std::size_t>(mcount));
  std::vector<std::function<double(double)>> upsilon_at(static_cast<std::size_t>(mcount));
  std::vector<ScalarField> y_fields;
  std::vector<std::unique_ptr<RadialIntegrator>> volume;
  y_fields.reserve(static_cast<std::size_t>(mcount));
  for (int m = 0; m < mcount; ++m) {
    const SphericalEigenpair & pair = cluster.pairs[static_cast<std::size_t>(m)];
    if (vanishing) {
      upsilon_at[static_cast<std::size_t>(m)] = [](double) { return 0.0; };
      continue;
    }
    // Zero-homogeneous extension of Y interpolated on the volume mesh.
    y_fields.push_back(interpolate(u.mesh, [&pair, &smesh](const Vec3 & x) {
      const double r = x.norm();
      return r == 0.0 ? 0.0 : eval_eigenfunction(pair, smesh, x / r);
    }));
    const ScalarField & yf = y_fields.back();
    volume.push_back(std::make_unique<RadialIntegrator>(u.mesh,
      [&u, &yf, &bundle, &f](int t) -> TetIntegrand {
        const TetField tu = tet_field(u, t);
        const TetField ty = tet_field(yf, t);
        return [tu, ty, &bundle, &f](const Vec3 & x) {
          const Vec3 flux = (coeff_a(bundle, x) - Mat3::Identity()) * tu.grad;
          return -flux.dot(ty.grad) + potential_at(bundle, f, x) * tu.value_at(x) * ty.value_at(x);
        };
      },
      singular_potential(f), 2));
    const RadialIntegrator * vol = volume.back().get();
    upsilon_at[static_cast<std::size_t>(m)] = [&u, &rec, &bundle, &smesh, &pair, vol](double t) {
      double surface = 0.0;
      for (const auto & s : sample_sphere(u, t, &rec)) {
        const Vec3 flux = (coeff_a(bundle, s.x) - Mat3::Identity()) * s.grad;
        surface += s.weight * flux.dot(s.normal) * eval_eigenfunction(pair, smesh, s.normal);
      }
      return (*vol)(t) + surface;
    };
  }

  for (int m = 0; m < mcount; ++m) {
    auto & row = ups[static_cast<std::size_t>(m)];
    for (double t : grid) row.push_back(upsilon_at[static_cast<std::size_t>(m)](t));
  }
  table.upsilon_grid = ups;

  for (double l : lambdas) {
    for (int m = 0; m < mcount; ++m) {
      FourierRow row;
      row.lambda = l;
      row.k = k0;
      row.m = m + 1;
      row.phi = fourier_coefficient(u, cluster.pairs[static_cast<std::size_t>(m)], smesh, mats, l);
      const auto it = std::find_if(grid.begin(), grid.end(), [&](double t) { return std::abs(t - l) <= 1e-12 * l; });
      row.upsilon = it != grid.end() ? ups[static_cast<std::size_t>(m)][static_cast<std::size_t>(it - grid.begin())]
                                     : upsilon_at[static_cast<std::size_t>(m)](l);
      table.rows.push_back(row);
    }
  }

  // Power-law tail below t_min fitted on the first octave.
  const double q1 = -kDim - 0.5 * k0;
  const double q2 = 0.5 * k0 - 1.0;
  const double threshold = kDim + 0.5 * k0 - 1.0 + 0.1;
  std::vector<double> tail1(static_cast<std::size_t>(mcount), 0.0);
  std::vector<double> tail2(static_cast<std::size_t>(mcount), 0.0);
  for (int m = 0; m < mcount; ++m) {
    const auto & row = ups[static_cast<std::size_t>(m)];
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < grid.size() && grid[i] <= 2.0 * grid.front() * (1.0 + 1e-12); ++i) {
      if (std::abs(row[i]) > 1e-300) {
        lx.push_back(std::log(grid[i]));
        ly.push_back(std::log(std::abs(row[i])));
      }
    }
    if (lx.size() < 2) {
      table.tail_exponents.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double p = sxy / sxx;
    table.tail_exponents.push_back(p);
    if (!(p > threshold)) {
      std::ostringstream msg;
      msg << "fitted Upsilon exponent " << p << " does not exceed " << threshold << " (m = " << m + 1 << ")";
      throw Error(ErrorKind::integrability, msg.str());
    }
    const double a = std::copysign(std::exp(my - p * mx), row.front());
    const double t0 = grid.front();
    tail1[static_cast<std::size_t>(m)] = a * std::pow(t0, p + q1 + 1.0) / (p + q1 + 1.0);
    tail2[static_cast<std::size_t>(m)] = a * std::pow(t0, p + q2 + 1.0) / (p + q2 + 1.0);
  }

  // Trapezoid in log t from t_min to R.
  const auto integral_to = [&](int m, double R, double q) {
    const auto & row = ups[static_cast<std::size_t>(m)];
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size() && grid[i + 1] <= R * (1.0 + 1e-12); ++i) {
      const double g0 = std::pow(grid[i], q + 1.0) * row[i];
      const double g1 = std::pow(grid[i + 1], q + 1.0) * row[i + 1];
      sum += 0.5 * (g0 + g1) * std::log(grid[i + 1] / grid[i]);
    }
    return sum;
  };

  const double ca = (2.0 * kDim + k0 - 2.0) / (2.0 * (kDim + k0 - 1.0));
  const double cb = k0 / (2.0 * (kDim + k0 - 1.0));
  for (double R : Rs) {
    std::vector<double> betas;
    for (int m = 0; m < mcount; ++m) {
      const double phi = fourier_coefficient(u, cluster.pairs[static_cast<std::size_t>(m)], smesh, mats, R);
      const double i1 = tail1[static_cast<std::size_t>(m)] + integral_to(m, R, q1);
      const double i2 = tail2[static_cast<std::size_t>(m)] + integral_to(m, R, q2);
      betas.push_back(phi / std::pow(R, 0.5 * k0) + ca * i1 + cb * std::pow(R, -kDim + 1.0 - k0) * i2);
    }
    table.beta_by_R.push_back(betas);
  }
  const auto largest = std::max_element(Rs.begin(), Rs.end()) - Rs.begin();
  table.R_used = Rs[static_cast<std::size_t>(largest)];
  table.beta = table.beta_by_R[static_cast<std::size_t>(largest)];
  return table;
}

ParsevalCheck parseval_check(const ScalarField & u, const SphereMesh & mesh, const SphereMatrices & mats,
  const std::vector<SphericalEigenpair> & basis, double lambda)
{
  const Eigen::VectorXd trace = sphere_trace(u, mesh, lambda);
  ParsevalCheck c;
  for (const auto & b : basis) {
    const double phi = sphere_inner(mats, trace, b.psi);
    c.partial_sum += phi * phi;
  }
  c.norm = sphere_inner(mats, trace, trace);
  c.pass = c.partial_sum <= (1.0 + 1e-3) * c.norm;
  return c;
}

double vanishing_order(const ScalarField & u, const CoefficientBundle & bundle, const std::vector<double> & radii)
{
  if (u.nodal.size() == 0 || u.nodal.cwiseAbs().maxCoeff() <= 1e-14) {
    throw Error(ErrorKind::triviality, "field is numerically zero");
  }
  if (radii.size() < 2) throw Error(ErrorKind::precondition, "vanishing order needs two radii");
  std::vector<double> lx, ly;
  for (double r : radii) {
    lx.push_back(std::log(r));
    ly.push_back(0.5 * std::log(height(u, bundle, r)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxy / sxx;
}

std::string profile_csv(const RadialProfile & profile)
{
  CsvTable t;
  t.header = {"r", "H", "D", "N"};
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    t.rows.push_back({profile.radii[i], profile.H[i], profile.D[i], profile.N[i]});
  }
  return to_csv(t);
}

std::string fourier_csv(const FourierTable & table)
{
  CsvTable t;
  t.header = {"lambda", "k", "m", "phi", "upsilon"};
  for (const auto & r : table.rows) {
    t.rows.push_back({r.lambda, static_cast<double>(r.k), static_cast<double>(r.m), r.phi, r.upsilon});
  }
  return to_csv(t);
}

std::string fourier_json(const FourierTable & table, double ell)
{
  nlohmann::ordered_json j;
  j["ell"] = ell;
  j["k0"] = table.k0;
  j["beta"] = table.beta;
  j["R"] = table.R_used;
  j["beta_by_R"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < table.R_values.size(); ++i) {
    j["beta_by_R"].push_back({{"R", table.R_values[i]}, {"beta", table.beta_by_R[i]}});
  }
  return j.dump(2) + "\n";
}

}  // namespace crackfreq
