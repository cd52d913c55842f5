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

#include "crackfreq/inequality_audit.hpp"

#include "crackfreq/frequency_analysis.hpp"
#include "crackfreq/quadrature.hpp"

#include <Eigen/Geometry>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <optional>

namespace crackfreq
{

namespace
{

constexpr int kDim = 2;

bool is_flat(const CoefficientBundle & b) { return b.crack.family == CrackFamily::flat; }

Mat3 coeff_a(const CoefficientBundle & b, const Vec3 & x)
{
  return is_flat(b) ? Mat3::Identity().eval() : coefficient_A3(b, x);
}

double coeff_mu(const CoefficientBundle & b, const Vec3 & x) { return is_flat(b) ? 1.0 : coefficient_mu3(b, x); }

double potential_at(const CoefficientBundle & b, const PotentialSpec & f, const Vec3 & x)
{
  return f.is_zero() ? 0.0 : transform_potential3(b, f, x);
}

bool singular_potential(const PotentialSpec & f)
{
  return f.mode == PotentialMode::a1 && f.amplitude != 0.0 && f.delta < 2.0;
}

double surface_integral(const ScalarField & u, double r,
  const std::function<double(const SurfaceSample &)> & integrand)
{
  double sum = 0.0;
  for (const auto & s : sample_sphere(u, r)) sum += s.weight * integrand(s);
  return sum;
}

Dual seeded(double value, int index)
{
  Vecd d = Vecd::Zero(3);
  d[index] = 1.0;
  return Dual(value, d);
}

template <typename Scalar>
Scalar power(const Scalar & x, int e)
{
  Scalar out(1.0);
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

template <typename Scalar>
Vec<Scalar> cubic_gradient(const Cubic & v, const Vec<Scalar> & x)
{
  Vec<Scalar> g(3);
  for (int i = 0; i < 3; ++i) g[i] = Scalar(0.0);
  const auto & ex = cubic_exponents();
  for (std::size_t m = 0; m < ex.size(); ++m) {
    if (v.coeffs[m] == 0.0) continue;
    for (int d = 0; d < 3; ++d) {
      if (ex[m][static_cast<std::size_t>(d)] == 0) continue;
      Scalar term(v.coeffs[m] * ex[m][static_cast<std::size_t>(d)]);
      for (int i = 0; i < 3; ++i) {
        term *= power(x[i], ex[m][static_cast<std::size_t>(i)] - (i == d ? 1 : 0));
      }
      g[d] += term;
    }
  }
  return g;
}

// Volume integrand of the Pohozaev-type identities for a P1 gradient g and value v.
double pohozaev_volume_integrand(const CoefficientBundle & b, const PotentialSpec & f, PohozaevMode mode,
  const Vec3 & x, double v, const Vec3 & g)
{
  double out = 0.0;
  Vec3 beta = x;
  double divb = 3.0;
  if (is_flat(b)) {
    out = g.squaredNorm();
  } else {
    const Vecd xd = to_vecd(x);
    const Mat3 a = coefficient_A3(b, x);
    const Matd jb = jac_beta(b, xd);
    beta = coefficient_beta3(b, x);
    divb = jb.trace();
    const Vec3 ag = a * g;
    const Vecd da = dA_form(b, xd, to_vecd(g), to_vecd(g));
    out = divb * ag.dot(g) - 2.0 * (Mat3(jb) * ag).dot(g) + to_vec3(da).dot(beta);
  }
  if (f.is_zero()) return out;
  const double ft = transform_potential3(b, f, x);
  if (mode == PohozaevMode::a2_inequality) {
    const Vec3 grad_f = to_vec3(transformed_potential_gradient(b, f, to_vecd(x)));
    out -= (ft * divb + grad_f.dot(beta)) * v * v;
  } else {
    out += 2.0 * beta.dot(g) * ft * v;
  }
  return out;
}

// Cutoff equal to 1 within distance a of the excised sliver {x2 >= f_n(|x3|)} and 0 beyond 2a
// (distance measured to the half-plane x3 = 0, x2 >= f_n(0)).
struct SliverCutoff
{
  double tip = 0.0;
  double a = 0.0;

  double distance(const Vec3 & x) const { return x[1] >= tip ? std::abs(x[2]) : std::hypot(tip - x[1], x[2]); }
  double value(const Vec3 & x) const
  {
    const double s = std::clamp(distance(x) / a - 1.0, 0.0, 1.0);
    return 1.0 - s * s * (3.0 - 2.0 * s);
  }
  Vec3 gradient(const Vec3 & x) const
  {
    const double d = distance(x);
    const double s = d / a - 1.0;
    if (s <= 0.0 || s >= 1.0 || d == 0.0) return Vec3::Zero();
    const Vec3 dd = x[1] >= tip ? Vec3(0.0, 0.0, x[2] >= 0.0 ? 1.0 : -1.0) : Vec3(0.0, x[1] - tip, x[2]) / d;
    return (-6.0 * s * (1.0 - s) / a) * dd;
  }
};

// W = (A g . g) beta - 2 (beta . g) A g.
Vec3 rellich_field(const CoefficientBundle & b, const Vec3 & x, const Vec3 & g)
{
  if (is_flat(b)) return g.squaredNorm() * x - 2.0 * x.dot(g) * g;
  const Vec3 ag = coefficient_A3(b, x) * g;
  const Vec3 beta = coefficient_beta3(b, x);
  return ag.dot(g) * beta - 2.0 * beta.dot(g) * ag;
}

std::string format_g(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

AuditReport inequality_report(const std::string & name, double lhs, double rhs, double tolerance, double radius)
{
  AuditReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = lhs - rhs;
  r.tolerance = tolerance;
  r.pass = r.residual >= -tolerance;
  r.radius = radius;
  return r;
}

AuditReport identity_report(const std::string & name, double lhs, double rhs, double tolerance, double radius)
{
  AuditReport r = inequality_report(name, lhs, rhs, tolerance, radius);
  r.residual = -std::abs(lhs - rhs);
  r.pass = r.residual >= -tolerance;
  return r;
}

AuditReport hardy_residual(const ScalarField & u, double r, double tolerance_scale)
{
  check_resolved(u, r);
  const double c = 0.25 * (kDim - 1) * (kDim - 1);
  const double lhs =
    c * integrate_ball(u, r, [](const Vec3 & x, double v, const Vec3 &) { return v * v / x.squaredNorm(); }, true);
  const double grad = integrate_ball(u, r, [](const Vec3 &, double, const Vec3 & g) { return g.squaredNorm(); });
  const double surf = surface_integral(u, r, [](const SurfaceSample & s) { return s.value * s.value; });
  const double rhs = grad + (kDim - 1) / (2.0 * r) * surf;
  // The inequality reads lhs <= rhs.
  AuditReport rep = inequality_report("hardy", rhs, lhs, 0.01 * std::abs(rhs) * tolerance_scale, r);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.mode = "none";
  return rep;
}

namespace
{

struct CoercivityParts
{
  double energy = 0.0;  // int A grad U . grad U - int |f~| U^2
  double quarter = 0.0;  // int |grad U|^2 / 4
  double surface = 0.0;  // int mu U^2
};

CoercivityParts coercivity_parts(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  double r)
{
  check_resolved(u, r);
  CoercivityParts p;
  p.energy = integrate_ball(u, r,
    [&](const Vec3 & x, double v, const Vec3 & g) {
      return (coeff_a(bundle, x) * g).dot(g) - std::abs(potential_at(bundle, f, x)) * v * v;
    },
    singular_potential(f));
  p.quarter = 0.25 * integrate_ball(u, r, [](const Vec3 &, double, const Vec3 & g) { return g.squaredNorm(); });
  p.surface = surface_integral(u, r, [&](const SurfaceSample & s) { return coeff_mu(bundle, s.x) * s.value * s.value; });
  return p;
}

}  // namespace

double fit_coercivity_constant(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  const std::vector<double> & probe_radii)
{
  const double eps = potential_epsilon(f, kDim);
  double c = 0.0;
  for (double r : probe_radii) {
    const CoercivityParts p = coercivity_parts(u, bundle, f, r);
    const double deficit = p.quarter - p.energy;
    if (deficit <= 0.0) continue;
    if (p.surface <= 0.0) {
      throw Error(ErrorKind::ill_conditioned, "coercivity fit needs a nonzero boundary trace");
    }
    c = std::max(c, deficit / (std::pow(r, -1.0 + eps) * p.surface));
  }
  return c;
}

CoercivityResult coercivity_audit(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  double r, double C, double tolerance_scale)
{
  CoercivityResult out;
  out.eps = potential_epsilon(f, kDim);
  if (C < 0.0) {
    if (f.mode != PotentialMode::a1) {
      throw Error(ErrorKind::precondition, "mode a2 coercivity needs a fitted constant");
    }
    C = 4.0 * std::abs(f.amplitude) / (kDim - 1);
  }
  out.C = C;
  const double limit = (kDim - 1) / 4.0;
  out.r0 = C > 0.0 ? std::pow(limit / C, 1.0 / out.eps) : std::numeric_limits<double>::infinity();
  if (C * std::pow(r, out.eps) >= limit) {
    throw Error(ErrorKind::radius_too_large,
      "C r^eps = " + std::to_string(C * std::pow(r, out.eps)) + " is not below (N-1)/4 at r = " + std::to_string(r));
  }
  const CoercivityParts p = coercivity_parts(u, bundle, f, r);
  const double lhs = p.energy + C * std::pow(r, -1.0 + out.eps) * p.surface;
  const double rhs = p.quarter;
  out.report =
    inequality_report("coercivity", lhs, rhs, 0.01 * (std::abs(lhs) + std::abs(rhs)) * tolerance_scale, r);
  out.report.mode = f.mode == PotentialMode::a1 ? "a1" : "a2";
  return out;
}

double xi_f(const PotentialSpec & f, double r)
{
  if (!(r > 0.0)) throw Error(ErrorKind::domain, "xi_f needs r > 0");
  if (f.is_zero()) return 0.0;
  constexpr int kRadial = 100;
  constexpr int kAngular = 100;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  double sup = 0.0;
  for (int a = 0; a < kAngular; ++a) {
    const double z = 1.0 - (2.0 * a + 1.0) / kAngular;
    const double s = std::sqrt(1.0 - z * z);
    const Vec3 dir(z, s * std::cos(golden * a), s * std::sin(golden * a));
    for (int i = 1; i <= kRadial; ++i) {
      const double rho = r * i / kRadial;
      const Vecd x = to_vecd(rho * dir);
      sup = std::max(sup, std::abs(potential_value<double>(f, x)) * rho * rho);
    }
  }
  return sup;
}

const std::array<std::array<int, 3>, 20> & cubic_exponents()
{
  static const std::array<std::array<int, 3>, 20> table = [] {
    std::array<std::array<int, 3>, 20> t{};
    std::size_t k = 0;
    for (int deg = 0; deg <= 3; ++deg) {
      for (int a = deg; a >= 0; --a) {
        for (int b = deg - a; b >= 0; --b) t[k++] = {a, b, deg - a - b};
      }
    }
    return t;
  }();
  return table;
}

Cubic random_cubic(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Cubic c;
  for (auto & x : c.coeffs) x = dist(rng);
  return c;
}

RellichResult rellich_necas_residual(const Cubic & v, const CoefficientBundle & bundle,
  const std::vector<Vec3> & points)
{
  RellichResult out;
  for (const Vec3 & p : points) {
    Vec<Dual> x(3);
    for (int i = 0; i < 3; ++i) x[i] = seeded(p[i], i);
    const Vec<Dual> g = cubic_gradient<Dual>(v, x);
    const Mat<Dual> a = coefficient_A<Dual>(bundle, x);
    const Vec<Dual> beta = coefficient_beta<Dual>(bundle, x);
    const Vec<Dual> ag = a * g;
    const Dual energy = ag.dot(g);
    const Dual bg = beta.dot(g);
    Dual lhs(0.0);
    Dual div_ag(0.0);
    for (int i = 0; i < 3; ++i) {
      const Dual w = energy * beta[i] - 2.0 * bg * ag[i];
      lhs += w.derivatives()[i];
      div_ag += ag[i].derivatives()[i];
    }

    const Vecd xd = to_vecd(p);
    Vecd gd(3), agd(3), betad(3);
    for (int i = 0; i < 3; ++i) {
      gd[i] = g[i].value();
      agd[i] = ag[i].value();
      betad[i] = beta[i].value();
    }
    const Matd jb = jac_beta(bundle, xd);
    const double t1 = jb.trace() * agd.dot(gd);
    const double t2 = -2.0 * (jb * agd).dot(gd);
    const double t3 = dA_form(bundle, xd, gd, gd).dot(betad);
    const double t4 = -2.0 * betad.dot(gd) * div_ag.value();
    const double l = lhs.value();
    out.max_residual = std::max(out.max_residual, std::abs(l - (t1 + t2 + t3 + t4)));
    out.scale = std::max({out.scale, std::abs(l), std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)});
  }
  out.pass = out.max_residual <= 1e-8 * std::max(out.scale, 1.0);
  return out;
}

std::vector<AuditReport> pohozaev_profile(const ScalarField & u, const CoefficientBundle & bundle,
  const PotentialSpec & f, const std::vector<double> & radii, PohozaevMode mode, double tolerance_scale,
  std::vector<PohozaevTerms> * terms)
{
  const bool approx = mode == PohozaevMode::approx_identity;
  if (approx && u.mesh->kind != DomainKind::approx_domain) {
    throw Error(ErrorKind::precondition, "approx_identity mode needs a field on an approximating domain");
  }
  if (!approx && u.mesh->kind != DomainKind::slit_ball) {
    throw Error(ErrorKind::precondition, "inequality modes need a field on the slit ball");
  }
  for (double r : radii) check_resolved(u, r);
  const RadialIntegrator volume(u,
    [&bundle, &f, mode](const Vec3 & x, double v, const Vec3 & g) {
      return pohozaev_volume_integrand(bundle, f, mode, x, v, g);
    },
    singular_potential(f));
  // Equivalent domain form of the gamma term: with a cutoff q equal to 1 on gamma,
  // -int_gamma W . nu = int_{dB_r} q W . nu - int_{B_r} (grad q . W + q div W).
  SliverCutoff cut;
  std::optional<RadialIntegrator> tube;
  if (approx) {
    cut.tip = approx_profile(u.mesh->n, u.mesh->alpha, 0.0).value;
    cut.a = 2.0 * u.mesh->mesh_size;
    tube.emplace(u,
      [&bundle, &f, mode, &cut](const Vec3 & x, double v, const Vec3 & g) {
        const double q = cut.value(x);
        const Vec3 dq = cut.gradient(x);
        if (q == 0.0 && dq.isZero()) return 0.0;
        return dq.dot(rellich_field(bundle, x, g)) + q * pohozaev_volume_integrand(bundle, f, mode, x, v, g);
      },
      singular_potential(f));
  }

  const RecoveredGradient rec = recover_gradient(u);
  std::vector<AuditReport> reports;
  for (double r : radii) {
    PohozaevTerms t;
    double tube_sphere = 0.0;
    for (const auto & s : sample_sphere(u, r, &rec)) {
      const Vec3 ag = coeff_a(bundle, s.x) * s.grad;
      const double e = s.weight * r * ag.dot(s.grad);
      const double nn = s.weight * 2.0 * r * std::pow(ag.dot(s.normal), 2) / coeff_mu(bundle, s.x);
      t.sphere_energy += e;
      t.sphere_normal += nn;
      if (approx) tube_sphere += cut.value(s.x) * (e - nn);
      if (mode == PohozaevMode::a2_inequality && !f.is_zero()) {
        t.potential += s.weight * r * potential_at(bundle, f, s.x) * s.value * s.value;
      }
    }
    t.volume = volume(r);
    if (approx) t.gamma_term = tube_sphere - (*tube)(r);
    const double lhs = t.sphere_energy - t.sphere_normal - t.gamma_term;
    const double rhs = t.volume + t.potential;
    const double tol = 0.03 * (std::abs(lhs) + std::abs(rhs)) * tolerance_scale;
    AuditReport rep = approx ? identity_report("pohozaev", lhs, rhs, tol, r) : inequality_report("pohozaev", lhs, rhs, tol, r);
    rep.mode = approx ? "approx_identity" : (mode == PohozaevMode::a1_inequality ? "a1" : "a2");
    reports.push_back(rep);
    if (terms != nullptr) terms->push_back(t);
  }
  return reports;
}

AuditReport pohozaev_residual(const ScalarField & u, const CoefficientBundle & bundle, const PotentialSpec & f,
  double r, PohozaevMode mode, double tolerance_scale, PohozaevTerms * terms)
{
  std::vector<PohozaevTerms> all;
  const auto reports = pohozaev_profile(u, bundle, f, {r}, mode, tolerance_scale, &all);
  if (terms != nullptr) *terms = all.front();
  return reports.front();
}

AuditReport boundary_identity_residual(const ScalarField & u, const CoefficientBundle & bundle,
  const PotentialSpec & f, double r, double tolerance_scale)
{
  check_resolved(u, r);
  const double lhs = integrate_ball(u, r,
    [&](const Vec3 & x, double v, const Vec3 & g) {
      return (coeff_a(bundle, x) * g).dot(g) - potential_at(bundle, f, x) * v * v;
    },
    singular_potential(f));
  const RecoveredGradient rec = recover_gradient(u);
  double rhs = 0.0;
  for (const auto & s : sample_sphere(u, r, &rec)) {
    rhs += s.weight * (coeff_a(bundle, s.x) * s.grad).dot(s.normal) * s.value;
  }
  AuditReport rep =
    identity_report("boundary_identity", lhs, rhs, 0.02 * std::max(std::abs(lhs), std::abs(rhs)) * tolerance_scale, r);
  rep.mode = f.mode == PotentialMode::a1 ? "a1" : "a2";
  return rep;
}

StarShapedResult star_shaped_upstairs(const CoefficientBundle & bundle, double r, int n, double alpha,
  int sample_count)
{
  if (n < 1 || !(alpha > 1.0) || !(std::pow(static_cast<double>(n), 0.5 / alpha) > 1.0 / r)) {
    throw Error(ErrorKind::domain, "gamma_{r,n} is empty: need n^{1/(2 alpha)} > 1/r");
  }
  const int nx = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(sample_count))));
  const int nt = std::max(4, sample_count / nx);
  std::vector<double> ts;
  for (int i = 0; i < nt / 2; ++i) {
    ts.push_back(r * i / (nt / 2 - 1.0));
    ts.push_back(4.0 / n * i / (nt / 2 - 1.0));
  }
  std::sort(ts.begin(), ts.end());
  StarShapedResult out;
  out.min_value = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < nx; ++i) {
    const double x1 = -r + 2.0 * r * i / (nx - 1.0);
    for (double t : ts) {
      const ProfileValue pv = approx_profile(n, alpha, t);
      for (int sign : {1, -1}) {
        if (t == 0.0 && sign < 0) continue;
        const Vec3 x(x1, pv.value, sign * t);
        if (x.norm() > r) continue;
        const Vec3 nu = Vec3(0.0, 1.0, -sign * pv.derivative).normalized();
        const double value = (coeff_a(bundle, x) * x).dot(nu);
        any = true;
        if (value < out.min_value) {
          out.min_value = value;
          out.argmin = x;
        }
      }
    }
  }
  if (!any) throw Error(ErrorKind::domain, "no sample of gamma_{r,n} inside B_r");
  return out;
}

std::string audits_json(const std::vector<AuditReport> & reports)
{
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto & r : reports) {
    arr.push_back({{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual},
      {"tolerance", r.tolerance}, {"pass", r.pass}, {"radius", r.radius}, {"field", r.field}, {"mode", r.mode}});
  }
  return arr.dump(2) + "\n";
}

std::string audits_table(const std::vector<AuditReport> & reports)
{
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-14s %-16s %8s %14s %14s %14s %12s %s\n", "audit", "mode", "field", "r",
    "lhs", "rhs", "residual", "tolerance", "status");
  os << line;
  for (const auto & r : reports) {
    std::snprintf(line, sizeof(line), "%-18s %-14s %-16s %8s %14s %14s %14s %12s %s\n", r.name.c_str(),
      r.mode.c_str(), r.field.c_str(), format_g(r.radius).c_str(), format_g(r.lhs).c_str(), format_g(r.rhs).c_str(),
      format_g(r.residual).c_str(), format_g(r.tolerance).c_str(), r.pass ? "pass" : "FAIL");
    os << line;
  }
  return os.str();
}

}  // namespace crackfreq
