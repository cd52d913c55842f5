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

#include "crackfreq/cli_reporting.hpp"

#include "crackfreq/inequality_audit.hpp"
#include "crackfreq/io.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace crackfreq
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

std::string join(const std::vector<std::string> & parts, const std::string & sep)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Field-level validation; every problem is recorded before failing.
class Validator
{
public:
  explicit Validator(const json & root) : root_(root) {}

  const json * find(const std::string & path) const
  {
    const json * node = &root_;
    std::stringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
    }
    return node;
  }

  double number(const std::string & path, double fallback)
  {
    const json * n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_number()) {
      fail(path, "expected a number");
      return fallback;
    }
    return n->get<double>();
  }

  std::int64_t integer(const std::string & path, std::int64_t fallback)
  {
    const json * n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_number_integer()) {
      fail(path, "expected an integer");
      return fallback;
    }
    return n->get<std::int64_t>();
  }

  std::string text(const std::string & path, const std::string & fallback)
  {
    const json * n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_string()) {
      fail(path, "expected a string");
      return fallback;
    }
    return n->get<std::string>();
  }

  std::vector<double> numbers(const std::string & path, const std::vector<double> & fallback)
  {
    const json * n = find(path);
    if (n == nullptr) return fallback;
    return numbers_of(*n, path);
  }

  std::vector<double> numbers_of(const json & n, const std::string & path)
  {
    std::vector<double> out;
    if (!n.is_array()) {
      fail(path, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (!n[i].is_number()) {
        fail(path + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out.push_back(n[i].get<double>());
    }
    return out;
  }

  void fail(const std::string & path, const std::string & message)
  {
    diagnostics_.push_back("field '" + path + "': " + message);
  }

  const std::vector<std::string> & diagnostics() const { return diagnostics_; }

private:
  const json & root_;
  std::vector<std::string> diagnostics_;
};

const std::vector<std::string> & known_audits()
{
  static const std::vector<std::string> names = {
    "hardy", "coercivity", "pohozaev", "boundary", "rellich", "xi", "star_shaped"};
  return names;
}

CrackSpec parse_crack(Validator & v, double radius)
{
  const std::string family = v.text("crack.family", "flat");
  const int dim_n = static_cast<int>(v.integer("crack.dim_n", 2));
  if (dim_n != 2) v.fail("crack.dim_n", "only N = 2 is supported by the mesher, got " + std::to_string(dim_n));
  if (family == "flat") return make_flat_crack(2, radius);
  if (family == "radial_quadratic") {
    const double c = v.number("crack.c", 0.0);
    if (!std::isfinite(c)) v.fail("crack.c", "must be finite");
    return make_radial_quadratic_crack(c, 2, radius);
  }
  if (family == "polynomial") {
    const auto coeffs = v.numbers("crack.coeffs", {});
    if (coeffs.size() > 5) v.fail("crack.coeffs", "at most 5 coefficients (degree <= 4 in one variable)");
    if (!coeffs.empty() && coeffs[0] != 0.0) v.fail("crack.coeffs[0]", "g(0) must vanish");
    if (coeffs.size() > 1 && coeffs[1] != 0.0) v.fail("crack.coeffs[1]", "grad g(0) must vanish");
    return make_polynomial_crack(coeffs, 2, radius);
  }
  v.fail("crack.family", "unknown family '" + family + "' (flat, radial_quadratic, polynomial)");
  return make_flat_crack(2, radius);
}

PotentialSpec parse_potential(Validator & v)
{
  const std::string mode = v.text("potential.mode", "zero");
  if (mode == "zero") return make_zero_potential();
  if (mode == "a1") {
    const double delta = v.number("potential.delta", 1.0);
    const double amplitude = v.number("potential.amplitude", 1.0);
    if (!(delta > 0.0)) v.fail("potential.delta", "must be positive, got " + fmt(delta));
    return make_a1_potential(delta, amplitude);
  }
  if (mode == "a2") {
    const double p = v.number("potential.p", 0.0);
    if (!(p > 1.5)) v.fail("potential.p", "must exceed N/2 + 1/2 = 1.5, got " + fmt(p));
    const json * terms = v.find("potential.terms");
    if (terms == nullptr) return make_a2_constant(v.number("potential.constant", 0.0), p);
    std::vector<PotentialTerm> out;
    if (!terms->is_array()) {
      v.fail("potential.terms", "expected an array");
      return make_zero_potential();
    }
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const std::string path = "potential.terms[" + std::to_string(i) + "]";
      const json & t = (*terms)[i];
      if (!t.is_object()) {
        v.fail(path, "expected an object");
        continue;
      }
      PotentialTerm term;
      term.coef = t.value("coef", 0.0);
      if (t.contains("powers")) {
        const auto pw = v.numbers_of(t["powers"], path + ".powers");
        for (std::size_t k = 0; k < pw.size() && k < 3; ++k) term.powers[k] = static_cast<int>(pw[k]);
      }
      const std::string trig = t.value("trig", std::string("none"));
      if (trig == "sin") {
        term.trig = TrigKind::sine;
      } else if (trig == "cos") {
        term.trig = TrigKind::cosine;
      } else if (trig != "none") {
        v.fail(path + ".trig", "expected none, sin or cos");
      }
      if (t.contains("wave")) {
        const auto w = v.numbers_of(t["wave"], path + ".wave");
        for (std::size_t k = 0; k < w.size() && k < 3; ++k) term.wave[k] = w[k];
      }
      term.phase = t.value("phase", 0.0);
      out.push_back(term);
    }
    return make_a2_potential(out, p, 2);
  }
  v.fail("potential.mode", "unknown mode '" + mode + "' (zero, a1, a2)");
  return make_zero_potential();
}

std::vector<double> parse_radii(Validator & v, const std::string & path, const std::vector<double> & fallback)
{
  const json * n = v.find(path);
  if (n == nullptr) return fallback;
  if (n->is_array()) return v.numbers(path, fallback);
  if (!n->is_object()) {
    v.fail(path, "expected a list or {r_min, r_max, count}");
    return fallback;
  }
  const double lo = v.number(path + ".r_min", 0.0);
  const double hi = v.number(path + ".r_max", 0.0);
  const auto count = v.integer(path + ".count", 0);
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    v.fail(path, "geometric radii need 0 < r_min < r_max and count >= 2");
    return fallback;
  }
  std::vector<double> out;
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  out.back() = hi;
  return out;
}

void check_range(Validator & v, const std::string & path, const std::vector<double> & values, double lo, double hi)
{
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > lo) || !(values[i] <= hi)) {
      v.fail(path + "[" + std::to_string(i) + "]", fmt(values[i]) + " outside (" + fmt(lo) + ", " + fmt(hi) + "]");
    }
  }
}

std::string line_diagnostic(const std::string & text, std::size_t byte, const std::string & what)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what;
}

json parse_json(const std::string & text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    throw ConfigError({line_diagnostic(text, e.byte, e.what())});
  }
}

double sqrt_rho_sin_half(const Vec3 & x)
{
  const double rho = std::hypot(x[1], x[2]);
  double phi = std::atan2(x[2], x[1]);
  if (phi < 0.0) phi += 2.0 * M_PI;
  return std::sqrt(rho) * std::sin(0.5 * phi);
}

std::string radius_tag(double r)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", r);
  return buf;
}

json check_json(const Check & c)
{
  json j = json::object();
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["detail"] = c.detail;
  if (c.criterion > 0) j["criterion"] = c.criterion;
  return j;
}

// Exclusive lock plus a staging directory renamed into place once the manifest is written.
class StagedOutput
{
public:
  explicit StagedOutput(const std::string & target) : target_(fs::absolute(target).lexically_normal())
  {
    if (target_.filename().empty()) target_ = target_.parent_path();
    lock_ = target_.string() + ".lock";
    staging_ = target_.string() + ".partial";
    if (!target_.parent_path().empty()) fs::create_directories(target_.parent_path());
    lock_file_ = std::fopen(lock_.c_str(), "wx");
    if (lock_file_ == nullptr) {
      throw Error(ErrorKind::io, "output directory is locked by another run (" + lock_.string() + ")");
    }
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }

  ~StagedOutput()
  {
    std::error_code ec;
    if (!committed_) fs::remove_all(staging_, ec);
    if (lock_file_ != nullptr) std::fclose(lock_file_);
    fs::remove(lock_, ec);
  }

  StagedOutput(const StagedOutput &) = delete;
  StagedOutput & operator=(const StagedOutput &) = delete;

  std::string path(const std::string & name) const { return (staging_ / name).string(); }

  void commit()
  {
    const fs::path old = target_.string() + ".old";
    std::error_code ec;
    fs::remove_all(old, ec);
    if (fs::exists(target_)) fs::rename(target_, old);
    fs::rename(staging_, target_);
    fs::remove_all(old, ec);
    committed_ = true;
  }

  std::string target() const { return target_.string(); }

private:
  fs::path target_;
  fs::path lock_;
  fs::path staging_;
  std::FILE * lock_file_ = nullptr;
  bool committed_ = false;
};

class Pipeline
{
public:
  Pipeline(const RunConfig & config, const RunOptions & options, StagedOutput & out, RunManifest & manifest)
      : cfg_(config), opt_(options), out_(out), man_(manifest)
  {
    bundle_ = build_bundle(cfg_.crack);
  }

  void spectrum(const std::vector<double> & levels)
  {
    for (double h : levels) {
      const auto t0 = now();
      const SphereMesh mesh = build_slit_sphere_mesh(2, h);
      const auto pairs = solve_eigenpairs(mesh, cfg_.eigen_count);
      write("eigenpairs_h" + radius_tag(h) + ".json", eigenpairs_json(pairs, h));
      const double oracle = oracle_eigenvalue(1, 2);
      const double rel = std::abs(pairs.front().mu - oracle) / oracle;
      // 5% at h = 0.05, 2.5% at h = 0.025.
      const double tol = h * opt_.tolerance_scale;
      add({"spectrum_first_eigenvalue_h" + radius_tag(h), rel <= tol,
        "mu1 = " + fmt(pairs.front().mu) + ", relative error " + fmt(rel) + " (tol " + fmt(tol) + ")", 1});
      log("spectrum h=" + radius_tag(h), t0);
    }
  }

  void solve()
  {
    const auto t0 = now();
    const ScalarField & u = field();
    json j = json::object();
    j["nodes"] = u.mesh->num_vertices();
    j["tets"] = u.mesh->num_tets();
    j["mesh_checksum"] = hex64(mesh_checksum(*u.mesh));
    j["unknowns"] = solve_report_.unknowns;
    j["iterations"] = solve_report_.iterations;
    j["relative_residual"] = solve_report_.relative_residual;
    j["field_checksum"] = hex64(fnv1a64(u.nodal.data(), sizeof(double) * static_cast<std::size_t>(u.nodal.size())));
    write("solve.json", j.dump(2) + "\n");
    add({"solve_converged", solve_report_.relative_residual <= 1e-8,
      "relative residual " + fmt(solve_report_.relative_residual), 0});
    log("solve", t0);
  }

  void frequency()
  {
    const auto t0 = now();
    const ScalarField & u = field();
    RadialProfile profile = frequency_profile(u, bundle_, cfg_.potential, cfg_.radii);
    attach_limit(profile);
    emit_profile(profile, out_.path("profile.csv"));
    const LimitEstimate lim = estimate_limit(profile);
    limit_ = lim;
    json j = json::object();
    j["ell"] = lim.ell;
    j["k0"] = lim.k0;
    j["monotone_defect"] = lim.monotone_defect;
    j["c0"] = lim.c0;
    j["c1"] = lim.c1;
    j["growth_constant"] = lim.growth_constant;
    j["vanishing_order"] = vanishing_order(u, bundle_, cfg_.radii);
    if (lim.k0 > 0) {
      const HeightLimit hl = height_limit(profile, lim.k0);
      j["height_limit"] = {{"intercepts", hl.intercepts}, {"limit", hl.limit}, {"relative_change", hl.relative_change}};
    }
    write("limit.json", j.dump(2) + "\n");
    man_.constants.emplace_back("ell", lim.ell);
    man_.constants.emplace_back("growth_constant", lim.growth_constant);
    const double half = std::round(2.0 * lim.ell) / 2.0;
    add({"ell_near_half_integer", std::abs(lim.ell - half) <= 0.05 * opt_.tolerance_scale,
      "ell = " + fmt(lim.ell) + ", nearest half-integer " + fmt(half), 4});
    add({"k0_matched", lim.k0 >= 1, "k0 = " + std::to_string(lim.k0), 4});
    const double min_n = *std::min_element(profile.N.begin(), profile.N.end());
    add({"frequency_lower_bound", min_n > -0.25, "min N = " + fmt(min_n), 0});
    log("frequency", t0);
  }

  void blowup()
  {
    const auto t0 = now();
    const int k0 = require_k0();
    const EigenCluster cl = select_cluster(sphere_mesh(), sphere_pairs(), k0);
    const std::vector<double> errs = blowup_convergence(field(), bundle_, cfg_.lambdas, cl, reference());
    CsvTable t;
    t.header = {"lambda", "error"};
    for (std::size_t i = 0; i < errs.size(); ++i) t.rows.push_back({cfg_.lambdas[i], errs[i]});
    write("blowup.csv", to_csv(t));
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
    std::vector<std::string> parts;
    for (double e : errs) parts.push_back(fmt(e));
    add({"blowup_errors_decreasing", decreasing, "errors " + join(parts, ", ") + " along the configured lambdas", 4});
    log("blowup", t0);
  }

  void fourier()
  {
    const auto t0 = now();
    const int k0 = require_k0();
    const SphereMesh & sm = sphere_mesh();
    const EigenCluster cl = select_cluster(sm, sphere_pairs(), k0);
    const FourierTable tab = upsilon_beta(field(), bundle_, cfg_.potential, cl, cfg_.fourier_lambdas, cfg_.fourier_R);
    write("fourier.csv", fourier_csv(tab));
    write("fourier.json", fourier_json(tab, limit_ ? limit_->ell : 0.5 * k0));
    double norm = 0.0;
    for (double b : tab.beta) norm = std::max(norm, std::abs(b));
    double spread = 0.0;
    for (const auto & row : tab.beta_by_R) {
      for (std::size_t m = 0; m < row.size(); ++m) spread = std::max(spread, std::abs(row[m] - tab.beta[m]));
    }
    const double rel = norm > 0.0 ? spread / norm : 0.0;
    add({"beta_R_independent", norm > 0.0 && rel <= 0.05 * opt_.tolerance_scale,
      "max |beta(R) - beta(R_used)| / |beta| = " + fmt(rel) + ", |beta| = " + fmt(norm), 8});

    const SphereMatrices mats = assemble_sphere(sm);
    bool parseval = true;
    for (double lambda : cfg_.fourier_lambdas) {
      parseval = parseval_check(field(), sm, mats, sphere_pairs(), lambda).pass && parseval;
    }
    add({"parseval_bound", parseval, "partial Fourier sums bounded by the trace norm", 0});

    // Exact homogeneous extension of the first eigenfunction.
    const SphericalEigenpair & y1 = sphere_pairs().front();
    const PointFunction exact = [&](const Vec3 & x) {
      const double r = x.norm();
      return r == 0.0 ? 0.0 : std::sqrt(r) * eval_eigenfunction(y1, sm, x / r);
    };
    CsvTable t;
    t.header = {"lambda", "phi_over_sqrt_lambda", "max_cross"};
    double worst_phi = 0.0;
    double worst_cross = 0.0;
    for (double lambda : cfg_.lambdas) {
      const double phi = fourier_coefficient(exact, y1, sm, mats, lambda) / std::sqrt(lambda);
      double cross = 0.0;
      for (std::size_t k = 0; k < sphere_pairs().size(); ++k) {
        if (sphere_pairs()[k].multiplicity_cluster == y1.multiplicity_cluster) continue;
        cross = std::max(cross, std::abs(fourier_coefficient(exact, sphere_pairs()[k], sm, mats, lambda)));
      }
      t.rows.push_back({lambda, phi, cross});
      worst_phi = std::max(worst_phi, std::abs(phi - 1.0));
      worst_cross = std::max(worst_cross, cross);
    }
    write("exact_field_fourier.csv", to_csv(t));
    add({"exact_field_coefficient", worst_phi <= 1e-3 * opt_.tolerance_scale,
      "max |phi/sqrt(lambda) - 1| = " + fmt(worst_phi), 8});
    add({"exact_field_cross_cluster", worst_cross <= 1e-6 * opt_.tolerance_scale,
      "max cross-cluster coefficient " + fmt(worst_cross), 8});
    log("fourier", t0);
  }

  void homogeneous()
  {
    const auto t0 = now();
    const CoefficientBundle flat = build_bundle(make_flat_crack(2, cfg_.r));
    const PotentialSpec zero = make_zero_potential();
    struct Case
    {
      std::string name;
      double order;
    };
    const std::vector<Case> cases = {{"sqrt_rho_sin_half", 0.5}, {"x3", 1.0}, {"x1_sqrt_rho_sin_half", 1.5}};
    for (const auto & c : cases) {
      const ScalarField u = interpolate(mesh(), closed_form_field(c.name));
      RadialProfile p = frequency_profile(u, flat, zero, cfg_.radii);
      attach_limit(p);
      emit_profile(p, out_.path("homogeneous_" + c.name + ".csv"));
      double dev = 0.0;
      for (double n : p.N) dev = std::max(dev, std::abs(n - c.order) / c.order);
      add({"frequency_" + c.name, dev <= 0.03 * opt_.tolerance_scale,
        "max |N/" + fmt(c.order) + " - 1| = " + fmt(dev), 2});
      const int k0 = static_cast<int>(std::lround(2.0 * c.order));
      const HeightLimit hl = height_limit(p, k0);
      add({"height_limit_" + c.name, hl.limit > 0.0 && hl.relative_change <= 0.05 * opt_.tolerance_scale,
        "limit " + fmt(hl.limit) + ", relative change " + fmt(hl.relative_change), 3});
      if (c.name == "x3" || c.name == "sqrt_rho_sin_half") {
        double worst = 0.0;
        for (std::size_t i = 0; i < p.radii.size(); ++i) {
          const double r = p.radii[i];
          const double exact = c.name == "x3" ? 4.0 * M_PI / 3.0 * r * r : M_PI * M_PI / 2.0 * r;
          worst = std::max(worst, std::abs(p.H[i] / exact - 1.0));
        }
        add({"height_law_" + c.name, worst <= 0.02 * opt_.tolerance_scale, "max |H/H_exact - 1| = " + fmt(worst), 3});
        std::vector<AuditReport> reps =
          pohozaev_profile(u, flat, zero, cfg_.audit_radii, PohozaevMode::a1_inequality, opt_.tolerance_scale);
        double rel = 0.0;
        for (auto & r : reps) {
          rel = std::max(rel, std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), std::abs(r.rhs)));
          r.field = c.name;
        }
        append_audits(reps);
        add({"pohozaev_equality_" + c.name, rel <= 0.03 * opt_.tolerance_scale,
          "max |lhs - rhs| / max(|lhs|, |rhs|) = " + fmt(rel), 5});
      }
    }
    log("homogeneous fields", t0);
  }

  void audit(bool verify)
  {
    const auto t0 = now();
    const std::set<std::string> wanted(cfg_.audits.begin(), cfg_.audits.end());
    const ScalarField & u = field();
    const ScalarField one = interpolate(mesh(), closed_form_field("one"), false);
    const ScalarField x3 = interpolate(mesh(), closed_form_field("x3"));
    const std::vector<std::pair<std::string, const ScalarField *>> fields = {
      {"one", &one}, {"x3", &x3}, {"solved", &u}};
    std::vector<AuditReport> reps;
    const auto tag = [](AuditReport r, const std::string & field) {
      r.field = field;
      return r;
    };
    if (wanted.count("hardy")) {
      bool ok = true;
      for (double r : cfg_.probe_radii) {
        for (const auto & [name, f] : fields) {
          reps.push_back(tag(hardy_residual(*f, r, opt_.tolerance_scale), name));
          ok = ok && reps.back().pass;
        }
      }
      add({"hardy", ok, "u in {1, x3, solved} at the probe radii", 6});
    }
    if (wanted.count("coercivity")) {
      double c = -1.0;
      if (cfg_.potential.mode == PotentialMode::a2 && !cfg_.potential.is_zero()) {
        c = fit_coercivity_constant(u, bundle_, cfg_.potential, cfg_.probe_radii);
      }
      bool ok = true;
      for (double r : cfg_.probe_radii) {
        for (const auto & [name, f] : fields) {
          const CoercivityResult res = coercivity_audit(*f, bundle_, cfg_.potential, r, c, opt_.tolerance_scale);
          reps.push_back(tag(res.report, name));
          ok = ok && res.report.pass;
          man_.r0 = res.r0;
          if (r == cfg_.probe_radii.front() && name == "one") {
            man_.constants.emplace_back("coercivity_C", res.C);
            man_.constants.emplace_back("coercivity_eps", res.eps);
          }
        }
      }
      add({"coercivity", ok, "u in {1, x3, solved} at the probe radii", 6});
      for (double lambda : cfg_.lambdas) {
        if (man_.r0 > 0.0 && lambda > man_.r0) {
          man_.warnings.push_back("lambda " + fmt(lambda) + " exceeds r0 = " + fmt(man_.r0));
        }
      }
    }
    if (wanted.count("pohozaev")) {
      const PohozaevMode mode =
        cfg_.potential.mode == PotentialMode::a2 ? PohozaevMode::a2_inequality : PohozaevMode::a1_inequality;
      bool ok = true;
      for (auto & r : pohozaev_profile(u, bundle_, cfg_.potential, cfg_.audit_radii, mode, opt_.tolerance_scale)) {
        reps.push_back(tag(r, "solved"));
        ok = ok && r.pass;
      }
      add({"pohozaev_inequality", ok, std::to_string(cfg_.audit_radii.size()) + " radii, solved field", 5});
    }
    if (wanted.count("boundary")) {
      bool ok = true;
      for (double r : cfg_.audit_radii) {
        reps.push_back(tag(boundary_identity_residual(u, bundle_, cfg_.potential, r, opt_.tolerance_scale), "solved"));
        ok = ok && reps.back().pass;
      }
      add({"boundary_identity", ok, "solved field at the audit radii", 0});
    }
    if (wanted.count("rellich")) {
      std::mt19937_64 rng(cfg_.seed);
      std::vector<Vec3> pts;
      for (const auto & p : ball_samples(3, 0.8 * cfg_.r, 50, true)) pts.push_back(to_vec3(p));
      const CoefficientBundle flat = build_bundle(make_flat_crack(2, cfg_.r));
      double worst = 0.0;
      bool ok = true;
      CsvTable t;
      t.header = {"cubic", "bundle", "max_residual", "scale"};
      for (int i = 0; i < 20; ++i) {
        const Cubic v = random_cubic(rng);
        int bi = 0;
        for (const CoefficientBundle * b : {&flat, static_cast<const CoefficientBundle *>(&bundle_)}) {
          const RellichResult rr = rellich_necas_residual(v, *b, pts);
          t.rows.push_back({static_cast<double>(i), static_cast<double>(bi++), rr.max_residual, rr.scale});
          worst = std::max(worst, rr.max_residual / std::max(rr.scale, 1.0));
          ok = ok && rr.max_residual <= 1e-8 * std::max(rr.scale, 1.0) * opt_.tolerance_scale;
        }
      }
      write("rellich.csv", to_csv(t));
      add({"rellich_necas", ok, "20 cubics x 2 bundles, worst relative residual " + fmt(worst), 6});
    }
    if (wanted.count("xi")) {
      CsvTable t;
      t.header = {"r", "xi_f"};
      for (double r : cfg_.audit_radii) t.rows.push_back({r, xi_f(cfg_.potential, r)});
      write("xi_f.csv", to_csv(t));
    }
    if (wanted.count("star_shaped")) star_shaped(verify);
    append_audits(reps);
    log("audits", t0);
  }

  void star_shaped(bool both_cracks)
  {
    const CoefficientBundle flat = build_bundle(make_flat_crack(2, cfg_.r));
    std::vector<std::pair<std::string, const CoefficientBundle *>> bundles = {{"config", &bundle_}};
    if (both_cracks) bundles.emplace_back("flat", &flat);
    CsvTable t;
    t.header = {"crack", "n", "min_value"};
    bool ok = true;
    std::string detail;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      for (int n : cfg_.approx_n) {
        const StarShapedResult s = star_shaped_upstairs(*bundles[b].second, cfg_.r, n, cfg_.alpha);
        t.rows.push_back({static_cast<double>(b), static_cast<double>(n), s.min_value});
        if (n >= 256) ok = ok && s.min_value >= -1e-10;
        detail += (detail.empty() ? "" : ", ") + bundles[b].first + " n=" + std::to_string(n) + ": " + fmt(s.min_value);
      }
    }
    write("star_shaped.csv", to_csv(t));
    add({"star_shaped_upstairs", ok, detail, 7});
  }

  void approx(bool verify)
  {
    const auto t0 = now();
    const ScalarField & u = field();
    CsvTable dist;
    dist.header = {"n", "tip", "l2", "h1", "iterations"};
    CsvTable poho;
    poho.header = {"n", "r", "lhs", "rhs", "residual", "tolerance", "gamma", "sphere_energy", "sphere_normal", "volume"};
    std::vector<double> h1;
    std::vector<AuditReport> reps;
    bool last_ok = false;
    double last_gamma_min = 0.0;
    for (int n : cfg_.approx_n) {
      const MeshPtr mn = mesh_approx_domain(cfg_.r, n, cfg_.alpha, cfg_.h, mesh_options());
      SolveReport rep;
      const ScalarField un = assemble_solve(mn, bundle_, cfg_.potential, closed_form_field(cfg_.boundary_data), &rep);
      const L2H1 d = h1_distance(un, u, cfg_.r);
      h1.push_back(d.h1);
      dist.rows.push_back(
        {static_cast<double>(n), approx_profile(n, cfg_.alpha, 0.0).value, d.l2, d.h1, static_cast<double>(rep.iterations)});
      std::vector<PohozaevTerms> terms;
      auto rs = pohozaev_profile(
        un, bundle_, cfg_.potential, cfg_.audit_radii, PohozaevMode::approx_identity, opt_.tolerance_scale, &terms);
      last_ok = true;
      last_gamma_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rs.size(); ++i) {
        rs[i].field = "U_" + std::to_string(n);
        poho.rows.push_back({static_cast<double>(n), rs[i].radius, rs[i].lhs, rs[i].rhs, rs[i].residual,
          rs[i].tolerance, terms[i].gamma_term, terms[i].sphere_energy, terms[i].sphere_normal, terms[i].volume});
        last_ok = last_ok && rs[i].pass;
        last_gamma_min = std::min(last_gamma_min, terms[i].gamma_term);
        reps.push_back(rs[i]);
      }
      log("approx n=" + std::to_string(n), t0);
    }
    write("approx_distance.csv", to_csv(dist));
    write("approx_pohozaev.csv", to_csv(poho));
    append_audits(reps);
    bool decreasing = true;
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < h1.size(); ++i) {
      if (i > 0) decreasing = decreasing && h1[i] < h1[i - 1];
      parts.push_back(fmt(h1[i]));
    }
    add({"approx_h1_decreasing", decreasing, "h1 distances " + join(parts, ", "), 7});
    const std::string largest = cfg_.approx_n.empty() ? "-" : std::to_string(cfg_.approx_n.back());
    add({"approx_identity_balance", last_ok, "Pohozaev identity at n = " + largest, 5});
    add({"approx_gamma_nonnegative", last_gamma_min >= 0.0, "min gamma term " + fmt(last_gamma_min), 5});
    if (!verify) star_shaped(false);
  }

  void finish_audits()
  {
    if (audits_.empty()) return;
    write("audits.json", audits_json(audits_) + "\n");
    write("audits.txt", audits_table(audits_));
  }

  void summary()
  {
    json j = json::array();
    for (const auto & c : man_.checks) j.push_back(check_json(c));
    write("checks.json", j.dump(2) + "\n");
  }

private:
  using Clock = std::chrono::steady_clock;
  static Clock::time_point now() { return Clock::now(); }

  void log(const std::string & what, Clock::time_point t0) const
  {
    const double s = std::chrono::duration<double>(now() - t0).count();
    std::fprintf(stderr, "[crackfreq] %s done (%.1f s)\n", what.c_str(), s);
  }

  void add(Check c) { man_.checks.push_back(std::move(c)); }

  void append_audits(const std::vector<AuditReport> & reps) { audits_.insert(audits_.end(), reps.begin(), reps.end()); }

  void write(const std::string & name, const std::string & text)
  {
    write_text_file(out_.path(name), text);
  }

  MeshOptions mesh_options() const
  {
    MeshOptions mo;
    mo.grading = cfg_.grading;
    mo.inner_fraction = cfg_.inner_fraction;
    return mo;
  }

  MeshPtr mesh()
  {
    if (!mesh_) mesh_ = mesh_slit_ball(cfg_.r, cfg_.h, mesh_options());
    return mesh_;
  }

  MeshPtr reference()
  {
    if (!reference_) reference_ = mesh_slit_ball(1.0, cfg_.reference_h);
    return reference_;
  }

  const ScalarField & field()
  {
    if (!field_) {
      field_ = assemble_solve(mesh(), bundle_, cfg_.potential, closed_form_field(cfg_.boundary_data), &solve_report_);
    }
    return *field_;
  }

  const SphereMesh & sphere_mesh()
  {
    if (!sphere_) sphere_ = std::make_unique<SphereMesh>(build_slit_sphere_mesh(2, cfg_.h_sphere));
    return *sphere_;
  }

  const std::vector<SphericalEigenpair> & sphere_pairs()
  {
    if (pairs_.empty()) pairs_ = solve_eigenpairs(sphere_mesh(), cfg_.eigen_count);
    return pairs_;
  }

  int require_k0()
  {
    if (!limit_) {
      RadialProfile p = frequency_profile(field(), bundle_, cfg_.potential, cfg_.radii);
      limit_ = estimate_limit(p);
    }
    if (limit_->k0 < 1) {
      throw Error(ErrorKind::precondition, "frequency limit " + fmt(limit_->ell) + " matches no half-integer k0/2");
    }
    return limit_->k0;
  }

  const RunConfig & cfg_;
  RunOptions opt_;
  StagedOutput & out_;
  RunManifest & man_;
  CoefficientBundle bundle_;
  MeshPtr mesh_;
  MeshPtr reference_;
  std::optional<ScalarField> field_;
  SolveReport solve_report_;
  std::unique_ptr<SphereMesh> sphere_;
  std::vector<SphericalEigenpair> pairs_;
  std::optional<LimitEstimate> limit_;
  std::vector<AuditReport> audits_;
};

void print_diagnostics(const std::string & head, const std::vector<std::string> & lines)
{
  std::cerr << "crackfreq: " << head << "\n";
  for (const auto & l : lines) std::cerr << "  " << l << "\n";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : Error(ErrorKind::invalid_config, "invalid config: " + join(diagnostics, "; ")),
      diagnostics_(std::move(diagnostics))
{
}

std::string canonicalize_config(const std::string & text) { return parse_json(text).dump(); }

std::uint64_t config_hash(const std::string & text) { return fnv1a64(canonicalize_config(text)); }

RunConfig parse_config(const std::string & text)
{
  const json root = parse_json(text);
  if (!root.is_object()) throw ConfigError({"line 1, column 1: top level must be an object"});
  Validator v(root);
  static const std::set<std::string> keys = {"crack", "potential", "boundary_data", "mesh", "radii", "lambdas",
    "fourier", "spectrum", "audits", "audit_radii", "probe_radii", "approx", "seed", "output_dir"};
  for (const auto & [key, value] : root.items()) {
    if (!keys.count(key)) v.fail(key, "unknown key");
  }

  RunConfig c;
  c.canonical = root.dump();
  c.r = v.number("mesh.r", c.r);
  c.h = v.number("mesh.h", c.h);
  c.grading = v.number("mesh.grading", c.grading);
  c.inner_fraction = v.number("mesh.inner_fraction", c.inner_fraction);
  c.reference_h = v.number("mesh.reference_h", c.reference_h);
  if (!(c.r > 0.0)) v.fail("mesh.r", "must be positive, got " + fmt(c.r));
  if (!(c.h > 0.0)) {
    v.fail("mesh.h", "must be positive, got " + fmt(c.h));
  } else if (c.h > c.r / 4.0) {
    v.fail("mesh.h", "precondition h <= r/4 violated: h = " + fmt(c.h) + ", r/4 = " + fmt(c.r / 4.0));
  }
  if (!(c.grading > 0.0 && c.grading < 1.0)) v.fail("mesh.grading", "must lie in (0, 1), got " + fmt(c.grading));
  if (!(c.inner_fraction > 0.0 && c.inner_fraction <= 1.0)) {
    v.fail("mesh.inner_fraction", "must lie in (0, 1], got " + fmt(c.inner_fraction));
  }
  if (!(c.reference_h > 0.0 && c.reference_h <= 0.25)) {
    v.fail("mesh.reference_h", "precondition 0 < h <= 1/4 on the unit reference ball, got " + fmt(c.reference_h));
  }

  c.crack = parse_crack(v, c.r);
  c.potential = parse_potential(v);
  c.boundary_data = v.text("boundary_data", c.boundary_data);
  try {
    closed_form_field(c.boundary_data);
  } catch (const Error &) {
    v.fail("boundary_data", "unknown field '" + c.boundary_data + "'");
  }

  c.radii = parse_radii(v, "radii", {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4});
  check_range(v, "radii", c.radii, 0.0, c.r);
  if (c.radii.size() < 5) v.fail("radii", "need at least 5 radii, got " + std::to_string(c.radii.size()));
  if (!std::is_sorted(c.radii.begin(), c.radii.end())) v.fail("radii", "must be increasing");
  if (!c.radii.empty() && c.radii.back() < 2.0 * c.radii.front()) v.fail("radii", "must span at least one octave");

  c.lambdas = v.numbers("lambdas", {0.4, 0.2, 0.1});
  check_range(v, "lambdas", c.lambdas, 0.0, c.r);
  c.audit_radii = parse_radii(v, "audit_radii", {0.2, 0.25, 0.3, 0.35, 0.4});
  check_range(v, "audit_radii", c.audit_radii, 0.0, c.r);
  c.probe_radii = parse_radii(v, "probe_radii", {0.125, 0.25, 0.375});
  check_range(v, "probe_radii", c.probe_radii, 0.0, c.r);

  c.fourier_lambdas = v.numbers("fourier.lambdas", {0.1, 0.2});
  c.fourier_R = v.numbers("fourier.R", {0.2, 0.3, 0.4});
  check_range(v, "fourier.R", c.fourier_R, 0.0, c.r);
  const double r_min = c.fourier_R.empty() ? c.r : *std::min_element(c.fourier_R.begin(), c.fourier_R.end());
  check_range(v, "fourier.lambdas", c.fourier_lambdas, 0.0, r_min);
  if (c.fourier_R.empty()) v.fail("fourier.R", "need at least one R");

  c.h_sphere = v.number("spectrum.h_sphere", c.h_sphere);
  c.eigen_count = static_cast<int>(v.integer("spectrum.count", c.eigen_count));
  if (!(c.h_sphere > 0.0 && c.h_sphere <= 0.25)) v.fail("spectrum.h_sphere", "must lie in (0, 0.25]");
  if (c.eigen_count < 1 || c.eigen_count > 40) v.fail("spectrum.count", "must lie in [1, 40]");

  const json * audits = v.find("audits");
  if (audits == nullptr) {
    c.audits = known_audits();
  } else if (!audits->is_array()) {
    v.fail("audits", "expected an array of names");
  } else {
    for (std::size_t i = 0; i < audits->size(); ++i) {
      const json & a = (*audits)[i];
      const std::string name = a.is_string() ? a.get<std::string>() : "";
      if (std::find(known_audits().begin(), known_audits().end(), name) == known_audits().end()) {
        v.fail("audits[" + std::to_string(i) + "]", "unknown audit (" + join(known_audits(), ", ") + ")");
      } else {
        c.audits.push_back(name);
      }
    }
  }

  for (double n : v.numbers("approx.n", {64, 256, 1024})) {
    if (!(n >= 1.0) || n != std::floor(n)) {
      v.fail("approx.n", "entries must be positive integers");
    } else {
      c.approx_n.push_back(static_cast<int>(n));
    }
  }
  if (!std::is_sorted(c.approx_n.begin(), c.approx_n.end())) v.fail("approx.n", "must be increasing");
  c.alpha = v.number("approx.alpha", c.alpha);
  if (!(c.alpha > 1.0)) v.fail("approx.alpha", "must exceed 1, got " + fmt(c.alpha));
  for (int n : c.approx_n) {
    if (c.alpha > 1.0 && std::pow(static_cast<double>(n), 0.5 / c.alpha) * c.r <= 1.0) {
      v.fail("approx.n", "n = " + std::to_string(n) + " leaves gamma outside B_r (need n^{1/(2 alpha)} > 1/r)");
    }
  }

  const std::int64_t seed = v.integer("seed", 1);
  if (seed < 0) v.fail("seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(std::max<std::int64_t>(seed, 0));
  c.output_dir = v.text("output_dir", c.output_dir);

  if (!v.diagnostics().empty()) throw ConfigError(v.diagnostics());
  return c;
}

RunConfig load_config(const std::string & path)
{
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error & e) {
    throw ConfigError({e.what()});
  }
  return parse_config(text);
}

PointFunction closed_form_field(const std::string & name)
{
  if (name == "sqrt_rho_sin_half") return sqrt_rho_sin_half;
  if (name == "x3") return [](const Vec3 & x) { return x[2]; };
  if (name == "x1_sqrt_rho_sin_half") return [](const Vec3 & x) { return x[0] * sqrt_rho_sin_half(x); };
  if (name == "one") return [](const Vec3 &) { return 1.0; };
  throw Error(ErrorKind::invalid_config, "unknown closed-form field '" + name + "'");
}

void emit_profile(const RadialProfile & profile, const std::string & path)
{
  if (profile.radii.empty()) throw Error(ErrorKind::precondition, "emit_profile: profile has no radii");
  write_text_file(path, profile_csv(profile));
  json j = json::object();
  j["ell"] = profile.ell_estimate;
  j["k0"] = profile.k0;
  j["eps_bar"] = profile.eps_bar;
  write_text_file(fs::path(path).replace_extension(".json").string(), j.dump(2) + "\n");
}

bool RunManifest::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const Check & c) { return c.pass; });
}

std::string manifest_json(const RunManifest & m)
{
  json j = json::object();
  j["tool"] = "crackfreq";
  j["version"] = m.version;
  j["subcommand"] = m.subcommand;
  j["config_hash"] = m.config_hash;
  j["r0"] = m.r0;
  json constants = json::object();
  for (const auto & [k, v] : m.constants) constants[k] = v;
  j["constants"] = constants;
  json files = json::array();
  for (const auto & f : m.files) files.push_back({{"name", f.name}, {"fnv1a64", hex64(f.checksum)}, {"bytes", f.bytes}});
  j["files"] = files;
  json checks = json::array();
  for (const auto & c : m.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  j["warnings"] = m.warnings;
  j["pass"] = m.pass();
  return j.dump(2) + "\n";
}

const std::vector<std::string> & subcommands()
{
  static const std::vector<std::string> names = {
    "spectrum", "solve", "frequency", "blowup", "fourier", "audit", "approx", "verify"};
  return names;
}

RunResult run(const std::string & subcommand, const RunConfig & config, const RunOptions & options)
{
  RunResult result;
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
    print_diagnostics("unknown subcommand '" + subcommand + "'", {"expected one of: " + join(subcommands(), ", ")});
    result.exit_code = 2;
    return result;
  }
  RunConfig cfg = config;
  if (options.seed >= 0) cfg.seed = static_cast<std::uint64_t>(options.seed);
  const std::string target = options.output_dir.empty() ? cfg.output_dir : options.output_dir;
  Eigen::setNbThreads(std::max(1, options.threads));

  RunManifest & man = result.manifest;
  man.subcommand = subcommand;
  man.config_hash = hex64(fnv1a64(cfg.canonical));
  try {
    StagedOutput out(target);
    result.output_dir = out.target();
    {
      Pipeline p(cfg, options, out, man);
      const bool verify = subcommand == "verify";
      if (subcommand == "spectrum") p.spectrum({cfg.h_sphere});
      if (verify) p.spectrum({cfg.h_sphere, 0.5 * cfg.h_sphere});
      if (subcommand == "solve" || verify) p.solve();
      if (subcommand == "frequency" || verify) p.frequency();
      if (verify) p.homogeneous();
      if (subcommand == "blowup" || verify) p.blowup();
      if (subcommand == "fourier" || verify) p.fourier();
      if (subcommand == "audit" || verify) p.audit(verify);
      if (subcommand == "approx" || verify) p.approx(verify);
      p.finish_audits();
      p.summary();
    }
    write_text_file(out.path("config.json"), cfg.canonical + "\n");
    std::vector<fs::path> names;
    for (const auto & e : fs::directory_iterator(out.path(""))) names.push_back(e.path());
    std::sort(names.begin(), names.end());
    for (const auto & pth : names) {
      const std::string bytes = read_text_file(pth.string());
      man.files.push_back({pth.filename().string(), fnv1a64(bytes), bytes.size()});
    }
    // Manifest last, then publish.
    write_text_file(out.path("manifest.json"), manifest_json(man));
    out.commit();
  } catch (const ConfigError & e) {
    print_diagnostics("invalid config", e.diagnostics());
    result.exit_code = 2;
    return result;
  } catch (const Error & e) {
    const bool config_side = e.kind() == ErrorKind::invalid_config || e.kind() == ErrorKind::resolution;
    print_diagnostics(std::string(config_side ? "invalid config" : "numerical failure") + " [" + to_string(e.kind()) + "]",
      {e.what()});
    result.exit_code = config_side ? 2 : 1;
    return result;
  } catch (const std::exception & e) {
    print_diagnostics("failure", {e.what()});
    result.exit_code = 1;
    return result;
  }

  std::vector<std::string> failed;
  for (const auto & c : man.checks) {
    if (!c.pass) failed.push_back(c.name + ": " + c.detail);
  }
  if (!failed.empty()) {
    print_diagnostics("failed checks", failed);
    result.exit_code = 1;
  }
  return result;
}

RunResult run(const std::string & subcommand, const std::string & config_path, const RunOptions & options)
{
  try {
    return run(subcommand, load_config(config_path), options);
  } catch (const ConfigError & e) {
    print_diagnostics("invalid config " + config_path, e.diagnostics());
    RunResult r;
    r.exit_code = 2;
    return r;
  }
}

}  // namespace crackfreq
