// Acceptance run: one PASS/FAIL line per criterion, then a summary line.
// Exit status is 1 when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pwvem/config.hpp"
#include "pwvem/experiment.hpp"
#include "pwvem/quadrature.hpp"
#include "pwvem/specialfn.hpp"
#include "pwvem/system.hpp"

using namespace pwvem;
namespace q = pwvem::quadrature;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v, int digits = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

ExperimentConfig configured(ExperimentKind kind, const KeyValues& extra = {}) {
  ExperimentConfig c;
  c.experiment = kind;
  pwvem::apply(c, extra);
  return resolve(c);
}

std::vector<double> errors_of(const ExperimentResult& r, Variant v) {
  std::vector<double> out;
  for (const auto& row : r.rows)
    if (row.report.variant == v) out.push_back(row.report.l2_rel_error);
  return out;
}

double rate(double e0, double h0, double e1, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

double min_eig_ratio(const CMatrix& A) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev.minCoeff() / std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
}

// 1 -------------------------------------------------------------------------
Verdict patch_test() {
  const auto r = run_experiment(configured(ExperimentKind::Patch, {{"mesh", "structured:4;voronoi:16"}}));
  double worst = 0;
  for (const auto& row : r.rows) worst = std::max(worst, row.report.l2_rel_error);
  return {worst <= 1e-8 && r.rows.size() == 4,
          std::to_string(r.rows.size()) + " solves, max error " + sci(worst) + " (limit 1e-8)"};
}

// 2 and 3 share the structured series
const ExperimentResult& table1() {
  static const ExperimentResult r = run_experiment(configured(ExperimentKind::Table1));
  return r;
}

Verdict structured_reference_errors() {
  const std::vector<double> h = {std::sqrt(2.0) / 2, std::sqrt(2.0) / 4, std::sqrt(2.0) / 8, std::sqrt(2.0) / 16};
  const std::vector<double> ref_vem = {4.1548e-01, 1.0990e-02, 1.2969e-04, 1.1089e-06};
  const std::vector<double> ref_pum = {1.9213e-02, 4.0683e-04, 3.4126e-06, 4.0164e-08};
  const auto& r = table1();
  bool ok = true;
  std::ostringstream os;
  for (auto [name, v, ref] : {std::tuple{"PWVEM", Variant::PWVEM, &ref_vem}, std::tuple{"PUM", Variant::PUM, &ref_pum}}) {
    const auto e = errors_of(r, v);
    if (e.size() != ref->size()) return {false, std::string(name) + ": wrong number of rows"};
    os << name << " err";
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double ratio = e[i] / (*ref)[i];
      ok &= ratio <= 3.0 && ratio >= 1.0 / 3.0;
      os << ' ' << sci(e[i], 3);
    }
    os << " rate diff";
    for (std::size_t i = 1; i < e.size(); ++i) {
      const double d = rate(e[i - 1], h[i - 1], e[i], h[i]) - rate((*ref)[i - 1], h[i - 1], (*ref)[i], h[i]);
      ok &= std::abs(d) <= 0.7;
      os << ' ' << fixed(d);
    }
    os << "; ";
  }
  return {ok, os.str()};
}

Verdict grad_close_to_pum() {
  const auto pum = errors_of(table1(), Variant::PUM), grad = errors_of(table1(), Variant::GRAD);
  if (pum.size() != 4 || grad.size() != 4) return {false, "missing rows"};
  bool ok = true;
  std::ostringstream os;
  for (int i : {2, 3}) {
    const double ratio = grad[i] / pum[i];
    ok &= ratio <= 2.0 && ratio >= 0.5;
    os << "n=" << (1 << (i + 1)) << " GRAD/PUM " << fixed(ratio, 3) << "; ";
  }
  return {ok, os.str()};
}

// 4 -------------------------------------------------------------------------
Verdict voronoi_h_convergence() {
  const auto r = run_experiment(configured(ExperimentKind::VoronoiH));
  const auto& rows = r.rows;
  if (rows.size() < 3) return {false, "fewer than 3 meshes"};
  const auto& a = rows[rows.size() - 3].report;
  const auto& b = rows[rows.size() - 2].report;
  const auto& c = rows[rows.size() - 1].report;
  const double r1 = rate(a.l2_rel_error, a.h, b.l2_rel_error, b.h);
  const double r2 = rate(b.l2_rel_error, b.h, c.l2_rel_error, c.h);
  const bool ok = a.l2_rel_error > b.l2_rel_error && b.l2_rel_error > c.l2_rel_error && r1 >= 4 && r2 >= 4 &&
                  c.l2_rel_error <= 1e-4;
  return {ok, "last errors " + sci(a.l2_rel_error) + " " + sci(b.l2_rel_error) + " " + sci(c.l2_rel_error) +
                  ", rates " + fixed(r1) + " " + fixed(r2) + ", final h " + fixed(c.h, 4)};
}

// 5 -------------------------------------------------------------------------
Verdict p_convergence() {
  const auto r = run_experiment(configured(ExperimentKind::PConv, {{"p", "3..13"}, {"mesh", "structured:4"}}));
  std::ostringstream os;
  os << "errors";
  for (const auto& row : r.rows) os << " p" << row.report.p << '=' << sci(row.report.l2_rel_error, 2);
  os << "; factors";
  bool ok = r.rows.size() == 6;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const double f = r.rows[i - 1].report.l2_rel_error / r.rows[i].report.l2_rel_error;
    os << ' ' << fixed(f);
    if (r.rows[i - 1].report.p >= 7) ok &= f >= 3.0;
  }
  return {ok, os.str() + " (need >= 3 from p=7 on)"};
}

// 6 -------------------------------------------------------------------------
Verdict pollution() {
  const auto r = run_experiment(configured(ExperimentKind::Pollution));
  if (r.rows.empty()) return {false, "no rows"};
  std::ostringstream os;
  os << "errors";
  for (const auto& row : r.rows) os << ' ' << sci(row.report.l2_rel_error, 2);
  const double last = r.rows.back().report.l2_rel_error;
  return {last > 1e-2, os.str() + "; finest " + sci(last) + " (need > 1e-2)"};
}

// 7 -------------------------------------------------------------------------
Verdict matrix_identities() {
  std::vector<std::pair<std::string, PolygonalMesh>> meshes;
  for (int n : {2, 4, 8, 16}) meshes.emplace_back("structured:" + std::to_string(n), make_structured_triangular(n));
  for (int n : {8, 16, 32, 64, 128, 256, 512}) meshes.emplace_back("voronoi:" + std::to_string(n), make_voronoi(n, 1, 20));
  meshes.emplace_back("chevron:4", make_chevron(4));

  const WaveContext ctx(20.0, equispaced_directions(13));
  struct Worst {
    double value = 0;
    std::string where;
    void update(double v, const std::string& w) {
      if (v > value) value = v, where = w;
    }
  };
  Worst gbd, herm, idem, repro, psd;
  int elements = 0, failures = 0;
  double worst_hk = 0;
  for (const auto& [name, mesh] : meshes) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      ++elements;
      const auto geom = element_geometry(mesh, c);
      const std::string where = name + " cell " + std::to_string(c) + " hk=" + fixed(geom.diameter * ctx.k);
      const auto ops = build_local_operators(geom, ctx, boundary_edges_of(mesh, c));
      const CMatrix Id = CMatrix::Identity(ops.dim(), ops.dim());
      const double e1 = (ops.G - ops.B * ops.D).norm() / ops.G.norm();
      const double e2 = (ops.G - ops.G.adjoint()).norm() / ops.G.norm();
      const double e3 = (ops.P * ops.P - ops.P).norm() / ops.P.norm();
      const double e4 = ((Id - ops.P) * ops.D).norm() / ops.D.norm();
      double neg = std::max(-min_eig_ratio(ops.S), -min_eig_ratio(ops.M));
      if (ops.R.norm() > 0) neg = std::max(neg, -min_eig_ratio(ops.R / cplx(0.0, ctx.k)));
      gbd.update(e1, where);
      herm.update(e2, where);
      idem.update(e3, where);
      repro.update(e4, where);
      psd.update(neg, where);
      const bool ok = e1 <= 1e-13 && e2 <= 1e-13 && e3 <= 1e-10 && e4 <= 1e-11 && neg <= 1e-10;
      if (!ok) ++failures, worst_hk = std::max(worst_hk, geom.diameter * ctx.k);
    }
  }
  std::ostringstream os;
  os << elements << " elements, " << failures << " violating";
  if (failures) os << ", all at h_K k <= " << fixed(worst_hk);
  os << "; max |G-BD| " << sci(gbd.value, 1) << ", |G-G^H| " << sci(herm.value, 1) << ", |P^2-P| "
     << sci(idem.value, 1) << ", |(I-P)D| " << sci(repro.value, 1) << " at " << repro.where
     << ", min eig " << sci(-psd.value, 1);
  return {failures == 0, os.str()};
}

// 8 -------------------------------------------------------------------------
Verdict kernel_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> diam(0.05, 0.5);
  std::uniform_int_distribution<int> nverts(3, 8);
  std::vector<std::vector<Vec2>> cells;
  for (int i = 0; i < 50; ++i) cells.push_back(random_convex_polygon(rng, nverts(rng), diam(rng)));
  for (int i = 0; i < 10; ++i) cells.push_back(random_nonconvex_polygon(rng, 6 + 2 * (i % 3), diam(rng)));

  const auto dirs = equispaced_directions(13);
  // strict relative errors, plus errors scaled by the integral of |integrand|
  double edge_worst = 0, poly_worst = 0, scaled_worst = 0, violator_size = 0;
  long count = 0, violations = 0;
  auto record = [&](cplx got, cplx want, double l1, double& worst) {
    const double r = std::abs(got - want) / std::abs(want);
    worst = std::max(worst, r);
    scaled_worst = std::max(scaled_worst, std::abs(got - want) / l1);
    if (r > 1e-12) ++violations, violator_size = std::max(violator_size, std::abs(want) / l1);
    ++count;
  };
  for (double k : {20.0, 60.0}) {
    for (const auto& cell : cells) {
      const int n = static_cast<int>(cell.size());
      const Vec2 origin = element_geometry(cell).centroid;
      for (int m = 0; m < 13; ++m) {
        for (int l = 0; l < 13; ++l) {
          const Vec2 dk = k * (dirs[m] - dirs[l]);
          const double omega = dk.norm();
          auto wave = [&](const Vec2& x) { return expi(dk.dot(x - origin)); };
          for (int i = 0; i < n; ++i) {
            const Vec2 a = cell[i], b = cell[(i + 1) % n];
            const double len = (b - a).norm();
            // twice the points the oscillatory rule asks for
            const int pts = 2 * q::oscillatory_points(omega, len) + 8;
            auto ref = [&](const std::function<double(double)>& w) {
              return q::integrate_segment(a, b, [&](const Vec2& x) { return w((x - a).norm() / len) * wave(x); }, pts);
            };
            record(edge_pw_integral(a, b, k, dirs[m], dirs[l], origin), ref([](double) { return 1.0; }), len,
                   edge_worst);
            record(edge_hat_pw_integral(EdgeWeight::Hat, a, b, k, dirs[m], dirs[l], origin),
                   ref([](double t) { return 1 - t; }), len / 2, edge_worst);
            record(edge_hat_pw_integral(EdgeWeight::HatSquared, a, b, k, dirs[m], dirs[l], origin),
                   ref([](double t) { return (1 - t) * (1 - t); }), len / 3, edge_worst);
            record(edge_hat_pw_integral(EdgeWeight::HatProduct, a, b, k, dirs[m], dirs[l], origin),
                   ref([](double t) { return (1 - t) * t; }), len / 6, edge_worst);
          }
          record(polygon_pw_mass_integral(cell, k, dirs[m], dirs[l], origin),
                 q::integrate_polygon_oscillatory(cell, wave, 2 * omega + 1), std::abs(signed_area(cell)),
                 poly_worst);
        }
      }
    }
  }
  std::string detail = std::to_string(count) + " integrals on 60 cells; max relative error edge " +
                       sci(edge_worst, 1) + ", polygon " + sci(poly_worst, 1) + " (limit 1e-12)";
  if (violations)
    detail += "; " + std::to_string(violations) + " over the limit, all with |I| <= " + sci(violator_size, 1) +
              " of the integral of |integrand|";
  detail += "; max error scaled by the integral of |integrand| " + sci(scaled_worst, 1);
  return {edge_worst <= 1e-12 && poly_worst <= 1e-12, detail};
}

// 9 -------------------------------------------------------------------------
Verdict special_functions() {
  using namespace specialfn;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> im(-200.0, 200.0), re(-30.0, 30.0), unit(-1.0, 1.0);
  double phi_worst = 0;
  for (int i = 0; i < 1000; ++i) {
    // edge kernels only see imaginary arguments; the rest probe the general case
    cplx z;
    if (i % 2 == 0)
      z = cplx(0.0, im(rng));
    else if (i % 4 == 1)
      z = cplx(2 * unit(rng), 2 * unit(rng));
    else
      z = cplx(re(rng), im(rng));
    const cplx two = phi(PhiKind::Two, z);
    const cplx sum = phi(PhiKind::Three, z) + phi(PhiKind::Four, z);
    phi_worst = std::max(phi_worst, std::abs(two - sum) / std::max(1.0, std::abs(two)));
  }

  double wr_worst = 0;
  int points = 0;
  for (double xi : {2.0 / 3.0, 1.0, 1.5}) {
    for (double nu : {xi, xi + 1.0, 2 * xi, 3 * xi}) {
      for (int i = 0; i <= 400; ++i) {
        const double x = 1e-3 * std::pow(120.0 / 1e-3, i / 400.0);
        const double w = bessel_j(nu, x) * bessel_y_prime(nu, x) - bessel_j_prime(nu, x) * bessel_y(nu, x);
        const double want = 2.0 / (kPi * x);
        wr_worst = std::max(wr_worst, std::abs(w - want) / want);
        ++points;
      }
    }
  }
  return {phi_worst <= 1e-14 && wr_worst <= 1e-9,
          "Phi2-Phi3-Phi4 max " + sci(phi_worst, 1) + " on 1000 z (limit 1e-14); Wronskian max " + sci(wr_worst, 1) +
              " on " + std::to_string(points) + " (nu, x), x in [1e-3, 120] (limit 1e-9)"};
}

// 10 ------------------------------------------------------------------------
Verdict singular_study() {
  const auto r = run_experiment(configured(ExperimentKind::Singular, {{"xi", "1,2/3,3/2"}, {"p", "5,13"}, {"mesh", "structured:4"}}));
  auto err = [&](const std::string& xi_tag, int p) {
    for (const auto& row : r.rows)
      if (row.experiment == "singular:xi=" + xi_tag && row.report.p == p) return row.report.l2_rel_error;
    throw std::runtime_error("missing singular row xi=" + xi_tag);
  };
  std::ostringstream tag23, tag32;
  tag23 << std::setprecision(10) << 2.0 / 3.0;
  tag32 << std::setprecision(10) << 1.5;
  const double drop = err("1", 5) / err("1", 13);
  const double e23 = err(tag23.str(), 13), e32 = err(tag32.str(), 13);
  return {drop >= 100 && e23 > e32, "xi=1 reduction p5->p13 " + fixed(drop, 1) + " (need >= 100); p=13 error xi=2/3 " +
                                        sci(e23) + " vs xi=3/2 " + sci(e32)};
}

// 11 ------------------------------------------------------------------------
Verdict infsup() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> hk(0.1, 1.0);
  std::uniform_int_distribution<int> nverts(3, 8);
  const WaveContext ctx(20.0, equispaced_directions(13));
  int above = 0, positive = 0;
  double lowest_margin = 1e300;
  for (int i = 0; i < 20; ++i) {
    const auto cell = random_convex_polygon(rng, nverts(rng), hk(rng) / ctx.k);
    const auto res = local_infsup_beta(element_geometry(cell), ctx);
    positive += res.beta > 0;
    above += res.beta > 0 && res.beta >= res.beta_reference;
    lowest_margin = std::min(lowest_margin, res.beta - res.beta_reference);
  }
  return {positive == 20 && above >= 18, "beta > 0 on " + std::to_string(positive) + "/20, beta >= 1-2(hk)^2/pi^2 on " +
                                             std::to_string(above) + "/20 (need 18), smallest margin " +
                                             sci(lowest_margin, 2)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double time_limit;  // seconds, 0 = none
  };
  const std::vector<Criterion> criteria = {
      {"patch test", patch_test, 10},
      {"structured reference errors", structured_reference_errors, 300},
      {"GRAD close to PUM", grad_close_to_pum, 0},
      {"voronoi h-convergence", voronoi_h_convergence, 0},
      {"p-convergence", p_convergence, 0},
      {"pollution at fixed hk", pollution, 0},
      {"matrix identities", matrix_identities, 30},
      {"oscillatory kernel oracle", kernel_oracle, 0},
      {"special functions", special_functions, 0},
      {"singular solutions", singular_study, 0},
      {"inf-sup diagnostic", infsup, 0},
  };

  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      v.pass = false;
      v.detail += "; over the " + fixed(c.time_limit, 0) + " s limit";
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << " (" << fixed(secs, 1)
              << " s): " << v.detail << std::endl;
  }
  std::cout << "acceptance: " << criteria.size() << " criteria evaluated, " << criteria.size() - failed << " passed, "
            << failed << " failed" << std::endl;
  return failed ? 1 : 0;
}
