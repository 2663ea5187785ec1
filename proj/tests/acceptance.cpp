// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "lmgent/cspa.hpp"
#include "lmgent/errors.hpp"
#include "lmgent/exact_thermo.hpp"
#include "lmgent/mean_field.hpp"
#include "lmgent/oracle.hpp"
#include "lmgent/rpa_entanglement.hpp"
#include "support.hpp"

using namespace lmgent;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ut(0.05, 2.0);
  double worst = 0.0;
  int draws = 0;
  for (int n = 2; n <= 10; ++n) {
    for (int k = 0; k < 50; ++k) {
      const ModelParams p = test::random_params(rng, n);
      const double T = ut(rng);
      const oracle::DenseSystem dense(p);
      const auto o = oracle::oracle_concurrence(dense, T);
      const ExactSpectrum spec = diagonalize(p);
      const ThermalMoments m = thermal_moments(spec, T);
      const PairObservables e = observables_from_moments(n, m.s2x, m.s2y, m.s2z, m.sz);
      const ConcurrenceReport c = concurrence(e, n);
      worst = std::max({worst, std::abs(m.log_z - o.log_z) / std::max(1.0, std::abs(o.log_z)),
                        std::abs(e.ax - o.pair.obs.ax), std::abs(e.ay - o.pair.obs.ay),
                        std::abs(e.az - o.pair.obs.az), std::abs(e.sz - o.pair.obs.sz),
                        std::abs(c.c - o.report.c)});
      ++draws;
    }
  }
  return {worst <= 1e-9, fmt("%d draws over n = 2..10, max deviation %.2e (lnZ relative)", draws, worst)};
}

Outcome w_state() {
  double worst = 0.0;
  for (int n : {4, 10, 50}) {
    const ExactSpectrum spec = diagonalize(ModelParams{n, 0.5, 0.0, 0.0, 0.0});
    worst = std::max(worst, std::abs(level_concurrence(spec, SpinLabel{n}, -1, 0).c - 2.0 / n));
  }
  return {worst <= 1e-10, fmt("|C - 2/n| max %.2e for n = 4, 10, 50", worst)};
}

Outcome side_limits() {
  const int n = 100;
  const double chi = 0.98;
  const auto p = params_from_chi(n, 0.0, 1.0, chi);
  const auto fs = *factorizing_field(p);
  const SideLimits cf = side_limits_at_bs(n, chi);
  const bool closed = std::abs(cf.nc_minus - 1.16) < 0.005 && std::abs(cf.nc_plus - 0.54) < 0.005;
  auto side = [&](double b, double T) { return thermal_concurrence(diagonalize(p.with_field(b)), T); };
  const auto lo = side(fs.b_s - 1e-4, 1e-3), hi = side(fs.b_s + 1e-4, 1e-3);
  const bool literal = std::abs(n * lo.c_minus - 1.16) <= 0.02 && std::abs(n * hi.c_plus - 0.54) <= 0.02;
  Outcome o;
  o.pass = literal && closed;
  o.detail = fmt("T = 1e-3 at b_s -+ 1e-4: nC_- = %.4f, nC_+ = %.4f (target 1.16, 0.54 +- 0.02); "
                 "closed form %.4f, %.4f",
                 n * lo.c_minus, n * hi.c_plus, cf.nc_minus, cf.nc_plus);
  const auto elo = side(fs.b_s_exact - 1e-4, 1e-3), ehi = side(fs.b_s_exact + 1e-4, 1e-3);
  o.info.push_back(fmt("T = 1e-3 at (1-1/n) b_s -+ 1e-4: nC_- = %.4f, nC_+ = %.4f (parity doublet "
                       "thermally mixed)",
                       n * elo.c_minus, n * ehi.c_plus));
  const auto zlo = side(fs.b_s_exact - 1e-4, 0.0), zhi = side(fs.b_s_exact + 1e-4, 0.0);
  const bool ground = std::abs(n * zlo.c_minus - 1.16) <= 0.02 && std::abs(n * zhi.c_plus - 0.54) <= 0.02;
  o.info.push_back(fmt("T -> 0+ at (1-1/n) b_s -+ 1e-4: nC_- = %.4f, nC_+ = %.4f, %s the target values",
                       n * zlo.c_minus, n * zhi.c_plus, ground ? "within 0.02 of" : "outside 0.02 of"));
  return o;
}

Outcome landmark_tl() {
  const auto tl = limit_temperatures(params_from_chi(100, 0.0, 1.0, 0.5)).tl_minus();
  if (!tl) return {false, "no antiparallel limit temperature at b = 0"};
  return {*tl >= 0.14 && *tl <= 0.16, fmt("T_L^-(b = 0) = %.5f", *tl)};
}

Outcome mfrpa_accuracy() {
  double worst = 0.0;
  std::string vals;
  for (double b : {0.4, 0.6, 1.5, 2.0}) {
    const auto p = params_from_chi(100, b, 1.0, 0.5);
    const double d = 100 * std::abs(thermal_concurrence(diagonalize(p), 0.14).c -
                                    asymptotic_concurrence(p, 0.14).c());
    worst = std::max(worst, d);
    vals += fmt(" %.4f", d);
  }
  return {worst <= 0.05, "|n dC| at b = 0.4, 0.6, 1.5, 2.0:" + vals};
}

Outcome cspa_accuracy() {
  double worst = 0.0, at = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double b = 0.05 * k;
    const auto p = params_from_chi(100, b, 1.0, 0.5);
    const double d =
        100 * std::abs(thermal_concurrence(diagonalize(p), 0.14).c - cspa_concurrence(p, 0.14).c);
    if (d > worst) {
      worst = d;
      at = b;
    }
  }
  return {worst <= 0.02, fmt("40 fields 0.05..2 (b_c included): max |n dC| = %.4f at b = %.2f", worst, at)};
}

Outcome rpa_energy() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ut(0.05, 1.0);
  int compared = 0, skipped = 0;
  double worst = 0.0;
  while (compared < 100) {
    const ModelParams p = test::random_params(rng, 50);
    const double T = ut(rng);
    const Vec3 r = {u(rng), u(rng), u(rng)};
    const auto e = rpa_energy_general(r, p, T);
    const double lambda = std::hypot(r[0], r[1], r[2] - p.b);
    if (!e.omega || *e.omega < 1e-6 || *e.omega > 2 * lambda * (1 - 1e-6)) {
      ++skipped;
      continue;
    }
    const auto d = rpa_energy_determinant(r, p, T);
    worst = std::max(worst, d ? std::abs(*d - *e.omega) : 1e300);
    ++compared;
  }
  return {worst <= 1e-8, fmt("100 static points (%d without a real root in (0, 2 lambda) skipped): "
                             "max |dw| = %.2e",
                             skipped, worst)};
}

Outcome spectrum() {
  const auto p = params_from_chi(100, 0.5, 1.0, 0.5);
  const ExactSpectrum spec = diagonalize(p);
  const double e0 = spec.ground_energy;
  const double top = std::min(spec.level(SpinLabel{100}, 1, 1).energy,
                              spec.level(SpinLabel{100}, -1, 1).energy) - e0;
  const double lower = std::min(spec.level(SpinLabel{98}, 1, 0).energy,
                                spec.level(SpinLabel{98}, -1, 0).energy) - e0;
  const double omega = solve_mean_field(p, 0.0).omega;
  const double d1 = std::abs(top / omega - 1.0), d2 = std::abs(lower - 1.0);
  return {d1 <= 0.02 && d2 <= 0.02,
          fmt("S = n/2: %.5f vs omega %.5f (%.2f%%); S = n/2 - 1: %.5f vs lambda 1 (%.2f%%)", top, omega,
              100 * d1, lower, 100 * d2)};
}

Outcome parity() {
  const auto p = params_from_chi(10, 0.0, 1.0, 0.5);
  const auto tr = parity_transitions(p, 0.0, 1.0);
  const double target = 0.9 * std::sqrt(0.5);
  const double d = tr.empty() ? 1.0 : std::abs(tr.back() - target);
  return {tr.size() == 5 && d <= 1e-6,
          fmt("%zu crossings, last at %.10f, |last - 0.9 b_s| = %.1e", tr.size(), tr.empty() ? 0.0 : tr.back(), d)};
}

Outcome log_scaling() {
  const std::vector<double> ns = {50, 100, 200, 400, 800};
  std::vector<double> tl;
  for (double n : ns) {
    const auto t = limit_temperatures(params_from_chi(int(n), 0.5, 1.0, 0.5)).tl_minus();
    if (!t) return {false, fmt("no T_L^- at n = %g", n)};
    tl.push_back(*t);
  }
  // 1/T_L = ln a / lambda + ln n / lambda, least squares in (ln n, 1/T_L)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = ns.size();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]), y = 1.0 / tl[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / m;
  const double lambda = 1.0 / slope, ln_a = icpt * lambda;
  auto residual = [&](double lam, double la) {
    double w = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i)
      w = std::max(w, std::abs(lam / (la + std::log(ns[i])) / tl[i] - 1.0));
    return w;
  };
  const double fit = residual(lambda, ln_a);
  Outcome o;
  o.pass = fit <= 0.02;
  std::string vals;
  for (double t : tl) vals += fmt(" %.5f", t);
  o.detail = fmt("T_L^- =%s; fit lambda = %.4f, a = %.3f, max relative residual %.2f%%", vals.c_str(),
                 lambda, std::exp(ln_a), 100 * fit);
  const double fixed_la =
      boost::math::tools::brent_find_minima(
          [&](double la) {
            double s = 0.0;
            for (std::size_t i = 0; i < ns.size(); ++i) {
              const double r = 1.0 / (la + std::log(ns[i])) / tl[i] - 1.0;
              s += r * r;
            }
            return s;
          },
          -5.0, 10.0, 40)
          .first;
  o.info.push_back(fmt("with lambda fixed at vx = 1: a = %.3f, max relative residual %.2f%%",
                       std::exp(fixed_la), 100 * residual(1.0, fixed_la)));
  return o;
}

Outcome high_field() {
  std::vector<double> t;
  for (double b : {1.0, 2.0, 4.0}) {
    const auto v = limit_temperatures(params_from_chi(100, b, 1.0, 0.5)).tl_plus();
    if (!v) return {false, fmt("no T_L^+ at b = %g", b)};
    t.push_back(*v);
  }
  return {t[0] < t[1] && t[1] < t[2], fmt("T_L^+ at b = 1, 2, 4: %.5f, %.5f, %.5f", t[0], t[1], t[2])};
}

Outcome lower_spin() {
  const auto p = params_from_chi(100, 0.0, 1.0, 0.5);
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const ExactSpectrum spec = diagonalize(p.with_field(0.1 * k));
    const auto& sec = spec.sector(SpinLabel{98});
    const Level* lowest = &sec.levels.front();
    for (const auto& lv : sec.levels)
      if (lv.energy < lowest->energy) lowest = &lv;
    const auto r = level_concurrence(spec, sec.s, lowest->parity, lowest->k);
    worst = std::max({worst, r.c, r.c_plus, r.c_minus});
  }
  return {worst <= 1e-10, fmt("b = 0.1..2.0: max(C, C_+, C_-) = %.2e", worst)};
}

// Compact re-run of one representative check per property family; the full
// suites live in the unit tests.
Outcome property_suite() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937_64 rng(5);
  {
    const ModelParams p = test::random_params(rng, 40);
    const auto a = thermal_concurrence(diagonalize(p), 0.2);
    const auto b = thermal_concurrence(diagonalize(p.scaled(2.5)), 0.5);
    check(std::abs(a.c_plus - b.c_plus) + std::abs(a.c_minus - b.c_minus) < 1e-10, "scale invariance");
  }
  {
    const ModelParams p = test::random_params(rng, 30);
    const double T = 0.3, h = 1e-5;
    ModelParams up = p, dn = p;
    up.vx += h;
    dn.vx -= h;
    const double d = (log_partition(diagonalize(up), T) - log_partition(diagonalize(dn), T)) / (2 * h);
    check(std::abs(thermal_observables(diagonalize(p), T).ax - T / 29 * d) < 1e-6, "derivative identity");
  }
  {
    bool ok = true;
    for (int k = 0; k < 50; ++k) {
      const ModelParams p = test::random_params(rng, 2 + k);
      const auto pd = pair_density(thermal_observables(diagonalize(p), 0.05 + 0.04 * k), p.n);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(pd.matrix());
      ok = ok && es.eigenvalues().minCoeff() >= -1e-12 && std::abs(pd.matrix().trace() - 1.0) < 1e-12;
    }
    check(ok, "pair density positivity");
  }
  {
    const auto p = params_from_chi(100, 1.0, 1.0, 0.5);
    const double c = cplus_critical(p, 0.05);
    check(std::abs(cplus_symmetry_breaking(p, 0.05) - c) <= 1e-10 && std::abs(cplus_normal(p, 0.05) - c) <= 1e-10,
          "branch continuity at b_c");
  }
  {
    const auto p = params_from_chi(100, 0.5, 1.0, 0.5);
    CspaConfig fine;
    fine.initial_pieces = 32;
    check(std::abs(cspa_log_partition(p, 0.14) / cspa_log_partition(p, 0.14, fine) - 1.0) < 1e-8,
          "quadrature convergence");
    const double t_star = cspa_breakdown_temperature(p, 0.02, 0.1);
    bool fired = false;
    try {
      cspa(p, 0.5 * t_star);
    } catch (const BreakdownError&) {
      fired = true;
    }
    check(fired, "breakdown detection");
  }
  {
    const auto p = params_from_chi(100, 0.5, 1.0, 0.5);
    const auto tl = limit_temperature_rpa(p);
    check(tl.minus && std::abs(*asymptotic_concurrence(p, *tl.minus).c_minus) <= 1e-8,
          "limit temperature back substitution");
  }
  Outcome o;
  o.pass = failed.empty();
  if (failed.empty()) {
    o.detail = "spot checks pass: scale invariance, derivative identity, pair density positivity, "
               "branch continuity, quadrature convergence, breakdown detection, limit temperature";
  } else {
    o.detail = "failed:";
    for (const auto& f : failed) o.detail += " [" + f + "]";
  }
  o.info.push_back("the complete invariant suites run as the unit test executables under ctest");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "W-state bound", w_state},
      {3, "side limits", side_limits},
      {4, "limit temperature landmark", landmark_tl},
      {5, "MF+RPA accuracy", mfrpa_accuracy},
      {6, "CSPA accuracy", cspa_accuracy},
      {7, "RPA energy cross-check", rpa_energy},
      {8, "spectrum correspondence", spectrum},
      {9, "parity transitions", parity},
      {10, "log scaling", log_scaling},
      {11, "high-field growth", high_field},
      {12, "lower-spin separability", lower_spin},
      {13, "property suite", property_suite},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("CRITERION %2d %s  %s: %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), dt);
    for (const auto& line : o.info) std::printf("             info  %s\n", line.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
