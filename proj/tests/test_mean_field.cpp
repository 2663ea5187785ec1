#include <doctest.h>

#include <cmath>
#include <random>

#include "lmgent/errors.hpp"
#include "lmgent/exact_thermo.hpp"
#include "lmgent/mean_field.hpp"
#include "support.hpp"

using namespace lmgent;
using doctest::Approx;

TEST_CASE("critical constants") {
  auto pc = critical_constants(ModelParams{10, 0.0, 1.0, 0.3, 0.0});
  CHECK(pc.b_c == 1.0);
  CHECK(!pc.normal_only);
  CHECK(pc.critical_temperature(0.0) == 0.5);
  CHECK(pc.critical_temperature(1e-9) == Approx(0.5));
  CHECK(pc.critical_temperature(0.5) == Approx(0.5 / std::log(3.0)).epsilon(1e-14));
  CHECK(pc.critical_temperature(1.0) == 0.0);
  CHECK(pc.critical_temperature(1.0 - 1e-9) < 0.05);
  double prev = 0.5;
  for (int i = 1; i < 100; ++i) {
    const double t = pc.critical_temperature(i / 100.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(critical_constants(ModelParams{10, 0.0, 1.0, 0.0, 1.2}).normal_only);
  CHECK(critical_constants(ModelParams{10, 0.0, 1.0, 0.5, 0.25}).b_c == 0.75);
}

TEST_CASE("symmetry-breaking solution at T = 0") {
  ModelParams p{100, 0.4, 1.0, 0.3, -0.2};
  auto s = solve_mean_field(p, 0.0);
  const double bt = 0.4 / 1.2;
  CHECK(s.phase == Phase::symmetry_breaking);
  CHECK(s.lambda == 1.0);
  CHECK(s.omega == Approx(std::sqrt((1 - bt * bt) * (1.0 - 0.3) * (1.0 + 0.2))).epsilon(1e-14));
  CHECK(s.r[2] == Approx(0.2 * bt));
}

TEST_CASE("normal solution at T = 0") {
  ModelParams p{100, 1.5, 1.0, 0.3, 0.2};
  auto s = solve_mean_field(p, 0.0);
  const double l = 1.7;
  CHECK(s.phase == Phase::normal);
  CHECK(s.lambda == Approx(l));
  CHECK(s.omega == Approx(std::sqrt((l - 1.0) * (l - 0.3))).epsilon(1e-14));
}

TEST_CASE("RPA energy vanishes at the critical field") {
  auto p = params_from_chi(100, 0.0, 1.0, 0.5);
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    CHECK(solve_mean_field(p.with_field(1.0 - eps), 0.0).omega < 2 * std::sqrt(eps));
    CHECK(solve_mean_field(p.with_field(1.0 + eps), 0.0).omega < 2 * std::sqrt(eps));
  }
}

TEST_CASE("gap equation residual") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ut(0.01, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = test::random_params(rng, 50);
    auto s = solve_mean_field(p, ut(rng));
    CHECK(std::abs(s.gap_residual) <= 1e-12 * p.vx);
    if (s.phase == Phase::symmetry_breaking) {
      const double bt = p.b / (p.vx - p.vz);
      CHECK(s.lambda > p.vx * bt);
    } else if (p.vz >= 0.0) {
      CHECK(s.lambda >= p.b - 1e-12);
      CHECK(s.zeta >= 0.0);
    }
  }
}

TEST_CASE("symmetry-breaking branch closes continuously at T_c") {
  auto p = params_from_chi(100, 0.5, 1.0, 0.5);
  const double tc = critical_constants(p).critical_temperature(0.5);
  auto below = solve_mean_field(p, tc * (1 - 1e-9));
  auto above = solve_mean_field(p, tc * (1 + 1e-9));
  CHECK(below.phase == Phase::symmetry_breaking);
  CHECK(above.phase == Phase::normal);
  CHECK(below.lambda == Approx(0.5).epsilon(1e-6));
  CHECK(below.m[0] < 1e-3);
  CHECK(std::abs(below.lambda - above.lambda) < 1e-6);
  CHECK(std::abs(below.m[2] - above.m[2]) < 1e-6);
  CHECK(below.omega < 1e-3);
}

TEST_CASE("free spins: omega equals lambda") {
  ModelParams p{10, 0.7, 0.0, 0.0, 0.0};
  for (double T : {0.1, 1.0}) {
    auto e = rpa_energy_general({0.0, 0.0, 0.0}, p, T);
    REQUIRE(e.omega);
    CHECK(*e.omega == Approx(0.7));
    auto d = rpa_energy_determinant({0.0, 0.0, 0.0}, p, T);
    REQUIRE(d);
    CHECK(*d == Approx(0.7).epsilon(1e-10));
  }
}

TEST_CASE("closed form at the mean-field minimum reproduces the phase formulas") {
  for (double b : {0.3, 0.7, 1.4}) {
    for (double T : {0.05, 0.2}) {
      ModelParams p{100, b, 1.0, 0.4, 0.1};
      auto s = solve_mean_field(p, T);
      auto e = rpa_energy_general(s.r, p, T);
      CHECK(e.omega_sq == Approx(s.omega_sq).epsilon(1e-12));
      auto d = rpa_energy_determinant(s.r, p, T);
      REQUIRE(d);
      CHECK(std::abs(*d - s.omega) < 1e-8);
    }
  }
}

TEST_CASE("closed form and determinant root agree at random static points") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ut(0.05, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto p = test::random_params(rng, 40);
    const double T = ut(rng);
    Vec3 r = {u(rng), p.vy != 0.0 ? u(rng) : 0.0, u(rng)};
    auto e = rpa_energy_general(r, p, T);
    auto d = rpa_energy_determinant(r, p, T);
    const double lambda = std::hypot(r[0], r[1], r[2] - p.b);
    if (e.omega && *e.omega > 1e-6 && *e.omega < 2 * lambda * (1 - 1e-6)) {
      REQUIRE(d);
      CHECK(std::abs(*d - *e.omega) < 1e-8);
      ++compared;
    } else if (!e.omega) {
      CHECK(!d);
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("determinant vanishes at the closed-form energy") {
  ModelParams p{40, 0.3, 1.0, -0.4, 0.5};
  Vec3 r = {0.6, -0.2, 0.1};
  auto e = rpa_energy_general(r, p, 0.3);
  REQUIRE(e.omega);
  const double scale = std::abs(rpa_determinant(r, p, 0.3, 0.5 * *e.omega));
  CHECK(std::abs(rpa_determinant(r, p, 0.3, *e.omega)) < 1e-10 * std::max(scale, 1.0));
}

TEST_CASE("weak coupling ln Z approaches free spins") {
  const double b = 0.6, T = 0.3;
  const double free = 20 * std::log(2 * std::cosh(0.5 * b / T));
  double prev = 1e300;
  for (double v : {1e-2, 1e-3, 1e-4}) {
    const double err = std::abs(log_partition_mfrpa(ModelParams{20, b, v, 0.5 * v, 0.2 * v}, T) - free);
    CHECK(err < 30 * v);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("MF+RPA ln Z within 1% of exact") {
  auto p = params_from_chi(100, 0.5, 1.0, 0.5);
  for (double T : {0.1, 0.14}) {
    const double exact = log_partition(diagonalize(p), T);
    CHECK(std::abs(log_partition_mfrpa(p, T) - exact) < 0.01 * std::abs(exact));
  }
}

TEST_CASE("XXZ and critical points diverge") {
  CHECK_THROWS_AS(log_partition_mfrpa(ModelParams{100, 0.5, 1.0, 1.0, 0.0}, 0.1), DivergenceError);
  CHECK_THROWS_AS(mfrpa_observables(ModelParams{100, 0.5, 1.0, 1.0, 0.0}, 0.1), DivergenceError);
  auto p = params_from_chi(100, 0.5, 1.0, 0.5);
  const double tc = critical_constants(p).critical_temperature(0.5);
  CHECK_THROWS_AS(log_partition_mfrpa(p, tc), DivergenceError);
  CHECK_THROWS_AS(mfrpa_observables(p.with_field(1.0), 0.0), DivergenceError);
}

TEST_CASE("Hartree truncation gives C = (tanh^2 - 1)/2") {
  const int n = 100000;
  for (double b : {0.2, 1.6}) {
    const double T = 0.1;
    auto h = mfrpa_observables(params_from_chi(n, b, 1.0, 0.5), T, {.hartree_only = true});
    auto c = concurrence(h.obs, n);
    const double t = std::tanh(0.5 * h.mf.lambda / T);
    const double expect = 0.5 * (t * t - 1.0);
    CHECK(c.c_plus == Approx(expect).epsilon(1e-3));
    CHECK(c.c_minus == Approx(expect).epsilon(1e-3));
    CHECK(expect == Approx(-2 * std::exp(-h.mf.lambda / T)).epsilon(1e-3));
  }
}

TEST_CASE("MF+RPA correlators within 1e-3 of exact") {
  auto p = params_from_chi(100, 0.5, 1.0, 0.5);
  auto m = mfrpa_observables(p, 0.14).obs;
  auto e = thermal_observables(diagonalize(p), 0.14);
  CHECK(std::abs(m.ax - e.ax) < 1e-3);
  CHECK(std::abs(m.ay - e.ay) < 1e-3);
  CHECK(std::abs(m.az - e.az) < 1e-3);
  CHECK(std::abs(m.sz - e.sz) < 1e-3);
}

TEST_CASE("magnetisation stays finite on uncoupled axes") {
  auto s = solve_mean_field(params_from_chi(100, 0.5, 1.0, 0.0), 0.1);
  for (double m : s.m) {
    CHECK(std::isfinite(m));
    CHECK(std::abs(m) <= 1.0);
  }
}

TEST_CASE("analytic gap derivatives match finite differences") {
  for (double b : {0.3, 1.5}) {
    ModelParams p{100, b, 1.0, 0.4, 0.2};
    for (double T : {0.05, 0.2}) {
      auto s = solve_mean_field(p, T);
      auto a = gap_derivatives(p, s);
      auto d = gap_derivatives_numeric(p, T);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - d[k]) < 1e-7);
    }
  }
}

TEST_CASE("mean-field point maximises ln Z(r)") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto p : {params_from_chi(100, 0.5, 1.0, 0.5), ModelParams{100, 1.4, 1.0, 0.5, 0.3},
                 ModelParams{100, 0.2, 1.0, 0.8, 0.3}}) {
    for (double T : {0.1, 0.3}) {
      auto s = solve_mean_field(p, T);
      const double f0 = -T * log_hartree_partition(s.r, p, T);
      const double v[3] = {p.vx, p.vy, p.vz};
      int violations = 0;
      for (int k = 0; k < 10000; ++k) {
        Vec3 d{};
        double norm = 0.0;
        for (int mu = 0; mu < 3; ++mu) {
          d[mu] = v[mu] != 0.0 ? g(rng) : 0.0;
          norm += d[mu] * d[mu];
        }
        const double rad = 0.1 * p.vx * std::cbrt(u(rng)) / std::sqrt(norm);
        Vec3 r = s.r;
        for (int mu = 0; mu < 3; ++mu) r[mu] += rad * d[mu];
        if (-T * log_hartree_partition(r, p, T) < f0 - 1e-12 * std::abs(f0)) ++violations;
      }
      CHECK(violations == 0);
    }
  }
}
