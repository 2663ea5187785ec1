#include "lmgent/mean_field.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "lmgent/errors.hpp"
#include "lmgent/numerics.hpp"

namespace lmgent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_of(double T) { return T == 0.0 ? kInf : 1.0 / T; }

// 1 - tanh^2(y), stable for large y.
double sech2(double y) {
  const double e = std::exp(-2.0 * std::abs(y));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// tanh(lambda/2T)/lambda, including lambda -> 0 and T -> 0.
double tanh_over(double lambda, double T) {
  if (T == 0.0) return lambda > 0.0 ? 1.0 / lambda : kInf;
  const double y = 0.5 * lambda / T;
  return 0.5 / T * num::tanhc(y);
}

double solve_gap(double offset, double coupling, double T, double upper) {
  // lambda = offset + coupling tanh(lambda/2T), lambda > 0
  if (T == 0.0) return std::max(offset + coupling, 0.0);
  auto g = [&](double l) { return l - offset - coupling * std::tanh(0.5 * l / T); };
  auto dg = [&](double l) { return 1.0 - coupling * 0.5 / T * sech2(0.5 * l / T); };
  const double lo = 1e-12;
  if (g(lo) >= 0.0) return 0.0;
  double hi = upper;
  while (g(hi) <= 0.0) hi *= 2.0;
  return num::bisect_polish(g, dg, lo, hi, 1e-14);
}

MeanFieldSolution solve_raw(const ModelParams& p, double T) {
  if (T < 0.0 || !std::isfinite(T)) throw DomainError("temperature must be finite and >= 0");
  const PhaseConstants pc = critical_constants(p);
  const double b = std::abs(p.b);
  const double sgn = p.b < 0.0 ? -1.0 : 1.0;
  const double beta = beta_of(T);
  const double upper = p.vx + std::abs(p.vz) + b + 1.0;
  MeanFieldSolution s;
  s.T = T;
  const bool sb = !pc.normal_only && b < pc.b_c && T < pc.critical_temperature(b);
  if (sb) {
    s.phase = Phase::symmetry_breaking;
    s.lambda = solve_gap(0.0, p.vx, T, upper);
    s.tanh_half = T == 0.0 ? 1.0 : std::tanh(0.5 * beta * s.lambda);
    s.gap_residual = s.lambda - p.vx * s.tanh_half;
    const double bt = b / pc.b_c;
    const double x = std::sqrt(std::max(s.lambda * s.lambda - p.vx * p.vx * bt * bt, 0.0));
    s.m = {x / p.vx, 0.0, -sgn * bt};
    const double to = tanh_over(s.lambda, T);
    s.f = {p.vx * to, p.vy * to, p.vz * to};
    s.omega_sq = x * x * (1.0 - s.f[1]) * (1.0 - s.f[2]);
    s.zeta = T == 0.0 ? 0.0 : 0.5 * beta * p.vx * sech2(0.5 * beta * s.lambda);
  } else {
    s.phase = Phase::normal;
    s.lambda = solve_gap(b, p.vz, T, upper);
    s.tanh_half = T == 0.0 ? 1.0 : std::tanh(0.5 * beta * s.lambda);
    s.gap_residual = s.lambda - b - p.vz * s.tanh_half;
    s.m = {0.0, 0.0, -sgn * s.tanh_half};
    const double to = tanh_over(s.lambda, T);
    s.f = {p.vx * to, p.vy * to, p.vz * to};
    s.omega_sq = s.lambda * s.lambda * (1.0 - s.f[0]) * (1.0 - s.f[1]);
    s.zeta = T == 0.0 ? 0.0 : 0.5 * beta * p.vz * sech2(0.5 * beta * s.lambda);
  }
  s.r = {p.vx * s.m[0], p.vy * s.m[1], p.vz * s.m[2]};
  s.omega = std::sqrt(std::max(s.omega_sq, 0.0));
  return s;
}

ModelParams perturbed(const ModelParams& p, int eta, double delta) {
  ModelParams q = p;
  switch (eta) {
    case 0: q.vx += delta; break;
    case 1: q.vy += delta; break;
    case 2: q.vz += delta; break;
    default: q.b += delta; break;
  }
  return q;
}

double param_value(const ModelParams& p, int eta) {
  switch (eta) {
    case 0: return p.vx;
    case 1: return p.vy;
    case 2: return p.vz;
    default: return p.b;
  }
}

// Richardson-extrapolated central difference of g(eta).
template <class G>
double richardson(G&& g, const ModelParams& p, int eta, double rel_step) {
  const double h = rel_step * std::max(std::abs(param_value(p, eta)), p.vx);
  auto central = [&](double step) {
    return (g(perturbed(p, eta, step)) - g(perturbed(p, eta, -step))) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

double coth_half(double beta, double e) {
  if (!std::isfinite(beta)) return 1.0;
  return 1.0 / std::tanh(0.5 * beta * e);
}

void check_isolated(const MeanFieldSolution& s, const ModelParams& p) {
  if (s.omega <= 1e-7 * std::max(p.vx, s.lambda))
    throw DivergenceError(
        "MF+RPA diverges: RPA energy vanishes (critical point T -> T_c(b), b -> b_c, or the "
        "continuously degenerate XXZ limit vy -> vx)");
  if (s.zeta >= 1.0 - 1e-12)
    throw DivergenceError("MF+RPA diverges: static fluctuation factor zeta -> 1");
}

}  // namespace

double PhaseConstants::critical_temperature(double b) const {
  if (normal_only) return 0.0;
  b = std::abs(b);
  if (b >= b_c) return 0.0;
  const double bt = b / b_c;
  if (bt < 1e-6) return 0.5 * vx * (1.0 - bt * bt / 3.0);
  return vx * bt / std::log((1.0 + bt) / (1.0 - bt));
}

PhaseConstants critical_constants(const ModelParams& p) {
  PhaseConstants pc;
  pc.vx = p.vx;
  pc.b_c = p.vx - p.vz;
  pc.normal_only = p.vz >= p.vx;
  pc.chi = p.chi();
  return pc;
}

MeanFieldSolution solve_mean_field(const ModelParams& p, double T) {
  return solve_raw(canonicalize(p), T);
}

RpaEnergy rpa_energy_general(const Vec3& r, const ModelParams& p, double T) {
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const double lambda = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  const double to = tanh_over(lambda, T);
  const Vec3 f = {p.vx * to, p.vy * to, p.vz * to};
  RpaEnergy out;
  out.omega_sq = l[0] * l[0] * (1.0 - f[1]) * (1.0 - f[2]) +
                 l[1] * l[1] * (1.0 - f[0]) * (1.0 - f[2]) +
                 l[2] * l[2] * (1.0 - f[0]) * (1.0 - f[1]);
  if (out.omega_sq >= 0.0) out.omega = std::sqrt(out.omega_sq);
  return out;
}

double rpa_determinant(const Vec3& r, const ModelParams& p, double T, double omega) {
  using cd = std::complex<double>;
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const double lambda = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  if (!(lambda > 0.0)) throw DomainError("rpa_determinant needs lambda > 0");
  const cd I(0.0, 1.0);
  Eigen::Matrix2cd s[3];
  s[0] << 0.0, 0.5, 0.5, 0.0;
  s[1] << 0.0, -0.5 * I, 0.5 * I, 0.0;
  s[2] << 0.5, 0.0, 0.0, -0.5;
  const Eigen::Matrix2cd h = -(l[0] * s[0] + l[1] * s[1] + l[2] * s[2]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  const Eigen::Vector2d eps = es.eigenvalues();
  const Eigen::Matrix2cd U = es.eigenvectors();
  double pop[2];
  if (T == 0.0) {
    pop[0] = 1.0;
    pop[1] = 0.0;
  } else {
    const double w = std::exp(-(eps(1) - eps(0)) / T);
    pop[0] = 1.0 / (1.0 + w);
    pop[1] = w / (1.0 + w);
  }
  // elements <a| s_mu |b> in the eigenbasis
  Eigen::Matrix2cd se[3];
  for (int mu = 0; mu < 3; ++mu) se[mu] = U.adjoint() * s[mu] * U;
  const double v[3] = {p.vx, p.vy, p.vz};
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity();
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      cd acc = 0.0;
      for (int a = 0; a < 2; ++a) {
        const int b = 1 - a;
        acc += se[mu](a, b) * se[nu](b, a) * (pop[b] - pop[a]) / (eps(a) - eps(b) - omega);
      }
      m(mu, nu) -= 2.0 * v[mu] * acc;
    }
  return m.determinant().real();
}

std::optional<double> rpa_energy_determinant(const Vec3& r, const ModelParams& p, double T) {
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const double lambda = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  if (!(lambda > 0.0)) return std::nullopt;
  // The determinant has a simple pole at omega = lambda; remove it.
  auto poly = [&](double w) { return rpa_determinant(r, p, T, w) * (w * w - lambda * lambda); };
  constexpr int kScan = 401;
  const double hi = 2.0 * lambda;
  double prev_w = 1e-9 * lambda;
  double prev = poly(prev_w);
  for (int i = 1; i <= kScan; ++i) {
    // offset keeps grid points away from the removable singularity at lambda
    double w = hi * (i + 0.5 * M_SQRT1_2) / (kScan + 1);
    const double cur = poly(w);
    if (cur == 0.0) return w;
    if ((cur > 0.0) != (prev > 0.0))
      return num::bisect(poly, prev_w, w, 1e-15 * lambda);
    prev_w = w;
    prev = cur;
  }
  return std::nullopt;
}

double log_hartree_partition(const Vec3& r, const ModelParams& p, double T) {
  if (!(T > 0.0)) throw DomainError("ln Z(r) needs T > 0");
  const double beta = 1.0 / T;
  const double v[3] = {p.vx, p.vy, p.vz};
  double quad = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    if (v[mu] == 0.0) {
      if (r[mu] != 0.0) throw DomainError("static field on an axis with zero coupling");
      continue;
    }
    quad += p.n * r[mu] * r[mu] / v[mu] + v[mu];
  }
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const double lambda = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  return -0.25 * beta * quad + p.n * num::log2cosh(0.5 * beta * lambda);
}

double log_partition_mfrpa(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  if (!(T > 0.0)) throw DomainError("MF+RPA ln Z needs T > 0");
  const MeanFieldSolution s = solve_raw(p, T);
  check_isolated(s, p);
  const double beta = 1.0 / T;
  const double v[3] = {p.vx, p.vy, p.vz};
  double quad = 0.0;
  for (int mu = 0; mu < 3; ++mu) quad += p.n * v[mu] * s.m[mu] * s.m[mu] + v[mu];
  const double log_z0 = -0.25 * beta * quad + p.n * num::log2cosh(0.5 * beta * s.lambda);
  // ln sinh(a)/sinh(c) = ln(a/c) + ln sinhc(a) - ln sinhc(c)
  double log_ratio;
  if (s.phase == Phase::normal && s.lambda == 0.0)
    log_ratio = -0.5 * std::log((1.0 - s.f[0]) * (1.0 - s.f[1]));
  else
    log_ratio = std::log(s.lambda / s.omega);
  const double yl = 0.5 * beta * s.lambda;
  const double yw = 0.5 * beta * s.omega;
  log_ratio += num::log_sinhc_sq(yl * yl) - num::log_sinhc_sq(yw * yw);
  return log_z0 - 0.5 * std::log1p(-s.zeta) + log_ratio;
}

std::array<double, 4> gap_derivatives(const ModelParams& p, const MeanFieldSolution& mf) {
  std::array<double, 4> d{};
  const double one_m_zeta = 1.0 - mf.zeta;
  if (mf.phase == Phase::symmetry_breaking) {
    d[0] = mf.tanh_half / one_m_zeta;
  } else {
    d[2] = mf.tanh_half / one_m_zeta;
    d[3] = (p.b < 0.0 ? -1.0 : 1.0) / one_m_zeta;
  }
  return d;
}

std::array<double, 4> gap_derivatives_numeric(const ModelParams& params, double T,
                                              double rel_step) {
  const ModelParams p = canonicalize(params);
  std::array<double, 4> d{};
  for (int eta = 0; eta < 4; ++eta)
    d[eta] = richardson([&](const ModelParams& q) { return solve_raw(q, T).lambda; }, p, eta,
                        rel_step);
  return d;
}

MfrpaObservables mfrpa_observables(const ModelParams& params, double T, const MfrpaOptions& opt) {
  const ModelParams p = canonicalize(params);
  if (p.n < 2) throw DomainError("pair correlators need n >= 2");
  MfrpaObservables out;
  out.mf = solve_raw(p, T);
  const MeanFieldSolution& s = out.mf;
  const double n = p.n;
  std::array<double, 4> delta{};
  if (!opt.hartree_only) {
    check_isolated(s, p);
    const double beta = beta_of(T);
    const auto dl = gap_derivatives(p, s);
    const double coth_l = coth_half(beta, s.lambda);
    const double coth_w = coth_half(beta, s.omega);
    for (int eta = 0; eta < 4; ++eta) {
      const double dw = richardson([&](const ModelParams& q) { return solve_raw(q, T).omega; }, p,
                                   eta, opt.rel_step);
      double dz = 0.0;
      if (T > 0.0)
        dz = richardson([&](const ModelParams& q) { return solve_raw(q, T).zeta; }, p, eta,
                        opt.rel_step);
      delta[eta] = dl[eta] * coth_l - dw * coth_w + T * dz / (1.0 - s.zeta);
    }
  }
  out.delta_v = {delta[0], delta[1], delta[2]};
  out.delta_b = delta[3];
  auto alpha = [&](int mu) {
    return (0.5 * n * s.m[mu] * s.m[mu] - 0.5 + delta[mu]) / (2.0 * (n - 1.0));
  };
  out.obs.ax = alpha(0);
  out.obs.ay = alpha(1);
  out.obs.az = alpha(2);
  // sz = -(T/n) d lnZ/db: Hartree part m_z/2, correction enters with -delta_b.
  out.obs.sz = 0.5 * s.m[2] - delta[3] / (2.0 * n);
  return out;
}

}  // namespace lmgent
