#include "lmgent/rpa_entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "lmgent/errors.hpp"
#include "lmgent/numerics.hpp"

namespace lmgent {

namespace {

// omega coth(omega/2T), with the T -> 0 and omega -> 0 limits.
double xcoth(double omega, double T) {
  if (T == 0.0) return omega;
  const double y = 0.5 * omega / T;
  return 2.0 * T * num::ycoth_sq(y * y);
}

double coth_half(double omega, double T) {
  if (T == 0.0) return 1.0;
  return 1.0 / std::tanh(0.5 * omega / T);
}

double boltzmann(double lambda, double T) { return T == 0.0 ? 0.0 : std::exp(-lambda / T); }

double btilde_of(const ModelParams& p, const PhaseConstants& pc) {
  return pc.normal_only ? std::numeric_limits<double>::infinity() : p.b / pc.b_c;
}

bool in_sb_branch(const ModelParams& p, const PhaseConstants& pc) {
  return !pc.normal_only && p.b < pc.b_c;
}

double require_chi(const ModelParams& p) {
  const auto chi = p.chi();
  if (!chi) throw DomainError("anisotropy chi undefined for vx == vz");
  return *chi;
}

struct Branch {
  Phase phase;
  double lambda;
  double omega;
  double bt;
};

Branch zero_temperature_branch(const ModelParams& p) {
  const PhaseConstants pc = critical_constants(p);
  Branch br;
  if (in_sb_branch(p, pc)) {
    br.phase = Phase::symmetry_breaking;
    br.bt = p.b / pc.b_c;
    br.lambda = p.vx;
    br.omega = std::sqrt((1.0 - br.bt * br.bt) * (p.vx - p.vy) * (p.vx - p.vz));
  } else {
    br.phase = Phase::normal;
    br.bt = btilde_of(p, pc);
    br.lambda = p.b + p.vz;
    br.omega = std::sqrt(std::max((br.lambda - p.vx) * (br.lambda - p.vy), 0.0));
  }
  return br;
}

// (omega/(lambda-vy))^{sign} coth(omega/2T) on the T = 0 branch, written so
// that the vy -> vx limit stays finite for the antiparallel type.
std::optional<double> thermal_ratio(const ModelParams& p, const Branch& br, int sign, double T) {
  if (sign > 0) {
    const double den = br.lambda - p.vy;
    if (den <= 0.0) return std::nullopt;
    return xcoth(br.omega, T) / den;
  }
  if (br.phase != Phase::symmetry_breaking) return std::nullopt;
  const double den = (1.0 - br.bt * br.bt) * (br.lambda - p.vz);
  if (den <= 0.0) return std::nullopt;
  return xcoth(br.omega, T) / den;
}

std::optional<double> compact_c(const ModelParams& p, const Branch& br, int sign, double T) {
  const auto r = thermal_ratio(p, br, sign, T);
  if (!r) return std::nullopt;
  return (1.0 - *r) / (p.n - 1.0) - 2.0 * boltzmann(br.lambda, T);
}

void require_pairs(const ModelParams& p) {
  if (p.n < 2) throw DomainError("pair concurrence needs n >= 2");
}

}  // namespace

AsymptoticInputs asymptotic_inputs(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  const PhaseConstants pc = critical_constants(p);
  const Branch br = zero_temperature_branch(p);
  AsymptoticInputs in;
  in.chi = p.chi();
  in.btilde = btilde_of(p, pc);
  in.delta = in.chi ? p.n * (1.0 - *in.chi) : 0.0;
  in.epsilon = p.n * (1.0 - in.btilde * in.btilde);
  in.lambda = br.lambda;
  in.omega = br.omega;
  return in;
}

std::optional<FactorizingField> factorizing_field(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  const auto chi = p.chi();
  if (!chi || *chi <= 0.0 || *chi >= 1.0) return std::nullopt;
  FactorizingField f;
  f.b_s = (p.vx - p.vz) * std::sqrt(*chi);
  f.b_s_exact = (1.0 - 1.0 / p.n) * f.b_s;
  return f;
}

double AsymptoticConcurrence::c() const {
  return std::max({0.0, c_plus.value_or(0.0), c_minus.value_or(0.0)});
}

AsymptoticConcurrence asymptotic_concurrence(const ModelParams& params, double T,
                                             const AsymptoticOptions& opt) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  if (T < 0.0) throw DomainError("temperature must be >= 0");
  Branch br = zero_temperature_branch(p);
  AsymptoticConcurrence out;
  if (opt.thermal_mean_field) {
    const MeanFieldSolution mf = solve_mean_field(p, T);
    out.phase = mf.phase;
    out.lambda = mf.lambda;
    out.omega = mf.omega;
    const double c = coth_half(mf.omega, T);
    const double e = 2.0 * boltzmann(mf.lambda, T);
    if (mf.lambda - p.vy > 0.0)
      out.c_plus = (1.0 - xcoth(mf.omega, T) / (mf.lambda - p.vy)) / (p.n - 1.0) - e;
    if (mf.phase == Phase::symmetry_breaking && mf.omega > 0.0)
      out.c_minus = (1.0 - (mf.lambda - p.vy) / mf.omega * c) / (p.n - 1.0) - e;
    return out;
  }
  out.phase = br.phase;
  out.lambda = br.lambda;
  out.omega = br.omega;
  out.c_plus = compact_c(p, br, +1, T);
  out.c_minus = compact_c(p, br, -1, T);
  return out;
}

double cplus_symmetry_breaking(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double chi = require_chi(p);
  const double bt = p.b / (p.vx - p.vz);
  if (chi >= 1.0) throw DomainError("omega/(vx - vy) needs chi < 1");
  const double r = std::sqrt((1.0 - bt * bt) / (1.0 - chi));
  const double omega = r * (p.vx - p.vy);
  const double rc = r == 0.0 ? (T == 0.0 ? 0.0 : 2.0 * T / (p.vx - p.vy))
                             : r * coth_half(omega, T);
  return (1.0 - rc) / (p.n - 1.0) - 2.0 * boltzmann(p.vx, T);
}

std::optional<double> cminus_symmetry_breaking(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double chi = require_chi(p);
  const double bt = p.b / (p.vx - p.vz);
  if (chi >= 1.0) throw DomainError("omega/(vx - vy) needs chi < 1");
  const double r = std::sqrt((1.0 - bt * bt) / (1.0 - chi));
  if (r == 0.0) return std::nullopt;
  const double omega = r * (p.vx - p.vy);
  return (1.0 - coth_half(omega, T) / r) / (p.n - 1.0) - 2.0 * boltzmann(p.vx, T);
}

double cplus_normal(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double chi = require_chi(p);
  const double bt = p.b / (p.vx - p.vz);
  const double r = std::sqrt((bt - 1.0) / (bt - chi));
  const double omega = r * (p.b + p.vz - p.vy);
  const double rc = r == 0.0 ? (T == 0.0 ? 0.0 : 2.0 * T / (p.b + p.vz - p.vy))
                             : r * coth_half(omega, T);
  return (1.0 - rc) / (p.n - 1.0) - 2.0 * boltzmann(p.b + p.vz, T);
}

double cminus_xxz(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double bc = p.vx - p.vz;
  const double bt = p.b / bc;
  return (1.0 - (2.0 * T / bc) / (1.0 - bt * bt)) / (p.n - 1.0) - 2.0 * boltzmann(p.vx, T);
}

double cplus_critical(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  return (1.0 - 2.0 * T / (p.vx - p.vy)) / (p.n - 1.0) - 2.0 * boltzmann(p.vx, T);
}

// ---- full expressions, vx = 1 units ----

namespace {

struct Scaled {
  ModelParams p;
  double T;
};

Scaled to_unit_vx(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  if (p.vx == 0.0) throw DomainError("the full MF+RPA forms are written in units vx = 1");
  return {p.scaled(1.0 / p.vx), T / p.vx};
}

double zeta_term(double zeta, double T) {
  const double q = zeta / (1.0 - zeta);
  return q * q * (1.0 - (3.0 - zeta) * T);
}

double radicand_sb(const ModelParams& p, const MeanFieldSolution& mf, double T) {
  const double bt = p.b / (1.0 - p.vz);
  const double l2 = mf.lambda * mf.lambda;
  const double k = (1.0 - p.vy) / mf.omega * coth_half(mf.omega, T);
  const double n1 = p.n - 1.0;
  const double a = 0.5 * (1.0 + bt * bt) + (k * 0.5 * (l2 + bt * bt) - 0.5 * (1.0 - bt * bt)) / n1;
  const double c = 1.0 + (1.0 - p.vy) / (p.n * mf.omega) * coth_half(mf.omega, T);
  return a * a - bt * bt * c * c;
}

}  // namespace

double cminus_radicand(const ModelParams& params, double T) {
  const auto [p, t] = to_unit_vx(params, T);
  require_pairs(p);
  const MeanFieldSolution mf = solve_mean_field(p, t);
  if (mf.phase != Phase::symmetry_breaking)
    throw DomainError("the full C_- expression applies only in the symmetry-breaking phase");
  if (!(mf.omega > 0.0)) throw DivergenceError("RPA energy vanishes");
  return radicand_sb(p, mf, t);
}

FullConcurrence full_concurrence(const ModelParams& params, double T) {
  const auto [p, t] = to_unit_vx(params, T);
  require_pairs(p);
  if (T < 0.0) throw DomainError("temperature must be >= 0");
  const MeanFieldSolution mf = solve_mean_field(p, t);
  const double n1 = p.n - 1.0;
  const double beta_half = t == 0.0 ? 0.0 : 0.5 / t;
  const double c = coth_half(mf.omega, t);
  FullConcurrence out;
  out.phase = mf.phase;
  if (!(mf.omega > 0.0)) throw DivergenceError("RPA energy vanishes");
  if (mf.phase == Phase::symmetry_breaking) {
    const double bt = p.b / (1.0 - p.vz);
    const double l2 = mf.lambda * mf.lambda;
    const double zeta = t == 0.0 ? 0.0 : beta_half * (1.0 - l2);
    const double q = zeta / (1.0 - zeta);
    const double k = (1.0 - p.vy) / mf.omega * c;
    out.c_plus = -0.5 * (1.0 - l2) +
                 (1.0 - mf.omega / (1.0 - p.vy) * c * (1.0 + q * (1.0 - p.vy) * l2 / (l2 - bt * bt)) -
                  zeta_term(zeta, t)) / n1;
    const double rad = radicand_sb(p, mf, t);
    if (rad >= 0.0) {
      out.c_minus = 0.5 * (l2 - bt * bt) +
                    (0.5 * (1.0 - bt * bt) - k * (0.5 * (l2 + bt * bt) + q * l2 * (1.0 - p.vz)) -
                     zeta_term(zeta, t)) / n1 -
                    std::sqrt(rad);
    } else {
      out.complex_termination = true;
    }
    out.c_minus_expanded =
        -0.5 * (1.0 - l2) +
        (1.0 - k * ((l2 - bt * bt) / (1.0 - bt * bt) + q * (1.0 - p.vz) * l2) - zeta_term(zeta, t)) /
            n1;
    if (out.complex_termination) {
      out.b_f = cminus_termination_field(p, t);
      if (out.b_f) *out.b_f *= params.vx;
    }
  } else {
    const double th = mf.tanh_half;
    const double s2 = t == 0.0 ? 0.0 : 1.0 - th * th;
    const double zeta_hat = beta_half * s2;  // zeta / vz
    const double zeta = p.vz * zeta_hat;
    const double fx = mf.f[0], fy = mf.f[1];
    const double v[2] = {p.vx, p.vy};
    const double fm[2] = {fx, fy};
    double sum = 0.0;
    for (int mu = 0; mu < 2; ++mu)
      sum += mf.omega * fx / (1.0 - fm[mu]) * (zeta_hat * v[mu] - zeta / (1.0 - zeta));
    out.c_plus = -0.5 * s2 + (1.0 - mf.omega * fx / (1.0 - fy) * c + 0.5 * c * sum -
                              3.0 * t * zeta_hat / (1.0 - zeta)) / n1;
  }
  return out;
}

std::optional<double> cminus_termination_field(const ModelParams& params, double T) {
  const auto [p, t] = to_unit_vx(params, T);
  require_pairs(p);
  const PhaseConstants pc = critical_constants(p);
  if (pc.normal_only || p.vy >= 1.0) return std::nullopt;
  auto rad = [&](double bt) {
    const ModelParams q = p.with_field(bt * pc.b_c);
    const MeanFieldSolution mf = solve_mean_field(q, t);
    if (mf.phase != Phase::symmetry_breaking || !(mf.omega > 0.0)) return -1.0;
    return radicand_sb(q, mf, t);
  };
  constexpr int kGrid = 2000;
  double prev_b = 0.0;
  double prev = rad(0.0);
  if (prev < 0.0) return 0.0;
  for (int i = 1; i < kGrid; ++i) {
    const double bt = static_cast<double>(i) / kGrid;
    const double cur = rad(bt);
    if (cur < 0.0) {
      const double root = num::bisect(rad, prev_b, bt, 1e-14);
      return root * pc.b_c * params.vx / p.vx;
    }
    prev_b = bt;
    prev = cur;
  }
  return std::nullopt;
}

// ---- limit temperatures ----

double limit_temperature_large_field(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double chi = require_chi(p);
  const double bc = p.vx - p.vz;
  return (p.b + p.vz) / std::log(4.0 * (p.n - 1.0) * (p.b / bc) / (1.0 - chi));
}

namespace {

std::optional<double> solve_limit(const ModelParams& p, const Branch& br, int sign, double t0) {
  const double n1 = p.n - 1.0;
  const auto r0 = thermal_ratio(p, br, sign, 0.0);
  if (!r0 || 1.0 - *r0 <= 0.0) return std::nullopt;
  auto d = [&](double T) { return 1.0 - *thermal_ratio(p, br, sign, T); };
  auto c = [&](double T) { return d(T) / n1 - 2.0 * boltzmann(br.lambda, T); };

  constexpr double kDamping = 0.5;
  double T = t0;
  bool ok = false;
  for (int it = 0; it < 200; ++it) {
    const double dd = d(T);
    if (!(dd > 0.0)) break;
    const double arg = 2.0 * n1 / dd;
    if (!(arg > 1.0)) break;
    const double next = (1.0 - kDamping) * T + kDamping * br.lambda / std::log(arg);
    if (std::abs(next - T) <= 1e-10 * std::abs(next)) {
      T = next;
      ok = true;
      break;
    }
    T = next;
  }
  if (ok && std::abs(c(T)) <= 1e-9 / n1) return T;

  // bracket [lo, hi] with c(lo) > 0 > c(hi)
  double lo = 1e-6 * br.lambda;
  while (c(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
  double hi = std::max(t0, lo) * 2.0;
  while (c(hi) > 0.0) hi *= 2.0;
  return num::bisect(c, lo, hi, 1e-15 * hi);
}

}  // namespace

LimitTemperatureRpa limit_temperature_rpa(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const Branch br = zero_temperature_branch(p);
  const PhaseConstants pc = critical_constants(p);
  double t0 = br.lambda / std::log(2.0 * p.n);
  LimitTemperatureRpa out;
  double t0_plus = t0;
  const auto chi = p.chi();
  if (!pc.normal_only && p.b > 5.0 * pc.b_c && chi && *chi < 1.0)
    t0_plus = limit_temperature_large_field(p);
  out.plus = solve_limit(p, br, +1, t0_plus);
  out.minus = solve_limit(p, br, -1, t0);
  return out;
}

SeparableWindow separable_window(const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double chi = require_chi(p);
  if (chi <= 0.0 || chi >= 1.0) throw DomainError("separable window needs 0 < chi < 1");
  const double bc = p.vx - p.vz;
  SeparableWindow w;
  if (T == 0.0) {
    w.lower = w.upper = bc * std::sqrt(chi);
    return w;
  }
  const double damp = 1.0 - 2.0 * (p.n - 1.0) * std::exp(-p.vx / T);
  if (damp <= 0.0) return w;
  auto x_of = [&](double bt) {
    const double omega = std::sqrt(std::max(1.0 - bt * bt, 0.0) * (p.vx - p.vy) * (p.vx - p.vz));
    return std::tanh(0.5 * omega / T) * damp;
  };
  auto f_plus = [&](double bt) {
    const double x = x_of(bt);
    return bt * bt - 1.0 + (1.0 - chi) * x * x;
  };
  auto f_minus = [&](double bt) {
    const double x = x_of(bt);
    return bt * bt - 1.0 + (1.0 - chi) / (x * x);
  };
  const double bs = std::sqrt(chi);
  const double top = 1.0 - 1e-12;
  if (f_plus(top) > 0.0) w.upper = bc * num::bisect(f_plus, bs, top, 1e-15);
  if (f_minus(0.0) < 0.0) w.lower = bc * num::bisect(f_minus, 0.0, bs, 1e-15);
  return w;
}

std::optional<double> epsilon_f_exact(double delta) {
  if (delta < 0.0) throw DomainError("delta must be >= 0");
  if (delta == 0.0) return 4.0;
  const double sd = std::sqrt(delta);
  auto g = [&](double e) { return 2.0 * sd / std::sqrt(e) + 0.25 * e * (e - 4.0); };
  auto dg = [&](double e) { return -sd * std::pow(e, -1.5) + 0.5 * e - 1.0; };
  const double e_min = num::bisect(dg, 1e-12, 4.0, 1e-15);
  if (g(e_min) >= 0.0) return std::nullopt;
  return num::bisect(g, e_min, 4.0, 1e-15);
}

NearCriticalResult near_critical_cminus(double delta, double epsilon, double T,
                                        const ModelParams& params) {
  if (delta < 0.0 || epsilon < 0.0) throw DomainError("delta and epsilon must be >= 0");
  const ModelParams p = canonicalize(params);
  require_pairs(p);
  const double n = p.n;
  NearCriticalResult out;
  out.omega = std::sqrt(epsilon * delta) * (p.vx - p.vz) / n;
  if (epsilon > 0.0 && (T == 0.0 || out.omega > 0.0)) {
    const double a = std::sqrt(delta / epsilon) * coth_half(out.omega, T);
    const double rad = 2.0 * a + 0.25 * epsilon * (epsilon - 4.0);
    if (rad >= 0.0)
      out.c_minus = (0.5 * epsilon - a) / n - 2.0 * boltzmann(p.vx, T) - std::sqrt(rad) / n;
  }
  if (T == 0.0 && delta < kDeltaCritical) {
    out.epsilon_f = epsilon_f_exact(delta);
    out.epsilon_f_approx = 2.4 + 5.0 / 3.0 * std::sqrt(kDeltaCritical - delta);
    if (out.epsilon_f) {
      out.c_at_bf = *out.epsilon_f * *out.epsilon_f / (8.0 * n);
      const double s = 1.0 - *out.epsilon_f / n;
      if (s >= 0.0) out.b_f = (p.vx - p.vz) * std::sqrt(s);
    }
  }
  return out;
}

SideLimits side_limits_at_bs(int n, double chi) {
  if (!(chi > 0.0 && chi <= 1.0)) throw DomainError("side limits need 0 < chi <= 1");
  const double delta = n * (1.0 - chi);
  SideLimits s;
  if (delta == 0.0) {
    s.nc_minus = 2.0;
    s.nc_plus = 0.0;
    return s;
  }
  const double e = std::exp(0.5 * delta);
  s.nc_minus = delta / (e - 1.0);
  s.nc_plus = delta / (e + 1.0);
  return s;
}

double anomalous_tl(double b, double b_s, double delta) {
  if (!(b > b_s) || !(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("anomalous_tl needs b > b_s and finite delta > 0");
  // ln coth(d/4) = log1p(2 / expm1(d/2)), divided through by exp(-d/2)
  const double e = std::exp(-0.5 * delta);
  const double alpha_scaled =
      delta > 80.0 ? 2.0 : std::log1p(2.0 / std::expm1(0.5 * delta)) / e;
  return (b - b_s) * delta / (-std::expm1(-delta)) / alpha_scaled;
}

}  // namespace lmgent
