#include "lmgent/cspa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "lmgent/errors.hpp"
#include "lmgent/numerics.hpp"
#include "lmgent/quadrature.hpp"

namespace lmgent {

namespace {

using std::numbers::pi;
constexpr std::size_t kComp = 5;
using Vec8 = quad::VecK<kComp>;

double sech2(double y) {
  const double e = std::exp(-2.0 * std::abs(y));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// Local quantities of the RPA factor at lambda-vector l.
struct Local {
  double lambda = 0.0;
  double t = 0.0;    // tanh(beta lambda / 2)
  double tau = 0.0;  // t / lambda
  Vec3 f{};
  double u = 0.0;    // omega^2
  double s = 0.0;    // (beta/2)^2 u
  double yl = 0.0;   // beta lambda / 2
};

Local local(const Vec3& l, const ModelParams& p, double beta) {
  Local q;
  q.lambda = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  q.yl = 0.5 * beta * q.lambda;
  q.t = std::tanh(q.yl);
  q.tau = 0.5 * beta * num::tanhc(q.yl);
  q.f = {p.vx * q.tau, p.vy * q.tau, p.vz * q.tau};
  q.u = l[0] * l[0] * (1.0 - q.f[1]) * (1.0 - q.f[2]) + l[1] * l[1] * (1.0 - q.f[0]) * (1.0 - q.f[2]) +
        l[2] * l[2] * (1.0 - q.f[0]) * (1.0 - q.f[1]);
  q.s = 0.25 * beta * beta * q.u;
  return q;
}

// (2/(beta omega) - coth(beta omega/2)) / (2 omega), continued to omega^2 < 0
double k_factor(double s, double beta) {
  double g;
  if (std::abs(s) < 1e-3)
    g = -1.0 / 3.0 + s / 45.0 - 2.0 * s * s / 945.0;
  else
    g = (1.0 - num::ycoth_sq(s)) / s;
  return 0.25 * beta * g;
}

// d ln sinhc(beta lambda / 2) / d lambda
double dlog_sinhc_lambda(double yl, double beta) {
  if (yl < 1e-4) return 0.5 * beta * yl / 3.0;
  return 0.5 * beta * (num::ycoth_sq(yl * yl) - 1.0) / yl;
}

// d tau / d lambda
double dtau(const Local& q, double beta) {
  if (q.yl < 1e-4) return -0.25 * beta * beta * 2.0 * q.yl / 3.0;
  return (0.5 * beta * sech2(q.yl) - q.tau) / q.lambda;
}

// gradient of n ln 2cosh(beta lambda/2) + ln F with respect to lambda_mu
Vec3 grad_g(const Vec3& l, const ModelParams& p, double beta, const Local& q) {
  if (q.lambda == 0.0) return {0.0, 0.0, 0.0};
  const double v[3] = {p.vx, p.vy, p.vz};
  const double kf = k_factor(q.s, beta);
  // du/dtau
  double du_dtau = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    const int a = (mu + 1) % 3, b = (mu + 2) % 3;
    du_dtau -= l[mu] * l[mu] * (v[a] * (1.0 - q.f[b]) + v[b] * (1.0 - q.f[a]));
  }
  const double dt = dtau(q, beta);
  const double radial = p.n * 0.5 * beta * q.t + dlog_sinhc_lambda(q.yl, beta);
  Vec3 g{};
  for (int mu = 0; mu < 3; ++mu) {
    const int a = (mu + 1) % 3, b = (mu + 2) % 3;
    const double du = 2.0 * l[mu] * (1.0 - q.f[a]) * (1.0 - q.f[b]) + du_dtau * dt * l[mu] / q.lambda;
    g[mu] = radial * l[mu] / q.lambda + 0.5 * beta * kf * du;
  }
  return g;
}

double breakdown_bound(const CspaConfig& cfg) {
  const double t = pi * (1.0 - cfg.breakdown_margin);
  return -t * t;
}

struct Setup {
  ModelParams p;
  double beta;
  CspaConfig cfg;
  int axes[3];
  int dim = 0;
  bool integrated[3] = {false, false, false};
  double lo[3] = {}, hi[3] = {};
  std::vector<double> breaks[3];
  double shift = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_seen = -std::numeric_limits<double>::infinity();
  long evaluations = 0;
  int neg[2] = {0, 0};  ///< axes with v_mu < 0
  int n_neg = 0;
  Vec3 warm{};  ///< last saddle point, reused as the Newton start
};

double gaussian(const Setup& st, const Vec3& r) {
  const double v[3] = {st.p.vx, st.p.vy, st.p.vz};
  double g = 0.0;
  for (int mu = 0; mu < 3; ++mu)
    if (v[mu] != 0.0) g -= 0.25 * st.beta * st.p.n * r[mu] * r[mu] / v[mu];
  return g;
}

// Moves r onto the saddle of the Gaussian weight times exp(g) along the axes
// with v_mu < 0 and returns ln det(1 + D^-1 grad^2 g), D = diag(n beta / 2|v_mu|).
double saddle(Setup& st, Vec3& r) {
  const ModelParams& p = st.p;
  const double beta = st.beta;
  const double v[3] = {p.vx, p.vy, p.vz};
  const int m = st.n_neg;
  double d[2];
  for (int k = 0; k < m; ++k) d[k] = -0.5 * beta * p.n / v[st.neg[k]];
  auto lvec = [&](const Vec3& rr) { return Vec3{rr[0], rr[1], rr[2] - p.b}; };
  auto grad = [&](const Vec3& rr) {
    const Vec3 l = lvec(rr);
    return grad_g(l, p, beta, local(l, p, beta));
  };
  auto hessian = [&](const Vec3& rr, double h[2][2]) {
    const Vec3 l = lvec(rr);
    const double step = 1e-4 * (std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]) + 1.0 / beta);
    for (int j = 0; j < m; ++j) {
      Vec3 up = rr, dn = rr;
      up[st.neg[j]] += step;
      dn[st.neg[j]] -= step;
      const Vec3 gu = grad(up), gd = grad(dn);
      for (int i = 0; i < m; ++i) h[i][j] = (gu[st.neg[i]] - gd[st.neg[i]]) / (2.0 * step);
    }
    if (m == 2) h[0][1] = h[1][0] = 0.5 * (h[0][1] + h[1][0]);
  };
  for (int k = 0; k < m; ++k) r[st.neg[k]] = st.warm[st.neg[k]];
  double h[2][2];
  for (int it = 0;; ++it) {
    const Vec3 g = grad(r);
    hessian(r, h);
    double f[2] = {}, a[2][2] = {};
    for (int i = 0; i < m; ++i) {
      f[i] = d[i] * r[st.neg[i]] + g[st.neg[i]];
      for (int j = 0; j < m; ++j) a[i][j] = h[i][j] + (i == j ? d[i] : 0.0);
    }
    double dx[2] = {};
    if (m == 1) {
      if (!(a[0][0] > 0.0)) throw NumericalError("CSPA saddle point is not a minimum along the real axis");
      dx[0] = -f[0] / a[0][0];
    } else {
      const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
      if (!(det > 0.0 && a[0][0] > 0.0))
        throw NumericalError("CSPA saddle point is not a minimum along the real axes");
      dx[0] = -(a[1][1] * f[0] - a[0][1] * f[1]) / det;
      dx[1] = -(a[0][0] * f[1] - a[1][0] * f[0]) / det;
    }
    double size = 0.0, moved = 0.0;
    for (int k = 0; k < m; ++k) {
      r[st.neg[k]] += dx[k];
      size = std::max(size, std::abs(v[st.neg[k]]));
      moved = std::max(moved, std::abs(dx[k]));
    }
    if (moved <= 1e-13 * size) break;
    if (it == 60) throw NumericalError("CSPA saddle point iteration did not converge");
  }
  st.warm = r;
  hessian(r, h);
  if (m == 1) return std::log1p(h[0][0] / d[0]);
  const double a00 = 1.0 + h[0][0] / d[0], a11 = 1.0 + h[1][1] / d[1];
  const double det = a00 * a11 - h[0][1] * h[1][0] / (d[0] * d[1]);
  if (!(det > 0.0)) throw NumericalError("CSPA saddle curvature is not positive");
  return std::log(det);
}

// Full vector integrand at a static point (without the shift applied yet).
Vec8 point(Setup& st, const Vec3& r_in) {
  ++st.evaluations;
  const ModelParams& p = st.p;
  const double beta = st.beta;
  Vec3 r = r_in;
  const double logdet = st.n_neg > 0 ? saddle(st, r) : 0.0;
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const Local q = local(l, p, beta);
  const double g0 = gaussian(st, r) + p.n * num::log2cosh(q.yl) - 0.5 * logdet;
  Vec8 out{};
  if (q.u < 0.0) st.min_margin = std::min(st.min_margin, 2.0 * pi - beta * std::sqrt(-q.u));
  if (q.s <= breakdown_bound(st.cfg)) {
    if (st.cfg.breakdown_weight <= 0.0 || g0 - st.shift > std::log(st.cfg.breakdown_weight))
      throw BreakdownError("CSPA breakdown: beta |omega| reaches 2 pi at a static point with "
                           "non-negligible weight (T below T*)");
    return out;
  }
  const double lnf = num::log_sinhc_sq(q.yl * q.yl) - num::log_sinhc_sq(q.s);
  const double g = g0 + lnf;
  st.max_seen = std::max(st.max_seen, g);
  const double w = std::exp(g - st.shift);
  if (w == 0.0) return out;
  const double kf = k_factor(q.s, beta);
  const double v[3] = {p.vx, p.vy, p.vz};
  const double n = p.n;
  const Vec3 grad = grad_g(l, p, beta, q);
  out[0] = w;
  for (int mu = 0; mu < 3; ++mu) {
    const int a = (mu + 1) % 3, b = (mu + 2) % 3;
    const double dudv = -q.tau * (l[a] * l[a] * (1.0 - q.f[b]) + l[b] * l[b] * (1.0 - q.f[a]));
    double bracket;
    if (st.integrated[mu]) {
      bracket = n * r[mu] * r[mu] / (2.0 * v[mu] * v[mu]) - 1.0 / (beta * v[mu]) - 0.5 + kf * dudv;
    } else if (v[mu] == 0.0) {
      // second derivative of g along lambda_mu by Richardson-extrapolated differences of the gradient
      const double h = 1e-3 * (q.lambda + 1.0 / beta);
      auto slope = [&](double step) {
        Vec3 lp = l, lm = l;
        lp[mu] += step;
        lm[mu] -= step;
        const double gp = grad_g(lp, p, beta, local(lp, p, beta))[mu];
        const double gm = grad_g(lm, p, beta, local(lm, p, beta))[mu];
        return (gp - gm) / (2.0 * step);
      };
      const double d1 = slope(h), d2 = slope(0.5 * h);
      const double gmm = (4.0 * d2 - d1) / 3.0;
      const double h2 = gmm + grad[mu] * grad[mu];
      bracket = 2.0 * h2 / (n * beta * beta) - 0.5 + kf * dudv;
    } else {
      // replaced by differences of ln Z
      bracket = 0.0;
    }
    out[1 + mu] = w * bracket;
  }
  out[4] = w * grad[2] / (beta * n);
  return out;
}

std::vector<double> axis_breaks(const Setup& st, int mu, double center, double sigma) {
  std::vector<double> extra;
  for (double k : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    extra.push_back(center - k * sigma);
    extra.push_back(center + k * sigma);
  }
  extra.push_back(0.0);
  return quad::partition(st.lo[mu], st.hi[mu], st.cfg.initial_pieces, extra);
}

// Nested adaptive integration over the integrated axes, level by level.
quad::Estimate<kComp> nested(Setup& st, int level, Vec3& r, const Vec8& tol) {
  const int mu = st.axes[level];
  const double range = st.hi[mu] - st.lo[mu];
  if (level == st.dim - 1) {
    auto f = [&](double x) {
      r[mu] = x;
      return point(st, r);
    };
    return quad::integrate<kComp>(f, st.breaks[mu], tol, st.cfg.max_intervals);
  }
  Vec8 inner_tol;
  for (std::size_t k = 0; k < kComp; ++k) inner_tol[k] = 0.25 * tol[k] / range;
  bool ok = true;
  auto f = [&](double x) {
    r[mu] = x;
    const auto e = nested(st, level + 1, r, inner_tol);
    ok = ok && e.converged;
    return e.value;
  };
  auto e = quad::integrate<kComp>(f, st.breaks[mu], tol, st.cfg.max_intervals);
  e.converged = e.converged && ok;
  return e;
}

// Coarse tensor scan over the breakpoints: log-shift and rough magnitudes.
void coarse_scan(Setup& st, int level, Vec3& r, double& best) {
  const int mu = st.axes[level];
  for (double x : st.breaks[mu]) {
    r[mu] = x;
    if (level + 1 < st.dim) {
      coarse_scan(st, level + 1, r, best);
      continue;
    }
    Vec3 rs = r;
    const double logdet = st.n_neg > 0 ? saddle(st, rs) : 0.0;
    const Vec3 l = {rs[0], rs[1], rs[2] - st.p.b};
    const Local q = local(l, st.p, st.beta);
    if (q.s <= breakdown_bound(st.cfg)) {
      if (st.cfg.breakdown_weight <= 0.0)
        throw BreakdownError("CSPA breakdown: beta |omega| reaches 2 pi inside the integration domain");
      continue;
    }
    const double g = gaussian(st, rs) + st.p.n * num::log2cosh(q.yl) - 0.5 * logdet +
                     num::log_sinhc_sq(q.yl * q.yl) - num::log_sinhc_sq(q.s);
    best = std::max(best, g);
  }
}

}  // namespace

double cspa_log_integrand(const Vec3& r, const ModelParams& params, double T) {
  const ModelParams p = canonicalize(params);
  if (!(T > 0.0)) throw DomainError("CSPA needs T > 0");
  const double beta = 1.0 / T;
  const Vec3 l = {r[0], r[1], r[2] - p.b};
  const Local q = local(l, p, beta);
  if (q.s <= breakdown_bound(CspaConfig{}))
    throw BreakdownError("CSPA breakdown: beta |omega| >= 2 pi");
  return log_hartree_partition(r, p, T) + num::log_sinhc_sq(q.yl * q.yl) - num::log_sinhc_sq(q.s);
}

namespace {

CspaResult integrate_cspa(const ModelParams& p, double T, const CspaConfig& cfg) {
  Setup st{p, 1.0 / T, cfg, {0, 0, 0}, 0, {false, false, false}, {}, {}, {}, 0.0,
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  const double v[3] = {p.vx, p.vy, p.vz};
  const double n = p.n;
  const double beta = st.beta;
  const double reach = std::abs(p.b) + std::max(p.vx, p.vz);
  const MeanFieldSolution mf = solve_mean_field(p, T);
  for (int mu = 0; mu < 3; ++mu) {
    if (v[mu] < 0.0) {
      st.neg[st.n_neg++] = mu;
      st.warm[mu] = mf.r[mu];
    }
    if (!(v[mu] > 0.0)) continue;
    st.integrated[mu] = true;
    st.axes[st.dim++] = mu;
    const double r_max = cfg.cutoff_sigmas * std::sqrt(v[mu] / (beta * n)) + reach;
    // lambda depends on x^2 and y^2 only: integrate the positive half
    st.lo[mu] = mu == 2 ? -r_max : 0.0;
    st.hi[mu] = r_max;
    const double sigma = std::sqrt(2.0 * v[mu] / (beta * n));
    st.breaks[mu] = axis_breaks(st, mu, std::abs(mf.r[mu]), sigma);
    if (mu == 2) st.breaks[mu] = axis_breaks(st, mu, mf.r[2], sigma);
  }
  double sym = 1.0;
  for (int mu = 0; mu < 2; ++mu)
    if (st.integrated[mu]) sym *= 2.0;

  Vec3 r{0.0, 0.0, 0.0};
  double best = -std::numeric_limits<double>::infinity();
  if (st.dim == 0) {
    // no static field to integrate: a single point
    point(st, r);
    best = st.max_seen;
  } else {
    coarse_scan(st, 0, r, best);
  }
  if (!std::isfinite(best)) throw BreakdownError("CSPA breakdown: no valid static point on the scan grid");
  st.shift = best;

  quad::Estimate<kComp> est;
  for (int attempt = 0;; ++attempt) {
    // Gaussian volume: the shifted integral is of this order
    double volume = 1.0;
    for (int k = 0; k < st.dim; ++k) {
      const int mu = st.axes[k];
      volume *= std::sqrt(2.0 * pi * 2.0 * v[mu] / (beta * n));
    }
    Vec8 tol;
    tol[0] = 0.5 * cfg.rel_tol * volume;
    // the alpha brackets are O(n) where the other components are O(1)
    for (std::size_t k = 1; k < kComp; ++k) tol[k] = k < 4 ? tol[0] * n : tol[0];
    r = {0.0, 0.0, 0.0};
    if (st.dim == 0) {
      est.value = point(st, r);
      est.converged = true;
    } else {
      est = nested(st, 0, r, tol);
    }
    if (!(est.value[0] > 0.0)) throw NumericalError("CSPA integral vanished");
    if (std::abs(st.max_seen - st.shift) > 50.0 && attempt < 3) {
      st.shift = st.max_seen;
      continue;
    }
    break;
  }

  CspaResult res;
  const double z = est.value[0];
  double log_z = st.shift + std::log(z * sym);
  for (int mu = 0; mu < 3; ++mu) {
    if (st.integrated[mu])
      log_z += 0.5 * std::log(n * beta / (4.0 * pi * v[mu])) - 0.25 * beta * v[mu];
    else if (v[mu] < 0.0)
      log_z -= 0.25 * beta * v[mu];
  }
  res.log_z = log_z;
  const double pref = 1.0 / (2.0 * (n - 1.0));
  res.obs.ax = pref * est.value[1] / z;
  res.obs.ay = pref * est.value[2] / z;
  res.obs.az = pref * est.value[3] / z;
  res.obs.sz = est.value[4] / z;
  res.min_margin = st.min_margin;
  res.evaluations = st.evaluations;
  res.converged = est.converged;
  return res;
}

}  // namespace

CspaResult cspa(const ModelParams& params, double T, const CspaConfig& cfg) {
  const ModelParams p = canonicalize(params);
  if (!(T > 0.0)) throw DomainError("CSPA needs T > 0");
  if (p.n < 2) throw DomainError("CSPA observables need n >= 2");
  CspaResult res = integrate_cspa(p, T, cfg);
  if (!(p.vy < 0.0 || p.vz < 0.0)) return res;
  // the saddle curvature depends on every coupling: differentiate ln Z instead
  auto slope = [&](double ModelParams::*field) {
    const double h = 1e-4 * std::max(std::abs(p.*field), p.vx);
    ModelParams up = p, dn = p;
    up.*field += h;
    dn.*field -= h;
    return (integrate_cspa(up, T, cfg).log_z - integrate_cspa(dn, T, cfg).log_z) / (2.0 * h);
  };
  const double pref = T / (p.n - 1.0);
  if (p.vx != 0.0) res.obs.ax = pref * slope(&ModelParams::vx);
  if (p.vy != 0.0) res.obs.ay = pref * slope(&ModelParams::vy);
  if (p.vz != 0.0) res.obs.az = pref * slope(&ModelParams::vz);
  res.obs.sz = -T / p.n * slope(&ModelParams::b);
  return res;
}

double cspa_log_partition(const ModelParams& p, double T, const CspaConfig& cfg) {
  return cspa(p, T, cfg).log_z;
}

PairObservables cspa_observables(const ModelParams& p, double T, const CspaConfig& cfg) {
  return cspa(p, T, cfg).obs;
}

ConcurrenceReport cspa_concurrence(const ModelParams& p, double T, const CspaConfig& cfg) {
  return concurrence(cspa(p, T, cfg).obs, canonicalize(p).n);
}

double cspa_breakdown_temperature(const ModelParams& p, double t_lo, double t_hi, double t_tol,
                                  const CspaConfig& cfg) {
  auto fails = [&](double T) {
    try {
      cspa(p, T, cfg);
      return false;
    } catch (const BreakdownError&) {
      return true;
    }
  };
  if (fails(t_hi)) throw NumericalError("CSPA already breaks down at the upper temperature");
  if (!fails(t_lo)) throw NumericalError("CSPA does not break down at the lower temperature");
  while (t_hi - t_lo > t_tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    (fails(mid) ? t_lo : t_hi) = mid;
  }
  return t_hi;
}

}  // namespace lmgent
