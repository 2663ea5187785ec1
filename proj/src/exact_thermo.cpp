#include "lmgent/exact_thermo.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "lmgent/errors.hpp"
#include "lmgent/numerics.hpp"

namespace lmgent {

namespace {

struct Eigensystem {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major, dim x dim
};

Eigensystem solve_tridiagonal(const TridiagonalBlock& t, int two_s) {
  const int d = t.dim();
  Eigensystem es;
  es.values = t.diag;
  es.vectors.assign(static_cast<size_t>(d) * d, 0.0);
  const bool diagonal =
      std::all_of(t.off.begin(), t.off.end(), [](double x) { return x == 0.0; });
  if (diagonal || d == 1) {
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return t.diag[a] < t.diag[b]; });
    for (int j = 0; j < d; ++j) {
      es.values[j] = t.diag[idx[j]];
      es.vectors[static_cast<size_t>(j) * d + idx[j]] = 1.0;
    }
    return es;
  }
  std::vector<double> dd = t.diag;
  std::vector<double> e(d, 0.0);
  std::copy(t.off.begin(), t.off.end(), e.begin());
  std::vector<lapack_int> support(2 * static_cast<size_t>(d));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', d, dd.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
                     &found, es.values.data(), es.vectors.data(), d, support.data());
  if (info != 0 || found != d)
    throw NumericalError("tridiagonal eigensolver failed in sector 2S=" + std::to_string(two_s) +
                         " parity " + std::to_string(t.parity) + " (info " +
                         std::to_string(info) + ")");
  return es;
}

void append_levels(const TridiagonalBlock& t, int two_s, std::vector<Level>& out) {
  if (t.dim() == 0) return;
  const Eigensystem es = solve_tridiagonal(t, two_s);
  const int d = t.dim();
  const double S = 0.5 * two_s;
  const double ss1 = S * (S + 1.0);
  std::vector<double> raise(std::max(d - 1, 0));
  for (int i = 0; i + 1 < d; ++i) raise[i] = raise2_element(two_s, t.two_m[i]);
  for (int j = 0; j < d; ++j) {
    const double* c = es.vectors.data() + static_cast<size_t>(j) * d;
    Level lv;
    lv.energy = es.values[j];
    lv.parity = t.parity;
    lv.k = j;
    double q = 0.0;
    for (int i = 0; i < d; ++i) {
      const double M = 0.5 * t.two_m[i];
      const double w = c[i] * c[i];
      lv.m1z += w * M;
      lv.m2z += w * M * M;
      if (i + 1 < d) q += 2.0 * c[i] * c[i + 1] * raise[i];
    }
    // S_x^2 = (S_+^2 + S_-^2)/4 + (S^2 - S_z^2)/2, S_y^2 likewise with -.
    lv.m2x = std::max(0.25 * q + 0.5 * (ss1 - lv.m2z), 0.0);
    lv.m2y = std::max(-0.25 * q + 0.5 * (ss1 - lv.m2z), 0.0);
    out.push_back(lv);
  }
}

}  // namespace

const SpinBlockSpectrum& ExactSpectrum::sector(SpinLabel s) const {
  for (const auto& sec : sectors)
    if (sec.s == s) return sec;
  throw DomainError("sector 2S=" + std::to_string(s.two_s) + " not present");
}

const Level& ExactSpectrum::level(SpinLabel s, int parity, int k) const {
  for (const auto& lv : sector(s).levels)
    if (lv.parity == parity && lv.k == k) return lv;
  throw DomainError("level (2S=" + std::to_string(s.two_s) + ", parity " +
                    std::to_string(parity) + ", k=" + std::to_string(k) + ") not present");
}

SpinBlockSpectrum diagonalize_sector(const ModelParams& p, SpinLabel s) {
  const ParityBlocks pb = parity_split(build_block(p, s));
  SpinBlockSpectrum out;
  out.s = s;
  out.log_y = log_multiplicity(p.n, s);
  out.levels.reserve(s.dim());
  append_levels(pb.even, s.two_s, out.levels);
  append_levels(pb.odd, s.two_s, out.levels);
  return out;
}

ExactSpectrum diagonalize(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  ExactSpectrum spec;
  spec.n = p.n;
  spec.energy_scale = p.vx > 0.0 ? p.vx : std::max({std::abs(p.vz), std::abs(p.b), 1.0});
  spec.ground_energy = std::numeric_limits<double>::infinity();
  for (SpinLabel s : spin_sectors(p.n)) {
    spec.sectors.push_back(diagonalize_sector(p, s));
    for (const auto& lv : spec.sectors.back().levels)
      spec.ground_energy = std::min(spec.ground_energy, lv.energy);
  }
  return spec;
}

namespace {

// Accumulates sum_w f(level) with w = Y(S) exp(-beta (E - E0)) in a shifted
// log domain; returns the log of the weight normalisation.
template <class F>
double weighted_sum(const ExactSpectrum& spec, double T, F&& f) {
  if (T < 0.0 || !std::isfinite(T)) throw DomainError("temperature must be finite and >= 0");
  const double E0 = spec.ground_energy;
  if (T == 0.0) {
    const double tol = kDegeneracyTol * spec.energy_scale;
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& sec : spec.sectors)
      for (const auto& lv : sec.levels)
        if (lv.energy - E0 <= tol) shift = std::max(shift, sec.log_y);
    double total = 0.0;
    for (const auto& sec : spec.sectors) {
      const double y = std::exp(sec.log_y - shift);
      for (const auto& lv : sec.levels)
        if (lv.energy - E0 <= tol) {
          total += y;
          f(lv, y);
        }
    }
    return shift + std::log(total);
  }
  const double beta = 1.0 / T;
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& sec : spec.sectors) {
    double emin = std::numeric_limits<double>::infinity();
    for (const auto& lv : sec.levels) emin = std::min(emin, lv.energy);
    shift = std::max(shift, sec.log_y - beta * (emin - E0));
  }
  double total = 0.0;
  for (const auto& sec : spec.sectors) {
    const double base = sec.log_y - shift;
    for (const auto& lv : sec.levels) {
      const double w = std::exp(base - beta * (lv.energy - E0));
      if (w == 0.0) continue;
      total += w;
      f(lv, w);
    }
  }
  return shift + std::log(total);
}

}  // namespace

double log_partition(const ExactSpectrum& spec, double T) {
  const double log_norm = weighted_sum(spec, T, [](const Level&, double) {});
  if (T == 0.0) return log_norm;
  return log_norm - spec.ground_energy / T;
}

ThermalMoments thermal_moments(const ExactSpectrum& spec, double T) {
  ThermalMoments m;
  double total = 0.0;
  const double log_norm = weighted_sum(spec, T, [&](const Level& lv, double w) {
    total += w;
    m.s2x += w * lv.m2x;
    m.s2y += w * lv.m2y;
    m.s2z += w * lv.m2z;
    m.sz += w * lv.m1z;
  });
  m.s2x /= total;
  m.s2y /= total;
  m.s2z /= total;
  m.sz /= total;
  m.log_z = T == 0.0 ? log_norm : log_norm - spec.ground_energy / T;
  return m;
}

PairObservables observables_from_moments(int n, double s2x, double s2y, double s2z, double sz) {
  if (n < 2) throw DomainError("pair correlators need n >= 2");
  const double nn = n;
  const double denom = nn * (nn - 1.0);
  return PairObservables{(s2x - 0.25 * nn) / denom, (s2y - 0.25 * nn) / denom,
                         (s2z - 0.25 * nn) / denom, sz / nn};
}

PairObservables thermal_observables(const ExactSpectrum& spec, double T) {
  const ThermalMoments m = thermal_moments(spec, T);
  return observables_from_moments(spec.n, m.s2x, m.s2y, m.s2z, m.sz);
}

ConcurrenceReport thermal_concurrence(const ExactSpectrum& spec, double T) {
  return concurrence(thermal_observables(spec, T), spec.n);
}

PairObservables level_observables(const ExactSpectrum& spec, SpinLabel s, int parity, int k) {
  const Level& lv = spec.level(s, parity, k);
  return observables_from_moments(spec.n, lv.m2x, lv.m2y, lv.m2z, lv.m1z);
}

ConcurrenceReport level_concurrence(const ExactSpectrum& spec, SpinLabel s, int parity, int k) {
  return concurrence(level_observables(spec, s, parity, k), spec.n);
}

std::optional<double> LimitTemperatures::tl_plus() const {
  if (plus.empty()) return std::nullopt;
  return plus.back().hi;
}

std::optional<double> LimitTemperatures::tl_minus() const {
  if (minus.empty()) return std::nullopt;
  return minus.back().hi;
}

namespace {

constexpr double kConcurrenceFloor = 1e-12;

std::vector<TemperatureInterval> positive_intervals(const std::vector<double>& grid,
                                                    const std::vector<double>& vals,
                                                    const std::function<double(double)>& f,
                                                    double tol) {
  // values at rounding level count as zero
  auto shifted = [&](double T) { return f(T) - kConcurrenceFloor; };
  std::vector<TemperatureInterval> out;
  bool inside = vals.front() > kConcurrenceFloor;
  TemperatureInterval cur{0.0, 0.0};
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const bool next = vals[i + 1] > kConcurrenceFloor;
    if (next == inside) continue;
    const double root = num::bisect(shifted, grid[i], grid[i + 1], tol);
    if (next) {
      cur.lo = root;
    } else {
      cur.hi = root;
      out.push_back(cur);
    }
    inside = next;
  }
  if (inside) {
    cur.hi = grid.back();
    out.push_back(cur);
  }
  std::vector<TemperatureInterval> merged;
  for (const auto& iv : out) {
    if (!merged.empty() && iv.lo - merged.back().hi <= tol)
      merged.back().hi = iv.hi;
    else
      merged.push_back(iv);
  }
  return merged;
}

}  // namespace

LimitTemperatures limit_temperatures(const ExactSpectrum& spec, const LimitScanOptions& opt) {
  const double scale = spec.energy_scale;
  const double t0 = opt.t_min * scale;
  const double t1 = opt.t_max * scale;
  std::vector<double> coarse(opt.grid_points);
  for (int i = 0; i < opt.grid_points; ++i)
    coarse[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (opt.grid_points - 1));

  auto cplus = [&](double T) { return thermal_concurrence(spec, T).c_plus; };
  auto cminus = [&](double T) { return thermal_concurrence(spec, T).c_minus; };

  // Refine cells where either signed concurrence comes close to zero without
  // a sign change at the grid points: narrow reentries hide there.
  const double near = 0.05 / spec.n;
  std::vector<double> grid;
  std::vector<ConcurrenceReport> reports;
  std::vector<ConcurrenceReport> coarse_rep;
  coarse_rep.reserve(coarse.size());
  for (double T : coarse) coarse_rep.push_back(thermal_concurrence(spec, T));
  for (size_t i = 0; i < coarse.size(); ++i) {
    grid.push_back(coarse[i]);
    reports.push_back(coarse_rep[i]);
    if (i + 1 == coarse.size()) continue;
    auto close = [&](double a, double b) {
      return (a <= 0.0 && b <= 0.0) && (a > -near || b > -near);
    };
    if (close(coarse_rep[i].c_plus, coarse_rep[i + 1].c_plus) ||
        close(coarse_rep[i].c_minus, coarse_rep[i + 1].c_minus)) {
      for (int j = 1; j < opt.subdivisions; ++j) {
        const double T = coarse[i] * std::pow(coarse[i + 1] / coarse[i],
                                              static_cast<double>(j) / opt.subdivisions);
        grid.push_back(T);
        reports.push_back(thermal_concurrence(spec, T));
      }
    }
  }
  std::vector<double> vp(grid.size()), vm(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    vp[i] = reports[i].c_plus;
    vm[i] = reports[i].c_minus;
  }
  const double tol = opt.abs_tol * scale;
  LimitTemperatures out;
  out.plus = positive_intervals(grid, vp, cplus, tol);
  out.minus = positive_intervals(grid, vm, cminus, tol);
  return out;
}

LimitTemperatures limit_temperatures(const ModelParams& p, const LimitScanOptions& opt) {
  return limit_temperatures(diagonalize(p), opt);
}

std::vector<LowLevel> spectrum_low(const ExactSpectrum& spec, int count) {
  std::vector<LowLevel> all;
  for (const auto& sec : spec.sectors)
    for (const auto& lv : sec.levels)
      all.push_back(LowLevel{sec.s, lv.parity, lv.k, lv.energy - spec.ground_energy});
  const size_t keep = std::min<size_t>(std::max(count, 0), all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end(),
                    [](const LowLevel& a, const LowLevel& b) {
                      if (a.excitation != b.excitation) return a.excitation < b.excitation;
                      if (a.s.two_s != b.s.two_s) return a.s.two_s > b.s.two_s;
                      return a.parity > b.parity;
                    });
  all.resize(keep);
  return all;
}

std::vector<LowLevel> spectrum_low(const ModelParams& p, int count) {
  return spectrum_low(diagonalize(p), count);
}

std::vector<double> parity_transitions(const ModelParams& params, double b_lo, double b_hi,
                                       int grid_points) {
  const ModelParams p = canonicalize(params);
  if (!(b_hi > b_lo)) throw DomainError("parity_transitions: empty field range");
  if (grid_points <= 0) grid_points = std::max(2000, 200 * p.n);
  const SpinLabel top{p.n};
  struct Gap {
    double value;
    bool resolved;
  };
  auto gap = [&](double b) {
    const SpinBlockSpectrum sec = diagonalize_sector(p.with_field(b), top);
    double even = std::numeric_limits<double>::infinity();
    double odd = even;
    for (const auto& lv : sec.levels) {
      double& slot = lv.parity > 0 ? even : odd;
      slot = std::min(slot, lv.energy);
    }
    const double noise = 1e3 * std::numeric_limits<double>::epsilon() *
                         (std::abs(even) + std::abs(odd) + p.vx + std::abs(b));
    return Gap{even - odd, std::abs(even - odd) > noise};
  };
  auto gap_value = [&](double b) { return gap(b).value; };
  std::vector<double> out;
  double prev_b = b_lo;
  Gap prev = gap(b_lo);
  for (int i = 1; i < grid_points; ++i) {
    const double b = b_lo + (b_hi - b_lo) * i / (grid_points - 1);
    const Gap g = gap(b);
    if (!g.resolved) continue;
    if (prev.resolved && (g.value > 0.0) != (prev.value > 0.0))
      out.push_back(num::bisect(gap_value, prev_b, b, 1e-13 * std::max(1.0, p.vx)));
    prev_b = b;
    prev = g;
  }
  return out;
}

}  // namespace lmgent
